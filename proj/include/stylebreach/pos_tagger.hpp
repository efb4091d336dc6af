#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stylebreach {

enum class PosTag {
  PersonalPronoun,  // I, you, them, myself ...
  Pronoun,          // possessive and wh-pronouns: my, whose, who ...
  Preposition,
  CoordinatingConjunction,
  Determiner,
  Modal,
  Interjection,
  Adjective,
  Adverb,
  Verb,
  Noun,
  Number,
  Punctuation,
};

std::string_view pos_tag_name(PosTag tag);

/// Closed-class word lists plus suffix rules for the open classes, with a
/// couple of contextual overrides (capitalized mid-sentence word -> noun;
/// word after a modal, "to" or a subject pronoun -> verb). Unknown words
/// default to noun. Deterministic and context-local.
class RuleTagger {
 public:
  /// `sentence_initial[i]` marks tokens that open a sentence; may be empty.
  std::vector<PosTag> tag(std::span<const std::string> tokens,
                          std::span<const bool> sentence_initial = {}) const;
};

}  // namespace stylebreach
