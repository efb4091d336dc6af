#include "stylebreach/pos_tagger.hpp"

#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "stylebreach/preprocess.hpp"

namespace stylebreach {
namespace {

const std::unordered_map<std::string_view, PosTag>& closed_class() {
  static const std::unordered_map<std::string_view, PosTag> table = [] {
    std::unordered_map<std::string_view, PosTag> t;
    const auto add = [&t](PosTag tag, std::initializer_list<std::string_view> words) {
      for (const auto w : words) t.emplace(w, tag);
    };
    add(PosTag::PersonalPronoun,
        {"i", "me", "you", "he", "him", "she", "it", "we", "us", "they", "them", "myself",
         "yourself", "himself", "herself", "itself", "ourselves", "yourselves", "themselves",
         "one", "someone", "somebody", "anyone", "anybody", "everyone", "everybody", "nobody",
         "something", "anything", "everything", "nothing"});
    add(PosTag::Pronoun, {"my", "your", "his", "her", "its", "our", "their", "mine", "yours",
                          "hers", "ours", "theirs", "who", "whom", "whose", "what", "whoever",
                          "whatever", "which", "whichever"});
    add(PosTag::Determiner, {"the", "a", "an", "this", "that", "these", "those", "every", "each",
                             "some", "any", "no", "all", "both", "either", "neither", "another",
                             "such", "many", "much", "few", "several"});
    add(PosTag::Preposition,
        {"in", "on", "at", "by", "for", "with", "about", "against", "between", "into", "through",
         "during", "before", "after", "above", "below", "to", "from", "up", "down", "of", "off",
         "over", "under", "among", "across", "behind", "beyond", "near", "since", "until",
         "upon", "within", "without", "toward", "towards", "via", "despite", "onto", "like",
         "per", "around", "along", "amid", "inside", "outside", "throughout", "unlike",
         "except", "beside", "besides", "beneath", "than", "because", "although", "though",
         "if", "unless", "while", "whereas", "whether"});
    add(PosTag::CoordinatingConjunction, {"and", "but", "or", "nor", "yet", "so", "plus"});
    add(PosTag::Modal, {"can", "could", "may", "might", "must", "shall", "should", "will",
                        "would", "ought", "cannot"});
    add(PosTag::Interjection, {"oh", "ah", "wow", "hey", "ouch", "oops", "hmm", "yes", "yeah",
                               "alas", "hello", "hi", "okay", "ok", "uh", "um", "huh", "yep",
                               "nope", "ugh", "please", "thanks"});
    add(PosTag::Adverb,
        {"not", "very", "too", "also", "just", "only", "then", "now", "here", "there", "always",
         "never", "often", "sometimes", "soon", "already", "still", "even", "quite", "rather",
         "almost", "perhaps", "maybe", "however", "therefore", "thus", "again", "ever", "once",
         "twice", "indeed", "instead", "anyway", "otherwise", "meanwhile", "hence", "when",
         "where", "why", "how", "pretty", "well", "much", "more", "most", "less", "least", "far",
         "away", "back", "together", "else", "furthermore", "moreover", "nevertheless"});
    add(PosTag::Adjective,
        {"good", "bad", "new", "old", "big", "small", "great", "little", "long", "short", "high",
         "low", "large", "young", "early", "late", "hard", "easy", "real", "sure", "true", "free",
         "full", "whole", "clear", "dark", "light", "cold", "hot", "warm", "cool", "heavy", "strong",
         "weak", "fast", "slow", "wrong", "right", "nice", "fine", "happy", "sad", "poor", "rich",
         "wide", "deep", "close", "open", "simple", "common", "main", "same", "different", "other",
         "own", "wooden", "golden", "quiet", "loud", "bright", "able", "likely", "best", "better",
         "worse", "worst", "last", "next", "first", "huge", "tiny", "red", "green", "blue", "black",
         "white"});
    add(PosTag::Verb, {"is", "am", "are", "was", "were", "be", "been", "being", "have", "has",
                       "had", "having", "do", "does", "did", "done", "doing", "get", "got",
                       "make", "made", "go", "went", "gone", "see", "saw", "seen", "say", "said",
                       "know", "knew", "known", "think", "thought", "take", "took", "taken",
                       "come", "came", "give", "gave", "given", "find", "found", "tell", "told",
                       "let", "put", "keep", "kept", "run", "ran", "write", "wrote", "written",
                       "read", "use", "try", "need", "want", "seem", "feel", "felt", "become",
                       "became", "leave", "left", "mean", "meant", "work", "works"});
    return t;
  }();
  return table;
}

// Stem before the apostrophe of a contraction, mapped to a taggable word.
std::string contraction_base(const std::string& lower) {
  const auto apostrophe = lower.find('\'');
  if (apostrophe == std::string::npos || apostrophe == 0) return lower;
  std::string base = lower.substr(0, apostrophe);
  const std::string suffix = lower.substr(apostrophe + 1);
  if (suffix == "t") {
    static const std::unordered_map<std::string, std::string> kNegated = {
        {"won", "will"}, {"can", "can"}, {"don", "do"},   {"doesn", "does"}, {"didn", "did"},
        {"isn", "is"},   {"aren", "are"}, {"wasn", "was"}, {"weren", "were"}, {"haven", "have"},
        {"hasn", "has"}, {"hadn", "had"}, {"shouldn", "should"}, {"couldn", "could"},
        {"wouldn", "would"}, {"mustn", "must"}, {"ain", "is"}};
    if (const auto it = kNegated.find(base); it != kNegated.end()) return it->second;
    if (base.size() > 1 && base.back() == 'n') base.pop_back();
  }
  return base;
}

bool ends_with(std::string_view word, std::string_view suffix) {
  return word.size() > suffix.size() + 1 && word.substr(word.size() - suffix.size()) == suffix;
}

bool is_subject_pronoun(std::string_view w) {
  return w == "i" || w == "you" || w == "we" || w == "they" || w == "he" || w == "she" ||
         w == "it";
}

PosTag suffix_tag(std::string_view w) {
  if (ends_with(w, "ly")) return PosTag::Adverb;
  for (const auto s : {"tion", "sion", "ment", "ness", "ity", "ship", "ism", "ance", "ence",
                       "hood", "dom"}) {
    if (ends_with(w, s)) return PosTag::Noun;
  }
  for (const auto s : {"able", "ible", "ful", "ous", "ive", "less", "ic", "ical", "ish", "al",
                       "ary", "est"}) {
    if (ends_with(w, s)) return PosTag::Adjective;
  }
  for (const auto s : {"ing", "ed", "ize", "ise", "ify", "ate", "en"}) {
    if (ends_with(w, s)) return PosTag::Verb;
  }
  return PosTag::Noun;
}

}  // namespace

std::string_view pos_tag_name(PosTag tag) {
  switch (tag) {
    case PosTag::PersonalPronoun: return "PRP";
    case PosTag::Pronoun: return "PRO";
    case PosTag::Preposition: return "IN";
    case PosTag::CoordinatingConjunction: return "CC";
    case PosTag::Determiner: return "DT";
    case PosTag::Modal: return "MD";
    case PosTag::Interjection: return "UH";
    case PosTag::Adjective: return "JJ";
    case PosTag::Adverb: return "RB";
    case PosTag::Verb: return "VB";
    case PosTag::Noun: return "NN";
    case PosTag::Number: return "CD";
    case PosTag::Punctuation: return "PUNCT";
  }
  return "?";
}

std::vector<PosTag> RuleTagger::tag(std::span<const std::string> tokens,
                                    std::span<const bool> sentence_initial) const {
  const auto& closed = closed_class();
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  std::string previous_word;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& token = tokens[i];
    if (is_special_token(token)) {
      tags.push_back(PosTag::Noun);
      previous_word.clear();
      continue;
    }
    if (!is_word_token(token)) {
      tags.push_back(PosTag::Punctuation);
      previous_word.clear();
      continue;
    }
    if (is_number_token(token)) {
      tags.push_back(PosTag::Number);
      previous_word.clear();
      continue;
    }

    const std::string lower = normalize_word(token);
    const std::string base = contraction_base(lower);
    const bool initial = i == 0 || (i < sentence_initial.size() && sentence_initial[i]);

    PosTag tag;
    if (const auto it = closed.find(base); it != closed.end()) {
      tag = it->second;
    } else if (!initial && std::isupper(static_cast<unsigned char>(token[0]))) {
      tag = PosTag::Noun;
    } else {
      tag = suffix_tag(base);
      const bool verb_context = previous_word == "to" || is_subject_pronoun(previous_word) ||
                                (!previous_word.empty() && closed.contains(previous_word) &&
                                 closed.at(previous_word) == PosTag::Modal);
      if (verb_context && (tag == PosTag::Noun || tag == PosTag::Verb)) tag = PosTag::Verb;
    }
    tags.push_back(tag);
    previous_word = base;
  }
  return tags;
}

}  // namespace stylebreach
