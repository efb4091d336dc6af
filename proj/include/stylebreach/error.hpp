#pragma once

#include <stdexcept>
#include <string>

namespace stylebreach {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing or unreadable input files.
class LoadError : public Error {
 public:
  using Error::Error;
};

// Malformed truth files, lexicons, configs.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Violated preconditions on API arguments.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Model container with the wrong format tag or version.
class ModelFormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace stylebreach
