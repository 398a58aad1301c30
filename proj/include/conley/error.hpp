#pragma once

#include <stdexcept>
#include <string>

namespace conley {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define CONLEY_DEFINE_ERROR(Name)                                              \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(what) {}                    \
  }

CONLEY_DEFINE_ERROR(CycleError);
CONLEY_DEFINE_ERROR(UnknownElement);
CONLEY_DEFINE_ERROR(NotAField);
CONLEY_DEFINE_ERROR(DimensionMismatch);
CONLEY_DEFINE_ERROR(RingMismatch);
CONLEY_DEFINE_ERROR(NotAnInterval);
CONLEY_DEFINE_ERROR(NotAComplex);
CONLEY_DEFINE_ERROR(NotAdjacent);
CONLEY_DEFINE_ERROR(UnsupportedRing);
CONLEY_DEFINE_ERROR(InfeasibleDiagonal);
CONLEY_DEFINE_ERROR(InvalidAction);
CONLEY_DEFINE_ERROR(ShapeMismatch);
CONLEY_DEFINE_ERROR(InvalidInstance);

#undef CONLEY_DEFINE_ERROR

/// Input document error; `path` addresses the offending field
/// (JSON-pointer style) or is empty for syntax errors.
class ParseError : public Error {
public:
  ParseError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

} // namespace conley
