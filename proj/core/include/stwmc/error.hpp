#ifndef STWMC_ERROR_HPP
#define STWMC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace stwmc {

// Errors that abort an operation. Recoverable "no result" outcomes are
// represented with std::optional, not exceptions.
struct Error : std::runtime_error {
  explicit Error(std::string tag, const std::string& what)
      : std::runtime_error(what), tag(std::move(tag)) {}
  std::string tag;  // machine-readable reason, surfaced by the CLI as REASON: <tag>
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error("parse", what) {}
};
struct UnknownSymbolError : Error {
  explicit UnknownSymbolError(const std::string& what) : Error("unknown-symbol", what) {}
};
struct LimitExceededError : Error {
  explicit LimitExceededError(const std::string& what) : Error("limit-exceeded", what) {}
};
struct WrongShapeError : Error {
  explicit WrongShapeError(const std::string& what) : Error("wrong-shape", what) {}
};
struct NotInClassError : Error {
  explicit NotInClassError(const std::string& what) : Error("not-in-class", what) {}
};
struct EmptyBehaviorError : Error {
  explicit EmptyBehaviorError(const std::string& what) : Error("empty-behavior", what) {}
};
struct WrongArchitectureError : Error {
  explicit WrongArchitectureError(const std::string& what) : Error("wrong-architecture", what) {}
};
struct AlphabetMismatchError : Error {
  explicit AlphabetMismatchError(const std::string& what) : Error("alphabet-mismatch", what) {}
};
struct DialectUnsupportedError : Error {
  explicit DialectUnsupportedError(const std::string& what) : Error("dialect-unsupported", what) {}
};
struct UnboundVariableError : Error {
  explicit UnboundVariableError(const std::string& what) : Error("unbound-variable", what) {}
};
struct InvalidSttError : Error {
  InvalidSttError(int position, const std::string& what)
      : Error("invalid-stt", what), position(position) {}
  int position;  // preorder index of the offending node
};

}  // namespace stwmc

#endif
