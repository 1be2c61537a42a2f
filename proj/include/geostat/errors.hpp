#pragma once

#include <stdexcept>
#include <string>

namespace geostat {

// All failures surface as subclasses of Error. code() is a short stable
// identifier used by the CLI for its machine-parsable "error:<code>:" line
// and to pick the process exit status.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what, int exit_code = 1)
      : std::runtime_error(what), code_(std::move(code)), exit_code_(exit_code) {}

  const std::string& code() const noexcept { return code_; }
  int exit_code() const noexcept { return exit_code_; }

 private:
  std::string code_;
  int exit_code_;
};

struct NotPositiveDefinite : Error {
  explicit NotPositiveDefinite(const std::string& what)
      : Error("not_positive_definite", what) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what)
      : Error("dimension_mismatch", what) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error("domain_error", what) {}
};

struct KindMismatch : Error {
  explicit KindMismatch(const std::string& what) : Error("kind_mismatch", what) {}
};

struct VariableIndexOutOfRange : Error {
  explicit VariableIndexOutOfRange(const std::string& what)
      : Error("variable_index_out_of_range", what) {}
};

struct BadBracket : Error {
  explicit BadBracket(const std::string& what) : Error("bad_bracket", what) {}
};

struct IncompatibleScheme : Error {
  explicit IncompatibleScheme(const std::string& what)
      : Error("incompatible_scheme", what, 4) {}
};

struct UnknownPreset : Error {
  explicit UnknownPreset(const std::string& what) : Error("unknown_preset", what, 2) {}
};

struct DenseCapExceeded : Error {
  explicit DenseCapExceeded(const std::string& what)
      : Error("dense_cap_exceeded", what, 3) {}
};

struct DuplicateName : Error {
  explicit DuplicateName(const std::string& what) : Error("duplicate_name", what) {}
};

struct EmptyInput : Error {
  explicit EmptyInput(const std::string& what) : Error("empty_input", what) {}
};

struct RowKeyMismatch : Error {
  explicit RowKeyMismatch(const std::string& what)
      : Error("row_key_mismatch", what, 5) {}
};

struct UnsupportedKind : Error {
  explicit UnsupportedKind(const std::string& what)
      : Error("unsupported_kind", what, 6) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error("io_error", what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error("parse_error", what) {}
};

}  // namespace geostat
