#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace exeos {

struct SourceLoc {
  int line = 0;  // 1-based; 0 means "no location"
  int column = 0;

  bool valid() const { return line > 0; }
};

// One error type for the whole compile path: lexing, parsing, data files,
// validation and instantiation. The kind + location + message travel into
// refinement-loop feedback verbatim, so every error must carry a nonempty
// message and either a location or a symbol.
enum class CompileErrorKind {
  Lex,
  Syntax,
  RaggedTable,
  UnresolvedSymbol,
  ArityMismatch,
  BoundViolation,
  NonlinearExpression,
  DuplicateName,
  ObjectivePolicy,
};

std::string_view to_string(CompileErrorKind kind);

struct CompileError {
  CompileErrorKind kind = CompileErrorKind::Syntax;
  SourceLoc loc;
  std::string symbol;  // offending declaration/reference name, when known
  std::string message;

  // One-line rendering used in diagnostics and refinement feedback.
  std::string describe() const;
};

// Minimal expected-style result. Errors are ordinary values here because the
// pipeline records them instead of unwinding.
template <class T, class E>
class Result {
 public:
  Result(T value) : slot_(std::move(value)) {}
  Result(E error) : slot_(std::move(error)) {}

  bool ok() const { return slot_.index() == 0; }
  explicit operator bool() const { return ok(); }

  T& value() {
    if (!ok()) throw std::logic_error("Result::value on error");
    return std::get<0>(slot_);
  }
  const T& value() const {
    if (!ok()) throw std::logic_error("Result::value on error");
    return std::get<0>(slot_);
  }
  E& error() {
    if (ok()) throw std::logic_error("Result::error on value");
    return std::get<1>(slot_);
  }
  const E& error() const {
    if (ok()) throw std::logic_error("Result::error on value");
    return std::get<1>(slot_);
  }

  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }
  T& operator*() { return value(); }
  const T& operator*() const { return value(); }

 private:
  std::variant<T, E> slot_;
};

// FNV-1a 64-bit. Used for request-hash script keys and transcript digests;
// stability across runs and platforms is part of the script-file contract.
std::uint64_t fnv1a(std::string_view text);
std::string fnv1a_hex(std::string_view text);

// Shortest round-trip decimal form of a double ("10", "117.5", "1e-06").
// Data emitters and reports rely on this for byte-identical output.
std::string format_double(double v);

// Strict double parse of a whole token; nullopt on trailing garbage.
std::optional<double> parse_double(std::string_view token);

}  // namespace exeos
