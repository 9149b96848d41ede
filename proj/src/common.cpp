#include "exeos/common.hpp"

#include <array>
#include <cstdio>

namespace exeos {

std::string_view to_string(CompileErrorKind kind) {
  switch (kind) {
    case CompileErrorKind::Lex: return "lex";
    case CompileErrorKind::Syntax: return "syntax";
    case CompileErrorKind::RaggedTable: return "ragged-table";
    case CompileErrorKind::UnresolvedSymbol: return "unresolved-symbol";
    case CompileErrorKind::ArityMismatch: return "arity-mismatch";
    case CompileErrorKind::BoundViolation: return "bound-violation";
    case CompileErrorKind::NonlinearExpression: return "nonlinear-expression";
    case CompileErrorKind::DuplicateName: return "duplicate-name";
    case CompileErrorKind::ObjectivePolicy: return "objective-policy";
  }
  return "unknown";
}

std::string CompileError::describe() const {
  std::string out(to_string(kind));
  if (loc.valid()) {
    out += " at line " + std::to_string(loc.line) + ", column " +
           std::to_string(loc.column);
  }
  if (!symbol.empty()) {
    out += " (symbol '" + symbol + "')";
  }
  out += ": " + message;
  return out;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fnv1a_hex(std::string_view text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(text)));
  return std::string(buf);
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::optional<double> parse_double(std::string_view token) {
  double v = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
  return v;
}

}  // namespace exeos
