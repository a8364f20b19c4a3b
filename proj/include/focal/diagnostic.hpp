#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "focal/term.hpp"

namespace focal {

/// Diagnostic codes. E001-E007 come from the kernel; E1xx from the surface
/// layer.
namespace code {
inline constexpr std::string_view kUnboundOrNotCrisp = "E001";
inline constexpr std::string_view kTypeMismatch = "E002";
inline constexpr std::string_view kNotEliminable = "E003";
inline constexpr std::string_view kUniverse = "E004";
inline constexpr std::string_view kBadFocus = "E005";
inline constexpr std::string_view kCrispSubstitution = "E006";
inline constexpr std::string_view kAnnotation = "E007";
inline constexpr std::string_view kSyntax = "E100";
inline constexpr std::string_view kLexical = "E101";
inline constexpr std::string_view kDuplicate = "E102";
inline constexpr std::string_view kLateFocus = "E103";
}  // namespace code

struct Diagnostic {
  std::string code;
  std::string message;
  std::string file;
  Span span;
  std::optional<std::string> context;
};

/// Thrown by the kernel when a judgment fails.
class TypeError : public std::runtime_error {
 public:
  explicit TypeError(Diagnostic d)
      : std::runtime_error(d.code + ": " + d.message), diag_(std::move(d)) {}

  const Diagnostic& diagnostic() const { return diag_; }
  Diagnostic& diagnostic() { return diag_; }

 private:
  Diagnostic diag_;
};

/// `file:line:col: error[E001]: message`, plus the context snapshot when
/// present. `color` wraps the header in ANSI escapes.
std::string format_human(const Diagnostic& d, bool color = false);

/// One JSON object per diagnostic, e.g.
/// {"file":"a.fcl","code":"E001","message":"...","start":{"line":1,"col":5},
///  "end":{"line":1,"col":9},"context":"x :_{s} A"}
std::string format_json(const Diagnostic& d);

}  // namespace focal
