#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace tcl {

// Exact rational arithmetic for boundary-sharp region tests. Stored reduced
// with positive denominator; arithmetic goes through 128-bit intermediates
// and throws std::overflow_error if a reduced component would leave the
// 63-bit range (far beyond anything a classification grid produces).
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);  // normalizes, d != 0
  static Rational of(std::int64_t n) { return Rational(n, 1); }

  // Accepts "a", "-a", "a/b" with optional sign on the numerator.
  static std::optional<Rational> parse(std::string_view text);

  [[nodiscard]] Rational neg() const;
  [[nodiscard]] Rational add(const Rational& o) const;
  [[nodiscard]] Rational sub(const Rational& o) const;
  [[nodiscard]] Rational mul(const Rational& o) const;
  // Reciprocal; numerator must be nonzero.
  [[nodiscard]] Rational recip() const;

  [[nodiscard]] int cmp(const Rational& o) const;  // -1, 0, +1
  [[nodiscard]] bool operator==(const Rational& o) const { return cmp(o) == 0; }
  [[nodiscard]] bool lt(const Rational& o) const { return cmp(o) < 0; }
  [[nodiscard]] bool le(const Rational& o) const { return cmp(o) <= 0; }

  [[nodiscard]] double to_double() const;
};

}  // namespace tcl
