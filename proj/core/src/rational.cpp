#include "tracelab/rational.hpp"

#include <charconv>
#include <stdexcept>
#include <string>

namespace tcl {
namespace {

constexpr std::int64_t kLimit = (std::int64_t{1} << 62);

std::int64_t checked(__int128 v, const char* what) {
  if (v > kLimit || v < -kLimit)
    throw std::overflow_error(std::string("Rational: overflow in ") + what);
  return static_cast<std::int64_t>(v);
}

Rational make(__int128 n, __int128 d, const char* what) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  // gcd over __int128 by hand (std::gcd would truncate).
  __int128 a = n < 0 ? -n : n;
  __int128 b = d;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a == 0) a = 1;
  Rational r;
  r.num = checked(n / a, what);
  r.den = checked(d / a, what);
  return r;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("Rational: zero denominator");
  *this = make(n, d, "construction");
}

std::optional<Rational> Rational::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  const auto slash = text.find('/');
  std::string_view num_part = text.substr(0, slash);
  std::string_view den_part =
      slash == std::string_view::npos ? std::string_view("1")
                                      : text.substr(slash + 1);
  if (num_part.empty() || den_part.empty()) return std::nullopt;

  std::int64_t n = 0;
  std::int64_t d = 0;
  auto rn = std::from_chars(num_part.data(), num_part.data() + num_part.size(), n);
  auto rd = std::from_chars(den_part.data(), den_part.data() + den_part.size(), d);
  if (rn.ec != std::errc{} || rn.ptr != num_part.data() + num_part.size())
    return std::nullopt;
  if (rd.ec != std::errc{} || rd.ptr != den_part.data() + den_part.size())
    return std::nullopt;
  if (d == 0) return std::nullopt;
  return Rational(n, d);
}

Rational Rational::neg() const { return make(-__int128(num), den, "neg"); }

Rational Rational::add(const Rational& o) const {
  return make(__int128(num) * o.den + __int128(o.num) * den,
              __int128(den) * o.den, "add");
}

Rational Rational::sub(const Rational& o) const { return add(o.neg()); }

Rational Rational::mul(const Rational& o) const {
  return make(__int128(num) * o.num, __int128(den) * o.den, "mul");
}

Rational Rational::recip() const {
  if (num == 0) throw std::domain_error("Rational: reciprocal of zero");
  return make(den, num, "recip");
}

int Rational::cmp(const Rational& o) const {
  const __int128 lhs = __int128(num) * o.den;
  const __int128 rhs = __int128(o.num) * den;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

double Rational::to_double() const {
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace tcl
