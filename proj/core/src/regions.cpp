#include "tracelab/regions.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace tcl::regions {
namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// The classifier is written once against this small numeric interface and
// instantiated with tolerance-based doubles and with exact rationals.
struct DoubleBackend {
  using V = double;
  [[nodiscard]] V from_int(int k) const { return k; }
  [[nodiscard]] V half() const { return 0.5; }
  [[nodiscard]] V add(V a, V b) const { return a + b; }
  [[nodiscard]] V sub(V a, V b) const { return a - b; }
  [[nodiscard]] V neg(V a) const { return -a; }
  [[nodiscard]] V recip(V a) const { return 1.0 / a; }
  [[nodiscard]] std::optional<V> recip_pos_or_inf(V a) const {
    return a > kRegionTol ? std::optional<V>(1.0 / a) : std::nullopt;
  }
  [[nodiscard]] bool eq(V a, V b) const { return std::abs(a - b) <= kRegionTol; }
  [[nodiscard]] bool le(V a, V b) const { return a <= b + kRegionTol; }
  [[nodiscard]] bool lt(V a, V b) const { return a < b - kRegionTol; }
  [[nodiscard]] bool ge(V a, V b) const { return le(b, a); }
  [[nodiscard]] bool gt(V a, V b) const { return lt(b, a); }
};

struct RationalBackend {
  using V = Rational;
  [[nodiscard]] V from_int(int k) const { return Rational::of(k); }
  [[nodiscard]] V half() const { return Rational(1, 2); }
  [[nodiscard]] V add(const V& a, const V& b) const { return a.add(b); }
  [[nodiscard]] V sub(const V& a, const V& b) const { return a.sub(b); }
  [[nodiscard]] V neg(const V& a) const { return a.neg(); }
  [[nodiscard]] V recip(const V& a) const { return a.recip(); }
  [[nodiscard]] std::optional<V> recip_pos_or_inf(const V& a) const {
    return a.num > 0 ? std::optional<V>(a.recip()) : std::nullopt;
  }
  [[nodiscard]] bool eq(const V& a, const V& b) const { return a.cmp(b) == 0; }
  [[nodiscard]] bool le(const V& a, const V& b) const { return a.le(b); }
  [[nodiscard]] bool lt(const V& a, const V& b) const { return a.lt(b); }
  [[nodiscard]] bool ge(const V& a, const V& b) const { return b.le(a); }
  [[nodiscard]] bool gt(const V& a, const V& b) const { return b.lt(a); }
};

template <class B>
RegionVerdict convexity_impl(const typename B::V& p, const typename B::V& q,
                             const typename B::V& s, const B& c) {
  using V = typename B::V;
  const V zero = c.from_int(0);
  const V one = c.from_int(1);
  const V two = c.from_int(2);
  const V neg_one = c.from_int(-1);

  const auto in_band = [&](const V& x, const V& y) {
    return c.le(one, x) && c.le(x, two) && c.le(neg_one, y) && c.lt(y, zero);
  };

  // Sharp p = 2 family: the sufficiency threshold 1/(2+q) meets the
  // necessity threshold 1/(p+q), so this slice has no open gap.
  const auto sharp = [&](const V& outer, const V& inner) {
    if (!c.eq(outer, two)) return false;
    if (!(c.le(neg_one, inner) && c.lt(inner, zero))) return false;
    return c.ge(s, c.recip(c.add(two, inner)));
  };
  if (sharp(p, q) || sharp(q, p))
    return {Status::proven_convex, "convex:p2-sharp"};

  // Large-s sufficiency on the band [1, 2] x [-1, 0):
  // s >= min{1/(p-1), 1/(1+q)}, with infinite thresholds at p = 1, q = -1.
  const auto large_s = [&](const V& x, const V& y) {
    if (!in_band(x, y)) return false;
    const std::optional<V> b1 = c.recip_pos_or_inf(c.sub(x, one));
    const std::optional<V> b2 = c.recip_pos_or_inf(c.add(one, y));
    std::optional<V> bound;
    if (b1 && b2)
      bound = c.lt(*b1, *b2) ? b1 : b2;
    else
      bound = b1 ? b1 : b2;
    return bound.has_value() && c.ge(s, *bound);
  };
  if (large_s(p, q) || large_s(q, p))
    return {Status::proven_convex, "convex:large-s"};

  // Classical s = 1 sufficiency on the band, needing p + q >= 1.
  const auto s1 = [&](const V& x, const V& y) {
    return c.eq(s, one) && in_band(x, y) && c.ge(c.add(x, y), one);
  };
  if (s1(p, q) || s1(q, p))
    return {Status::proven_convex, "convex:s1-classical"};

  // Doubly negative sufficiency band: -1 <= p, q < 0, 1/2 <= s <= -1/(p+q).
  const bool negneg = c.le(neg_one, p) && c.lt(p, zero) && c.le(neg_one, q) &&
                      c.lt(q, zero);
  if (negneg) {
    const V upper = c.recip(c.neg(c.add(p, q)));
    if (c.ge(s, c.half()) && c.le(s, upper))
      return {Status::proven_convex, "convex:neg-neg-band"};
  }

  // Necessity: outside these two regions convexity provably fails.
  const auto necessity_band = [&](const V& x, const V& y) {
    if (!in_band(x, y)) return false;
    const V sum = c.add(x, y);
    if (!c.gt(sum, zero)) return false;
    return c.ge(s, c.recip(sum));
  };
  if (necessity_band(p, q) || necessity_band(q, p))
    return {Status::open_convexity, "open:band-gap"};
  if (negneg) return {Status::open_convexity, "open:neg-neg-tails"};

  return {Status::proven_not_convex, "nonconvex:outside-necessity"};
}

template <class B>
RegionVerdict concavity_impl(const typename B::V& p, const typename B::V& q,
                             const typename B::V& s, const B& c) {
  using V = typename B::V;
  const V zero = c.from_int(0);
  const V one = c.from_int(1);
  const bool inside = c.gt(p, zero) && c.le(p, one) && c.gt(q, zero) &&
                      c.le(q, one) && c.le(s, c.recip(c.add(p, q)));
  if (inside) return {Status::proven_concave, "concave:iff-region"};
  return {Status::proven_not_concave, "nonconcave:outside-iff-region"};
}

template <class B>
MapVerdicts operator_map_impl(const typename B::V& p, const typename B::V& q,
                              const B& c) {
  using V = typename B::V;
  const V zero = c.from_int(0);
  const V two = c.from_int(2);
  const V neg_one = c.from_int(-1);
  MapVerdicts out;
  const bool convex =
      c.eq(q, two) && c.le(neg_one, p) && c.lt(p, zero);
  out.convexity = convex
                      ? RegionVerdict{Status::proven_convex,
                                      "operator-convex:q2-window"}
                      : RegionVerdict{Status::proven_not_convex,
                                      "operator-nonconvex:outside-iff"};
  out.concavity = {Status::proven_not_concave, "operator-nonconcave:always"};
  return out;
}

template <class B>
TripleVerdicts triple_impl(const typename B::V& p, const typename B::V& q,
                           const typename B::V& r, const B& c) {
  using V = typename B::V;
  const V zero = c.from_int(0);
  const V two = c.from_int(2);
  const V neg_one = c.from_int(-1);
  TripleVerdicts out;
  const bool convex = c.eq(q, two) && c.lt(p, zero) && c.lt(r, zero) &&
                      c.ge(c.add(p, r), neg_one);
  out.convexity = convex
                      ? RegionVerdict{Status::proven_convex,
                                      "triple-convex:q2-negative-pr"}
                      : RegionVerdict{Status::proven_not_convex,
                                      "triple-nonconvex:outside-iff"};
  out.concavity = {Status::proven_not_concave, "triple-nonconcave:always"};
  return out;
}

void validate_rational_point(const Rational& p, const Rational& q) {
  require(p.num != 0, "classify: p must be nonzero");
  require(q.num != 0, "classify: q must be nonzero");
}

}  // namespace

const char* status_name(Status s) {
  switch (s) {
    case Status::proven_convex: return "proven_convex";
    case Status::proven_concave: return "proven_concave";
    case Status::proven_not_convex: return "proven_not_convex";
    case Status::proven_not_concave: return "proven_not_concave";
    case Status::open_convexity: return "open_convexity";
  }
  return "unknown";
}

RegionVerdict classify_convexity(const ParamPoint& prm) {
  return convexity_impl(prm.p, prm.q, prm.s, DoubleBackend{});
}

RegionVerdict classify_convexity(const Rational& p, const Rational& q,
                                 const Rational& s) {
  validate_rational_point(p, q);
  require(s.num > 0, "classify: s must be positive");
  return convexity_impl(p, q, s, RationalBackend{});
}

RegionVerdict classify_concavity(const ParamPoint& prm) {
  return concavity_impl(prm.p, prm.q, prm.s, DoubleBackend{});
}

RegionVerdict classify_concavity(const Rational& p, const Rational& q,
                                 const Rational& s) {
  validate_rational_point(p, q);
  require(s.num > 0, "classify: s must be positive");
  return concavity_impl(p, q, s, RationalBackend{});
}

MapVerdicts classify_operator_map(double p, double q) {
  require(p != 0.0 && std::isfinite(p), "classify_operator_map: p nonzero");
  require(q != 0.0 && std::isfinite(q), "classify_operator_map: q nonzero");
  return operator_map_impl(p, q, DoubleBackend{});
}

MapVerdicts classify_operator_map(const Rational& p, const Rational& q) {
  validate_rational_point(p, q);
  return operator_map_impl(p, q, RationalBackend{});
}

TripleVerdicts classify_triple(const TripleParams& prm) {
  return triple_impl(prm.p, prm.q, prm.r, DoubleBackend{});
}

TripleVerdicts classify_triple(const Rational& p, const Rational& q,
                               const Rational& r) {
  validate_rational_point(p, q);
  require(r.num != 0, "classify: r must be nonzero");
  return triple_impl(p, q, r, RationalBackend{});
}

}  // namespace tcl::regions
