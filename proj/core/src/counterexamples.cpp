#include "tracelab/counterexamples.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tcl::counterexamples {
namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Matrix col2(double x, double y) {
  Matrix v(2, 1);
  v(0, 0) = x;
  v(1, 0) = y;
  return v;
}

// |<w| X^r |v>|^2, the rank-one sandwich both constructions are built on.
double pairing_sq(const PsdMatrix& x, double r, const Matrix& v,
                  const Matrix& w) {
  const Matrix xr = mat_pow(x, r).mat();
  const Complex inner = (w.adjoint() * xr * v)(0, 0);
  return std::norm(inner);
}

}  // namespace

double low_r_limit_margin(double r) {
  const double a = std::exp2(2.0 * r - 1.0) - 1.0;
  const double b = std::exp2(r) - 1.0;
  return a * b * b;
}

CounterexampleResult low_r_refutation(double r, double t) {
  require(r != 0.0 && r < 0.5, "low_r_refutation: r must be nonzero, < 1/2");
  require(t > 0.0, "low_r_refutation: t must be positive");

  RealVector d1(2), d2(2);
  d1 << 2.0, 2.0;
  d2 << 2.0 * t, 4.0 * t;
  const PsdMatrix x1 = PsdMatrix::diagonal(d1);
  const PsdMatrix x2 = PsdMatrix::diagonal(d2);
  const PsdMatrix mid(combine(0.5, x1.hermitian(), 0.5, x2.hermitian()));
  const Matrix v = col2(1.0, 1.0);
  const Matrix w = col2(std::exp2(r), -1.0);

  const double lhs = pairing_sq(mid, r, v, w);
  const double rhs = 0.5 * pairing_sq(x1, r, v, w) +
                     0.5 * pairing_sq(x2, r, v, w);

  CounterexampleResult out;
  out.margin = rhs - lhs;
  out.limit_parameter = t;
  out.construction = {{"X1", x1.mat()}, {"X2", x2.mat()}, {"v", v}, {"w", w}};
  out.scalars = {{"r", r},
                 {"midpoint_term", lhs},
                 {"endpoint_average", rhs},
                 {"limit_margin", low_r_limit_margin(r)}};
  return out;
}

double mid_r_closed_form(double r) {
  const double root5 = std::sqrt(5.0);
  const double lam_plus = (3.0 + root5) / 2.0;
  const double lam_minus = (3.0 - root5) / 2.0;
  return (std::pow(lam_plus, r - 1.0) - std::pow(lam_minus, r - 1.0)) / root5;
}

CounterexampleResult mid_r_refutation(double r) {
  require(r > 0.0 && r < 1.0, "mid_r_refutation: r must lie in (0,1)");

  Matrix m1(2, 2), m2(2, 2);
  m1 << 2.0, 2.0, 2.0, 2.0;
  m2 << 2.0, 0.0, 0.0, 0.0;
  const PsdMatrix x1(m1);
  const PsdMatrix x2(m2);
  const PsdMatrix mid(combine(0.5, x1.hermitian(), 0.5, x2.hermitian()));
  const Matrix v = col2(0.0, 1.0);
  const Matrix w = col2(1.0, -1.0);

  const auto signed_pairing = [&](const PsdMatrix& x) {
    return ((w.adjoint() * mat_pow(x, r).mat() * v)(0, 0)).real();
  };

  // Both endpoint pairings vanish: X1^r annihilates w, X2^r annihilates v.
  const double e1 = signed_pairing(x1);
  const double e2 = signed_pairing(x2);
  const double m = signed_pairing(mid);
  const double closed = mid_r_closed_form(r);
  const double root5 = std::sqrt(5.0);

  CounterexampleResult out;
  out.margin = 0.5 * (e1 * e1 + e2 * e2) - m * m;
  out.construction = {{"X1", m1}, {"X2", m2}, {"v", v}, {"w", w}};
  out.scalars = {{"r", r},
                 {"lambda_plus", (3.0 + root5) / 2.0},
                 {"lambda_minus", (3.0 - root5) / 2.0},
                 {"midpoint_pairing", m},
                 {"closed_form", closed},
                 {"endpoint_pairing_1", e1},
                 {"endpoint_pairing_2", e2}};
  return out;
}

CounterexampleResult homogeneity_refutation(double p, double q, double scale,
                                            Eigen::Index dim,
                                            std::uint64_t seed) {
  require(p > 0.0 && p <= 1.0, "homogeneity_refutation: need 0 < p <= 1");
  require(q > 0.0 && q <= 1.0, "homogeneity_refutation: need 0 < q <= 1");
  require(p + q <= 1.0 + 1e-12, "homogeneity_refutation: need p + q <= 1");
  require(scale > 0.0, "homogeneity_refutation: scale must be positive");
  require(dim >= 2, "homogeneity_refutation: dim must be at least 2");

  SplitRng root(seed);

  // A with an exact null vector: zero out the smallest eigenvalue of a
  // random draw. B must couple v to the range of A or the left side
  // degenerates; resample on the (measure-zero) failure.
  SplitRng arng = root.split(0);
  const PsdMatrix a_draw = sample_psd(arng, dim, 1e3);
  const SpectralDecomposition& asd = a_draw.decomposition();
  RealVector lam = asd.eigenvalues;
  lam(0) = 0.0;
  Matrix amat = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 1; i < dim; ++i)
    amat += lam(i) * asd.eigenvectors.col(i) *
            asd.eigenvectors.col(i).adjoint();
  const PsdMatrix a(amat);
  const Matrix v = asd.eigenvectors.col(0);

  const Matrix ap = mat_pow(a, p).mat();

  const auto sides = [&](const PsdMatrix& b, double sc) {
    const PsdMatrix sb(sc * b.mat());
    const Matrix bq = mat_pow(sb, q / 2.0).mat();
    const Matrix u = bq * v;
    const double left = ((u.adjoint() * ap * u)(0, 0)).real();
    const double vbv = ((v.adjoint() * sb.mat() * v)(0, 0)).real();
    const double right = std::exp2(1.0 - p - q) * std::pow(vbv, p + q);
    return std::pair<double, double>{left, right};
  };

  PsdMatrix b = PsdMatrix::identity(dim);
  double l1 = 0.0;
  bool ok = false;
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    SplitRng brng = root.split(1 + attempt);
    b = sample_psd(brng, dim, 1e3);
    l1 = sides(b, 1.0).first;
    if (l1 > 1e-10) {
      ok = true;
      break;
    }
  }
  if (!ok)
    throw std::runtime_error(
        "homogeneity_refutation: degenerate draws, left side vanished");

  const auto [left_at, right_at] = sides(b, scale);

  // margin(s) = s^q (s^p R1 - L1): one sign change in s. The crossing
  // (L1/R1)^{1/p} can sit many decades from 1 for unlucky draws, so the
  // bracket grows geometrically until it straddles the sign change.
  double lo = 1e-6, hi = 1e6;
  const auto margin_at = [&](double sc) {
    const auto [l, rr] = sides(b, sc);
    return rr - l;
  };
  double mlo = margin_at(lo);
  double mhi = margin_at(hi);
  for (int grow = 0; grow < 30 && !(mlo < 0.0); ++grow) {
    lo *= 1e-2;
    mlo = margin_at(lo);
  }
  for (int grow = 0; grow < 30 && !(mhi > 0.0); ++grow) {
    hi *= 1e2;
    mhi = margin_at(hi);
  }
  if (!(mlo < 0.0 && mhi > 0.0))
    throw std::runtime_error(
        "homogeneity_refutation: bracketing failed; construction degenerate");
  for (int it = 0; it < 60; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (margin_at(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double threshold = std::sqrt(lo * hi);

  CounterexampleResult out;
  out.margin = right_at - left_at;
  out.limit_parameter = threshold;
  out.construction = {{"A", a.mat()}, {"B", b.mat()}, {"v", v}};
  out.scalars = {{"p", p},
                 {"q", q},
                 {"scale", scale},
                 {"left_side", left_at},
                 {"right_side", right_at},
                 {"left_degree", q},
                 {"right_degree", p + q}};
  return out;
}

DilationReport dilation_limit(const Matrix& k, const PsdMatrix& a,
                              const PsdMatrix& b, const ParamPoint& prm,
                              const std::vector<double>& t_schedule) {
  require(k.rows() == a.dim() && k.cols() == a.dim() && a.dim() == b.dim(),
          "dilation_limit: dimension mismatch");
  require(prm.p > 0.0,
          "dilation_limit: p must be positive (the regularized zero block "
          "diverges under negative powers)");
  require(!t_schedule.empty(), "dilation_limit: empty schedule");
  for (const double t : t_schedule)
    require(t > 0.0 && std::isfinite(t),
            "dilation_limit: schedule entries must be positive");
  for (std::size_t i = 1; i < t_schedule.size(); ++i) {
    if (prm.q < 0.0)
      require(t_schedule[i] > t_schedule[i - 1],
              "dilation_limit: q < 0 needs a strictly increasing schedule");
    else
      require(t_schedule[i] < t_schedule[i - 1],
              "dilation_limit: q > 0 needs a strictly decreasing schedule");
  }

  const Eigen::Index n = a.dim();
  const DilationResult dil = polar_dilation(k);
  const Matrix kc = dil.unitary.topLeftCorner(n, n);

  DilationReport rep;
  rep.rescale_factor = dil.rescale_factor;
  rep.target = psi(kc, a, b, prm);

  const double eps = kStrictFloorFactor * b.spectral_norm();
  // The dilation blocks are exactly diagonal, so their powers are taken
  // block-wise. Powering the assembled matrix instead would mix scales
  // separated by up to fifteen decades and trip the positivity floor.
  Matrix bpow = Matrix::Zero(2 * n, 2 * n);
  bpow.topLeftCorner(n, n) = mat_pow(b, prm.p).mat();
  const double eps_pow = std::pow(eps, prm.p);
  for (Eigen::Index i = n; i < 2 * n; ++i) bpow(i, i) = eps_pow;
  const Matrix conj_b = dil.unitary.adjoint() * bpow * dil.unitary;
  const Matrix apow_top = mat_pow(a, prm.q / 2.0).mat();

  const double target_scale = std::max(1.0, std::abs(rep.target));
  double prev_gap = std::numeric_limits<double>::infinity();
  for (const double t : t_schedule) {
    Matrix apow = Matrix::Zero(2 * n, 2 * n);
    apow.topLeftCorner(n, n) = apow_top;
    const double tpow = std::pow(t, prm.q / 2.0);
    for (Eigen::Index i = n; i < 2 * n; ++i) apow(i, i) = tpow;

    DilationStep step;
    step.t = t;
    step.value = trace_power(HermitianMatrix(apow * conj_b * apow), prm.s);
    step.rel_gap = std::abs(step.value - rep.target) / target_scale;
    if (step.rel_gap > prev_gap * (1.0 + 1e-9)) rep.monotone = false;
    prev_gap = step.rel_gap;
    rep.steps.push_back(step);
  }
  rep.final_rel_gap = rep.steps.back().rel_gap;

  const double knorm = std::sqrt(
      std::max(0.0, eig(HermitianMatrix(kc.adjoint() * kc)).max_eigenvalue()));
  rep.slow_convergence = rep.final_rel_gap > 1e-6 && knorm >= 0.99;
  return rep;
}

}  // namespace tcl::counterexamples
