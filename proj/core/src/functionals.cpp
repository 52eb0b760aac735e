#include "tracelab/functionals.hpp"

#include <cmath>
#include <sstream>

namespace tcl {
namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Traces of products of Hermitian factors are real; a material imaginary
// part means an upstream invariant broke.
double real_trace(const Complex& tr) {
  if (std::abs(tr.imag()) > 1e-10 * std::max(1e-300, std::abs(tr.real()))) {
    std::ostringstream msg;
    msg << "trace has non-negligible imaginary part " << tr.imag()
        << " against real part " << tr.real();
    throw std::runtime_error(msg.str());
  }
  return tr.real();
}

HermitianMatrix sandwich_impl(const Matrix* k, const PsdMatrix& a,
                              const PsdMatrix& b, double p, double q) {
  require(a.dim() == b.dim(), "sandwich: dimension mismatch between A and B");
  const Matrix aq2 = mat_pow(a, q / 2.0).mat();
  const Matrix bp = mat_pow(b, p).mat();
  if (k != nullptr) {
    require(k->rows() == a.dim() && k->cols() == a.dim(),
            "sandwich: K dimensions must match A and B");
  }
  if (k == nullptr || k->isIdentity(0.0)) {
    return HermitianMatrix(aq2 * bp * aq2);
  }
  const Matrix mid = k->adjoint() * bp * (*k);
  return HermitianMatrix(aq2 * mid * aq2);
}

double trace_power_with_sign(const HermitianMatrix& h, double s) {
  const SpectralDecomposition sd = eig(h);
  const double norm = sd.spectral_norm();
  const double window = -kPsdTolFactor * std::max(1.0, norm);
  if (sd.min_eigenvalue() < window) {
    std::ostringstream msg;
    msg << "trace_power: operand not positive semidefinite; min eigenvalue "
        << sd.min_eigenvalue();
    throw std::runtime_error(msg.str());
  }
  if (s < 0.0) {
    const double floor = kStrictFloorFactor * norm;
    if (sd.min_eigenvalue() < floor || norm == 0.0) {
      std::ostringstream msg;
      msg << "trace_power: exponent " << s
          << " requires a strictly positive operand; offending eigenvalue "
          << sd.min_eigenvalue();
      throw std::domain_error(msg.str());
    }
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
    const double lam = std::max(sd.eigenvalues(i), 0.0);
    sum += (lam == 0.0 && s > 0.0) ? 0.0 : std::pow(lam, s);
  }
  return sum;
}

}  // namespace

ParamPoint::ParamPoint(double p_, double q_, double s_) : p(p_), q(q_), s(s_) {
  require(p != 0.0 && std::isfinite(p), "ParamPoint: p must be nonzero");
  require(q != 0.0 && std::isfinite(q), "ParamPoint: q must be nonzero");
  require(s > 0.0 && std::isfinite(s), "ParamPoint: s must be positive");
}

TripleParams::TripleParams(double p_, double q_, double r_)
    : p(p_), q(q_), r(r_) {
  require(p != 0.0 && std::isfinite(p), "TripleParams: p must be nonzero");
  require(q != 0.0 && std::isfinite(q), "TripleParams: q must be nonzero");
  require(r != 0.0 && std::isfinite(r), "TripleParams: r must be nonzero");
}

HermitianMatrix sandwich(const Matrix& k, const PsdMatrix& a,
                         const PsdMatrix& b, double p, double q) {
  return sandwich_impl(&k, a, b, p, q);
}

HermitianMatrix sandwich(const PsdMatrix& a, const PsdMatrix& b, double p,
                         double q) {
  return sandwich_impl(nullptr, a, b, p, q);
}

double trace_power(const HermitianMatrix& h, double s) {
  return trace_power_with_sign(h, s);
}

double phi(const PsdMatrix& a, const PsdMatrix& b, const ParamPoint& prm) {
  return trace_power_with_sign(sandwich_impl(nullptr, a, b, prm.p, prm.q),
                               prm.s);
}

double psi(const Matrix& k, const PsdMatrix& a, const PsdMatrix& b,
           const ParamPoint& prm) {
  return trace_power_with_sign(sandwich_impl(&k, a, b, prm.p, prm.q), prm.s);
}

double psi_raw(const Matrix& k, const PsdMatrix& a, const PsdMatrix& b,
               double p, double q, double s) {
  require(s != 0.0 && std::isfinite(s), "psi_raw: s must be nonzero");
  return trace_power_with_sign(sandwich_impl(&k, a, b, p, q), s);
}

double triple_trace(const PsdMatrix& a, const PsdMatrix& b, const PsdMatrix& c,
                    const TripleParams& prm) {
  require(a.dim() == c.dim(), "triple_trace: dimension mismatch");
  const HermitianMatrix m = sandwich_impl(nullptr, a, b, prm.p, prm.q);
  const Matrix cr = mat_pow(c, prm.r).mat();
  return real_trace((m.mat() * cr).trace());
}

double variational_objective(const PsdMatrix& x, double s,
                             const PsdMatrix& z) {
  require(x.dim() == z.dim(), "variational_objective: dimension mismatch");
  require(s > 0.0 && s != 1.0, "variational_objective: s must be positive, not 1");
  const double alpha = 1.0 - 1.0 / s;
  const Matrix zpow = mat_pow(z, alpha).mat();
  const double coupling = real_trace((x.mat() * zpow).trace());
  return coupling + (1.0 / s - 1.0) * z.trace();
}

namespace {

// Gradient of Z -> Tr[X Z^alpha] through the spectral calculus: in the
// eigenbasis of Z the derivative is the Loewner (divided-difference) matrix
// of lambda^alpha acting entrywise on V^* X V.
HermitianMatrix coupling_gradient(const PsdMatrix& x, double alpha,
                                  const PsdMatrix& z) {
  const SpectralDecomposition& sd = z.decomposition();
  const Eigen::Index n = z.dim();
  const double scale = std::max(sd.spectral_norm(), 1e-300);
  const double lam_floor = 1e-12 * scale;
  const Matrix xv = sd.eigenvectors.adjoint() * x.mat() * sd.eigenvectors;
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double li = std::max(sd.eigenvalues(i), lam_floor);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double lj = std::max(sd.eigenvalues(j), lam_floor);
      double dd;
      if (std::abs(li - lj) > 1e-12 * scale) {
        dd = (std::pow(li, alpha) - std::pow(lj, alpha)) / (li - lj);
      } else {
        dd = alpha * std::pow(0.5 * (li + lj), alpha - 1.0);
      }
      g(i, j) = dd * xv(i, j);
    }
  }
  return HermitianMatrix(sd.eigenvectors * g * sd.eigenvectors.adjoint());
}

// Eigenvalue clamp keeping iterates inside the feasible cone.
PsdMatrix project_psd(const HermitianMatrix& h, double floor) {
  const SpectralDecomposition sd = eig(h);
  return PsdMatrix(
      sd.apply([floor](double lam) { return std::max(lam, floor); }));
}

}  // namespace

VariationalResult trace_power_variational(const PsdMatrix& x, double s,
                                          VariationalMode mode, int steps) {
  require(steps >= 0, "trace_power_variational: steps must be nonnegative");
  require(x.strictly_positive(),
          "trace_power_variational: X must be strictly positive");
  if (mode == VariationalMode::supremum) {
    require(s > 1.0, "trace_power_variational: supremum mode needs s > 1");
  } else {
    require(s > 0.0 && s < 1.0,
            "trace_power_variational: infimum mode needs 0 < s < 1");
  }

  const double alpha = 1.0 - 1.0 / s;
  const PsdMatrix zstar(mat_pow(x, s));
  const double certificate = s * variational_objective(x, s, zstar);

  const Eigen::Index n = x.dim();
  // Deterministic start: the optimizer nudged along a fixed Hermitian
  // direction (Hilbert-matrix pattern), then projected back into the cone.
  Matrix bump(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      bump(i, j) = 1.0 / static_cast<double>(1 + i + j);
  const double zscale = std::max(zstar.spectral_norm(), 1e-300);
  const HermitianMatrix start = combine(1.0, zstar.hermitian(), 0.15 * zscale,
                                        HermitianMatrix(bump / bump.norm()));

  // Two orders above the inversion floor so iterates stay strictly feasible
  // even when their norm drifts above that of the optimizer.
  const double floor = 1e-8 * zscale;
  PsdMatrix z = project_psd(start, floor);

  const double sign = (mode == VariationalMode::supremum) ? 1.0 : -1.0;
  double step_size = 0.5 / std::max(x.spectral_norm(), 1e-300);

  double best_obj = variational_objective(x, s, z);
  HermitianMatrix best = z.hermitian();
  int ran = 0;
  // Projected ascent with a geometric step ladder: each iteration tries a
  // few multiples of the current step along the gradient and keeps the best
  // improvement, recentering the step on the winning multiple. Entirely
  // deterministic, so results are reproducible bit for bit.
  static constexpr double kLadder[] = {4.0, 2.0, 1.0, 0.5, 0.25};
  for (int it = 0; it < steps; ++it) {
    const HermitianMatrix grad = combine(
        1.0, coupling_gradient(x, alpha, z), 1.0 / s - 1.0,
        HermitianMatrix::identity(n));
    double chosen = 0.0;
    double round_obj = sign * (-std::numeric_limits<double>::infinity());
    PsdMatrix round_z = z;
    for (const double f : kLadder) {
      const HermitianMatrix moved =
          combine(1.0, z.hermitian(), sign * step_size * f, grad);
      const PsdMatrix cand = project_psd(moved, floor);
      const double obj = variational_objective(x, s, cand);
      if (sign * (obj - round_obj) > 0.0) {
        round_obj = obj;
        round_z = cand;
        chosen = f;
      }
    }
    z = round_z;
    // For a fixed eigenbasis V of Z the objective separates, with scalar
    // optimum z_i = ((V^* X V)_ii)^s in both modes; refitting the
    // eigenvalues leaves only the basis-misalignment error, which is
    // quadratic near the optimum.
    {
      const SpectralDecomposition& sdz = z.decomposition();
      const Matrix vxv =
          sdz.eigenvectors.adjoint() * x.mat() * sdz.eigenvectors;
      RealVector zi(n);
      for (Eigen::Index i = 0; i < n; ++i)
        zi(i) = std::max(
            std::pow(std::max(vxv(i, i).real(), 1e-300), s), floor);
      const Matrix refit_mat = sdz.eigenvectors *
                               zi.asDiagonal().toDenseMatrix().cast<Complex>() *
                               sdz.eigenvectors.adjoint();
      const PsdMatrix refit{HermitianMatrix(refit_mat)};
      const double refit_obj = variational_objective(x, s, refit);
      if (sign * (refit_obj - round_obj) > 0.0) {
        round_obj = refit_obj;
        z = refit;
      }
    }
    if (sign * (round_obj - best_obj) > 0.0) {
      best_obj = round_obj;
      best = z.hermitian();
      step_size *= std::max(chosen, 0.25);
    } else {
      step_size *= 0.25;  // no progress at any multiple; contract the ladder
    }
    ++ran;
  }

  return {s * best_obj, certificate, best, ran};
}

double renyi_alpha_z(const PsdMatrix& rho, const PsdMatrix& sigma,
                     double alpha, double z) {
  require(rho.dim() == sigma.dim(), "renyi_alpha_z: dimension mismatch");
  require(alpha > 0.0 && std::isfinite(alpha),
          "renyi_alpha_z: alpha must be positive");
  require(std::abs(alpha - 1.0) >= kRenyiAlphaGuard,
          "renyi_alpha_z: alpha inside the guard band around 1");
  require(z > 0.0 && std::isfinite(z), "renyi_alpha_z: z must be positive");
  require(rho.strictly_positive() && sigma.strictly_positive(),
          "renyi_alpha_z: rho and sigma must be strictly positive");

  const double e_sigma = (1.0 - alpha) / (2.0 * z);
  const double e_rho = alpha / z;
  const Matrix sp = mat_pow(sigma, e_sigma).mat();
  const Matrix rp = mat_pow(rho, e_rho).mat();
  const HermitianMatrix core(sp * rp * sp);
  const double tr = trace_power_with_sign(core, z);
  return std::log(tr / rho.trace()) / (alpha - 1.0);
}

}  // namespace tcl
