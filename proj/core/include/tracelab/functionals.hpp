#pragma once

#include "tracelab/linalg.hpp"

namespace tcl {

// Exponent triple (p, q, s) for the sandwiched trace functional
//   (A, B) -> Tr[(A^{q/2} B^p A^{q/2})^s].
// p and q must be nonzero and s positive; violations throw invalid_argument.
struct ParamPoint {
  double p;
  double q;
  double s;

  ParamPoint(double p_, double q_, double s_);

  [[nodiscard]] ParamPoint swapped() const { return {q, p, s}; }
};

// Exponent triple (p, q, r) for the three-matrix trace form
//   (A, B, C) -> Tr[A^{q/2} B^p A^{q/2} C^r].
struct TripleParams {
  double p;
  double q;
  double r;

  TripleParams(double p_, double q_, double r_);
};

// A^{q/2} K^* B^p K A^{q/2}, the operator inside the trace. K must match the
// dimensions of A and B. Negative exponents require the corresponding
// argument strictly positive (domain_error otherwise).
HermitianMatrix sandwich(const Matrix& k, const PsdMatrix& a,
                         const PsdMatrix& b, double p, double q);
HermitianMatrix sandwich(const PsdMatrix& a, const PsdMatrix& b, double p,
                         double q);

// Tr[H^s] for a positive semidefinite H (eigenvalues inside the psd
// tolerance window are clamped to zero). Negative s requires H strictly
// positive.
double trace_power(const HermitianMatrix& h, double s);

// Two-matrix trace functional Tr[(A^{q/2} B^p A^{q/2})^s]. Identical, bit
// for bit, to psi with the identity contraction.
double phi(const PsdMatrix& a, const PsdMatrix& b, const ParamPoint& prm);

// Deformed functional Tr[(A^{q/2} K^* B^p K A^{q/2})^s].
double psi(const Matrix& k, const PsdMatrix& a, const PsdMatrix& b,
           const ParamPoint& prm);

// Unvalidated evaluation of the same expression, allowing negative s.
// Exists for the exponent sign-flip identity
//   psi_{K,p,q,s} = psi_{(K^*)^{-1},-p,-q,-s},
// whose right side lies outside ParamPoint's domain.
double psi_raw(const Matrix& k, const PsdMatrix& a, const PsdMatrix& b,
               double p, double q, double s);

// Tr[A^{q/2} B^p A^{q/2} C^r]. The imaginary residue of the trace must be
// negligible; a material residue signals a broken invariant and throws.
double triple_trace(const PsdMatrix& a, const PsdMatrix& b, const PsdMatrix& c,
                    const TripleParams& prm);

enum class VariationalMode { supremum, infimum };

struct VariationalResult {
  double value;               // s * objective at the best iterate found
  double certificate;         // s * objective at the closed-form optimizer X^s
  HermitianMatrix optimizer;  // best iterate
  int steps_run;
};

// Objective Tr[X Z^{1 - 1/s}] + (1/s - 1) Tr[Z] of the trace-power
// variational principle. Z must be psd (strictly positive when the exponent
// 1 - 1/s is negative, i.e. in infimum mode).
double variational_objective(const PsdMatrix& x, double s, const PsdMatrix& z);

// Tr[X^s] = s * sup_Z {...} for s > 1 (supremum mode) and
// Tr[X^s] = s * inf_Z {...} for 0 < s < 1 (infimum mode), optimum at
// Z = X^s. Runs projected gradient iteration from a deterministic perturbed
// start; the returned certificate is the value at the closed-form optimizer.
// X must be strictly positive.
VariationalResult trace_power_variational(const PsdMatrix& x, double s,
                                          VariationalMode mode,
                                          int steps = 400);

// Renyi divergence family
//   D_{alpha,z}(rho || sigma) =
//     (alpha - 1)^{-1} log( Tr[(sigma^{(1-alpha)/(2z)} rho^{alpha/z}
//                               sigma^{(1-alpha)/(2z)})^z] / Tr[rho] ).
// Requires alpha > 0 with |alpha - 1| >= 1e-3 (guard band around the
// removable singularity), z > 0, and strictly positive rho, sigma.
double renyi_alpha_z(const PsdMatrix& rho, const PsdMatrix& sigma,
                     double alpha, double z);

inline constexpr double kRenyiAlphaGuard = 1e-3;

}  // namespace tcl
