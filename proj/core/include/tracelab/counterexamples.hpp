#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tracelab/functionals.hpp"

namespace tcl::counterexamples {

// A named explicit construction together with the scalar margin it
// produces. Margins follow the probe convention: negative refutes the
// property under attack. The construction matrices (vectors are stored as
// n x 1 blocks) and any derived scalars are kept for serialization, so a
// replayed run can re-evaluate the refutation from file.
struct CounterexampleResult {
  double margin = 0.0;
  std::optional<double> limit_parameter;
  std::vector<std::pair<std::string, Matrix>> construction;
  std::vector<std::pair<std::string, double>> scalars;
};

// Refutes midpoint concavity of X -> <w| X^r |v> outer products for
// r < 1/2 (r nonzero): with X1 = 2I and X2 = t diag(2, 4), the gap
//   1/2 <w|X1^r|v><v|X1^r|w> + 1/2 <w|X2^r|v><v|X2^r|w>
//     - <w|X^r|v><v|X^r|w>,   X = (X1 + X2)/2,
// tends to (2^{2r-1} - 1)(2^r - 1)^2 < 0 as t -> 0. Requires t > 0; for
// negative r every ingredient stays strictly positive.
CounterexampleResult low_r_refutation(double r, double t);

// Closed-form t -> 0 limit of the gap above.
double low_r_limit_margin(double r);

// Same inequality refuted for 0 < r < 1 with singular summands:
// X1 = [[2,2],[2,2]], X2 = diag(2,0), v = (0,1), w = (1,-1) annihilate the
// endpoint terms while the midpoint term stays away from zero.
CounterexampleResult mid_r_refutation(double r);

// Closed form of <w|((X1+X2)/2)^r|v> for the mid-range construction:
// (lam_+^{r-1} - lam_-^{r-1}) / sqrt(5) with lam_+- = (3 +- sqrt(5)) / 2.
double mid_r_closed_form(double r);

// Refutes pointwise concavity bounds for the positive-exponent functional
// by a homogeneity-degree mismatch: with A singular (null vector v) the
// candidate inequality
//   <v| (sB)^{q/2} A^p (sB)^{q/2} |v>  <=  2^{1-p-q} <v| sB |v>^{p+q}
// has degree q on the left and p + q on the right, so it fails for small
// scales s. Reports the margin at the requested scale and bisects for the
// crossing scale (stored in limit_parameter).
CounterexampleResult homogeneity_refutation(double p, double q, double scale,
                                            Eigen::Index dim,
                                            std::uint64_t seed);

struct DilationStep {
  double t = 0.0;
  double value = 0.0;
  double rel_gap = 0.0;
};

struct DilationReport {
  double target = 0.0;          // deformed functional at (K, A, B)
  double rescale_factor = 1.0;  // applied when ||K|| exceeded one
  std::vector<DilationStep> steps;
  double final_rel_gap = 0.0;
  bool monotone = true;          // gaps nonincreasing along the schedule
  bool slow_convergence = false; // final gap above 1e-6 with ||K|| near 1
};

// Realizes the deformed functional as a limit of undeformed ones in doubled
// dimension: with U the unitary dilation of K, and block arguments
// diag(A, tI), diag(B, eps I), the value converges to psi(K, A, B) as
// t -> infinity for q < 0 and t -> 0 for q > 0. The schedule must move in
// the direction matching the sign of q; p must be positive (the eps
// regularization of the zero block diverges otherwise).
DilationReport dilation_limit(const Matrix& k, const PsdMatrix& a,
                              const PsdMatrix& b, const ParamPoint& prm,
                              const std::vector<double>& t_schedule);

}  // namespace tcl::counterexamples
