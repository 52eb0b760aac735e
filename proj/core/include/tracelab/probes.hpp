#pragma once

#include <optional>
#include <vector>

#include "tracelab/functionals.hpp"
#include "tracelab/regions.hpp"
#include "tracelab/rng.hpp"

namespace tcl::probes {

enum class Direction { convex, concave };

// Shared probe settings. Margins are normalized (see the individual margin
// functions); a candidate counts as a violation when its normalized margin
// drops below -tol_rel.
struct ProbeConfig {
  Eigen::Index dim = 3;
  int trials = 1000;
  std::uint64_t seed = 0;
  double tol_rel = 1e-8;
  std::vector<double> lambdas = {0.25, 0.5, 0.75};
  double cond_cap = 1e3;
  bool refine = true;
  int refine_sweeps = 40;

  void validate() const;
};

// A midpoint-test candidate: the two endpoint tuples, the mixing weight,
// and any fixed matrices the functional closes over (e.g. the contraction
// K of a deformed probe). Serializable, so violations can be replayed.
struct Witness {
  std::vector<Matrix> left;
  std::vector<Matrix> right;
  std::vector<Matrix> context;
  double lambda = 0.5;
  double margin = 0.0;
  int trial = -1;
};

struct ConvexityVerdict {
  bool violated = false;
  double worst_margin = 0.0;
  std::optional<Witness> witness;
  int trials_run = 0;
};

// Normalized midpoint margins; negative means the inequality of the chosen
// direction failed. Trace-valued forms normalize by
// max(1, |f(left)|, |f(right)|, |f(mid)|); the operator form normalizes the
// minimum eigenvalue of the gap by max(1, spectral norms of the three maps).
double trace_margin(const ParamPoint& prm, Direction dir, const Witness& w);
double psi_margin(const Matrix& k, const ParamPoint& prm, Direction dir,
                  const Witness& w);
double operator_margin(double p, double q, Direction dir, const Witness& w);
double triple_margin(const TripleParams& prm, Direction dir, const Witness& w);
double epstein_margin(const PsdMatrix& d, double t, double u, const Witness& w);

// Random midpoint probes. Sampling is splittable per trial, so verdicts are
// reproducible and independent of evaluation order; the per-trial draws of
// the plain and deformed probes coincide stream-for-stream, which makes
// psi with K = I agree bit-for-bit with the plain probe. When a violation
// is found and cfg.refine is set, the worst witness is sharpened by
// deterministic coordinate descent before being reported.
ConvexityVerdict probe_trace_convexity(const ParamPoint& prm,
                                       const ProbeConfig& cfg, Direction dir);
ConvexityVerdict probe_psi_convexity(const Matrix& k, const ParamPoint& prm,
                                     const ProbeConfig& cfg, Direction dir);
ConvexityVerdict probe_operator_convexity(double p, double q,
                                          const ProbeConfig& cfg,
                                          Direction dir);
ConvexityVerdict probe_triple_convexity(const TripleParams& prm,
                                        const ProbeConfig& cfg, Direction dir);

// Concavity probe of A -> Tr[(D A^t D)^u] for a fixed psd D.
ConvexityVerdict epstein_probe(const PsdMatrix& d, double t, double u,
                               const ProbeConfig& cfg);

// Cross-checks the equivalent formulations of the deformed functional on
// shared per-trial draws: K = I (base), Haar-unitary K, strict-contraction
// K, and the swap embedding at doubled dimension. Two exact identities are
// monitored alongside the four verdicts:
//   unitary transfer   psi_U(A, B) = phi(A, U* B U),
//   swap embedding     psi_swap(diag(A,B), diag(A,B)) = phi(A,B) + phi(B,A).
struct PsiEquivalenceReport {
  ConvexityVerdict base;
  ConvexityVerdict unitary;
  ConvexityVerdict contraction;
  ConvexityVerdict embedded;
  double worst_unitary_residual = 0.0;
  double worst_embedding_residual = 0.0;
  bool consistent = true;  // both residuals within 1e-8
  int trials_run = 0;
};

PsiEquivalenceReport probe_psi_equivalences(const ParamPoint& prm,
                                            const ProbeConfig& cfg);

// Cartesian exponent grid for scans.
struct GridSpec {
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> s;

  [[nodiscard]] std::size_t size() const {
    return p.size() * q.size() * s.size();
  }
};

struct RegionRow {
  double p = 0.0;
  double q = 0.0;
  double s = 0.0;
  std::uint64_t index = 0;
  regions::RegionVerdict convexity{regions::Status::open_convexity, ""};
  regions::RegionVerdict concavity{regions::Status::open_convexity, ""};
  ConvexityVerdict convex_probe;
  ConvexityVerdict concave_probe;
  std::string error;  // non-empty when this point failed to evaluate
};

struct ScanSummary {
  int points = 0;
  int proven_convex_violated = 0;   // alarms: violation where convexity is proven
  int proven_concave_violated = 0;  // alarms: violation where concavity is proven
  int witnesses = 0;
  int errors = 0;
};

struct RegionReport {
  GridSpec grid;
  ProbeConfig config;
  std::vector<RegionRow> rows;

  [[nodiscard]] ScanSummary summary() const;
};

// Classifies and probes every grid point (both directions). Rows are
// evaluated by a worker pool (workers <= 0 picks the hardware count) with
// per-row split seeds, so the report is identical regardless of the worker
// count or scheduling.
RegionReport region_scan(const GridSpec& grid, const ProbeConfig& cfg,
                         int workers = 0);

}  // namespace tcl::probes
