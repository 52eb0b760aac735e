#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tracelab/probes.hpp"
#include "tracelab/serialize.hpp"

using namespace tcl;
using namespace tcl::probes;

namespace {

ProbeConfig quick_cfg(int trials, Eigen::Index dim = 3,
                      std::uint64_t seed = 0) {
  ProbeConfig cfg;
  cfg.dim = dim;
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

Matrix pad_diag(const Matrix& m, double filler) {
  const Eigen::Index n = m.rows();
  Matrix out = Matrix::Zero(n + 1, n + 1);
  out.topLeftCorner(n, n) = m;
  out(n, n) = filler;
  return out;
}

}  // namespace

TEST_CASE("config validation") {
  ProbeConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ProbeConfig{};
  cfg.lambdas = {0.5, 1.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ProbeConfig{};
  cfg.dim = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ProbeConfig{};
  cfg.dim = 1;  // scalar probes are legitimate
  CHECK_NOTHROW(cfg.validate());
  cfg = ProbeConfig{};
  cfg.tol_rel = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("trace probe is deterministic, bit for bit") {
  const ParamPoint prm(1, 1, 0.75);
  const ProbeConfig cfg = quick_cfg(300, 2, 11);
  const ConvexityVerdict v1 = probe_trace_convexity(prm, cfg, Direction::concave);
  const ConvexityVerdict v2 = probe_trace_convexity(prm, cfg, Direction::concave);
  CHECK(v1.violated == v2.violated);
  CHECK(v1.worst_margin == v2.worst_margin);
  CHECK(v1.trials_run == v2.trials_run);
  REQUIRE(v1.witness.has_value() == v2.witness.has_value());
  if (v1.witness) {
    CHECK(v1.witness->lambda == v2.witness->lambda);
    CHECK(v1.witness->left[0] == v2.witness->left[0]);
    CHECK(v1.witness->right[1] == v2.witness->right[1]);
  }
}

TEST_CASE("no violations inside proven regions (smoke scale)") {
  // Convex band point with large s.
  const ConvexityVerdict cv = probe_trace_convexity(
      ParamPoint(1, -0.5, 2), quick_cfg(200, 3, 1), Direction::convex);
  CHECK_FALSE(cv.violated);
  CHECK(cv.worst_margin >= -1e-8);
  CHECK(cv.trials_run == 200);

  // Concave iff-region point, boundary s = 1/(p+q).
  const ConvexityVerdict cc = probe_trace_convexity(
      ParamPoint(1, 1, 0.5), quick_cfg(200, 3, 2), Direction::concave);
  CHECK_FALSE(cc.violated);

  // Sharp p=2 window.
  const ConvexityVerdict sharp = probe_trace_convexity(
      ParamPoint(2, -0.5, 2.0 / 3), quick_cfg(150, 2, 3), Direction::convex);
  CHECK_FALSE(sharp.violated);
}

TEST_CASE("concavity witness appears just above the boundary") {
  // s = 3/4 > 1/(p+q) = 1/2: concavity provably fails; a witness must be
  // found within the search budget.
  const ParamPoint prm(1, 1, 0.75);
  ProbeConfig cfg = quick_cfg(2000, 2, 0);
  const ConvexityVerdict v =
      probe_trace_convexity(prm, cfg, Direction::concave);
  REQUIRE(v.violated);
  REQUIRE(v.witness.has_value());
  CHECK(v.worst_margin < -cfg.tol_rel);
  CHECK(v.witness->margin == v.worst_margin);

  // Soundness: re-evaluating the stored witness reproduces the violation.
  const double replay = trace_margin(prm, Direction::concave, *v.witness);
  CHECK(replay <= -cfg.tol_rel / 2);

  // Portability: padding every matrix with a small diagonal block preserves
  // the violation at dimension n + 1.
  Witness padded = *v.witness;
  for (Matrix& m : padded.left) m = pad_diag(m, 1e-2);
  for (Matrix& m : padded.right) m = pad_diag(m, 1e-2);
  CHECK(trace_margin(prm, Direction::concave, padded) <= -cfg.tol_rel / 2);
}

TEST_CASE("witness JSON round trip preserves the margin bits") {
  const ParamPoint prm(1, 1, 0.75);
  const ConvexityVerdict v =
      probe_trace_convexity(prm, quick_cfg(1500, 2, 5), Direction::concave);
  REQUIRE(v.witness.has_value());
  const std::string text = io::witness_json(*v.witness).dump();
  const Witness back = io::witness_from_json_text(text);
  CHECK(back.lambda == v.witness->lambda);
  CHECK(back.margin == v.witness->margin);
  CHECK(back.trial == v.witness->trial);
  REQUIRE(back.left.size() == 2);
  CHECK(back.left[0] == v.witness->left[0]);
  CHECK(back.left[1] == v.witness->left[1]);
  CHECK(back.right[0] == v.witness->right[0]);
  CHECK(trace_margin(prm, Direction::concave, back) ==
        trace_margin(prm, Direction::concave, *v.witness));
}

TEST_CASE("deformed probe with identity contraction equals the plain probe") {
  const ParamPoint prm(1, -0.5, 2);
  const ProbeConfig cfg = quick_cfg(100, 3, 7);
  const ConvexityVerdict plain =
      probe_trace_convexity(prm, cfg, Direction::convex);
  const Matrix id = Matrix::Identity(3, 3);
  const ConvexityVerdict deformed =
      probe_psi_convexity(id, prm, cfg, Direction::convex);
  CHECK(plain.worst_margin == deformed.worst_margin);  // bit-identical
  CHECK(plain.violated == deformed.violated);
}

TEST_CASE("operator probe: proven window clean, outside it violated") {
  const ConvexityVerdict ok = probe_operator_convexity(
      -1.0, 2.0, quick_cfg(200, 3, 1), Direction::convex);
  CHECK_FALSE(ok.violated);
  CHECK(ok.worst_margin >= -1e-8);

  const ConvexityVerdict ok2 = probe_operator_convexity(
      -0.5, 2.0, quick_cfg(200, 2, 2), Direction::convex);
  CHECK_FALSE(ok2.violated);

  // q = 1.9 just misses the window; a convexity witness must exist.
  const ConvexityVerdict bad = probe_operator_convexity(
      -1.0, 1.9, quick_cfg(3000, 2, 0), Direction::convex);
  CHECK(bad.violated);
  REQUIRE(bad.witness.has_value());
  CHECK(operator_margin(-1.0, 1.9, Direction::convex, *bad.witness) <=
        -1e-8 / 2);

  // The map is never operator concave; (1/2,1/2) is the classic instance.
  const ConvexityVerdict conc = probe_operator_convexity(
      0.5, 0.5, quick_cfg(3000, 2, 0), Direction::concave);
  CHECK(conc.violated);
}

TEST_CASE("triple probe: proven window, scalar violation, never concave") {
  const TripleParams prm(-0.5, 2, -0.25);
  const ConvexityVerdict ok =
      probe_triple_convexity(prm, quick_cfg(200, 3, 1), Direction::convex);
  CHECK_FALSE(ok.violated);

  // Scalars: (a,b,c) -> abc is not jointly convex on the positives.
  const ConvexityVerdict scalar = probe_triple_convexity(
      TripleParams(1, 1, 1), quick_cfg(500, 1, 0), Direction::convex);
  CHECK(scalar.violated);

  const ConvexityVerdict conc =
      probe_triple_convexity(prm, quick_cfg(2000, 2, 0), Direction::concave);
  CHECK(conc.violated);
  REQUIRE(conc.witness.has_value());
  CHECK(triple_margin(prm, Direction::concave, *conc.witness) <= -1e-8 / 2);
}

TEST_CASE("epstein probe: linear map sits on the boundary, sqrt is concave") {
  const PsdMatrix d = PsdMatrix::identity(3);
  const ConvexityVerdict linear = epstein_probe(d, 1.0, 1.0, quick_cfg(100, 3, 1));
  CHECK_FALSE(linear.violated);
  CHECK(std::abs(linear.worst_margin) <= 1e-10);

  const ConvexityVerdict root = epstein_probe(d, 0.5, 1.0, quick_cfg(200, 3, 2));
  CHECK_FALSE(root.violated);

  // Exploratory point: just exercise the path, no claim either way.
  SplitRng rng(3);
  const PsdMatrix dr = sample_psd(rng, 2, 10.0);
  const ConvexityVerdict edge = epstein_probe(dr, 0.5, 1.5, quick_cfg(100, 2, 3));
  CHECK(edge.trials_run == 100);
}

TEST_CASE("equivalent formulations stay consistent on a proven point") {
  const ParamPoint prm(1, -0.5, 2);
  ProbeConfig cfg = quick_cfg(60, 2, 9);
  const PsiEquivalenceReport rep = probe_psi_equivalences(prm, cfg);
  CHECK_FALSE(rep.base.violated);
  CHECK_FALSE(rep.unitary.violated);
  CHECK_FALSE(rep.contraction.violated);
  CHECK_FALSE(rep.embedded.violated);
  CHECK(rep.consistent);
  CHECK(rep.worst_embedding_residual <= 1e-10);
  CHECK(rep.worst_unitary_residual <= 1e-8);
  CHECK(rep.trials_run == 60);
}

TEST_CASE("region scan: determinism across worker counts, verdict wiring") {
  GridSpec grid;
  grid.p = {1.0, 0.5};
  grid.q = {-0.5, 1.0};
  grid.s = {0.5, 2.0};
  ProbeConfig cfg = quick_cfg(40, 2, 21);
  const RegionReport r1 = region_scan(grid, cfg, 1);
  const RegionReport r4 = region_scan(grid, cfg, 4);
  REQUIRE(r1.rows.size() == grid.size());
  CHECK(io::region_report_json(r1) == io::region_report_json(r4));

  for (const RegionRow& row : r1.rows) {
    CHECK(row.error.empty());
    const auto want_cv = regions::classify_convexity(ParamPoint(row.p, row.q, row.s));
    CHECK(row.convexity.status == want_cv.status);
    const auto want_cc = regions::classify_concavity(ParamPoint(row.p, row.q, row.s));
    CHECK(row.concavity.status == want_cc.status);
  }

  const ScanSummary sum = r1.summary();
  CHECK(sum.points == static_cast<int>(grid.size()));
  CHECK(sum.proven_convex_violated == 0);
  CHECK(sum.proven_concave_violated == 0);
  CHECK(sum.errors == 0);
}

TEST_CASE("region scan: empty grid axes are rejected") {
  GridSpec grid;
  grid.p = {};
  grid.q = {1.0};
  grid.s = {1.0};
  CHECK_THROWS_AS(region_scan(grid, quick_cfg(10, 2, 0), 2),
                  std::invalid_argument);
}
