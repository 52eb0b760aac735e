// Acceptance gate for the library and CLI: ten independent criteria, one
// [PASS]/[FAIL] line each, nonzero exit when any fails. Every random draw
// descends from kSeed through named splits, so the run is reproducible.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tracelab/channels.hpp"
#include "tracelab/counterexamples.hpp"
#include "tracelab/functionals.hpp"
#include "tracelab/linalg.hpp"
#include "tracelab/probes.hpp"
#include "tracelab/regions.hpp"
#include "tracelab/rng.hpp"

namespace fs = std::filesystem;
using namespace tcl;
using probes::Direction;
using probes::ProbeConfig;
using regions::Status;

namespace {

constexpr std::uint64_t kSeed = 424242;

struct Outcome {
  bool ok = true;
  std::string detail;
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

ProbeConfig probe_config(Eigen::Index dim, int trials, std::uint64_t seed) {
  ProbeConfig cfg;
  cfg.dim = dim;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.tol_rel = 1e-8;
  cfg.lambdas = {0.25, 0.5, 0.75};
  return cfg;
}

double scalar_named(const counterexamples::CounterexampleResult& res,
                    const std::string& name) {
  for (const auto& [key, value] : res.scalars)
    if (key == name) return value;
  throw std::logic_error("missing scalar: " + name);
}

// --- criterion 1: random suite in p in [1,2], q in [-1,0), s above the
// proven threshold min(1/(p-1), 1/(1+q)) by offsets {0, 0.5, 2}.

Outcome criterion1() {
  const double t0 = now_seconds();
  SplitRng rng = SplitRng(kSeed).split(1);
  double worst = 1e300;
  int probes_run = 0;
  for (int i = 0; i < 20; ++i) {
    double p = 0.0, q = 0.0, threshold = 0.0;
    do {  // keep s representable: huge exponents overflow trace powers
      p = 1.0 + rng.next_unit();
      q = -1.0 + rng.next_unit();
      threshold = std::min(1.0 / (p - 1.0), 1.0 / (1.0 + q));
    } while (!(threshold <= 6.0));
    for (double offset : {0.0, 0.5, 2.0}) {
      const ParamPoint prm(p, q, threshold + offset);
      if (regions::classify_convexity(prm).status != Status::proven_convex)
        return {false, "classifier failed to cover a suite point"};
      for (Eigen::Index dim : {2, 3, 4}) {
        const auto verdict = probe_trace_convexity(
            prm, probe_config(dim, 1000, rng.next_u64()), Direction::convex);
        worst = std::min(worst, verdict.worst_margin);
        ++probes_run;
        if (verdict.violated)
          return {false, fmt("violation, margin %.3e at p=%.4f",
                             verdict.worst_margin, p)};
      }
    }
  }
  const double elapsed = now_seconds() - t0;
  if (elapsed > 300.0)
    return {false, fmt("runtime %.1f s exceeds the 300 s budget", elapsed)};
  return {true, fmt("180 probes clean, worst margin %+.2e, %.0f s", worst,
                    elapsed)};
}

// --- criterion 2: p = 2 grid down to the sharp threshold 1/(2+q). The
// grid point (q, s) = (-1, 0.9) lies strictly below the threshold, where
// convexity provably fails; it must classify as such, and the zero-
// violation requirement applies to the points the convexity region covers.

Outcome criterion2() {
  SplitRng rng = SplitRng(kSeed).split(2);
  double worst = 1e300;
  int covered = 0, excluded = 0;
  for (double q : {-1.0, -0.75, -0.5, -0.25}) {
    for (int si = 0; si < 4; ++si) {
      const double s = si == 0 ? 1.0 / (2.0 + q)
                               : std::vector<double>{0.9, 1.0, 2.0}[si - 1];
      const ParamPoint prm(2.0, q, s);
      const auto cls = regions::classify_convexity(prm).status;
      if (cls != Status::proven_convex) {
        if (cls != Status::proven_not_convex)
          return {false, "sub-threshold point not classified as refuted"};
        ++excluded;
        continue;
      }
      ++covered;
      for (Eigen::Index dim : {2, 3, 4}) {
        const auto verdict = probe_trace_convexity(
            prm, probe_config(dim, 1000, rng.next_u64()), Direction::convex);
        worst = std::min(worst, verdict.worst_margin);
        if (verdict.violated)
          return {false, fmt("violation, margin %.3e at q=%.2f",
                             verdict.worst_margin, q)};
      }
    }
  }
  if (covered != 15 || excluded != 1)
    return {false, "unexpected region coverage of the grid"};
  return {true, fmt("15 covered points clean, worst margin %+.2e", worst)};
}

// --- criterion 3: concavity inside 0 < p,q <= 1, s <= 1/(p+q); witnesses
// with margin below -1e-6 just past that boundary at s = 1/(p+q) + 0.25.

Outcome criterion3() {
  SplitRng rng = SplitRng(kSeed).split(3);
  double worst = 1e300;
  for (int i = 0; i < 20; ++i) {
    const double p = 1.0 - rng.next_unit();
    const double q = 1.0 - rng.next_unit();
    const double s = (1.0 - rng.next_unit()) / (p + q);
    const ParamPoint prm(p, q, s);
    if (regions::classify_concavity(prm).status != Status::proven_concave)
      return {false, "classifier failed to cover a suite point"};
    for (Eigen::Index dim : {2, 3, 4}) {
      const auto verdict = probe_trace_convexity(
          prm, probe_config(dim, 1000, rng.next_u64()), Direction::concave);
      worst = std::min(worst, verdict.worst_margin);
      if (verdict.violated)
        return {false, fmt("concavity violation, margin %.3e",
                           verdict.worst_margin)};
    }
  }
  double weakest_witness = -1e300;
  for (int i = 0; i < 10; ++i) {
    const double p = 1.0 - rng.next_unit();
    const double q = 1.0 - rng.next_unit();
    const ParamPoint prm(p, q, 1.0 / (p + q) + 0.25);
    if (regions::classify_concavity(prm).status != Status::proven_not_concave)
      return {false, "past-boundary point not classified as refuted"};
    const auto verdict = probe_trace_convexity(
        prm, probe_config(2, 10000, rng.next_u64()), Direction::concave);
    weakest_witness = std::max(weakest_witness, verdict.worst_margin);
    if (!(verdict.violated && verdict.worst_margin < -1e-6))
      return {false, fmt("no witness at p=%.4f, q=%.4f", p, q)};
  }
  return {true, fmt("clean below, weakest witness %.2e above",
                    weakest_witness)};
}

// --- criterion 4: operator-map convexity window q = 2, -1 <= p < 0, and
// explicit refutations outside it.

Outcome criterion4() {
  SplitRng rng = SplitRng(kSeed).split(4);
  double worst = 1e300;
  for (double p : {-1.0, -0.5, -0.1}) {
    const auto cls = regions::classify_operator_map(p, 2.0);
    if (cls.convexity.status != Status::proven_convex)
      return {false, "window point not classified convex"};
    for (Eigen::Index dim : {2, 3, 4}) {
      const auto verdict = probes::probe_operator_convexity(
          p, 2.0, probe_config(dim, 1000, rng.next_u64()), Direction::convex);
      worst = std::min(worst, verdict.worst_margin);
      if (verdict.violated || verdict.worst_margin < -1e-8)
        return {false, fmt("eigenvalue margin %.3e at p=%.2f",
                           verdict.worst_margin, p)};
    }
  }
  const auto refute_convex = probes::probe_operator_convexity(
      -1.0, 1.9, probe_config(2, 2000, rng.next_u64()), Direction::convex);
  const auto refute_concave = probes::probe_operator_convexity(
      0.5, 0.5, probe_config(2, 2000, rng.next_u64()), Direction::concave);
  if (!refute_convex.violated)
    return {false, "no convexity witness at (p,q) = (-1, 1.9)"};
  if (!refute_concave.violated)
    return {false, "no concavity witness at (p,q) = (0.5, 0.5)"};
  return {true, fmt("window clean (worst %+.2e), both witnesses found",
                    worst)};
}

// --- criterion 5: outer-product refutation margins against closed forms.

Outcome criterion5() {
  double worst_low = 0.0, worst_mid = 0.0, largest_mid_form = -1e300;
  for (int i = 0; i < 50; ++i) {
    const double r = -1.1 + static_cast<double>(i) * (1.58 / 49.0);
    const auto res = counterexamples::low_r_refutation(r, 1e-10);
    worst_low = std::max(
        worst_low,
        std::abs(res.margin - counterexamples::low_r_limit_margin(r)));
  }
  if (worst_low > 1e-8)
    return {false, fmt("limit margin drift %.3e exceeds 1e-8", worst_low)};
  for (int i = 0; i < 50; ++i) {
    const double r = (static_cast<double>(i) + 0.5) / 50.0;
    const auto res = counterexamples::mid_r_refutation(r);
    const double direct = scalar_named(res, "midpoint_pairing");
    const double closed = scalar_named(res, "closed_form");
    worst_mid = std::max(worst_mid, std::abs(direct - closed));
    largest_mid_form = std::max(largest_mid_form, closed);
  }
  if (worst_mid > 1e-10)
    return {false, fmt("closed-form drift %.3e exceeds 1e-10", worst_mid)};
  if (!(largest_mid_form < 0.0))
    return {false, "closed form not negative on (0,1)"};
  return {true, fmt("drifts %.2e (limit), %.2e (closed form)", worst_low,
                    worst_mid)};
}

// --- criterion 6: dilation limit per sign of q, plus exactness of the
// doubled-dimension embedding identity.

Outcome criterion6() {
  SplitRng rng = SplitRng(kSeed).split(6);
  double worst_gap = 0.0;
  for (double q : {-1.0, 1.0}) {
    std::vector<double> schedule;
    for (int e = 1; e <= 9; ++e)
      schedule.push_back(q < 0.0 ? std::pow(10.0, e) : std::pow(10.0, -e));
    for (int i = 0; i < 20; ++i) {
      SplitRng triple = rng.split(static_cast<std::uint64_t>(
          i + (q < 0.0 ? 0 : 100)));
      SplitRng rk = triple.split(0), ra = triple.split(1), rb = triple.split(2);
      const Matrix k = sample_contraction(rk, 2);
      const PsdMatrix a = sample_psd(ra, 2, 1e2);
      const PsdMatrix b = sample_psd(rb, 2, 1e2);
      const auto report = counterexamples::dilation_limit(
          k, a, b, ParamPoint(1.5, q, 2.0), schedule);
      worst_gap = std::max(worst_gap, report.final_rel_gap);
      if (report.final_rel_gap > 1e-6)
        return {false, fmt("relative gap %.3e at q=%.0f",
                           report.final_rel_gap, q)};
    }
  }
  const auto equiv = probes::probe_psi_equivalences(
      ParamPoint(1.5, -0.5, 1.2), probe_config(2, 200, rng.next_u64()));
  if (equiv.worst_embedding_residual > 1e-10)
    return {false, fmt("embedding residual %.3e exceeds 1e-10",
                       equiv.worst_embedding_residual)};
  return {true, fmt("worst gap %.2e, embedding residual %.2e", worst_gap,
                    equiv.worst_embedding_residual)};
}

// --- criterion 7: the closed-form certificate of the trace-power
// variational principle, and its optimality against random feasible Z.

Outcome criterion7() {
  SplitRng rng = SplitRng(kSeed).split(7);
  double worst_rel = 0.0, worst_beat = -1e300;
  for (VariationalMode mode :
       {VariationalMode::supremum, VariationalMode::infimum}) {
    const bool sup = mode == VariationalMode::supremum;
    for (int i = 0; i < 200; ++i) {
      const Eigen::Index dim = 2 + (i % 3);
      SplitRng rx = rng.split(static_cast<std::uint64_t>((sup ? 0 : 1000) + i));
      const PsdMatrix x = sample_psd(rx, dim, 1e3);
      const double s = sup ? 1.05 + 2.95 * rx.next_unit()
                           : 0.05 + 0.90 * rx.next_unit();
      const double direct = trace_power(x.hermitian(), s);
      const PsdMatrix zopt(mat_pow(x, s));
      const double cert = s * variational_objective(x, s, zopt);
      const double scale = std::max(1.0, std::abs(direct));
      worst_rel = std::max(worst_rel, std::abs(cert - direct) / scale);
      if (std::abs(cert - direct) > 1e-10 * scale)
        return {false, fmt("certificate off by %.3e at s=%.3f",
                           std::abs(cert - direct) / scale, s)};
      if (i < 50) {
        const PsdMatrix z = sample_psd(rx, dim, 1e3);
        const double attempt = s * variational_objective(x, s, z);
        const double beat =
            (sup ? attempt - cert : cert - attempt) / scale;
        worst_beat = std::max(worst_beat, beat);
        if (beat > 1e-10)
          return {false, fmt("feasible point beats certificate by %.3e",
                             beat)};
      }
    }
  }
  return {true, fmt("worst rel error %.2e, best challenger %+.2e", worst_rel,
                    worst_beat)};
}

// --- criterion 8: divergence monotonicity under random channels on the
// proven line z = alpha/2, with unitary channels exactly neutral.

Outcome criterion8() {
  SplitRng rng = SplitRng(kSeed).split(8);
  double worst_norm = 1e300, worst_unitary = 0.0;
  const auto unit_trace = [](const PsdMatrix& m) {
    return PsdMatrix(Matrix(m.mat() / m.trace()));
  };
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Index dim = 2 + (i % 3);
    SplitRng tr = rng.split(static_cast<std::uint64_t>(i));
    SplitRng rr = tr.split(0), rs = tr.split(1);
    const PsdMatrix rho = unit_trace(sample_psd(rr, dim, 1e2));
    const PsdMatrix sigma = unit_trace(sample_psd(rs, dim, 1e2));
    const auto ch = channels::random_channel(dim, dim, dim, tr.next_u64());
    for (double alpha : {1.1, 1.5, 2.0}) {
      const auto res = channels::dpi_check(rho, sigma, alpha, ch);
      worst_norm = std::min(worst_norm,
                            res.margin / (1.0 + std::abs(res.d_before)));
      if (res.violated())
        return {false, fmt("monotonicity violation %.3e at alpha=%.1f",
                           res.margin, alpha)};
    }
  }
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index dim = 2 + (i % 3);
    SplitRng tr = rng.split(static_cast<std::uint64_t>(5000 + i));
    SplitRng rr = tr.split(0), rs = tr.split(1), ru = tr.split(2);
    const PsdMatrix rho = unit_trace(sample_psd(rr, dim, 1e2));
    const PsdMatrix sigma = unit_trace(sample_psd(rs, dim, 1e2));
    const auto ch = channels::unitary_channel(sample_unitary(ru, dim));
    for (double alpha : {1.1, 1.5, 2.0}) {
      const auto res = channels::dpi_check(rho, sigma, alpha, ch);
      worst_unitary = std::max(worst_unitary, std::abs(res.margin));
      if (std::abs(res.margin) > 1e-9)
        return {false, fmt("unitary margin %.3e exceeds 1e-9", res.margin)};
    }
  }
  return {true, fmt("worst margin %+.2e, unitary residual %.2e", worst_norm,
                    worst_unitary)};
}

// --- criterion 9: triple form at q = 2 with p, r < 0 and p + r >= -1:
// convexity clean, concavity refuted at every tested exponent pair.

Outcome criterion9() {
  SplitRng rng = SplitRng(kSeed).split(9);
  const std::vector<std::pair<double, double>> pairs = {
      {-0.2, -0.3},  {-0.5, -0.5},   {-0.9, -0.05},
      {-0.1, -0.1},  {-0.7, -0.25},  {-0.45, -0.55}};
  double worst = 1e300;
  for (const auto& [p, r] : pairs) {
    const TripleParams prm(p, 2.0, r);
    const auto cls = regions::classify_triple(prm);
    if (cls.convexity.status != Status::proven_convex ||
        cls.concavity.status != Status::proven_not_concave)
      return {false, "triple classifier disagrees on a grid point"};
    for (Eigen::Index dim : {2, 3}) {
      const auto verdict = probes::probe_triple_convexity(
          prm, probe_config(dim, 1000, rng.next_u64()), Direction::convex);
      worst = std::min(worst, verdict.worst_margin);
      if (verdict.violated)
        return {false, fmt("convexity violation %.3e at p=%.2f",
                           verdict.worst_margin, p)};
    }
    const auto refute = probes::probe_triple_convexity(
        prm, probe_config(2, 1000, rng.next_u64()), Direction::concave);
    if (!refute.violated)
      return {false, fmt("no concavity witness at p=%.2f, r=%.2f", p, r)};
  }
  return {true, fmt("6 pairs: convexity clean (worst %+.2e), all refuted",
                    worst)};
}

// --- criterion 10: CLI determinism, byte-for-byte, across representative
// commands that write files.

struct CliRun {
  int exit_code = -1;
  std::string output;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(TRACELAB_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {};
  std::string out;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, std::move(out)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome criterion10() {
  const fs::path dir = fs::temp_directory_path() /
                       ("tracelab-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"scan-json", "scan --p 1,2 --q -0.5 --s 1,2 --dim 2 --trials 100"
                    " --seed 5 --out "},
      {"scan-csv", "scan --p 1:2:3 --q -0.5 --s 1 --dim 2 --trials 100"
                   " --seed 5 --format csv --out "},
      {"dpi", "dpi --alpha 1.5 --z 0.75 --dim 2 --trials 50 --seed 5 --out "},
      {"dilation", "counterexample dilation --p 1.5 --q -1 --s 2 --dim 2"
                   " --seed 5 --out "},
      {"probe", "probe --p 2 --q -0.5 --s 1 --dim 3 --trials 200 --seed 5"
                " --out "},
  };
  int compared = 0;
  for (const auto& [name, stem] : commands) {
    const fs::path first = dir / (name + "-a.json");
    const fs::path second = dir / (name + "-b.json");
    const CliRun ra = run_cli(stem + first.string());
    const CliRun rb = run_cli(stem + second.string());
    if (ra.exit_code != 0 || rb.exit_code != 0)
      return {false, name + " run failed: " + ra.output};
    if (slurp(first) != slurp(second))
      return {false, name + " reruns differ"};
    if (!fs::exists(fs::path(first.string() + ".manifest.json")))
      return {false, name + " produced no manifest"};
    ++compared;
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return {true, std::to_string(compared) + " commands byte-identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"random convex suite over p in [1,2], q in [-1,0)", criterion1},
      {"p = 2 grid down to the sharp threshold", criterion2},
      {"concavity box and past-boundary witnesses", criterion3},
      {"operator-map window and outside witnesses", criterion4},
      {"refutation margins match closed forms", criterion5},
      {"dilation limit and embedding identity", criterion6},
      {"variational certificate exact and unbeaten", criterion7},
      {"divergence monotone under random channels", criterion8},
      {"triple form convex, never concave", criterion9},
      {"CLI reruns byte-identical", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.ok) ++failures;
    std::printf("[%s] criterion %zu: %s (%s)\n", out.ok ? "PASS" : "FAIL",
                i + 1, criteria[i].first, out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
