// tracelab: command-line frontend for the trace-functional laboratory.
// Subcommands: classify, scan, probe, counterexample, variational, dpi.
// Exit codes: 0 success, 1 violation inside a proven region, 2 usage,
// 3 I/O failure.

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tracelab/channels.hpp"
#include "tracelab/counterexamples.hpp"
#include "tracelab/functionals.hpp"
#include "tracelab/probes.hpp"
#include "tracelab/rational.hpp"
#include "tracelab/regions.hpp"
#include "tracelab/rng.hpp"
#include "tracelab/serialize.hpp"

#ifndef TRACELAB_VERSION
#define TRACELAB_VERSION "0.0.0"
#endif

namespace {

using namespace tcl;
namespace io = tcl::io;
namespace cex = tcl::counterexamples;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct GlobalOpts {
  std::uint64_t seed = 0;
  long long dim = 3;
  long long trials = 1000;
  double tol = 1e-8;
  std::string out;
  std::string format = "json";
  long long workers = 0;
  double cond_cap = 1e3;
};

int usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return kExitUsage;
}

// Axis syntax: "a,b,c" (values) or "lo:hi:count" (inclusive linear range).
std::vector<double> parse_axis(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const std::size_t c1 = text.find(':');
    const std::size_t c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos)
      throw std::invalid_argument("range must be lo:hi:count: " + text);
    const double lo = io::parse_hex_or_decimal(text.substr(0, c1));
    const double hi = io::parse_hex_or_decimal(text.substr(c1 + 1, c2 - c1 - 1));
    long long count = 0;
    try {
      count = std::stoll(text.substr(c2 + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("range count must be an integer: " + text);
    }
    if (count < 1) throw std::invalid_argument("range count must be >= 1");
    if (count == 1) {
      out.push_back(lo);
      return out;
    }
    for (long long i = 0; i < count; ++i)
      out.push_back(lo + (hi - lo) * static_cast<double>(i) /
                             static_cast<double>(count - 1));
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item =
        text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    out.push_back(io::parse_hex_or_decimal(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty axis");
  return out;
}

std::string iso_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f.good()) return false;
  f << content;
  f.flush();
  return f.good();
}

std::string manifest_json(const std::string& command,
                          const std::vector<std::string>& argv,
                          std::uint64_t seed,
                          const std::vector<std::string>& outputs) {
  io::JsonValue root = io::JsonValue::object();
  root.set("schema", io::JsonValue::str("tracelab-manifest-v1"));
  root.set("command", io::JsonValue::str(command));
  io::JsonValue args = io::JsonValue::array();
  for (const std::string& a : argv) args.push(io::JsonValue::str(a));
  root.set("argv", std::move(args));
  root.set("seed", io::JsonValue::integer(static_cast<std::int64_t>(seed)));
  root.set("version", io::JsonValue::str(TRACELAB_VERSION));
  root.set("timestamp", io::JsonValue::str(iso_utc_now()));
  io::JsonValue outs = io::JsonValue::array();
  for (const std::string& o : outputs) outs.push(io::JsonValue::str(o));
  root.set("outputs", std::move(outs));
  return root.dump();
}

// Report delivery: stdout when --out is absent, otherwise the file plus a
// manifest. The manifest carries the timestamp so the data file itself stays
// byte-stable under reruns with identical parameters.
int emit_report(const GlobalOpts& g, const std::string& command,
                const std::vector<std::string>& argv,
                const std::string& content) {
  if (g.out.empty()) {
    std::cout << content;
    return kExitOk;
  }
  if (!write_text_file(g.out, content)) {
    std::cerr << "error: cannot write " << g.out << "\n";
    return kExitIo;
  }
  const std::string mpath = g.out + ".manifest.json";
  if (!write_text_file(mpath, manifest_json(command, argv, g.seed, {g.out}))) {
    std::cerr << "error: cannot write " << mpath << "\n";
    return kExitIo;
  }
  return kExitOk;
}

probes::ProbeConfig make_probe_config(const GlobalOpts& g,
                                      const std::string& lambdas,
                                      bool refine) {
  probes::ProbeConfig cfg;
  cfg.dim = static_cast<int>(g.dim);
  cfg.trials = static_cast<int>(g.trials);
  cfg.seed = g.seed;
  cfg.tol_rel = g.tol;
  cfg.cond_cap = g.cond_cap;
  cfg.refine = refine;
  if (!lambdas.empty()) cfg.lambdas = parse_axis(lambdas);
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// classify

int run_classify(const GlobalOpts& g, const std::vector<std::string>& argv,
                 const std::string& p_text, const std::string& q_text,
                 const std::string& s_text) {
  const std::optional<Rational> pr = Rational::parse(p_text);
  const std::optional<Rational> qr = Rational::parse(q_text);
  const std::optional<Rational> sr = Rational::parse(s_text);
  const bool exact = pr && qr && sr;

  regions::RegionVerdict cvx;
  regions::RegionVerdict ccv;
  double pv = 0.0, qv = 0.0, sv = 0.0;
  if (exact) {
    if (pr->num == 0 || qr->num == 0)
      return usage_error("p and q must be nonzero");
    if (sr->num <= 0) return usage_error("s must be positive");
    cvx = regions::classify_convexity(*pr, *qr, *sr);
    ccv = regions::classify_concavity(*pr, *qr, *sr);
    pv = pr->to_double();
    qv = qr->to_double();
    sv = sr->to_double();
  } else {
    try {
      pv = io::parse_hex_or_decimal(p_text);
      qv = io::parse_hex_or_decimal(q_text);
      sv = io::parse_hex_or_decimal(s_text);
    } catch (const std::invalid_argument&) {
      return usage_error("exponents must be decimals or rationals like 2/3");
    }
    ParamPoint prm(pv, qv, sv);  // throws invalid_argument on bad domain
    cvx = regions::classify_convexity(prm);
    ccv = regions::classify_concavity(prm);
  }

  io::JsonValue root = io::JsonValue::object();
  root.set("schema", io::JsonValue::str("tracelab-classify-v1"));
  root.set("p", io::JsonValue::str(p_text));
  root.set("q", io::JsonValue::str(q_text));
  root.set("s", io::JsonValue::str(s_text));
  root.set("exact", io::JsonValue::boolean(exact));
  root.set("p_value", io::JsonValue::num(pv));
  root.set("q_value", io::JsonValue::num(qv));
  root.set("s_value", io::JsonValue::num(sv));
  root.set("convexity", io::region_verdict_json(cvx));
  root.set("concavity", io::region_verdict_json(ccv));
  return emit_report(g, "classify", argv, root.dump());
}

// ---------------------------------------------------------------------------
// scan

int run_scan(const GlobalOpts& g, const std::vector<std::string>& argv,
             const std::string& p_axis, const std::string& q_axis,
             const std::string& s_axis, const std::string& lambdas,
             bool refine) {
  probes::GridSpec grid;
  grid.p = parse_axis(p_axis);
  grid.q = parse_axis(q_axis);
  grid.s = parse_axis(s_axis);
  const probes::ProbeConfig cfg = make_probe_config(g, lambdas, refine);
  const probes::RegionReport report =
      probes::region_scan(grid, cfg, static_cast<int>(g.workers));
  const probes::ScanSummary sum = report.summary();

  const std::string content = g.format == "csv"
                                  ? io::region_report_csv(report)
                                  : io::region_report_json(report);
  const int rc = emit_report(g, "scan", argv, content);
  if (rc != kExitOk) return rc;
  std::ostream& line = g.out.empty() ? std::cerr : std::cout;
  line << "scan: points=" << sum.points
       << " proven_convex_violated=" << sum.proven_convex_violated
       << " proven_concave_violated=" << sum.proven_concave_violated
       << " witnesses=" << sum.witnesses << " errors=" << sum.errors << "\n";
  if (sum.proven_convex_violated + sum.proven_concave_violated > 0)
    return kExitViolation;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// probe

int run_probe(const GlobalOpts& g, const std::vector<std::string>& argv,
              const std::string& form, const std::string& direction,
              double p, double q, double s, bool has_s, double r, bool has_r,
              const std::string& k_mode, const std::string& lambdas,
              bool refine) {
  const bool convex = direction == "convex";
  const probes::Direction dir =
      convex ? probes::Direction::convex : probes::Direction::concave;
  const probes::ProbeConfig cfg = make_probe_config(g, lambdas, refine);

  probes::ConvexityVerdict verdict;
  regions::RegionVerdict region;
  io::JsonValue root = io::JsonValue::object();
  root.set("schema", io::JsonValue::str("tracelab-probe-v1"));
  root.set("form", io::JsonValue::str(form));
  root.set("direction", io::JsonValue::str(direction));
  root.set("p", io::JsonValue::num(p));
  root.set("q", io::JsonValue::num(q));

  if (form == "trace" || form == "psi") {
    if (!has_s) return usage_error("--s is required for form " + form);
    const ParamPoint prm(p, q, s);
    root.set("s", io::JsonValue::num(s));
    region = convex ? regions::classify_convexity(prm)
                    : regions::classify_concavity(prm);
    if (form == "trace") {
      verdict = probes::probe_trace_convexity(prm, cfg, dir);
    } else {
      Matrix k;
      if (k_mode == "identity") {
        k = HermitianMatrix::identity(cfg.dim).mat();
      } else {
        // A stream index far outside the per-trial range keeps the
        // deformation draw independent of every trial stream.
        SplitRng kr = SplitRng(cfg.seed).split(~std::uint64_t{0});
        k = k_mode == "unitary" ? sample_unitary(kr, cfg.dim)
                                : sample_contraction(kr, cfg.dim);
      }
      verdict = probes::probe_psi_convexity(k, prm, cfg, dir);
    }
  } else if (form == "operator") {
    const regions::MapVerdicts mv = regions::classify_operator_map(p, q);
    region = convex ? mv.convexity : mv.concavity;
    verdict = probes::probe_operator_convexity(p, q, cfg, dir);
  } else if (form == "triple") {
    if (!has_r) return usage_error("--r is required for form triple");
    const TripleParams prm(p, q, r);
    root.set("r", io::JsonValue::num(r));
    const regions::TripleVerdicts tv = regions::classify_triple(prm);
    region = convex ? tv.convexity : tv.concavity;
    verdict = probes::probe_triple_convexity(prm, cfg, dir);
  } else {
    return usage_error("unknown form: " + form);
  }

  root.set("region", io::region_verdict_json(region));
  root.set("verdict", io::verdict_json(verdict));
  const int rc = emit_report(g, "probe", argv, root.dump());
  if (rc != kExitOk) return rc;

  const bool proven =
      convex ? region.status == regions::Status::proven_convex
             : region.status == regions::Status::proven_concave;
  if (proven && verdict.violated) return kExitViolation;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// counterexample

std::vector<double> default_dilation_schedule(double q) {
  std::vector<double> out;
  for (int i = 1; i <= 8; ++i)
    out.push_back(q < 0 ? std::pow(10.0, i) : std::pow(10.0, -i));
  return out;
}

int run_counterexample(const GlobalOpts& g, const std::vector<std::string>& argv,
                       const std::string& name, double r, bool has_r, double t,
                       double p, bool has_p, double q, bool has_q, double s,
                       bool has_s, double scale, const std::string& schedule,
                       const std::string& k_mode) {
  if (name == "lemma33-neg") {
    if (!has_r) return usage_error("lemma33-neg requires --r");
    const cex::CounterexampleResult res = cex::low_r_refutation(r, t);
    return emit_report(g, "counterexample", argv,
                       io::counterexample_json("lemma33-neg", res));
  }
  if (name == "lemma33-mid") {
    if (!has_r) return usage_error("lemma33-mid requires --r");
    const cex::CounterexampleResult res = cex::mid_r_refutation(r);
    return emit_report(g, "counterexample", argv,
                       io::counterexample_json("lemma33-mid", res));
  }
  if (name == "homogeneity") {
    if (!has_p || !has_q) return usage_error("homogeneity requires --p and --q");
    const cex::CounterexampleResult res = cex::homogeneity_refutation(
        p, q, scale, static_cast<int>(g.dim), g.seed);
    return emit_report(g, "counterexample", argv,
                       io::counterexample_json("homogeneity", res));
  }
  if (name == "dilation") {
    if (!has_p || !has_q || !has_s)
      return usage_error("dilation requires --p, --q, and --s");
    const ParamPoint prm(p, q, s);
    const std::vector<double> sched =
        schedule.empty() ? default_dilation_schedule(q) : parse_axis(schedule);
    const int dim = static_cast<int>(g.dim);
    SplitRng root(g.seed);
    SplitRng kr = root.split(0);
    SplitRng ar = root.split(1);
    SplitRng br = root.split(2);
    Matrix k;
    if (k_mode == "identity")
      k = HermitianMatrix::identity(dim).mat();
    else if (k_mode == "unitary")
      k = sample_unitary(kr, dim);
    else
      k = sample_contraction(kr, dim);
    const PsdMatrix a = sample_psd(ar, dim, g.cond_cap);
    const PsdMatrix b = sample_psd(br, dim, g.cond_cap);
    const cex::DilationReport rep = cex::dilation_limit(k, a, b, prm, sched);
    const int rc = emit_report(g, "counterexample", argv,
                               io::dilation_report_json(rep));
    if (rc != kExitOk) return rc;
    // Human-readable convergence table on the side channel.
    std::ostream& tab = g.out.empty() ? std::cerr : std::cout;
    tab << "dilation: target=" << io::format_double(rep.target)
        << " rescale=" << io::format_double(rep.rescale_factor) << "\n";
    for (const cex::DilationStep& st : rep.steps)
      tab << "  t=" << io::format_double(st.t)
          << " value=" << io::format_double(st.value)
          << " rel_gap=" << io::format_double(st.rel_gap) << "\n";
    return kExitOk;
  }
  return usage_error(
      "unknown counterexample: " + name +
      " (valid: lemma33-neg, lemma33-mid, homogeneity, dilation)");
}

// ---------------------------------------------------------------------------
// variational

int run_variational(const GlobalOpts& g, const std::vector<std::string>& argv,
                    double s, const std::string& mode_text, long long steps) {
  VariationalMode mode;
  if (mode_text == "sup") {
    mode = VariationalMode::supremum;
  } else if (mode_text == "inf") {
    mode = VariationalMode::infimum;
  } else if (s > 1.0) {
    mode = VariationalMode::supremum;
  } else if (s > 0.0 && s < 1.0) {
    mode = VariationalMode::infimum;
  } else {
    return usage_error("s must lie in (0,1) or (1,inf) for the variational "
                       "formula");
  }

  RandomSpec spec;
  spec.seed = g.seed;
  spec.dim = static_cast<int>(g.dim);
  spec.cond_cap = g.cond_cap;
  const PsdMatrix x = random_psd(spec);
  const VariationalResult res =
      trace_power_variational(x, s, mode, static_cast<int>(steps));
  const double direct = trace_power(x.hermitian(), s);
  const double denom = std::max(1.0, std::abs(direct));

  io::JsonValue root = io::JsonValue::object();
  root.set("schema", io::JsonValue::str("tracelab-variational-v1"));
  root.set("s", io::JsonValue::num(s));
  root.set("mode", io::JsonValue::str(
                       mode == VariationalMode::supremum ? "sup" : "inf"));
  root.set("dim", io::JsonValue::integer(g.dim));
  root.set("seed", io::JsonValue::integer(static_cast<std::int64_t>(g.seed)));
  root.set("direct", io::JsonValue::num(direct));
  root.set("certificate", io::JsonValue::num(res.certificate));
  root.set("value", io::JsonValue::num(res.value));
  root.set("certificate_rel_error",
           io::JsonValue::num(std::abs(res.certificate - direct) / denom));
  root.set("value_rel_error",
           io::JsonValue::num(std::abs(res.value - direct) / denom));
  root.set("steps_run", io::JsonValue::integer(res.steps_run));
  return emit_report(g, "variational", argv, root.dump());
}

// ---------------------------------------------------------------------------
// dpi

int run_dpi(const GlobalOpts& g, const std::vector<std::string>& argv,
            const std::string& alpha_axis, const std::string& z_axis,
            long long env_dim) {
  const std::vector<double> alphas = parse_axis(alpha_axis);
  const std::vector<double> zs = parse_axis(z_axis);
  channels::DpiScanConfig cfg;
  cfg.dim = static_cast<int>(g.dim);
  cfg.env_dim = static_cast<int>(env_dim);
  cfg.trials = static_cast<int>(g.trials);
  cfg.seed = g.seed;
  cfg.cond_cap = g.cond_cap;
  cfg.validate();
  const channels::DpiReport report =
      channels::dpi_scan(alphas, zs, cfg, static_cast<int>(g.workers));

  const std::string content = g.format == "csv"
                                  ? io::dpi_report_csv(report)
                                  : io::dpi_report_json(report);
  const int rc = emit_report(g, "dpi", argv, content);
  if (rc != kExitOk) return rc;
  std::ostream& line = g.out.empty() ? std::cerr : std::cout;
  line << "dpi: rows=" << report.rows.size()
       << " proven_violations=" << report.proven_violations() << "\n";
  if (report.proven_violations() > 0) return kExitViolation;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOpts g;
  CLI::App app{"tracelab: numerical laboratory for trace functionals of "
               "matrix pairs, operator maps, and quantum divergences"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(TRACELAB_VERSION));
  app.add_option("--seed", g.seed, "RNG seed (TCL_SEED overrides)");
  app.add_option("--dim", g.dim, "matrix dimension")->check(CLI::Range(1, 64));
  app.add_option("--trials", g.trials, "sampling trials");
  app.add_option("--tol", g.tol, "relative violation tolerance");
  app.add_option("--out", g.out, "output file (stdout when absent)");
  app.add_option("--format", g.format, "report format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", g.workers, "worker threads (0 = hardware)");
  app.add_option("--cond-cap", g.cond_cap, "condition-number cap for draws");

  std::string p_text, q_text, s_text;
  CLI::App* classify =
      app.add_subcommand("classify", "exact region classification");
  classify->fallthrough();
  classify->add_option("--p", p_text, "exponent p (decimal or a/b)")->required();
  classify->add_option("--q", q_text, "exponent q (decimal or a/b)")->required();
  classify->add_option("--s", s_text, "outer exponent s (decimal or a/b)")
      ->required();

  std::string scan_p, scan_q, scan_s, scan_lambdas;
  bool scan_no_refine = false;
  CLI::App* scan = app.add_subcommand(
      "scan", "probe a parameter grid against the proven region map");
  scan->fallthrough();
  scan->add_option("--p", scan_p, "p axis: list a,b,c or range lo:hi:count")
      ->required();
  scan->add_option("--q", scan_q, "q axis")->required();
  scan->add_option("--s", scan_s, "s axis")->required();
  scan->add_option("--lambdas", scan_lambdas, "mixing weights (default 1/4,1/2,3/4)");
  scan->add_flag("--no-refine", scan_no_refine, "disable witness refinement");

  std::string probe_form = "trace", probe_dir = "convex",
              probe_kmode = "unitary", probe_lambdas;
  double probe_p = 0, probe_q = 0, probe_s = 0, probe_r = 0;
  bool probe_no_refine = false;
  CLI::App* probe =
      app.add_subcommand("probe", "randomized convexity probe at one point");
  probe->fallthrough();
  probe->add_option("--p", probe_p, "exponent p")->required();
  probe->add_option("--q", probe_q, "exponent q")->required();
  CLI::Option* probe_s_opt = probe->add_option("--s", probe_s, "outer exponent s");
  CLI::Option* probe_r_opt =
      probe->add_option("--r", probe_r, "third exponent (triple form)");
  probe->add_option("--form", probe_form, "functional form")
      ->check(CLI::IsMember({"trace", "psi", "operator", "triple"}));
  probe->add_option("--direction", probe_dir, "probe direction")
      ->check(CLI::IsMember({"convex", "concave"}));
  probe->add_option("--k-mode", probe_kmode, "deformation for form psi")
      ->check(CLI::IsMember({"identity", "unitary", "contraction"}));
  probe->add_option("--lambdas", probe_lambdas, "mixing weights");
  probe->add_flag("--no-refine", probe_no_refine, "disable witness refinement");

  std::string cex_name, cex_schedule, cex_kmode = "contraction";
  double cex_r = 0, cex_t = 1e-6, cex_p = 0, cex_q = 0, cex_s = 0,
         cex_scale = 1e-2;
  CLI::App* cex_cmd = app.add_subcommand(
      "counterexample", "named boundary refutations and limit constructions");
  cex_cmd->fallthrough();
  cex_cmd->add_option("name", cex_name,
                      "lemma33-neg | lemma33-mid | homogeneity | dilation")
      ->required();
  CLI::Option* cex_r_opt = cex_cmd->add_option("--r", cex_r, "exponent r");
  cex_cmd->add_option("--t", cex_t, "scale parameter t (lemma33-neg)");
  CLI::Option* cex_p_opt = cex_cmd->add_option("--p", cex_p, "exponent p");
  CLI::Option* cex_q_opt = cex_cmd->add_option("--q", cex_q, "exponent q");
  CLI::Option* cex_s_opt = cex_cmd->add_option("--s", cex_s, "outer exponent s");
  cex_cmd->add_option("--scale", cex_scale, "probe scale (homogeneity)");
  cex_cmd->add_option("--schedule", cex_schedule,
                      "dilation t schedule, list or lo:hi:count");
  cex_cmd->add_option("--k-mode", cex_kmode, "dilation contraction source")
      ->check(CLI::IsMember({"identity", "unitary", "contraction"}));

  double var_s = 0;
  long long var_steps = 400;
  std::string var_mode = "auto";
  CLI::App* variational = app.add_subcommand(
      "variational", "certificate check for the trace-power variational formula");
  variational->fallthrough();
  variational->add_option("--s", var_s, "trace power s")->required();
  variational->add_option("--mode", var_mode, "sup | inf | auto")
      ->check(CLI::IsMember({"auto", "sup", "inf"}));
  variational->add_option("--steps", var_steps, "optimizer steps")
      ->check(CLI::Range(1LL, 1000000LL));

  std::string dpi_alpha, dpi_z;
  long long dpi_env_dim = 3;
  CLI::App* dpi = app.add_subcommand(
      "dpi", "data-processing monotonicity scan for alpha-z divergences");
  dpi->fallthrough();
  dpi->add_option("--alpha", dpi_alpha, "alpha axis: list or lo:hi:count")
      ->required();
  dpi->add_option("--z", dpi_z, "z axis: list or lo:hi:count")->required();
  dpi->add_option("--env-dim", dpi_env_dim, "channel environment dimension")
      ->check(CLI::Range(1LL, 16LL));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (const char* env = std::getenv("TCL_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      return usage_error("TCL_SEED must be an unsigned integer");
    g.seed = static_cast<std::uint64_t>(v);
  }

  const std::vector<std::string> argv_echo(argv + 1, argv + argc);
  try {
    if (*classify) return run_classify(g, argv_echo, p_text, q_text, s_text);
    if (*scan)
      return run_scan(g, argv_echo, scan_p, scan_q, scan_s, scan_lambdas,
                      !scan_no_refine);
    if (*probe)
      return run_probe(g, argv_echo, probe_form, probe_dir, probe_p, probe_q,
                       probe_s, probe_s_opt->count() > 0, probe_r,
                       probe_r_opt->count() > 0, probe_kmode, probe_lambdas,
                       !probe_no_refine);
    if (*cex_cmd)
      return run_counterexample(g, argv_echo, cex_name, cex_r,
                                cex_r_opt->count() > 0, cex_t, cex_p,
                                cex_p_opt->count() > 0, cex_q,
                                cex_q_opt->count() > 0, cex_s,
                                cex_s_opt->count() > 0, cex_scale,
                                cex_schedule, cex_kmode);
    if (*variational)
      return run_variational(g, argv_echo, var_s, var_mode, var_steps);
    if (*dpi) return run_dpi(g, argv_echo, dpi_alpha, dpi_z, dpi_env_dim);
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what());
  } catch (const std::domain_error& e) {
    return usage_error(e.what());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return usage_error("no subcommand selected");
}
