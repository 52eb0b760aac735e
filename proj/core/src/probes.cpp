#include "tracelab/probes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace tcl::probes {
namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

using MarginFn = std::function<double(const Witness&)>;
using ContextFn = std::function<std::vector<Matrix>(SplitRng&)>;

// Midpoint margin of a trace-valued functional over matrix tuples:
// the signed convexity gap normalized by max(1, |values|).
double tuple_margin(
    const std::function<double(const std::vector<PsdMatrix>&)>& value,
    Direction dir, const Witness& w, std::size_t arity) {
  require(w.left.size() == arity && w.right.size() == arity,
          "witness arity mismatch");
  require(w.lambda > 0.0 && w.lambda < 1.0, "witness lambda must be in (0,1)");
  std::vector<PsdMatrix> left, right, mid;
  left.reserve(arity);
  right.reserve(arity);
  mid.reserve(arity);
  for (std::size_t i = 0; i < arity; ++i) {
    const HermitianMatrix hl(w.left[i]);
    const HermitianMatrix hr(w.right[i]);
    left.emplace_back(hl);
    right.emplace_back(hr);
    mid.emplace_back(combine(w.lambda, hl, 1.0 - w.lambda, hr));
  }
  const double vl = value(left);
  const double vr = value(right);
  const double vm = value(mid);
  const double scale =
      std::max({1.0, std::abs(vl), std::abs(vr), std::abs(vm)});
  const double gap = w.lambda * vl + (1.0 - w.lambda) * vr - vm;
  return (dir == Direction::convex ? gap : -gap) / scale;
}

// Deterministic coordinate descent sharpening the worst candidate: global
// log-scales, Hermitian entry nudges, and the mixing weight, with the step
// halved after sweeps without improvement. Moves that leave the feasible
// cone (psd constructor or power-domain failures) are rejected.
void refine_witness(Witness& w, const MarginFn& margin, int sweeps) {
  double current;
  try {
    current = margin(w);
  } catch (const std::exception&) {
    return;
  }
  double step = 0.1;
  const std::size_t total = w.left.size() + w.right.size();

  const auto try_move = [&](Witness& cand) {
    double m;
    try {
      m = margin(cand);
    } catch (const std::exception&) {
      return false;
    }
    if (!(m < current)) return false;
    current = m;
    w = cand;
    return true;
  };

  for (int sweep = 0; sweep < sweeps && step >= 1e-6; ++sweep) {
    bool improved = false;
    for (std::size_t mi = 0; mi < total; ++mi) {
      const auto slot = [mi](Witness& ww) -> Matrix& {
        return mi < ww.left.size() ? ww.left[mi]
                                   : ww.right[mi - ww.left.size()];
      };
      for (const double dir : {1.0, -1.0}) {
        Witness cand = w;
        slot(cand) *= std::exp(dir * step);
        improved |= try_move(cand);
      }
      const Eigen::Index n = slot(w).rows();
      const double delta = step * std::max(slot(w).norm(), 1e-6) /
                           static_cast<double>(std::max<Eigen::Index>(n, 1));
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
          const int comps = (i == j) ? 1 : 2;
          for (int comp = 0; comp < comps; ++comp) {
            for (const double dir : {1.0, -1.0}) {
              Witness cand = w;
              Matrix& m = slot(cand);
              const Complex dd = comp == 0 ? Complex(dir * delta, 0.0)
                                           : Complex(0.0, dir * delta);
              m(i, j) += dd;
              if (i != j) m(j, i) += std::conj(dd);
              improved |= try_move(cand);
            }
          }
        }
      }
    }
    for (const double dir : {1.0, -1.0}) {
      Witness cand = w;
      cand.lambda = std::clamp(cand.lambda + dir * 0.5 * step, 0.01, 0.99);
      if (cand.lambda != w.lambda) improved |= try_move(cand);
    }
    if (!improved) step *= 0.5;
  }
  w.margin = current;
}

ConvexityVerdict run_midpoint_probe(std::size_t arity, const ProbeConfig& cfg,
                                    SplitRng root, const MarginFn& margin,
                                    const ContextFn& context = {}) {
  ConvexityVerdict out;
  out.worst_margin = std::numeric_limits<double>::infinity();
  std::optional<Witness> best;

  for (int trial = 0; trial < cfg.trials; ++trial) {
    SplitRng trng = root.split(static_cast<std::uint64_t>(trial));
    Witness w;
    w.trial = trial;
    w.left.reserve(arity);
    w.right.reserve(arity);
    for (std::size_t i = 0; i < arity; ++i) {
      SplitRng ls = trng.split(i);
      w.left.push_back(sample_psd(ls, cfg.dim, cfg.cond_cap).mat());
    }
    for (std::size_t i = 0; i < arity; ++i) {
      SplitRng rs = trng.split(arity + i);
      w.right.push_back(sample_psd(rs, cfg.dim, cfg.cond_cap).mat());
    }
    if (context) {
      SplitRng ks = trng.split(2 * arity);
      w.context = context(ks);
    }
    for (const double lam : cfg.lambdas) {
      w.lambda = lam;
      const double m = margin(w);
      if (m < out.worst_margin) {
        out.worst_margin = m;
        w.margin = m;
        best = w;
      }
    }
    ++out.trials_run;
  }

  if (best && cfg.refine) {
    refine_witness(*best, margin, cfg.refine_sweeps);
    out.worst_margin = std::min(out.worst_margin, best->margin);
  }
  out.violated = out.worst_margin < -cfg.tol_rel;
  if (out.violated) out.witness = best;
  return out;
}

Matrix swap_unitary(Eigen::Index n) {
  Matrix k = Matrix::Zero(2 * n, 2 * n);
  k.topRightCorner(n, n) = Matrix::Identity(n, n);
  k.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  return k;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

ConvexityVerdict probe_psi_with_root(const Matrix& k, const ParamPoint& prm,
                                     const ProbeConfig& cfg, Direction dir,
                                     SplitRng root) {
  const bool is_id = k.isIdentity(0.0);
  MarginFn margin = [&k, prm, dir](const Witness& w) {
    return psi_margin(k, prm, dir, w);
  };
  ConvexityVerdict v = run_midpoint_probe(2, cfg, root, margin);
  if (!is_id && v.witness) v.witness->context = {k};
  return v;
}

RegionRow scan_row(std::uint64_t index, double p, double q, double s,
                   const ProbeConfig& cfg) {
  RegionRow row;
  row.index = index;
  row.p = p;
  row.q = q;
  row.s = s;
  try {
    const ParamPoint prm(p, q, s);
    row.convexity = regions::classify_convexity(prm);
    row.concavity = regions::classify_concavity(prm);
    const Matrix id = Matrix::Identity(cfg.dim, cfg.dim);
    SplitRng row_root = SplitRng(cfg.seed).split(index);
    row.convex_probe =
        probe_psi_with_root(id, prm, cfg, Direction::convex, row_root.split(0));
    row.concave_probe = probe_psi_with_root(id, prm, cfg, Direction::concave,
                                            row_root.split(1));
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

void ProbeConfig::validate() const {
  require(dim >= 1, "ProbeConfig: dim must be at least 1");
  require(trials >= 1, "ProbeConfig: trials must be at least 1");
  require(tol_rel > 0.0, "ProbeConfig: tol_rel must be positive");
  require(!lambdas.empty(), "ProbeConfig: lambdas must be nonempty");
  for (const double lam : lambdas)
    require(lam > 0.0 && lam < 1.0, "ProbeConfig: lambdas must lie in (0,1)");
  require(cond_cap > 1.0, "ProbeConfig: cond_cap must exceed 1");
  require(refine_sweeps >= 0, "ProbeConfig: refine_sweeps must be nonnegative");
}

double psi_margin(const Matrix& k, const ParamPoint& prm, Direction dir,
                  const Witness& w) {
  return tuple_margin(
      [&](const std::vector<PsdMatrix>& t) { return psi(k, t[0], t[1], prm); },
      dir, w, 2);
}

double trace_margin(const ParamPoint& prm, Direction dir, const Witness& w) {
  require(!w.left.empty(), "trace_margin: empty witness");
  const Matrix id = Matrix::Identity(w.left[0].rows(), w.left[0].rows());
  return psi_margin(id, prm, dir, w);
}

double operator_margin(double p, double q, Direction dir, const Witness& w) {
  require(w.left.size() == 2 && w.right.size() == 2,
          "operator_margin: witness must hold (A, B) pairs");
  require(w.lambda > 0.0 && w.lambda < 1.0, "witness lambda must be in (0,1)");
  const HermitianMatrix a1(w.left[0]), b1(w.left[1]);
  const HermitianMatrix a2(w.right[0]), b2(w.right[1]);
  const PsdMatrix al(a1), bl(b1), ar(a2), br(b2);
  const PsdMatrix am(combine(w.lambda, a1, 1.0 - w.lambda, a2));
  const PsdMatrix bm(combine(w.lambda, b1, 1.0 - w.lambda, b2));

  const HermitianMatrix ml = sandwich(al, bl, p, q);
  const HermitianMatrix mr = sandwich(ar, br, p, q);
  const HermitianMatrix mm = sandwich(am, bm, p, q);

  const HermitianMatrix gap = combine(
      1.0, combine(w.lambda, ml, 1.0 - w.lambda, mr), -1.0, mm);
  const HermitianMatrix oriented =
      dir == Direction::convex ? gap : combine(-1.0, gap, 0.0, gap);

  const double mn = eig(oriented).min_eigenvalue();
  const double scale = std::max({1.0, eig(ml).spectral_norm(),
                                 eig(mr).spectral_norm(),
                                 eig(mm).spectral_norm()});
  return mn / scale;
}

double triple_margin(const TripleParams& prm, Direction dir, const Witness& w) {
  return tuple_margin(
      [&](const std::vector<PsdMatrix>& t) {
        return triple_trace(t[0], t[1], t[2], prm);
      },
      dir, w, 3);
}

double epstein_margin(const PsdMatrix& d, double t, double u,
                      const Witness& w) {
  return tuple_margin(
      [&](const std::vector<PsdMatrix>& tup) {
        const Matrix at = mat_pow(tup[0], t).mat();
        return trace_power(HermitianMatrix(d.mat() * at * d.mat()), u);
      },
      Direction::concave, w, 1);
}

ConvexityVerdict probe_trace_convexity(const ParamPoint& prm,
                                       const ProbeConfig& cfg, Direction dir) {
  cfg.validate();
  const Matrix id = Matrix::Identity(cfg.dim, cfg.dim);
  return probe_psi_with_root(id, prm, cfg, dir, SplitRng(cfg.seed));
}

ConvexityVerdict probe_psi_convexity(const Matrix& k, const ParamPoint& prm,
                                     const ProbeConfig& cfg, Direction dir) {
  cfg.validate();
  require(k.rows() == cfg.dim && k.cols() == cfg.dim,
          "probe_psi_convexity: K must match cfg.dim");
  return probe_psi_with_root(k, prm, cfg, dir, SplitRng(cfg.seed));
}

ConvexityVerdict probe_operator_convexity(double p, double q,
                                          const ProbeConfig& cfg,
                                          Direction dir) {
  cfg.validate();
  require(p != 0.0 && q != 0.0, "probe_operator_convexity: p, q nonzero");
  MarginFn margin = [p, q, dir](const Witness& w) {
    return operator_margin(p, q, dir, w);
  };
  return run_midpoint_probe(2, cfg, SplitRng(cfg.seed), margin);
}

ConvexityVerdict probe_triple_convexity(const TripleParams& prm,
                                        const ProbeConfig& cfg, Direction dir) {
  cfg.validate();
  MarginFn margin = [prm, dir](const Witness& w) {
    return triple_margin(prm, dir, w);
  };
  return run_midpoint_probe(3, cfg, SplitRng(cfg.seed), margin);
}

ConvexityVerdict epstein_probe(const PsdMatrix& d, double t, double u,
                               const ProbeConfig& cfg) {
  cfg.validate();
  require(d.dim() == cfg.dim, "epstein_probe: D must match cfg.dim");
  require(t != 0.0 && u != 0.0, "epstein_probe: exponents must be nonzero");
  MarginFn margin = [&d, t, u](const Witness& w) {
    return epstein_margin(d, t, u, w);
  };
  return run_midpoint_probe(1, cfg, SplitRng(cfg.seed), margin);
}

PsiEquivalenceReport probe_psi_equivalences(const ParamPoint& prm,
                                            const ProbeConfig& cfg) {
  cfg.validate();
  PsiEquivalenceReport rep;
  const Eigen::Index n = cfg.dim;
  const Matrix id = Matrix::Identity(n, n);

  rep.base = probe_psi_with_root(id, prm, cfg, Direction::convex,
                                 SplitRng(cfg.seed));

  const ContextFn unitary_ctx = [n](SplitRng& rng) {
    return std::vector<Matrix>{sample_unitary(rng, n)};
  };
  MarginFn unitary_margin = [prm](const Witness& w) {
    require(!w.context.empty(), "unitary form needs its K in context");
    return psi_margin(w.context[0], prm, Direction::convex, w);
  };
  rep.unitary = run_midpoint_probe(2, cfg, SplitRng(cfg.seed), unitary_margin,
                                   unitary_ctx);

  const ContextFn contraction_ctx = [n](SplitRng& rng) {
    return std::vector<Matrix>{sample_contraction(rng, n)};
  };
  MarginFn contraction_margin = [prm](const Witness& w) {
    require(!w.context.empty(), "contraction form needs its K in context");
    return psi_margin(w.context[0], prm, Direction::convex, w);
  };
  rep.contraction = run_midpoint_probe(2, cfg, SplitRng(cfg.seed),
                                       contraction_margin, contraction_ctx);

  const Matrix swap = swap_unitary(n);
  MarginFn embedded_margin = [&swap, prm](const Witness& w) {
    return tuple_margin(
        [&](const std::vector<PsdMatrix>& t) {
          const Matrix d = block_diag(t[0].mat(), t[1].mat());
          const PsdMatrix dd(d);
          return psi(swap, dd, dd, prm);
        },
        Direction::convex, w, 2);
  };
  rep.embedded = run_midpoint_probe(2, cfg, SplitRng(cfg.seed), embedded_margin);

  // Exact transfer identities on the shared per-trial draws.
  SplitRng root(cfg.seed);
  for (int trial = 0; trial < cfg.trials; ++trial) {
    SplitRng trng = root.split(static_cast<std::uint64_t>(trial));
    SplitRng s0 = trng.split(0);
    SplitRng s1 = trng.split(1);
    const PsdMatrix a = sample_psd(s0, n, cfg.cond_cap);
    const PsdMatrix b = sample_psd(s1, n, cfg.cond_cap);
    SplitRng ks = trng.split(4);
    const Matrix u = sample_unitary(ks, n);

    const double lhs_u = psi(u, a, b, prm);
    const double rhs_u = phi(a, PsdMatrix(u.adjoint() * b.mat() * u), prm);
    const double res_u =
        std::abs(lhs_u - rhs_u) / std::max(1.0, std::abs(lhs_u));
    rep.worst_unitary_residual = std::max(rep.worst_unitary_residual, res_u);

    const PsdMatrix dd(block_diag(a.mat(), b.mat()));
    const double lhs_e = psi(swap, dd, dd, prm);
    const double rhs_e = phi(a, b, prm) + phi(b, a, prm);
    const double res_e =
        std::abs(lhs_e - rhs_e) / std::max(1.0, std::abs(lhs_e));
    rep.worst_embedding_residual =
        std::max(rep.worst_embedding_residual, res_e);
  }
  rep.trials_run = cfg.trials;
  rep.consistent = rep.worst_unitary_residual <= 1e-8 &&
                   rep.worst_embedding_residual <= 1e-8;
  return rep;
}

ScanSummary RegionReport::summary() const {
  ScanSummary s;
  s.points = static_cast<int>(rows.size());
  for (const RegionRow& row : rows) {
    if (!row.error.empty()) {
      ++s.errors;
      continue;
    }
    if (row.convex_probe.violated || row.concave_probe.violated) ++s.witnesses;
    if (row.convexity.status == regions::Status::proven_convex &&
        row.convex_probe.violated)
      ++s.proven_convex_violated;
    if (row.concavity.status == regions::Status::proven_concave &&
        row.concave_probe.violated)
      ++s.proven_concave_violated;
  }
  return s;
}

RegionReport region_scan(const GridSpec& grid, const ProbeConfig& cfg,
                         int workers) {
  cfg.validate();
  require(!grid.p.empty() && !grid.q.empty() && !grid.s.empty(),
          "region_scan: grid axes must be nonempty");

  RegionReport report;
  report.grid = grid;
  report.config = cfg;
  const std::size_t total = grid.size();
  report.rows.resize(total);

  int nw = workers > 0
               ? workers
               : static_cast<int>(std::thread::hardware_concurrency());
  nw = std::clamp<int>(nw, 1, static_cast<int>(total));

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) break;
      const std::size_t is = i % grid.s.size();
      const std::size_t iq = (i / grid.s.size()) % grid.q.size();
      const std::size_t ip = i / (grid.s.size() * grid.q.size());
      report.rows[i] = scan_row(static_cast<std::uint64_t>(i), grid.p[ip],
                                grid.q[iq], grid.s[is], cfg);
    }
  };

  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nw));
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return report;
}

}  // namespace tcl::probes
