#include "tracelab/channels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tracelab/linalg.hpp"

namespace tcl::channels {
namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

constexpr double kMixWeight = 1e-10;
constexpr double kTraceSlack = 1e-8;

PsdMatrix mix_toward_identity(const PsdMatrix& x) {
  const Eigen::Index n = x.dim();
  // The weight is raised to n times the inversion floor so the mixed state
  // is strictly positive even when x is pure (trace concentrates on one
  // eigenvalue, so the identity share per entry is trace/n).
  const double weight = std::max(
      kMixWeight, 2.0 * kStrictFloorFactor * static_cast<double>(n));
  Matrix m = (1.0 - weight) * x.mat();
  const double fill = weight * x.trace() / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) += fill;
  return PsdMatrix(m);
}

PsdMatrix random_state(SplitRng& rng, Eigen::Index dim, double cond_cap) {
  const PsdMatrix x = sample_psd(rng, dim, cond_cap);
  return PsdMatrix(x.mat() / x.trace());
}

}  // namespace

QuantumChannel::QuantumChannel(std::vector<Matrix> kraus)
    : kraus_(std::move(kraus)) {
  require(!kraus_.empty(), "QuantumChannel: need at least one Kraus operator");
  dim_out_ = kraus_.front().rows();
  dim_in_ = kraus_.front().cols();
  require(dim_in_ >= 1 && dim_out_ >= 1, "QuantumChannel: empty operators");
  for (const Matrix& k : kraus_)
    require(k.rows() == dim_out_ && k.cols() == dim_in_,
            "QuantumChannel: inconsistent Kraus dimensions");
  Matrix sum = Matrix::Zero(dim_in_, dim_in_);
  for (const Matrix& k : kraus_) sum += k.adjoint() * k;
  const double residual =
      (sum - Matrix::Identity(dim_in_, dim_in_)).norm() /
      std::sqrt(static_cast<double>(dim_in_));
  if (residual > 1e-10) {
    std::ostringstream msg;
    msg << "QuantumChannel: not trace preserving; completeness residual "
        << residual;
    throw std::invalid_argument(msg.str());
  }
}

QuantumChannel identity_channel(Eigen::Index dim) {
  return QuantumChannel({Matrix::Identity(dim, dim)});
}

QuantumChannel unitary_channel(const Matrix& u) {
  require(u.rows() == u.cols(), "unitary_channel: U must be square");
  return QuantumChannel({u});
}

QuantumChannel depolarizing_channel(Eigen::Index dim, double noise) {
  require(dim >= 1, "depolarizing_channel: dim must be at least 1");
  require(noise >= 0.0 && noise <= 1.0,
          "depolarizing_channel: noise must lie in [0,1]");
  // Kraus family: sqrt(1-noise) I plus sqrt(noise/dim) |i><j| over all i, j.
  std::vector<Matrix> kraus;
  kraus.push_back(std::sqrt(1.0 - noise) * Matrix::Identity(dim, dim));
  const double w = std::sqrt(noise / static_cast<double>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      Matrix e = Matrix::Zero(dim, dim);
      e(i, j) = w;
      kraus.push_back(e);
    }
  }
  return QuantumChannel(std::move(kraus));
}

QuantumChannel random_channel(Eigen::Index dim_in, Eigen::Index dim_out,
                              Eigen::Index env_dim, std::uint64_t seed) {
  require(dim_in >= 1 && dim_out >= 1 && env_dim >= 1,
          "random_channel: dimensions must be positive");
  require(dim_out * env_dim >= dim_in,
          "random_channel: dim_out * env_dim must be at least dim_in");
  SplitRng rng(seed);
  const Eigen::Index big = dim_out * env_dim;
  const Matrix g = sample_gaussian(rng, big, dim_in);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix v = qr.householderQ() * Matrix::Identity(big, dim_in);
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim_in; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) v.col(j) *= d / mag;
  }
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(env_dim));
  for (Eigen::Index e = 0; e < env_dim; ++e)
    kraus.push_back(v.block(e * dim_out, 0, dim_out, dim_in));
  return QuantumChannel(std::move(kraus));
}

PsdMatrix apply(const QuantumChannel& ch, const PsdMatrix& rho) {
  require(rho.dim() == ch.dim_in(), "apply: state dimension mismatch");
  Matrix out = Matrix::Zero(ch.dim_out(), ch.dim_out());
  for (const Matrix& k : ch.kraus()) out += k * rho.mat() * k.adjoint();
  return PsdMatrix(out);
}

DpiResult dpi_margin(const PsdMatrix& rho, const PsdMatrix& sigma,
                     double alpha, double z, const QuantumChannel& ch) {
  DpiResult res;
  res.alpha = alpha;
  res.z = z;
  res.d_before = renyi_alpha_z(mix_toward_identity(rho),
                               mix_toward_identity(sigma), alpha, z);
  res.d_after = renyi_alpha_z(mix_toward_identity(apply(ch, rho)),
                              mix_toward_identity(apply(ch, sigma)), alpha, z);
  res.margin = res.d_before - res.d_after;
  res.tolerance = 1e-8 * (1.0 + std::abs(res.d_before));
  return res;
}

DpiResult dpi_check(const PsdMatrix& rho, const PsdMatrix& sigma, double alpha,
                    const QuantumChannel& ch) {
  require(alpha > 1.0 && alpha <= 2.0,
          "dpi_check: alpha must lie in (1, 2]");
  require(alpha - 1.0 >= kRenyiAlphaGuard,
          "dpi_check: alpha inside the guard band around 1");
  require(std::abs(rho.trace() - 1.0) <= kTraceSlack &&
              std::abs(sigma.trace() - 1.0) <= kTraceSlack,
          "dpi_check: states must have unit trace");
  return dpi_margin(rho, sigma, alpha, alpha / 2.0, ch);
}

std::string_view proven_monotone_tag(double alpha, double z) {
  constexpr double tol = 1e-9;
  if (alpha > 1.0 + tol && alpha <= 2.0 + tol &&
      std::abs(z - alpha / 2.0) <= tol)
    return "dpi:half-z";
  if (alpha > tol && alpha < 1.0 - tol &&
      z >= std::max(alpha, 1.0 - alpha) - tol)
    return "dpi:small-alpha";
  if (alpha >= 1.0 - tol && alpha <= 2.0 + tol && std::abs(z - 1.0) <= tol)
    return "dpi:z1";
  if (alpha >= 1.0 - tol && std::abs(z - alpha) <= tol) return "dpi:z-alpha";
  return {};
}

void DpiScanConfig::validate() const {
  require(dim >= 2, "DpiScanConfig: dim must be at least 2");
  require(env_dim >= 1, "DpiScanConfig: env_dim must be at least 1");
  require(trials >= 1, "DpiScanConfig: trials must be at least 1");
  require(cond_cap > 1.0, "DpiScanConfig: cond_cap must exceed 1");
}

int DpiReport::proven_violations() const {
  int count = 0;
  for (const DpiRow& row : rows)
    if (row.error.empty() && row.proven_region) count += row.violations;
  return count;
}

namespace {

DpiRow dpi_scan_row(std::uint64_t index, double alpha, double z,
                    const DpiScanConfig& cfg) {
  DpiRow row;
  row.alpha = alpha;
  row.z = z;
  const std::string_view tag = proven_monotone_tag(alpha, z);
  row.proven_region = !tag.empty();
  row.region_tag = std::string(tag);
  row.worst_margin = std::numeric_limits<double>::infinity();
  try {
    require(alpha > 0.0, "dpi_scan: alpha must be positive");
    require(std::abs(alpha - 1.0) >= kRenyiAlphaGuard,
            "dpi_scan: alpha inside the guard band around 1");
    require(z > 0.0, "dpi_scan: z must be positive");
    SplitRng row_root = SplitRng(cfg.seed).split(index);
    for (int trial = 0; trial < cfg.trials; ++trial) {
      SplitRng trng = row_root.split(static_cast<std::uint64_t>(trial));
      SplitRng rrho = trng.split(0);
      SplitRng rsig = trng.split(1);
      SplitRng rch = trng.split(2);
      const PsdMatrix rho = random_state(rrho, cfg.dim, cfg.cond_cap);
      const PsdMatrix sigma = random_state(rsig, cfg.dim, cfg.cond_cap);
      const QuantumChannel ch =
          random_channel(cfg.dim, cfg.dim, cfg.env_dim, rch.next_u64());
      const DpiResult res = dpi_margin(rho, sigma, alpha, z, ch);
      const double normalized = res.margin / (1.0 + std::abs(res.d_before));
      row.worst_margin = std::min(row.worst_margin, normalized);
      if (res.violated()) ++row.violations;
      ++row.trials;
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

DpiReport dpi_scan(const std::vector<double>& alphas,
                   const std::vector<double>& zs, const DpiScanConfig& cfg,
                   int workers) {
  cfg.validate();
  require(!alphas.empty() && !zs.empty(), "dpi_scan: empty parameter grid");

  DpiReport report;
  report.config = cfg;
  const std::size_t total = alphas.size() * zs.size();
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
      const std::size_t iz = i % zs.size();
      const std::size_t ia = i / zs.size();
      report.rows[i] = dpi_scan_row(static_cast<std::uint64_t>(i), alphas[ia],
                                    zs[iz], cfg);
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

}  // namespace tcl::channels
