#pragma once

#include <string>
#include <vector>

#include "tracelab/functionals.hpp"
#include "tracelab/rng.hpp"

namespace tcl::channels {

// Completely positive trace-preserving map in Kraus form. The constructor
// verifies sum_e K_e^* K_e = I to 1e-10 (relative to the identity).
class QuantumChannel {
 public:
  explicit QuantumChannel(std::vector<Matrix> kraus);

  [[nodiscard]] Eigen::Index dim_in() const { return dim_in_; }
  [[nodiscard]] Eigen::Index dim_out() const { return dim_out_; }
  [[nodiscard]] const std::vector<Matrix>& kraus() const { return kraus_; }

 private:
  std::vector<Matrix> kraus_;
  Eigen::Index dim_in_ = 0;
  Eigen::Index dim_out_ = 0;
};

QuantumChannel identity_channel(Eigen::Index dim);
QuantumChannel unitary_channel(const Matrix& u);
// Mixes toward the maximally mixed state with weight noise in [0, 1].
QuantumChannel depolarizing_channel(Eigen::Index dim, double noise);

// Haar-random channel: a random isometry V from dim_in into
// dim_out x env_dim is sliced into env_dim Kraus operators. Requires
// dim_out * env_dim >= dim_in.
QuantumChannel random_channel(Eigen::Index dim_in, Eigen::Index dim_out,
                              Eigen::Index env_dim, std::uint64_t seed);

PsdMatrix apply(const QuantumChannel& ch, const PsdMatrix& rho);

struct DpiResult {
  double alpha = 0.0;
  double z = 0.0;
  double d_before = 0.0;
  double d_after = 0.0;
  double margin = 0.0;     // d_before - d_after; negative flags a violation
  double tolerance = 0.0;  // 1e-8 * (1 + |d_before|)
  [[nodiscard]] bool violated() const { return margin < -tolerance; }
};

// Divergence contraction under a channel at arbitrary (alpha, z). Channel
// outputs are nudged toward the maximally mixed state with weight 1e-10
// before the divergence is evaluated, keeping negative powers in domain.
DpiResult dpi_margin(const PsdMatrix& rho, const PsdMatrix& sigma,
                     double alpha, double z, const QuantumChannel& ch);

// Data-processing check on the proven monotone line z = alpha/2 for
// alpha in (1, 2]. Inputs must be unit trace (1e-8 slack).
DpiResult dpi_check(const PsdMatrix& rho, const PsdMatrix& sigma, double alpha,
                    const QuantumChannel& ch);

// Parameter regions with established monotonicity; used to mark scan rows
// whose violations count as alarms. Returns an empty view when unproven.
std::string_view proven_monotone_tag(double alpha, double z);

struct DpiScanConfig {
  Eigen::Index dim = 3;
  Eigen::Index env_dim = 3;
  int trials = 200;
  std::uint64_t seed = 0;
  double cond_cap = 1e2;

  void validate() const;
};

struct DpiRow {
  double alpha = 0.0;
  double z = 0.0;
  int trials = 0;
  int violations = 0;
  double worst_margin = 0.0;  // min over trials of margin / (1 + |d_before|)
  bool proven_region = false;
  std::string region_tag;
  std::string error;
};

struct DpiReport {
  DpiScanConfig config;
  std::vector<DpiRow> rows;

  [[nodiscard]] int proven_violations() const;
};

// Random-triple scan over the (alpha, z) product grid: per trial a random
// channel and two random unit-trace states. Per-row split seeding keeps the
// report independent of evaluation order; rows with out-of-domain
// parameters (alpha guard band, nonpositive z) carry an error string.
DpiReport dpi_scan(const std::vector<double>& alphas,
                   const std::vector<double>& zs, const DpiScanConfig& cfg,
                   int workers = 0);

}  // namespace tcl::channels
