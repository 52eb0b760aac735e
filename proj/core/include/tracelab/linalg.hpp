#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include "tracelab/rng.hpp"

namespace tcl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Relative tolerances shared across the library. All are relative to the
// spectral norm (or dimension) of the operand, never absolute.
inline constexpr double kPsdTolFactor = 1e-12;      // hermiticity / psd slack
inline constexpr double kStrictFloorFactor = 1e-10; // floor for inversions
inline constexpr double kEigTolFactor = 1e-12;      // eig residual, times dim
inline constexpr int kMaxJacobiSweeps = 100;

// Thrown when the Jacobi iteration fails to reach its residual target.
// Carries the achieved off-diagonal mass so callers can report how close
// the sweep got.
class EigenSolverError : public std::runtime_error {
 public:
  EigenSolverError(const std::string& what, double off_diagonal, int sweeps)
      : std::runtime_error(what),
        off_diagonal_(off_diagonal),
        sweeps_(sweeps) {}
  [[nodiscard]] double off_diagonal() const { return off_diagonal_; }
  [[nodiscard]] int sweeps() const { return sweeps_; }

 private:
  double off_diagonal_;
  int sweeps_;
};

// Square complex matrix kept exactly Hermitian: the constructor averages
// M with its adjoint, which is a bitwise no-op when M is already Hermitian.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const Matrix& m);

  static HermitianMatrix identity(Eigen::Index dim);
  static HermitianMatrix zero(Eigen::Index dim);
  static HermitianMatrix diagonal(const RealVector& entries);

  [[nodiscard]] Eigen::Index dim() const { return m_.rows(); }
  [[nodiscard]] const Matrix& mat() const { return m_; }
  [[nodiscard]] double trace() const { return m_.trace().real(); }
  [[nodiscard]] double frobenius_norm() const { return m_.norm(); }

 private:
  Matrix m_;
};

// Real weights preserve hermiticity exactly, so convex combinations of
// Hermitian matrices need no re-symmetrization.
HermitianMatrix combine(double wa, const HermitianMatrix& a, double wb,
                        const HermitianMatrix& b);

struct SpectralDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // orthonormal columns, matching order

  [[nodiscard]] Matrix reconstruct() const;

  // V f(Lambda) V^*, re-Hermitized. The workhorse behind matrix powers.
  [[nodiscard]] HermitianMatrix apply(
      const std::function<double(double)>& f) const;

  [[nodiscard]] double min_eigenvalue() const { return eigenvalues(0); }
  [[nodiscard]] double max_eigenvalue() const {
    return eigenvalues(eigenvalues.size() - 1);
  }
  [[nodiscard]] double spectral_norm() const;
};

// Cyclic complex Jacobi iteration. Deterministic rotation order, so equal
// inputs give bit-equal decompositions. Residual target is
// kEigTolFactor * dim * ||H||_F; exceeding kMaxJacobiSweeps throws
// EigenSolverError with the remaining off-diagonal mass.
SpectralDecomposition eig(const HermitianMatrix& h);

// Hermitian matrix certified positive semidefinite at construction:
// min eigenvalue >= -kPsdTolFactor * spectral norm, else invalid_argument.
// The decomposition is computed once and cached.
class PsdMatrix {
 public:
  explicit PsdMatrix(const HermitianMatrix& h);
  explicit PsdMatrix(const Matrix& m) : PsdMatrix(HermitianMatrix(m)) {}

  static PsdMatrix identity(Eigen::Index dim);
  static PsdMatrix diagonal(const RealVector& entries);

  [[nodiscard]] Eigen::Index dim() const { return h_.dim(); }
  [[nodiscard]] const Matrix& mat() const { return h_.mat(); }
  [[nodiscard]] const HermitianMatrix& hermitian() const { return h_; }
  [[nodiscard]] const SpectralDecomposition& decomposition() const {
    return sd_;
  }
  [[nodiscard]] double trace() const { return h_.trace(); }
  [[nodiscard]] double min_eig() const { return sd_.min_eigenvalue(); }
  [[nodiscard]] double spectral_norm() const { return sd_.spectral_norm(); }

  // True when safely invertible: min eig >= kStrictFloorFactor * spectral norm.
  [[nodiscard]] bool strictly_positive() const;

 private:
  HermitianMatrix h_;
  SpectralDecomposition sd_;
};

// X^r via the spectral calculus. Exponent conventions:
//   r = 0: identity.
//   r > 0 non-integer: eigenvalues within -kPsdTolFactor*||X|| of zero are
//     clamped to 0 and 0^r := 0 (continuous extension to singular inputs).
//   r < 0 (any) : requires strictly positive X; a domain_error naming the
//     offending eigenvalue is thrown otherwise.
HermitianMatrix mat_pow(const PsdMatrix& x, double r);

struct PsdCheck {
  bool psd = false;
  double min_eigenvalue = 0.0;
};

// min eig >= -tol * max(1, spectral norm), reported alongside the eigenvalue.
PsdCheck is_psd(const HermitianMatrix& h, double tol = kPsdTolFactor);

struct RandomSpec {
  std::uint64_t seed = 0;
  Eigen::Index dim = 2;
  double cond_cap = 1e3;  // > 1
};

// Entrywise standard complex Gaussian draw.
Matrix sample_gaussian(SplitRng& rng, Eigen::Index rows, Eigen::Index cols);

// G G^* + delta I with the smallest delta >= 0 that caps the condition
// number at cond_cap. Output is strictly positive definite.
PsdMatrix sample_psd(SplitRng& rng, Eigen::Index dim, double cond_cap);
PsdMatrix random_psd(const RandomSpec& spec);

// Haar-distributed unitary: Gaussian matrix, Householder QR, then the
// column phases are fixed so the R factor has positive diagonal.
Matrix sample_unitary(SplitRng& rng, Eigen::Index dim);
Matrix random_unitary(const RandomSpec& spec);

// Random strict contraction: U diag(sigma) V^* with sigma uniform in [0, 1).
Matrix sample_contraction(SplitRng& rng, Eigen::Index dim);

struct DilationResult {
  Matrix unitary;        // 2n x 2n, block structure [[K, WS], [-WS, K]]
  double rescale_factor; // ||K||_2 when the input exceeded norm one, else 1
};

// Unitary dilation of a contraction K: with K = W|K| a polar decomposition
// and S = (I - |K|^2)^{1/2}, the block matrix [[K, WS], [-WS, K]] is unitary.
// Inputs with ||K||_2 > 1 are rescaled by 1/||K||_2 first and the factor is
// reported. The constructed block is verified unitary to 1e-10.
DilationResult polar_dilation(const Matrix& k);

}  // namespace tcl
