#include "tracelab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace tcl {
namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Sum of |a_ij|^2 over i < j; the quantity the Jacobi sweep drives to zero.
double off_diagonal_mass(const Matrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 1; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i) sum += std::norm(a(i, j));
  return std::sqrt(2.0 * sum);
}

}  // namespace

HermitianMatrix::HermitianMatrix(const Matrix& m) {
  require(m.rows() == m.cols(), "HermitianMatrix: matrix must be square");
  require(m.rows() >= 1, "HermitianMatrix: dimension must be at least 1");
  m_ = 0.5 * (m + m.adjoint());
  // Diagonal entries are exactly real after symmetrization up to the
  // imaginary rounding of (z + conj z)/2, which is exactly zero.
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(Matrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(Matrix::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& entries) {
  require(entries.size() >= 1, "HermitianMatrix: dimension must be at least 1");
  Matrix m = Matrix::Zero(entries.size(), entries.size());
  for (Eigen::Index i = 0; i < entries.size(); ++i) m(i, i) = entries(i);
  return HermitianMatrix(m);
}

HermitianMatrix combine(double wa, const HermitianMatrix& a, double wb,
                        const HermitianMatrix& b) {
  require(a.dim() == b.dim(), "combine: dimension mismatch");
  return HermitianMatrix(wa * a.mat() + wb * b.mat());
}

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
         eigenvectors.adjoint();
}

HermitianMatrix SpectralDecomposition::apply(
    const std::function<double(double)>& f) const {
  RealVector mapped(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    mapped(i) = f(eigenvalues(i));
  Matrix out = eigenvectors *
               mapped.asDiagonal().toDenseMatrix().cast<Complex>() *
               eigenvectors.adjoint();
  return HermitianMatrix(out);
}

double SpectralDecomposition::spectral_norm() const {
  return std::max(std::abs(min_eigenvalue()), std::abs(max_eigenvalue()));
}

SpectralDecomposition eig(const HermitianMatrix& h) {
  const Eigen::Index n = h.dim();
  Matrix a = h.mat();
  Matrix v = Matrix::Identity(n, n);

  const double scale = a.norm();  // Frobenius
  const double stop = kEigTolFactor * static_cast<double>(n) * scale * 1e-3;
  // The sweep targets three digits below the contract so that downstream
  // reconstruction residuals stay comfortably inside it.

  if (n > 1 && scale > 0.0) {
    bool converged = false;
    double off = off_diagonal_mass(a);
    for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
      if (off <= stop) {
        converged = true;
        break;
      }
      for (Eigen::Index p = 0; p < n - 1; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
          const Complex apq = a(p, q);
          const double b = std::abs(apq);
          if (b == 0.0) continue;
          // Phase rotation reduces the 2x2 block to real symmetric, then a
          // classical Jacobi rotation annihilates the off-diagonal entry.
          const Complex phase = apq / b;
          const double app = a(p, p).real();
          const double aqq = a(q, q).real();
          const double theta = (app - aqq) / (2.0 * b);
          // Annihilation of the (p,q) entry under this J needs
          // tan(2*angle) = -1/theta, hence the sign opposite theta.
          const double t =
              (theta >= 0.0 ? -1.0 : 1.0) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double s = t * c;
          const Complex phc = std::conj(phase);

          // A <- J^* A J with J = [[c, s], [-s conj(phase), c conj(phase)]].
          for (Eigen::Index k = 0; k < n; ++k) {
            const Complex akp = a(k, p);
            const Complex akq = a(k, q);
            a(k, p) = c * akp - s * phc * akq;
            a(k, q) = s * akp + c * phc * akq;
          }
          for (Eigen::Index k = 0; k < n; ++k) {
            const Complex apk = a(p, k);
            const Complex aqk = a(q, k);
            a(p, k) = c * apk - s * phase * aqk;
            a(q, k) = s * apk + c * phase * aqk;
          }
          a(p, q) = Complex(0.0, 0.0);
          a(q, p) = Complex(0.0, 0.0);
          a(p, p) = Complex(a(p, p).real(), 0.0);
          a(q, q) = Complex(a(q, q).real(), 0.0);

          for (Eigen::Index k = 0; k < n; ++k) {
            const Complex vkp = v(k, p);
            const Complex vkq = v(k, q);
            v(k, p) = c * vkp - s * phc * vkq;
            v(k, q) = s * vkp + c * phc * vkq;
          }
        }
      }
      off = off_diagonal_mass(a);
    }
    if (!converged && off > stop * 1e3) {
      // Allow the final sweep to land anywhere inside the contract itself.
      std::ostringstream msg;
      msg << "eig: Jacobi sweep did not converge in " << kMaxJacobiSweeps
          << " sweeps; off-diagonal mass " << off << " vs target "
          << stop * 1e3;
      throw EigenSolverError(msg.str(), off, kMaxJacobiSweeps);
    }
  }

  SpectralDecomposition sd;
  sd.eigenvalues.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) sd.eigenvalues(i) = a(i, i).real();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) {
    return sd.eigenvalues(i) < sd.eigenvalues(j);
  });

  RealVector sorted(n);
  Matrix vecs(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sorted(i) = sd.eigenvalues(order[static_cast<std::size_t>(i)]);
    vecs.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  sd.eigenvalues = std::move(sorted);
  sd.eigenvectors = std::move(vecs);
  return sd;
}

PsdMatrix::PsdMatrix(const HermitianMatrix& h) : h_(h), sd_(eig(h)) {
  const double norm = sd_.spectral_norm();
  const double floor = -kPsdTolFactor * std::max(1.0, norm);
  if (sd_.min_eigenvalue() < floor) {
    std::ostringstream msg;
    msg << "PsdMatrix: matrix is not positive semidefinite; min eigenvalue "
        << sd_.min_eigenvalue() << " below tolerance " << floor;
    throw std::invalid_argument(msg.str());
  }
}

PsdMatrix PsdMatrix::identity(Eigen::Index dim) {
  return PsdMatrix(HermitianMatrix::identity(dim));
}

PsdMatrix PsdMatrix::diagonal(const RealVector& entries) {
  return PsdMatrix(HermitianMatrix::diagonal(entries));
}

bool PsdMatrix::strictly_positive() const {
  return min_eig() >= kStrictFloorFactor * spectral_norm();
}

HermitianMatrix mat_pow(const PsdMatrix& x, double r) {
  if (r == 0.0) return HermitianMatrix::identity(x.dim());

  const SpectralDecomposition& sd = x.decomposition();
  const double norm = sd.spectral_norm();
  const bool integer_exp = (r == std::floor(r)) && std::abs(r) < 1e9;

  if (r < 0.0) {
    const double floor = kStrictFloorFactor * norm;
    if (sd.min_eigenvalue() < floor || norm == 0.0) {
      std::ostringstream msg;
      msg << "mat_pow: exponent " << r
          << " requires a strictly positive matrix; offending eigenvalue "
          << sd.min_eigenvalue() << " (floor " << floor << ")";
      throw std::domain_error(msg.str());
    }
    return sd.apply([r](double lam) { return std::pow(lam, r); });
  }

  if (integer_exp) {
    return sd.apply([r](double lam) { return std::pow(lam, r); });
  }

  // Fractional positive powers: clamp the psd tolerance window to zero so
  // singular inputs take 0^r = 0, the continuous extension.
  return sd.apply([r](double lam) {
    return lam <= 0.0 ? 0.0 : std::pow(lam, r);
  });
}

PsdCheck is_psd(const HermitianMatrix& h, double tol) {
  const SpectralDecomposition sd = eig(h);
  const double mn = sd.min_eigenvalue();
  return {mn >= -tol * std::max(1.0, sd.spectral_norm()), mn};
}

Matrix sample_gaussian(SplitRng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      g(i, j) = rng.next_complex_gaussian();
  return g;
}

PsdMatrix sample_psd(SplitRng& rng, Eigen::Index dim, double cond_cap) {
  require(dim >= 1, "sample_psd: dimension must be at least 1");
  require(cond_cap > 1.0, "sample_psd: cond_cap must exceed 1");
  const Matrix g = sample_gaussian(rng, dim, dim);
  const HermitianMatrix w(g * g.adjoint());
  const SpectralDecomposition sd = eig(w);
  const double lam_max = sd.max_eigenvalue();
  const double lam_min = std::max(sd.min_eigenvalue(), 0.0);
  require(lam_max > 0.0, "sample_psd: degenerate Gaussian draw");
  // Smallest shift that brings (lam_max + d)/(lam_min + d) down to cond_cap.
  const double delta =
      std::max(0.0, (lam_max - cond_cap * lam_min) / (cond_cap - 1.0));
  Matrix shifted = w.mat();
  for (Eigen::Index i = 0; i < dim; ++i) shifted(i, i) += delta;
  return PsdMatrix(shifted);
}

PsdMatrix random_psd(const RandomSpec& spec) {
  SplitRng rng(spec.seed);
  return sample_psd(rng, spec.dim, spec.cond_cap);
}

Matrix sample_unitary(SplitRng& rng, Eigen::Index dim) {
  require(dim >= 1, "sample_unitary: dimension must be at least 1");
  const Matrix g = sample_gaussian(rng, dim, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix qfull = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  // Fixing the column phases to the R diagonal makes the distribution Haar.
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    const Complex phase = mag > 0.0 ? d / mag : Complex(1.0, 0.0);
    qfull.col(j) *= phase;
  }
  return qfull;
}

Matrix random_unitary(const RandomSpec& spec) {
  SplitRng rng(spec.seed);
  return sample_unitary(rng, spec.dim);
}

Matrix sample_contraction(SplitRng& rng, Eigen::Index dim) {
  const Matrix u = sample_unitary(rng, dim);
  const Matrix v = sample_unitary(rng, dim);
  RealVector sigma(dim);
  for (Eigen::Index i = 0; i < dim; ++i) sigma(i) = rng.next_unit();
  return u * sigma.asDiagonal().toDenseMatrix().cast<Complex>() * v.adjoint();
}

DilationResult polar_dilation(const Matrix& k) {
  require(k.rows() == k.cols(), "polar_dilation: matrix must be square");
  const Eigen::Index n = k.rows();

  DilationResult result;
  result.rescale_factor = 1.0;

  Matrix kc = k;
  SpectralDecomposition gram = eig(HermitianMatrix(kc.adjoint() * kc));
  const double top = std::sqrt(std::max(gram.max_eigenvalue(), 0.0));
  if (top > 1.0 + kPsdTolFactor) {
    result.rescale_factor = top;
    kc /= top;
    gram = eig(HermitianMatrix(kc.adjoint() * kc));
  }

  // |K| = V sigma V^* from the Gram matrix; the partial isometry part W is
  // completed to a unitary on the kernel of |K|.
  const Eigen::Index rank_n = n;
  RealVector sigma(rank_n);
  for (Eigen::Index i = 0; i < n; ++i)
    sigma(i) = std::sqrt(std::max(gram.eigenvalues(i), 0.0));

  const double sig_max = sigma(n - 1);
  const double rank_tol = std::max(1.0, sig_max) * 1e-12 * static_cast<double>(n);

  Matrix w(n, n);
  Eigen::Index filled = 0;
  std::vector<Eigen::Index> deficient;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (sigma(i) > rank_tol) {
      w.col(i) = kc * gram.eigenvectors.col(i) / sigma(i);
      ++filled;
    } else {
      deficient.push_back(i);
    }
  }
  if (!deficient.empty()) {
    // Greedy modified Gram-Schmidt completion from the standard basis.
    std::vector<Eigen::Index> done;
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::find(deficient.begin(), deficient.end(), i) == deficient.end())
        done.push_back(i);
    std::size_t next_slot = 0;
    for (Eigen::Index cand = 0;
         cand < n && next_slot < deficient.size(); ++cand) {
      Eigen::VectorXcd vec = Eigen::VectorXcd::Zero(n);
      vec(cand) = Complex(1.0, 0.0);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index col : done) vec -= w.col(col).dot(vec) * w.col(col);
      }
      const double nrm = vec.norm();
      if (nrm > 1e-3) {
        w.col(deficient[next_slot]) = vec / nrm;
        done.push_back(deficient[next_slot]);
        ++next_slot;
      }
    }
    require(next_slot == deficient.size(),
            "polar_dilation: failed to complete the isometry");
  }
  (void)filled;

  // Rotate back to the standard basis: W acts as K|K|^dagger on the range.
  const Matrix wv = w * gram.eigenvectors.adjoint();

  RealVector s_entries(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double val = 1.0 - sigma(i) * sigma(i);
    s_entries(i) = std::sqrt(std::max(val, 0.0));
  }
  const Matrix s = gram.eigenvectors *
                   s_entries.asDiagonal().toDenseMatrix().cast<Complex>() *
                   gram.eigenvectors.adjoint();
  const Matrix ws = wv * s;

  Matrix u(2 * n, 2 * n);
  u.topLeftCorner(n, n) = kc;
  u.topRightCorner(n, n) = ws;
  u.bottomLeftCorner(n, n) = -ws;
  u.bottomRightCorner(n, n) = kc;

  const double residual =
      (u.adjoint() * u - Matrix::Identity(2 * n, 2 * n)).norm();
  if (residual > 1e-10) {
    std::ostringstream msg;
    msg << "polar_dilation: unitarity residual " << residual
        << " exceeds 1e-10";
    throw std::runtime_error(msg.str());
  }

  result.unitary = std::move(u);
  return result;
}

}  // namespace tcl
