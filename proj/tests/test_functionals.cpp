#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "tracelab/functionals.hpp"
#include "tracelab/linalg.hpp"
#include "tracelab/rng.hpp"

using namespace tcl;

namespace {

// Scalar-side oracle for commuting (diagonal) inputs.
double diagonal_phi(const RealVector& a, const RealVector& b, double p,
                    double q, double s) {
  double acc = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    acc += std::pow(std::pow(a(i), q) * std::pow(b(i), p), s);
  return acc;
}

Matrix conditioned_contraction(SplitRng& rng) {
  SplitRng r1 = rng.split(0), r2 = rng.split(1);
  const Matrix u = sample_unitary(r1, 3);
  const Matrix v = sample_unitary(r2, 3);
  RealVector sig(3);
  sig << 0.9, 0.6, 0.4;
  return u * sig.asDiagonal().toDenseMatrix().cast<Complex>() * v.adjoint();
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ParamPoint(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ParamPoint(1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ParamPoint(1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ParamPoint(1.0, 1.0, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(ParamPoint(1.0, 1.0, std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(TripleParams(1.0, 0.0, 1.0), std::invalid_argument);

  const ParamPoint prm(0.5, -0.25, 2.0);
  const ParamPoint sw = prm.swapped();
  CHECK(sw.p == -0.25);
  CHECK(sw.q == 0.5);
  CHECK(sw.s == 2.0);
}

TEST_CASE("trace_power: diagonal oracle and domain checks") {
  RealVector d(3);
  d << 0.5, 1.0, 4.0;
  const HermitianMatrix h = HermitianMatrix::diagonal(d);
  for (const double s : {0.5, 1.0, 2.0, 3.5}) {
    double want = 0;
    for (int i = 0; i < 3; ++i) want += std::pow(d(i), s);
    CHECK(trace_power(h, s) == doctest::Approx(want).epsilon(1e-13));
  }
  CHECK(trace_power(h, 1.0) == doctest::Approx(h.trace()).epsilon(1e-15));

  RealVector sing(2);
  sing << 0.0, 1.0;
  const HermitianMatrix hs = HermitianMatrix::diagonal(sing);
  CHECK(trace_power(hs, 2.0) == doctest::Approx(1.0));
  CHECK(trace_power(hs, 0.5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(trace_power(hs, -1.0), std::domain_error);
}

TEST_CASE("phi: commuting oracle across exponent signs") {
  RealVector da(3), db(3);
  da << 0.5, 1.25, 3.0;
  db << 2.0, 0.75, 1.5;
  const PsdMatrix a = PsdMatrix::diagonal(da);
  const PsdMatrix b = PsdMatrix::diagonal(db);
  for (const auto& prm :
       {ParamPoint{1, -0.5, 2}, {2, -0.5, 2.0 / 3}, {0.5, 0.5, 1},
        {-0.5, -0.5, 1.5}, {1.5, 1, 0.4}}) {
    const double want = diagonal_phi(da, db, prm.p, prm.q, prm.s);
    CHECK(phi(a, b, prm) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("phi at s=1 equals the cyclic product trace") {
  SplitRng rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    SplitRng sa = rng.split(2 * rep), sb = rng.split(2 * rep + 1);
    const PsdMatrix a = sample_psd(sa, 3, 50.0);
    const PsdMatrix b = sample_psd(sb, 3, 50.0);
    for (const auto [p, q] : {std::pair{1.0, -0.5}, {0.5, 0.5}, {-1.0, 2.0}}) {
      const double direct =
          (mat_pow(a, q).mat() * mat_pow(b, p).mat()).trace().real();
      CHECK(phi(a, b, ParamPoint(p, q, 1.0)) ==
            doctest::Approx(direct).epsilon(1e-11));
    }
  }
}

TEST_CASE("phi swap symmetry phi(A,B;p,q,s) = phi(B,A;q,p,s)") {
  SplitRng rng(37);
  for (int rep = 0; rep < 20; ++rep) {
    SplitRng sa = rng.split(2 * rep), sb = rng.split(2 * rep + 1);
    const PsdMatrix a = sample_psd(sa, 4, 100.0);
    const PsdMatrix b = sample_psd(sb, 4, 100.0);
    for (const auto& prm :
         {ParamPoint{1, -0.5, 2}, {0.5, 0.5, 1.3}, {2, -0.9, 0.95}}) {
      const double lhs = phi(a, b, prm);
      const double rhs = phi(b, a, prm.swapped());
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("psi with identity contraction is bit-identical to phi") {
  SplitRng rng(41);
  SplitRng sa = rng.split(0), sb = rng.split(1);
  const PsdMatrix a = sample_psd(sa, 3, 80.0);
  const PsdMatrix b = sample_psd(sb, 3, 80.0);
  const Matrix id = Matrix::Identity(3, 3);
  for (const auto& prm :
       {ParamPoint{1, -0.5, 2}, {0.5, 0.5, 1}, {2, -0.25, 0.6}}) {
    const double via_psi = psi(id, a, b, prm);
    const double via_phi = phi(a, b, prm);
    CHECK(via_psi == via_phi);  // exact, not approximate
  }
}

TEST_CASE("psi under a unitary equals phi with the rotated argument") {
  SplitRng rng(43);
  SplitRng sa = rng.split(0), sb = rng.split(1), su = rng.split(2);
  const PsdMatrix a = sample_psd(sa, 3, 60.0);
  const PsdMatrix b = sample_psd(sb, 3, 60.0);
  const Matrix u = sample_unitary(su, 3);
  const PsdMatrix rotated(Matrix(u.adjoint() * b.mat() * u));
  for (const auto& prm :
       {ParamPoint{1, -0.5, 2}, {0.5, 0.5, 1.2}, {2, -0.5, 2.0 / 3}}) {
    CHECK(psi(u, a, b, prm) ==
          doctest::Approx(phi(a, rotated, prm)).epsilon(1e-10));
  }
}

TEST_CASE("exponent sign-flip identity for invertible contractions") {
  SplitRng rng(47);
  const Matrix k = conditioned_contraction(rng);
  SplitRng sa = rng.split(2), sb = rng.split(3);
  const PsdMatrix a = sample_psd(sa, 3, 40.0);
  const PsdMatrix b = sample_psd(sb, 3, 40.0);
  const Matrix k_flip = k.adjoint().inverse();
  for (const auto& prm :
       {ParamPoint{1, -0.5, 2}, {0.5, 0.5, 1.1}, {2, -0.25, 0.8}}) {
    const double lhs = psi(k, a, b, prm);
    const double rhs = psi_raw(k_flip, a, b, -prm.p, -prm.q, -prm.s);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("triple_trace: commuting oracle and identity reduction") {
  RealVector da(3), db(3), dc(3);
  da << 0.5, 1.0, 2.0;
  db << 1.5, 0.25, 3.0;
  dc << 2.0, 1.0, 0.5;
  const PsdMatrix a = PsdMatrix::diagonal(da);
  const PsdMatrix b = PsdMatrix::diagonal(db);
  const PsdMatrix c = PsdMatrix::diagonal(dc);
  for (const auto& prm :
       {TripleParams{-0.5, 2, -0.25}, {1, 1, 1}, {-1, 2, -0.5}}) {
    double want = 0;
    for (int i = 0; i < 3; ++i)
      want += std::pow(da(i), prm.q) * std::pow(db(i), prm.p) *
              std::pow(dc(i), prm.r);
    CHECK(triple_trace(a, b, c, prm) ==
          doctest::Approx(want).epsilon(1e-12));
  }

  // C = identity: the third factor drops out and the form collapses to the
  // two-matrix functional at s = 1.
  SplitRng rng(53);
  SplitRng sa = rng.split(0), sb = rng.split(1);
  const PsdMatrix ra = sample_psd(sa, 3, 30.0);
  const PsdMatrix rb = sample_psd(sb, 3, 30.0);
  const PsdMatrix id = PsdMatrix::identity(3);
  CHECK(triple_trace(ra, rb, id, TripleParams(0.7, -0.4, 5.0)) ==
        doctest::Approx(phi(ra, rb, ParamPoint(0.7, -0.4, 1.0)))
            .epsilon(1e-11));
}

TEST_CASE("variational principle: certificate matches the direct trace") {
  SplitRng rng(59);
  for (const double s : {2.0, 1.5, 3.0, 0.5, 0.75}) {
    SplitRng sub = rng.split(static_cast<std::uint64_t>(s * 100));
    const PsdMatrix x = sample_psd(sub, 3, 20.0);
    const double direct = trace_power(x.hermitian(), s);
    const VariationalMode mode =
        s > 1 ? VariationalMode::supremum : VariationalMode::infimum;
    const VariationalResult res = trace_power_variational(x, s, mode);
    CHECK(res.certificate == doctest::Approx(direct).epsilon(1e-10));

    // One-sided bound: no feasible point beats the closed-form optimum.
    if (mode == VariationalMode::supremum) {
      CHECK(res.value <= direct * (1 + 1e-9) + 1e-12);
    } else {
      CHECK(res.value >= direct * (1 - 1e-9) - 1e-12);
    }
    // And the iteration actually closes in on it.
    CHECK(res.value == doctest::Approx(direct).epsilon(1e-5));
    CHECK(res.steps_run > 0);
  }
}

TEST_CASE("variational objective bounds hold at arbitrary feasible points") {
  SplitRng rng(61);
  SplitRng sx = rng.split(0);
  const PsdMatrix x = sample_psd(sx, 3, 20.0);
  for (int rep = 0; rep < 25; ++rep) {
    SplitRng sz = rng.split(100 + rep);
    const PsdMatrix z = sample_psd(sz, 3, 20.0);
    const double sup_side = 2.0 * variational_objective(x, 2.0, z);
    CHECK(sup_side <= trace_power(x.hermitian(), 2.0) * (1 + 1e-9));
    const double inf_side = 0.5 * variational_objective(x, 0.5, z);
    CHECK(inf_side >= trace_power(x.hermitian(), 0.5) * (1 - 1e-9));
  }
}

TEST_CASE("renyi divergence: commuting oracle, z-independence, zero at rho=sigma") {
  RealVector dp(3), dq(3);
  dp << 0.5, 0.3, 0.2;
  dq << 0.25, 0.25, 0.5;
  const PsdMatrix rho = PsdMatrix::diagonal(dp);
  const PsdMatrix sigma = PsdMatrix::diagonal(dq);
  for (const double alpha : {0.5, 1.5, 2.0}) {
    double acc = 0;
    for (int i = 0; i < 3; ++i)
      acc += std::pow(dp(i), alpha) * std::pow(dq(i), 1 - alpha);
    const double want = std::log(acc) / (alpha - 1);
    // Commuting states: the z parameter cancels.
    for (const double z : {0.7, 1.0, alpha, alpha / 2}) {
      CHECK(renyi_alpha_z(rho, sigma, alpha, z) ==
            doctest::Approx(want).epsilon(1e-11));
    }
  }
  CHECK(renyi_alpha_z(rho, rho, 1.5, 0.75) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("renyi divergence: unitary invariance and guard bands") {
  SplitRng rng(67);
  SplitRng s1 = rng.split(0), s2 = rng.split(1), s3 = rng.split(2);
  PsdMatrix rho = sample_psd(s1, 3, 30.0);
  PsdMatrix sigma = sample_psd(s2, 3, 30.0);
  // Normalize traces so the divergence is scale-free on the first slot.
  rho = PsdMatrix(Matrix(rho.mat() / rho.trace()));
  sigma = PsdMatrix(Matrix(sigma.mat() / sigma.trace()));
  const Matrix u = sample_unitary(s3, 3);
  const PsdMatrix rho_u(Matrix(u * rho.mat() * u.adjoint()));
  const PsdMatrix sigma_u(Matrix(u * sigma.mat() * u.adjoint()));
  CHECK(renyi_alpha_z(rho, sigma, 1.5, 0.75) ==
        doctest::Approx(renyi_alpha_z(rho_u, sigma_u, 1.5, 0.75))
            .epsilon(1e-10));

  CHECK_THROWS_AS(renyi_alpha_z(rho, sigma, 1.0005, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(renyi_alpha_z(rho, sigma, -0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(renyi_alpha_z(rho, sigma, 1.5, 0.0), std::invalid_argument);
}
