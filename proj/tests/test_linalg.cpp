#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fimsim/csr.hpp"
#include "fimsim/dense_lu.hpp"
#include "fimsim/error.hpp"
#include "fimsim/ilu0.hpp"
#include "fimsim/kernels.hpp"
#include "fimsim/krylov.hpp"
#include "support/oracles.hpp"

using namespace fimsim;

TEST(Csr, FromTripletsSumsDuplicates) {
  const auto a = CsrMatrix::from_triplets(2, 2, {{1, 1, 3.0}, {0, 0, 2.0}, {0, 1, 1.0}, {0, 0, 1.0}});
  EXPECT_EQ(a.nnz(), 3u);
  EXPECT_EQ(a.at(0, 0), 3.0);
  EXPECT_EQ(a.at(1, 0), 0.0);
  EXPECT_FALSE(a.find(1, 0).has_value());
  EXPECT_THROW(a.position(1, 0), LinearAlgebraError);
}

TEST(Csr, RejectsUnsortedColumns) {
  EXPECT_THROW(CsrMatrix(1, 2, {0, 2}, {1, 0}, {1.0, 1.0}), LinearAlgebraError);
}

TEST(Csr, TransposeMultiplyAndSubmatrix) {
  const auto a = CsrMatrix::from_triplets(2, 3, {{0, 0, 1.0}, {0, 2, 2.0}, {1, 1, 3.0}});
  const auto at = a.transpose();
  EXPECT_EQ(at.rows(), 3u);
  EXPECT_EQ(at.at(2, 0), 2.0);
  const auto aat = multiply(a, at);
  EXPECT_EQ(aat.at(0, 0), 5.0);
  EXPECT_EQ(aat.at(1, 1), 9.0);
  EXPECT_EQ(aat.at(0, 1), 0.0);
  const auto l = oracle::laplacian_1d(5);
  const std::vector<std::size_t> idx{1, 2, 4};
  const auto sub = principal_submatrix(l, idx);
  EXPECT_EQ(sub.at(0, 1), -1.0);
  EXPECT_EQ(sub.at(1, 2), 0.0);
  EXPECT_EQ(sub.at(2, 2), 2.0);
}

TEST(Csr, CoordinateRoundTrip) {
  const auto a = oracle::convection_diffusion(4, 3.0);
  std::stringstream ss;
  write_coordinate(ss, a);
  const auto b = read_coordinate(ss);
  ASSERT_TRUE(a.same_pattern(b));
  for (std::size_t k = 0; k < a.nnz(); ++k) EXPECT_EQ(a.values()[k], b.values()[k]);
}

TEST(Kernels, Spmv) {
  const auto id = CsrMatrix::identity(3);
  std::vector<double> x{1, 2, 3}, y(3);
  spmv(id, x, y);
  EXPECT_EQ(y, x);
  const auto a = CsrMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 1, 3.0}});
  std::vector<double> one{1, 1}, out(2);
  spmv(a, one, out);
  EXPECT_EQ(out, (std::vector<double>{3, 3}));
  const auto zero = CsrMatrix::from_triplets(2, 2, {});
  spmv(zero, one, out);
  EXPECT_EQ(out, (std::vector<double>{0, 0}));
}

TEST(Kernels, ParallelMatchesSerial) {
  const auto a = oracle::convection_diffusion(60, 5.0);
  const auto x = oracle::random_vector(a.rows(), 3);
  std::vector<double> y1(a.rows()), y2(a.rows());
  spmv(a, x, y1);
  serial::spmv(a, x, y2);
  EXPECT_EQ(y1, y2);
  EXPECT_NEAR(dot(x, y1), serial::dot(x, y2), 1e-10 * std::abs(serial::dot(x, y2)));
  EXPECT_NEAR(norm2(x), serial::norm2(x), 1e-12 * serial::norm2(x));
  // Fixed-order reduction: repeated calls agree bit for bit.
  EXPECT_EQ(dot(x, y1), dot(x, y1));
}

TEST(DenseLu, SolvesAndDetectsSingular) {
  const auto a = oracle::convection_diffusion(5, 2.0);
  const auto b = oracle::random_vector(a.rows(), 5);
  const auto x = DenseLu(a).solve(b);
  EXPECT_LT(oracle::rel_diff(x, oracle::dense_solve(a, b)), 1e-12);
  EXPECT_THROW(DenseLu(2, {1.0, 2.0, 2.0, 4.0}), ZeroPivotError);
}

TEST(Ilu0, TridiagonalIsExact) {
  const auto a = oracle::laplacian_1d(30);
  const auto f = ilu0_factor(a);
  const auto b = oracle::random_vector(30, 9);
  EXPECT_LT(oracle::rel_diff(ilu0_solve(f, b), oracle::dense_solve(a, b)), 1e-12);
  const auto lu = multiply(f.lower(), f.upper());
  for (std::size_t r = 0; r < 30; ++r)
    for (std::size_t c = 0; c < 30; ++c) EXPECT_NEAR(lu.at(r, c), a.at(r, c), 1e-13);
}

TEST(Ilu0, DiagonalAndIdentity) {
  const auto d = CsrMatrix::from_triplets(3, 3, {{0, 0, 2.0}, {1, 1, 4.0}, {2, 2, 5.0}});
  const auto f = ilu0_factor(d);
  EXPECT_EQ(f.lower().nnz(), 3u);
  EXPECT_EQ(f.upper().at(1, 1), 4.0);
  const auto id = ilu0_factor(CsrMatrix::identity(4));
  const std::vector<double> r{1, -2, 3, 0};
  EXPECT_EQ(ilu0_solve(id, r), r);
  EXPECT_EQ(ilu0_solve(f, std::vector<double>(3, 0.0)), std::vector<double>(3, 0.0));
}

TEST(Ilu0, ZeroPivotNamesRow) {
  const auto a = CsrMatrix::from_triplets(3, 3, {{0, 0, 1.0}, {1, 1, 0.0}, {2, 2, 1.0}});
  try {
    ilu0_factor(a);
    FAIL();
  } catch (const ZeroPivotError& e) {
    EXPECT_EQ(e.row(), 1u);
  }
}

TEST(Krylov, ZeroRhs) {
  const auto a = oracle::laplacian_1d(10);
  const std::vector<double> b(10, 0.0);
  IdentityPreconditioner m;
  for (auto r : {bicgstab(a, b, m, {}), gmres(a, b, m, {})}) {
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 0u);
    EXPECT_EQ(r.x, b);
  }
}

TEST(Krylov, ZeroIterationCap) {
  const auto a = oracle::laplacian_1d(10);
  const auto b = oracle::random_vector(10, 1);
  const auto r = bicgstab(a, b, IdentityPreconditioner{}, {1e-8, 0, 50});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 0u);
  EXPECT_EQ(r.x, std::vector<double>(10, 0.0));
}

TEST(Krylov, BicgstabLaplacianMatchesOracle) {
  const auto a = oracle::laplacian_1d(50);
  const auto b = oracle::random_vector(50, 2);
  const auto r = bicgstab(a, b, IdentityPreconditioner{}, {1e-10, 300, 50});
  ASSERT_TRUE(r.converged);
  EXPECT_LT(oracle::rel_diff(r.x, oracle::dense_solve(a, b)), 1e-7);
  // Reported residual is the true one.
  std::vector<double> res(50);
  residual(a, r.x, b, res);
  EXPECT_NEAR(r.residual_norm, norm2(res), 1e-12 * norm2(b));
  EXPECT_FALSE(r.residual_drift);
  EXPECT_LE(r.preconditioner_applications, 2 * r.iterations);
}

TEST(Krylov, GmresDiagonalConvergesInDistinctEigenvalueCount) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < 40; ++i) t.push_back({i, i, static_cast<double>(1 + i % 4)});
  const auto a = CsrMatrix::from_triplets(40, 40, t);
  const auto b = oracle::random_vector(40, 4);
  const auto r = gmres(a, b, IdentityPreconditioner{}, {1e-12, 100, 50});
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 4u);
}

TEST(Krylov, GmresFullRestartSolvesRandomSystems) {
  for (unsigned seed = 0; seed < 3; ++seed) {
    const auto v = oracle::random_vector(400, 100 + seed);
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < 20; ++i)
      for (std::size_t j = 0; j < 20; ++j) t.push_back({i, j, v[20 * i + j] + (i == j ? 20.0 : 0.0)});
    const auto a = CsrMatrix::from_triplets(20, 20, t);
    const auto b = oracle::random_vector(20, 200 + seed);
    const auto r = gmres(a, b, IdentityPreconditioner{}, {1e-14, 100, 20});
    EXPECT_LT(oracle::rel_diff(r.x, oracle::dense_solve(a, b)), 1e-10);
  }
}

TEST(Krylov, ConvectionDiffusionAgainstOracle) {
  const auto a = oracle::convection_diffusion(10, 20.0);
  const auto b = oracle::random_vector(a.rows(), 6);
  const auto x = oracle::dense_solve(a, b);
  const double tol = 1e-8;
  const auto rb = bicgstab(a, b, IdentityPreconditioner{}, {tol, 300, 50});
  const auto rg = gmres(a, b, IdentityPreconditioner{}, {tol, 300, 50});
  ASSERT_TRUE(rb.converged);
  ASSERT_TRUE(rg.converged);
  EXPECT_LE(rb.relative_residual(), tol);
  EXPECT_LE(rg.relative_residual(), tol);
  EXPECT_LT(oracle::rel_diff(rb.x, x), 1e-6);
  EXPECT_LT(oracle::rel_diff(rg.x, x), 1e-6);
  EXPECT_EQ(rg.preconditioner_applications, rg.iterations);
}

TEST(Krylov, BitReproducible) {
  const auto a = oracle::convection_diffusion(30, 10.0);
  const auto b = oracle::random_vector(a.rows(), 8);
  const auto r1 = gmres(a, b, IdentityPreconditioner{}, {1e-8, 300, 30});
  const auto r2 = gmres(a, b, IdentityPreconditioner{}, {1e-8, 300, 30});
  EXPECT_EQ(r1.x, r2.x);
  EXPECT_EQ(r1.iterations, r2.iterations);
}
