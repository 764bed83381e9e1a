#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hbarcheck/symplectic.hpp"
#include "oracles.hpp"

using namespace hbarcheck;

TEST(StandardJ, OneMode) {
  const auto j = standard_J(1);
  EXPECT_EQ(j.n, 1u);
  EXPECT_EQ(j.matrix, (RealMatrix{{0.0, 1.0}, {-1.0, 0.0}}));
}

TEST(StandardJ, BlockForm) {
  const auto j = standard_J(2).matrix;
  const RealMatrix want{{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}};
  EXPECT_EQ(j, want);
}

TEST(StandardJ, SquaresToMinusIdentity) {
  const auto j = standard_J(3).matrix;
  EXPECT_EQ(j * j, -1.0 * RealMatrix::identity(6));
  EXPECT_EQ(transpose(j), -1.0 * j);
}

TEST(StandardJ, ZeroModes) {
  try {
    standard_J(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroModes);
  }
}

TEST(SymplecticEigenvalues, MinimumUncertainty) {
  const double sx = 0.8, sp = 0.5 / sx;
  const auto w = symplectic_eigenvalues(RealMatrix::diagonal({sx * sx, sp * sp}));
  ASSERT_EQ(w.modes(), 1u);
  EXPECT_NEAR(w.min(), 0.5, 1e-12);
}

TEST(SymplecticEigenvalues, Identity) {
  EXPECT_NEAR(symplectic_eigenvalues(RealMatrix::identity(2)).min(), 1.0, 1e-14);
  const auto w = symplectic_eigenvalues(RealMatrix::identity(6));
  for (double l : w.lambdas) EXPECT_NEAR(l, 1.0, 1e-12);
}

TEST(SymplecticEigenvalues, ConjugatedThermal) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RealMatrix s1 = random_symplectic(1, seed);
    const double a = 0.5 + 0.3 * static_cast<double>(seed);
    const auto w1 = symplectic_eigenvalues(transpose(s1) * RealMatrix::diagonal({a, a}) * s1);
    EXPECT_NEAR(w1.min(), a, 1e-10 * a);

    const RealMatrix s2 = random_symplectic(2, seed);
    const auto w2 = symplectic_eigenvalues(transpose(s2) *
                                           RealMatrix::diagonal({a, 2.0, a, 2.0}) * s2);
    EXPECT_NEAR(w2.lambdas[0], std::min(a, 2.0), 1e-9);
    EXPECT_NEAR(w2.lambdas[1], std::max(a, 2.0), 1e-9);
  }
}

TEST(SymplecticEigenvalues, DualAlgorithmsAgree) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const RealMatrix sigma = oracle::random_spd(2 * n, rng);
    const auto a = symplectic_eigenvalues_antisymmetric(sigma);
    const auto b = symplectic_eigenvalues_squared(sigma);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(a.lambdas[i], b.lambdas[i], 1e-10 * std::max(1.0, a.max()));
    }
    EXPECT_NO_THROW(symplectic_eigenvalues(sigma));
  }
}

TEST(SymplecticEigenvalues, OneModeClosedForm) {
  std::mt19937_64 rng(100);
  for (int trial = 0; trial < 200; ++trial) {
    const RealMatrix sigma = oracle::random_spd(2, rng);
    EXPECT_NEAR(symplectic_eigenvalues(sigma).min(), std::sqrt(det(sigma)),
                1e-10 * std::max(1.0, std::sqrt(det(sigma))));
  }
}

TEST(SymplecticEigenvalues, InvariantUnderSymplecticConjugation) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const RealMatrix sigma = oracle::random_spd(2 * n, rng);
    const RealMatrix s = random_symplectic(n, 1000 + static_cast<std::uint64_t>(trial));
    const auto before = symplectic_eigenvalues(sigma);
    const auto after = symplectic_eigenvalues(symmetrized(transpose(s) * sigma * s));
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(after.lambdas[i], before.lambdas[i], 1e-8);
  }
}

TEST(SymplecticEigenvalues, Rejects) {
  auto code_of = [](const RealMatrix& m) {
    try {
      symplectic_eigenvalues(m);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code_of(RealMatrix::identity(3)), ErrorCode::OddDimension);
  EXPECT_EQ(code_of(RealMatrix::diagonal({1.0, 0.0})), ErrorCode::NotSPD);
  EXPECT_EQ(code_of(RealMatrix::diagonal({1.0, -2.0})), ErrorCode::NotSPD);
  EXPECT_EQ(code_of(RealMatrix::diagonal({1.0, 1e-14})), ErrorCode::NotSPD);
  EXPECT_EQ(code_of(RealMatrix{{1.0, 0.2}, {0.1, 1.0}}), ErrorCode::NotSymmetric);
}

TEST(RandomSymplectic, Deterministic) {
  EXPECT_EQ(random_symplectic(3, 42), random_symplectic(3, 42));
  EXPECT_NE(random_symplectic(3, 42), random_symplectic(3, 43));
}

TEST(RandomSymplectic, PreservesForm) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      EXPECT_LE(symplectic_defect(random_symplectic(n, seed)), 1e-10);
    }
}

TEST(RandomSymplectic, GeneratorsAreSymplectic) {
  EXPECT_LE(symplectic_defect(phase_rotation(2, 1, 0.7)), 1e-15);
  EXPECT_LE(symplectic_defect(squeeze(2, 0, 0.4)), 1e-15);
  EXPECT_LE(symplectic_defect(mode_mixer(3, 0, 2, 1.1)), 1e-15);
  const RealMatrix c{{0.3, -0.2}, {-0.2, 0.9}};
  EXPECT_LE(symplectic_defect(shear(c, true)), 1e-15);
  EXPECT_LE(symplectic_defect(shear(c, false)), 1e-15);
}

TEST(RandomSymplectic, GramMatrixHasUnitSymplecticEigenvalue) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const RealMatrix s = random_symplectic(1, seed, 1.0);
    EXPECT_NEAR(symplectic_eigenvalues(transpose(s) * s).min(), 1.0, 1e-10);
  }
  const RealMatrix sq = squeeze(1, 0, 0.8);
  EXPECT_NEAR(symplectic_eigenvalues(transpose(sq) * sq).min(), 1.0, 1e-12);
}
