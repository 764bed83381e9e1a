#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hbarcheck/gaussian.hpp"
#include "oracles.hpp"

using namespace hbarcheck;
using std::numbers::pi;

namespace {

const GaussianState kCoherent(RealMatrix::diagonal({0.5, 0.5}));

// S D Sᵀ with symplectic eigenvalues drawn from [lo, hi].
RealMatrix random_williamson(std::size_t n, std::mt19937_64& rng, double lo, double hi,
                             std::uint64_t seed) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> d(2 * n);
  for (std::size_t j = 0; j < n; ++j) d[j] = d[j + n] = u(rng);
  const RealMatrix s = random_symplectic(n, seed);
  return symmetrized(s * RealMatrix::diagonal(d) * transpose(s));
}

}  // namespace

TEST(GaussianWigner, CoherentPeak) {
  const double sx = 0.6, sp = 0.9;
  const GaussianState st(RealMatrix::diagonal({sx * sx, sp * sp}));
  EXPECT_NEAR(gaussian_wigner(st, {0.0, 0.0}), 1.0 / (2 * pi * sx * sp), 1e-15);
  EXPECT_NEAR(gaussian_wigner(st, {0.3, -0.4}), oracle::coherent_wigner(sx, sp, 0.3, -0.4),
              1e-15);
}

TEST(GaussianWigner, ValueAtMean) {
  std::mt19937_64 rng(1);
  const RealMatrix sigma = oracle::random_spd(4, rng);
  const GaussianState st({0.1, -0.2, 0.3, 0.4}, sigma);
  const double want = std::pow(2 * pi, -2.0) / std::sqrt(det(sigma));
  EXPECT_NEAR(gaussian_wigner(st, {0.1, -0.2, 0.3, 0.4}), want, 1e-12 * want);
}

TEST(GaussianWigner, NormalizedByQuadrature) {
  const GaussianState st({0.2, -0.1}, RealMatrix{{0.7, 0.25}, {0.25, 0.5}});
  const int m = 480;
  const double half = 12.0, h = 2 * half / m;
  double total = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      total += gaussian_wigner(st, {-half + (i + 0.5) * h, -half + (j + 0.5) * h});
  EXPECT_NEAR(total * h * h, 1.0, 1e-8);
}

TEST(GaussianWigner, DimensionMismatch) {
  try {
    gaussian_wigner(kCoherent, {0.0, 0.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(GaussianState, Invariants) {
  EXPECT_THROW(GaussianState(RealMatrix{{1.0, 0.1}, {0.2, 1.0}}), Error);
  EXPECT_THROW(GaussianState(RealMatrix::diagonal({1.0, 0.0})), Error);
  EXPECT_THROW(GaussianState(RealMatrix::diagonal({1.0, 1.0}), 0.0), Error);
  EXPECT_THROW(GaussianState({0.0}, RealMatrix::diagonal({1.0, 1.0})), Error);
  const GaussianState st(RealMatrix{{1, 0, 0.3, 0}, {0, 2, 0, 0}, {0.3, 0, 3, 0}, {0, 0, 0, 4}});
  EXPECT_EQ(st.modes(), 2u);
  EXPECT_EQ(st.sigma_xx(1, 1), 2.0);
  EXPECT_EQ(st.sigma_xp(0, 0), 0.3);
  EXPECT_EQ(st.sigma_pp(1, 1), 4.0);
}

TEST(CoherentWavefunction, UnitWidthValueAndNorm) {
  const double sx = std::sqrt(0.5);
  EXPECT_NEAR(coherent_wavefunction(sx, 0.0), std::pow(pi, -0.25), 1e-15);
  const int m = 20000;
  const double half = 15.0, h = 2 * half / m;
  double s = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double v = coherent_wavefunction(sx, -half + i * h);
    s += ((i == 0 || i == m) ? 0.5 : 1.0) * v * v;
  }
  EXPECT_NEAR(s * h, 1.0, 1e-10);
}

TEST(CoherentWavefunction, DensityHasVarianceSigmaSquared) {
  const double sx = 1.3;
  const int m = 40000;
  const double half = 20.0, h = 2 * half / m;
  double s = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double x = -half + i * h;
    const double v = coherent_wavefunction(sx, x);
    s += ((i == 0 || i == m) ? 0.5 : 1.0) * x * x * v * v;
  }
  EXPECT_NEAR(s * h, sx * sx, 1e-10);
}

TEST(CoherentWavefunction, EvenAndRejectsWidth) {
  for (double x : {0.1, 0.7, 2.5}) {
    EXPECT_EQ(coherent_wavefunction(0.9, x), coherent_wavefunction(0.9, -x));
  }
  try {
    coherent_wavefunction(0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveWidth);
  }
}

TEST(KlmCheck, CoherentExamples) {
  EXPECT_TRUE(klm_check(kCoherent, 1.0));
  EXPECT_FALSE(klm_check(kCoherent, 1.5));
  EXPECT_TRUE(klm_check(kCoherent, 0.5));
  EXPECT_THROW(klm_check(kCoherent, 0.0), Error);
  EXPECT_THROW(klm_check(kCoherent, -1.0), Error);
}

TEST(KlmCheck, MonotoneInHbar) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const GaussianState st(oracle::random_spd(2 * n, rng));
    bool seen_true = false;
    for (int i = 60; i >= 1; --i) {
      const bool ok = klm_check(st, 0.05 * i);
      if (seen_true) EXPECT_TRUE(ok) << "hbar' = " << 0.05 * i;
      seen_true = seen_true || ok;
    }
  }
}

TEST(RsiCheck, CoherentExamples) {
  EXPECT_EQ(rsi_check(kCoherent, 1.0), std::vector<bool>{true});
  EXPECT_EQ(rsi_check(kCoherent, 1.2), std::vector<bool>{false});
}

TEST(RsiCheck, ImpliedByQuantumCondition) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> h(0.2, 2.0);
  int passing = 0;
  for (int trial = 0; passing < 1000; ++trial) {
    ASSERT_LT(trial, 20000);
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const RealMatrix sigma = (trial % 2 == 0)
                                 ? oracle::random_spd(2 * n, rng)
                                 : random_williamson(n, rng, 0.5, 1.5, 7000u + trial);
    const GaussianState st(sigma);
    const double hp = h(rng);
    if (!klm_check(st, hp)) continue;
    ++passing;
    for (bool ok : rsi_check(st, hp)) EXPECT_TRUE(ok) << "trial " << trial;
  }
}

TEST(ClassifyGaussian, CoherentTrichotomy) {
  EXPECT_EQ(classify_gaussian(kCoherent, 1.0).label, GaussianLabel::QuantumPure);
  EXPECT_EQ(classify_gaussian(kCoherent, 0.5).label, GaussianLabel::QuantumMixed);
  EXPECT_EQ(classify_gaussian(kCoherent, 1.5).label, GaussianLabel::ClassicalOnly);
  const auto v = classify_gaussian(kCoherent, 1.0);
  EXPECT_TRUE(v.saturated);
  EXPECT_DOUBLE_EQ(v.hbar_critical, 2 * v.lambda_min);
}

TEST(ClassifyGaussian, TransitionAtCriticalHbar) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const GaussianState st(oracle::random_spd(2 * n, rng));
    const double hc = critical_hbar(st);
    EXPECT_NE(classify_gaussian(st, hc * (1 - 1e-6)).label, GaussianLabel::ClassicalOnly);
    EXPECT_NE(classify_gaussian(st, hc).label, GaussianLabel::ClassicalOnly);
    EXPECT_EQ(classify_gaussian(st, hc * (1 + 1e-6)).label, GaussianLabel::ClassicalOnly);
  }
}

TEST(ClassifyGaussian, LabelInvariantUnderSymplecticMaps) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const RealMatrix sigma = oracle::random_spd(2 * n, rng);
    const RealMatrix s = random_symplectic(n, 500u + trial);
    const GaussianState a(sigma), b(symmetrized(transpose(s) * sigma * s));
    for (double hp : {0.3, 1.0, 2.5}) {
      EXPECT_EQ(classify_gaussian(a, hp).label, classify_gaussian(b, hp).label);
    }
  }
}

TEST(ClassifyGaussian, PureSqueezedTwoMode) {
  const RealMatrix s = random_symplectic(2, 3);
  const GaussianState st(symmetrized(0.5 * (s * transpose(s))));
  const auto v = classify_gaussian(st, 1.0);
  EXPECT_EQ(v.label, GaussianLabel::QuantumPure);
  EXPECT_EQ(v.rsi_satisfied.size(), 2u);
}

TEST(CriticalHbar, Examples) {
  EXPECT_NEAR(critical_hbar(kCoherent), 1.0, 1e-14);
  EXPECT_NEAR(critical_hbar(GaussianState(RealMatrix::diagonal({2.0, 2.0}))), 4.0, 1e-13);
  std::mt19937_64 rng(8);
  const RealMatrix sigma = oracle::random_spd(4, rng);
  const double base = critical_hbar(GaussianState(sigma));
  for (double c : {0.1, 3.0, 17.0}) {
    EXPECT_NEAR(critical_hbar(GaussianState(c * sigma)), c * base, 1e-10 * c * base);
  }
}

TEST(GaussianPurity, Examples) {
  EXPECT_NEAR(gaussian_purity(kCoherent, 1.0), 1.0, 1e-12);
  EXPECT_NEAR(gaussian_purity(kCoherent, 0.5), 0.5, 1e-12);
  const GaussianState two(RealMatrix::diagonal({0.5, 1.0, 0.5, 1.0}));
  EXPECT_NEAR(gaussian_purity(two, 1.0), 0.5, 1e-12);
  try {
    gaussian_purity(kCoherent, 1.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAQuantumState);
  }
}

TEST(GaussianPurity, AtCriticalHbar) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const double a = 0.4 + 0.1 * trial;
    const RealMatrix s = random_symplectic(n, 900u + trial);
    const GaussianState degenerate(symmetrized(a * (s * transpose(s))));
    EXPECT_NEAR(gaussian_purity(degenerate, critical_hbar(degenerate)), 1.0, 1e-6);
    if (n > 1) {
      const GaussianState spread(random_williamson(n, rng, 0.5, 2.0, 950u + trial));
      EXPECT_LT(gaussian_purity(spread, critical_hbar(spread)), 1.0 - 1e-6);
    }
  }
}

TEST(GaussianPurity, OneExactlyWhenPure) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const GaussianState st(random_williamson(n, rng, 0.5, 1.5, 300u + trial));
    for (double hp : {0.4, 0.8, 1.0}) {
      if (!klm_check(st, hp)) continue;
      const bool pure = classify_gaussian(st, hp).label == GaussianLabel::QuantumPure;
      EXPECT_EQ(pure, std::abs(gaussian_purity(st, hp) - 1.0) <= 1e-9);
    }
  }
}
