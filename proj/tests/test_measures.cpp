#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "steerkit/measures.hpp"
#include "steerkit/sampling.hpp"

using namespace steerkit;

namespace {

CanonicalCoefficients coeffs(const Vector3& sigma) {
  FanoForm f;
  f.T = sigma.asDiagonal();
  return canonical_coefficients(f);
}

const double kSqrt2 = std::numbers::sqrt2;
const double kSqrt3 = std::numbers::sqrt3;

// Frozen from a 30-digit mpmath evaluation of max{0, (w sqrt(n) - 1)/(sqrt(n) - 1)}.
constexpr double kS3Werner08 = 0.526794919243112270647;
constexpr double kS2Werner08 = 0.317157287525380990240;
constexpr double kS3Werner09 = 0.763397459621556135324;
constexpr double kS2Werner09 = 0.658578643762690495120;
constexpr double kS3Werner06 = 0.0535898384862245412945;

/// Random physical canonical X parameters (a3, b3, c) by rejection.
struct CanonicalDraw {
  double a3, b3;
  Vector3 c;
};

CanonicalDraw draw_canonical(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    CanonicalDraw d{u(rng), u(rng), Vector3(u(rng), u(rng), u(rng))};
    const Matrix4c m = fano_matrix(FanoForm{Vector3(0, 0, d.a3), Vector3(0, 0, d.b3), d.c.asDiagonal()});
    Eigen::SelfAdjointEigenSolver<Matrix4c> eig(m, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() >= 0.0) return d;
  }
}

}  // namespace

TEST(ClosedForms, F2) {
  EXPECT_NEAR(f2_closed(coeffs({1, 1, 1})), kSqrt2, 1e-15);
  EXPECT_NEAR(f2_closed(canonical_coefficients(werner_fano(0.8))), 0.8 * kSqrt2, 1e-15);
  EXPECT_EQ(f2_closed(coeffs({0, 0, 0})), 0.0);
}

TEST(ClosedForms, F3) {
  EXPECT_NEAR(f3_closed(coeffs({1, 1, 1})), kSqrt3, 1e-15);
  for (double w : {0.2, 0.5, 0.9}) EXPECT_NEAR(f3_closed(canonical_coefficients(werner_fano(w))), w * kSqrt3, 1e-15);
  EXPECT_NEAR(f3_closed(coeffs({1, 0, 0})), 1.0, 1e-15);
  EXPECT_EQ(steering_s3(coeffs({1, 0, 0})), 0.0);
}

TEST(Steering, Examples) {
  EXPECT_NEAR(steering_s2(coeffs({1, 1, 1})), 1.0, 1e-15);
  EXPECT_NEAR(steering_s3(coeffs({1, 1, 1})), 1.0, 1e-15);
  const auto w08 = canonical_coefficients(werner_fano(0.8));
  EXPECT_NEAR(steering_s3(w08), kS3Werner08, 1e-14);
  EXPECT_NEAR(steering_s2(w08), kS2Werner08, 1e-14);
  EXPECT_NEAR(steering_s3(canonical_coefficients(werner_fano(1 / kSqrt3))), 0.0, 1e-15);
}

TEST(Steering, IndependentOfLocalBlochVectors) {
  FanoForm f = werner_fano(0.7);
  const double s3 = steering_s3(canonical_coefficients(f));
  f.a = Vector3(0.1, 0.0, 0.05);
  f.b = Vector3(0.0, -0.1, 0.0);
  EXPECT_EQ(steering_s3(canonical_coefficients(f)), s3);
}

TEST(Horodecki, MAndBellMax) {
  FanoForm bell;
  bell.T = Vector3(1, -1, 1).asDiagonal();
  EXPECT_NEAR(horodecki_m(bell), 2.0, 1e-15);
  EXPECT_NEAR(bell_chsh_max(bell), 2 * kSqrt2, 1e-15);
  for (double w : {0.3, 0.6}) EXPECT_NEAR(horodecki_m(werner_fano(w)), 2 * w * w, 1e-15);
  EXPECT_NEAR(bell_chsh_max(werner_fano(1 / kSqrt2)), 2.0, 1e-15);
  EXPECT_EQ(horodecki_m(FanoForm{}), 0.0);
  EXPECT_EQ(bell_chsh_max(FanoForm{}), 0.0);
}

TEST(Nonlocality, N2Examples) {
  EXPECT_NEAR(nonlocality_n2(coeffs({1, 1, 1})), 1.0, 1e-15);
  EXPECT_NEAR(nonlocality_n2(canonical_coefficients(werner_fano(0.8))), kS2Werner08, 1e-14);
  EXPECT_EQ(nonlocality_n2(canonical_coefficients(werner_fano(0.5))), 0.0);
}

TEST(Concurrence, Examples) {
  for (BellState which : {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus})
    EXPECT_NEAR(concurrence(bell_state(which)), 1.0, 1e-7);
  const DensityMatrix partial = pure_state(Vector4c(std::sqrt(0.9), 0, 0, std::sqrt(0.1)));
  EXPECT_NEAR(concurrence(partial), 0.6, 1e-7);
  EXPECT_NEAR(oracle::concurrence(partial.matrix()), 0.6, 1e-12);
  EXPECT_NEAR(concurrence(werner_state(0.8)), 0.7, 1e-12);
  EXPECT_EQ(concurrence(maximally_mixed()), 0.0);
}

TEST(Concurrence, ProductPureStateIsZero) {
  const DensityMatrix product = pure_state(Vector4c(0.6, 0.8, 0, 0));
  EXPECT_NEAR(concurrence(product), 0.0, 1e-7);
}

TEST(Concurrence, AgreesWithSingularValueOracle) {
  // Full rank: 1e-9. Rank-deficient states put exact zeros in the spectrum of
  // rho rho_tilde, where the square root magnifies eigensolver noise of order
  // 1e-17 to about 1e-8.
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5000; ++trial) {
    const int rank = 1 + trial % 4;
    const oracle::M4 raw = oracle::random_state(rng, rank);
    const double tol = rank == 4 ? 1e-9 : 5e-8;
    EXPECT_NEAR(concurrence(validate_density(raw)), oracle::concurrence(raw), tol) << "rank " << rank;
  }
}

TEST(XConcurrence, Examples) {
  EXPECT_NEAR(x_concurrence(x_reduce(werner_state(0.8))), 0.7, 1e-15);
  EXPECT_NEAR(x_concurrence(XStateParams{{0.05, 0.45, 0.45, 0.05}, 0.0, 0.4}), 0.7, 1e-15);
  EXPECT_EQ(x_concurrence(XStateParams{{0.25, 0.25, 0.25, 0.25}, 0.0, 0.0}), 0.0);
  EXPECT_NEAR(x_concurrence(XStateParams{{0.5, 0.0, 0.0, 0.5}, 0.5, 0.0}), 1.0, 1e-15);
}

TEST(XConcurrence, MatchesGeneralConcurrence) {
  const SamplerSpec spec{SamplerKind::XState, 4, 5, 10000};
  for (std::uint64_t i = 0; i < spec.count; ++i) {
    const DensityMatrix rho = sample_state(spec, i);
    ASSERT_NEAR(x_concurrence(x_reduce(rho)), concurrence(rho), 1e-9) << "index " << i;
  }
}

TEST(CanonicalXConcurrence, Examples) {
  EXPECT_NEAR(canonical_x_concurrence(0, 0, Vector3(-0.8, -0.8, -0.8)), 0.7, 1e-15);
  EXPECT_EQ(canonical_x_concurrence(0, 0, Vector3::Zero()), 0.0);
  try {
    canonical_x_concurrence(0.9, 0.9, Vector3(0, 0, -0.5));
    ADD_FAILURE() << "expected Unphysical";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unphysical);
  }
}

TEST(CanonicalXConcurrence, LocalBlochComponentsNeverReduceEntanglement) {
  // E(a3, b3, c) >= E(0, 0, c) on a grid of c
  int checked = 0;
  for (double c1 = -1; c1 <= 1.0001; c1 += 0.25)
    for (double c2 = -1; c2 <= 1.0001; c2 += 0.25)
      for (double c3 = -1; c3 <= 1.0001; c3 += 0.25) {
        const Vector3 c(c1, c2, c3);
        double base = 0.0, shifted = 0.0;
        try {
          base = canonical_x_concurrence(0.0, 0.0, c);
          shifted = canonical_x_concurrence(0.2, 0.2, c);
        } catch (const Error&) {
          continue;
        }
        EXPECT_GE(shifted, base - 1e-15) << c.transpose();
        ++checked;
      }
  EXPECT_GT(checked, 50);
}

TEST(CanonicalXConcurrence, MatchesGeneralConcurrence) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10000; ++trial) {
    const CanonicalDraw d = draw_canonical(rng);
    const DensityMatrix rho = canonical_state(Vector3(0, 0, d.a3), Vector3(0, 0, d.b3), d.c);
    ASSERT_NEAR(canonical_x_concurrence(d.a3, d.b3, d.c), concurrence(rho), 1e-9) << trial;
  }
}

TEST(BellDiagonalConcurrence, Examples) {
  EXPECT_NEAR(bell_diagonal_concurrence(0.85), 0.7, 1e-15);
  EXPECT_EQ(bell_diagonal_concurrence(0.5), 0.0);
  EXPECT_EQ(bell_diagonal_concurrence(1.0), 1.0);
}

TEST(S3FromPurity, Examples) {
  EXPECT_EQ(s3_from_purity(0.25), 0.0);
  EXPECT_NEAR(s3_from_purity(0.73), kS3Werner08, 1e-14);
  EXPECT_EQ(s3_from_purity(0.5), 0.0);
  for (double bad : {0.2, 1.1}) {
    try {
      s3_from_purity(bad);
      ADD_FAILURE() << "expected DomainError for " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::DomainError);
    }
  }
}

TEST(S3FromPurity, MatchesSteeringS3OnBellDiagonalStates) {
  const SamplerSpec spec{SamplerKind::BellDiagonal, 4, 8, 10000};
  for (std::uint64_t i = 0; i < spec.count; ++i) {
    const DensityMatrix rho = sample_state(spec, i);
    ASSERT_NEAR(s3_from_purity(purity(rho)), steering_s3(canonical_coefficients(fano_decompose(rho))), 1e-12);
  }
}

TEST(WernerReport, Examples) {
  const WernerReport r = werner_report(0.9);
  EXPECT_NEAR(r.e, 0.85, 1e-15);
  EXPECT_NEAR(r.s3, kS3Werner09, 1e-14);
  EXPECT_NEAR(r.s2, kS2Werner09, 1e-14);
  EXPECT_NEAR(r.n3, 0.5, 1e-15);
  EXPECT_EQ(werner_report(0.8).n3, 0.0);
  EXPECT_EQ(werner_report(1.0 / 3.0).e, 0.0);
  EXPECT_THROW(werner_report(1.01), Error);
}

TEST(WernerReport, AgreesWithGeneralPipeline) {
  for (double w = 0.0; w <= 1.0; w += 0.05) {
    const WernerReport closed = werner_report(w);
    const MeasureReport full = analyze(werner_state(w));
    EXPECT_NEAR(closed.e, full.concurrence, 1e-12) << w;
    EXPECT_NEAR(closed.s3, full.s3, 1e-12) << w;
    EXPECT_NEAR(closed.s2, full.s2, 1e-12) << w;
    EXPECT_NEAR(closed.purity, full.purity, 1e-12) << w;
    EXPECT_NEAR(closed.lambda1, eigvals_hermitian(werner_state(w))(0), 1e-12) << w;
    // N3 => N2 <=> S2 => S3 => E
    EXPECT_TRUE(closed.n3 == 0 || closed.n2 > 0);
    EXPECT_TRUE(closed.s2 == 0 || closed.s3 > 0);
    EXPECT_TRUE(closed.s3 == 0 || closed.e > 0);
  }
}

TEST(Analyze, Examples) {
  const MeasureReport bell = analyze(bell_state(BellState::PhiPlus));
  EXPECT_NEAR(bell.s2, 1.0, 1e-14);
  EXPECT_NEAR(bell.s3, 1.0, 1e-14);
  EXPECT_NEAR(bell.concurrence, 1.0, 1e-7);
  EXPECT_NEAR(bell.b_max, 2 * kSqrt2, 1e-14);

  const MeasureReport mixed = analyze(maximally_mixed());
  EXPECT_EQ(mixed.s2 + mixed.s3 + mixed.n2 + mixed.concurrence + mixed.b_max, 0.0);
  EXPECT_NEAR(mixed.purity, 0.25, 1e-15);

  const MeasureReport w06 = analyze(werner_state(0.6));
  EXPECT_NEAR(w06.concurrence, 0.4, 1e-12);
  EXPECT_NEAR(w06.s3, kS3Werner06, 1e-14);
  EXPECT_EQ(w06.s2, 0.0);
}

TEST(Hierarchy, StrictGapWitnesses) {
  const MeasureReport w06 = analyze(werner_state(0.6));
  EXPECT_GT(w06.s3, 0.0);
  EXPECT_EQ(w06.s2, 0.0);
  const MeasureReport w04 = analyze(werner_state(0.4));
  EXPECT_GT(w04.concurrence, 0.0);
  EXPECT_EQ(w04.s3, 0.0);
}

TEST(Hierarchy, HoldsOnRandomStates) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100000; ++trial) {
    const DensityMatrix rho = validate_density(oracle::random_state(rng, 1 + trial % 4));
    const FanoForm f = fano_decompose(rho);
    const CanonicalCoefficients c = canonical_coefficients(f);
    const double s2 = steering_s2(c), s3 = steering_s3(c), n2 = nonlocality_n2(c);
    ASSERT_LE(std::abs(s2 - n2), 1e-15);
    ASSERT_TRUE(s2 == 0.0 || s3 > 0.0);
    // Horodecki: CHSH violation iff N2 > 0 (tie band of 1e-12 around the boundary)
    const double b = bell_chsh_max(f);
    if (std::abs(b - 2.0) > 1e-12) {
      ASSERT_EQ(b > 2.0, n2 > 0.0) << b;
    }
    if (trial % 10 == 0) {
      const double e = concurrence(rho);
      ASSERT_TRUE(s3 <= 1e-9 || e > 1e-9);
      ASSERT_GE(e, s3 - 1e-9);
    }
  }
}
