#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "wgb/errors.hpp"
#include "wgb/fourier.hpp"
#include "wgb/smoothing.hpp"

using namespace wgb;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<GroupDescriptor> all_groups() {
  return {descriptor(GroupId::torus(1)), descriptor(GroupId::torus(2)),
          descriptor(GroupId::torus(3)), descriptor(GroupId::su2()),
          descriptor(GroupId::so3())};
}

const BumpProfile kPaper{ProfileId::paper};
const BumpProfile kPlateau{ProfileId::plateau};

}  // namespace

TEST(Profile, ShapeAndParse) {
  EXPECT_EQ(kPaper(0.0), 1.0);
  EXPECT_NEAR(kPaper(0.5), std::exp(-1.0 / 3.0), 1e-15);
  EXPECT_EQ(kPaper(1.0), 0.0);
  EXPECT_EQ(kPlateau(0.4), 1.0);
  EXPECT_EQ(kPlateau(1.2), 0.0);
  EXPECT_GT(kPlateau(0.75), 0.0);
  EXPECT_LT(kPlateau(0.75), 1.0);
  EXPECT_EQ(BumpProfile::parse("plateau").label(), "plateau");
  EXPECT_THROW(BumpProfile::parse("gauss"), ConfigError);
}

TEST(Profile, DerivativesMatchFiniteDifferences) {
  for (const auto& prof : {kPaper, kPlateau})
    for (double y1 : {0.1, 0.35, 0.62}) {
      const double perp2 = 0.04, h = 1e-4;
      auto f = [&](double y) { return prof(std::sqrt(y * y + perp2)); };
      const double d1 = (f(y1 + h) - f(y1 - h)) / (2 * h);
      const double d2 = (f(y1 + h) - 2 * f(y1) + f(y1 - h)) / (h * h);
      EXPECT_NEAR(prof.directional_derivative(0, y1, perp2), f(y1), 1e-14);
      EXPECT_NEAR(prof.directional_derivative(1, y1, perp2), d1, 1e-6);
      EXPECT_NEAR(prof.directional_derivative(2, y1, perp2), d2, 1e-5);
    }
}

// Reference values by adaptive quadrature of the radial Fourier integrals
// (cosine / J0 / sine transforms of the profile).
TEST(Transform, MatchesIndependentQuadrature) {
  struct Row {
    double x, r1, r2, r3;
  };
  const Row rows[] = {
      {0.0, 1.206900322437876, 1.2681121611275958, 1.1990039070191998},
      {0.7, 0.12155582219533925, 0.258784752373427, 0.3398823314841924},
      {1.3, -0.04419788908438106, -0.06064316875445404, -0.05046640975765394},
      {3.1, 0.002244185479704088, 0.00378301049460875, 0.002453049951885772},
  };
  const auto& F1 = BumpTransform::get(kPaper, 1);
  const auto& F2 = BumpTransform::get(kPaper, 2);
  const auto& F3 = BumpTransform::get(kPaper, 3);
  for (const auto& r : rows) {
    EXPECT_NEAR(F1(r.x), r.r1, 1e-12);
    EXPECT_NEAR(F2(r.x), r.r2, 1e-10);
    EXPECT_NEAR(F3(r.x), r.r3, 1e-10);
  }
  EXPECT_NEAR(F1.at_zero(), 1.206900322437876, 1e-13);
}

TEST(Transform, ZerosAreSignChanges) {
  const auto& F = BumpTransform::get(kPaper, 1);
  ASSERT_GE(F.zeros().size(), 6u);
  EXPECT_NEAR(F.zeros()[0], 0.7952246722388198, 1e-12);
  EXPECT_NEAR(F.zeros()[1], 1.4146445291142848, 1e-12);
  EXPECT_NEAR(F.zeros()[5], 3.7083244556639285, 1e-12);
  for (double z : F.zeros()) {
    EXPECT_LT(F(z - 1e-6) * F(z + 1e-6), 0.0);
  }
  // 121 sign changes on (0, 64] for the 1-d default bump
  EXPECT_EQ(F.zeros().size(), 121u);
}

TEST(Transform, TailConstantsDominate) {
  for (int r = 1; r <= 3; ++r)
    for (const auto& prof : {kPaper, kPlateau}) {
      const auto& F = BumpTransform::get(prof, r);
      for (int k : {2, 4, 6})
        for (std::size_t i = 0; i < F.grid().size(); i += 17) {
          const double x = F.grid()[i];
          if (x < 1.0) continue;
          EXPECT_LE(std::abs(F.table()[i]), F.tail_constant(k) / std::pow(x, k) + 1e-15)
              << "rank " << r << " k " << k << " x " << x;
        }
      EXPECT_THROW(F.tail_constant(3), DomainError);
    }
}

TEST(SmoothingDegree, Admissibility) {
  const auto su2 = descriptor(GroupId::su2());
  EXPECT_EQ(smoothing_degree(su2, 1.5), 1);
  EXPECT_EQ(smoothing_degree(su2, 5.0), 3);
  EXPECT_EQ(smoothing_degree(su2, 6.0), 4);
  EXPECT_THROW(smoothing_degree(su2, 1.4), DomainError);
  const auto t1 = descriptor(GroupId::torus(1));
  EXPECT_EQ(smoothing_degree(t1, 10.0), 3);
  EXPECT_THROW(smoothing_degree(t1, 3.0), DomainError);
}

TEST(Kernel, TrivialCoefficientIsOneAndAllBounded) {
  for (const auto& G : all_groups())
    for (double M : {5.0, 10.0, 20.0}) {
      if (M < G.admissible_level()) continue;
      for (const auto& prof : {kPaper, kPlateau}) {
        const auto K = kernel_coefficients(G, M, prof);
        const auto triv = make_irrep(G, 0);
        EXPECT_NEAR(K.at(triv), 1.0, 1e-12) << G.id.label() << " M " << M;
        for (const auto& [ir, a] : K.coeffs) {
          EXPECT_LE(std::abs(a), ir.dim + 1e-10);
          EXPECT_LT(ir.level(), M);
        }
      }
    }
}

TEST(Kernel, PlateauReproducesLowFrequencies) {
  for (const auto& G : all_groups())
    for (double M : {5.0, 10.0, 20.0}) {
      if (M < G.admissible_level()) continue;
      const auto K = kernel_coefficients(G, M, kPlateau);
      const double reach = G.a * K.M0 / 2;
      for (const auto& [ir, a] : K.coeffs)
        if (ir.level() <= reach) EXPECT_NEAR(a, ir.dim, 1e-10) << ir.label();
    }
}

TEST(Kernel, TorusCoefficientIsBumpAtScaledFrequency) {
  const auto G = descriptor(GroupId::torus(1));
  const int M0 = 4;
  for (int m = 0; m <= 4; ++m) {
    const auto ir = make_irrep(G, 0, {m, 0, 0});
    EXPECT_NEAR(kernel_coefficient(G, M0, ir, kPaper), kPaper(2.0 * m / M0), 1e-15);
  }
}

TEST(Kernel, Su2CoefficientsFromWeylDensity) {
  // a_j = sum_mu [eta(mu / (a M0)) - (1/2) eta(|-2 + mu/(a M0)|) - (1/2) eta(|2 + mu/(a M0)|)]
  const auto G = descriptor(GroupId::su2());
  const int M0 = 3;
  for (int n = 0; n <= 6; ++n) {
    double expected = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double mu = (n - 2.0 * k) / 2.0, s = mu / (G.a * M0);
      expected += kPaper(std::abs(s)) - 0.5 * kPaper(std::abs(-2 + s)) - 0.5 * kPaper(std::abs(2 + s));
    }
    EXPECT_NEAR(kernel_coefficient(G, M0, make_irrep(G, n), kPaper), expected, 1e-14);
  }
}

TEST(Decay, PhiClosedFormsAndScaleLaw) {
  for (int n : {1, 2, 3})
    for (double t : {0.3, 1.0, 7.0}) {
      const auto d = decay_infimum(n, Modulus::power(1.0), t);
      EXPECT_NEAR(d.value, std::sqrt(n), 1e-10);
      EXPECT_TRUE(d.boundary);
    }
  // g = t^(1/2): phi(t) = h* sqrt(t) with h* from a 1-d minimisation
  const double h1 = 2.107138438067494, h3 = 6.1179509282238005;
  for (double t : {0.5, 2.0, 10.0}) {
    EXPECT_NEAR(decay_infimum(1, Modulus::power(0.5), t).value, h1 * std::sqrt(t), 1e-9 * std::sqrt(t));
    EXPECT_NEAR(decay_infimum(3, Modulus::power(0.5), t).value, h3 * std::sqrt(t), 1e-9 * std::sqrt(t));
  }
  EXPECT_NEAR(decay_infimum(3, Modulus::power(0.5), 1.0).argmin, 0.4721359551663778, 1e-6);
  EXPECT_NEAR(decay_c_max(3), 2 * (std::sqrt(12.0) - 3), 1e-15);
}

TEST(Decay, BudgetClosedForm) {
  const double c = (std::sqrt(17.0) - 3) / 2;
  for (int n : {1, 3})
    for (double p : {0.5, 1.0})
      for (double M : {2.0, 5.0, 10.0}) {
        const double b = fourier_decay_budget(n, Modulus::power(p), M, c);
        EXPECT_LE(b, 9 * std::pow(n, 3 - 2 * p) * std::pow(M, 2 - 2 * p));
      }
}

TEST(PerFunction, DominatesDifferenceForBandLimitedFunction) {
  // f = Re chi_1 on su2; f^ at j=1 is (1/3) I, zero elsewhere.
  const auto G = descriptor(GroupId::su2());
  const auto ir = make_irrep(G, 2);
  std::map<std::string, CMatrix> f_hat{{ir.label(), CMatrix::Identity(3, 3) / 3.0},
                                       {"j=1/2", CMatrix::Zero(2, 2)},
                                       {"j=3/2", CMatrix::Zero(4, 4)}};
  const auto xs = haar_sample(G, 4, 6);
  const auto nu1 = DiscreteMeasure::uniform({xs[0], xs[1], xs[2]});
  const auto nu2 = DiscreteMeasure::uniform({xs[3], xs[4], xs[5]});
  double diff = 0.0;
  for (int k = 0; k < 3; ++k)
    diff += (character(G, ir, xs[k]).real() - character(G, ir, xs[k + 3]).real()) / 3.0;
  // f = chi_1 has modulus g(t) = 3 t (Lipschitz constant <= d |lambda|)
  const auto g = Modulus::power(1.0);
  const auto b = per_function_bound(G, f_hat, g, 2.0, nu1, nu2, kPaper);
  EXPECT_GE(3.0 * b.value, std::abs(diff));
  EXPECT_THROW(per_function_bound(G, {}, g, 2.0, nu1, nu2, kPaper), DomainError);
}
