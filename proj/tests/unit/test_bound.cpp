#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wgb/bound.hpp"
#include "wgb/errors.hpp"
#include "wgb/transport.hpp"

using namespace wgb;

namespace {

constexpr double kPi = std::numbers::pi;
const BumpProfile kPaper{ProfileId::paper};

DiscreteMeasure random_measure(const GroupDescriptor& G, std::uint64_t seed, std::size_t n) {
  DiscreteMeasure m;
  m.atoms = haar_sample(G, seed, n);
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> U(0.05, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += m.weights.emplace_back(U(rng));
  for (double& w : m.weights) w /= s;
  return m;
}

}  // namespace

// Main integrals from an independent adaptive quadrature over (0, 64) split
// at the zeros of the transform.
TEST(Psi, MainIntegralMatchesReference) {
  struct Row {
    const char* group;
    double p, M, main;
  };
  const Row rows[] = {
      {"su2", 1.0, 5.0, 4.675596726634463},
      {"su2", 0.5, 5.0, 2.983468990718034},
      {"torus(1)", 1.0, 10.0, 0.7341788259311584},
      {"torus(1)", 0.5, 10.0, 1.156278244007241},
  };
  for (const auto& r : rows) {
    const auto G = descriptor(GroupId::parse(r.group));
    const auto ps = psi(G, Modulus::power(r.p), r.M, kPaper);
    EXPECT_EQ(ps.M0, 3);
    EXPECT_NEAR(ps.main, r.main, 1e-8 * r.main) << r.group << " p=" << r.p;
    EXPECT_NEAR(ps.value, ps.main + ps.tail, 1e-15 * ps.value);
    EXPECT_GT(ps.tail, 0.0);
    EXPECT_FALSE(ps.tail_warning);
    EXPECT_LT(ps.tolerance, 1e-6 * ps.value);
  }
}

TEST(Psi, PowerScaling) {
  for (const auto& G : {descriptor(GroupId::su2()), descriptor(GroupId::torus(2))})
    for (double p : {0.5, 1.0}) {
      const double thr = G.admissible_level();
      const auto a = psi(G, Modulus::power(p), 3 * thr, kPaper);
      const auto b = psi(G, Modulus::power(p), 6 * thr, kPaper);
      EXPECT_NEAR(a.value / b.value, std::pow(2.0, p), 1e-12);
    }
}

TEST(Psi, TableModulusAgreesWithEquivalentPower) {
  // g(t) = t written as a table saturating beyond every reachable distance
  const auto G = descriptor(GroupId::so3());
  const auto tab = Modulus::table({1e4}, {1e4});
  const auto a = psi(G, tab, 9.0, kPaper), b = psi(G, Modulus::power(1.0), 9.0, kPaper);
  EXPECT_NEAR(a.main, b.main, 1e-9 * b.main);
}

TEST(Phi, LipschitzIsSqrtN) {
  for (int n : {1, 2, 3})
    for (double t : {1.0, 13.0, 400.0}) EXPECT_NEAR(phi(n, Modulus::power(1.0), t), std::sqrt(n), 1e-10);
}

TEST(Bound, DominatesExactTransport) {
  std::uint64_t seed = 100;
  for (const char* id : {"torus(1)", "torus(2)", "su2", "so3"}) {
    const auto G = descriptor(GroupId::parse(id));
    for (double p : {0.5, 1.0}) {
      const auto g = Modulus::power(p);
      const auto a = random_measure(G, ++seed, 12), b = random_measure(G, ++seed, 9);
      const double w = exact_wasserstein(G, g, a, b).cost;
      BoundEvaluator ev(G, g, a, b, kPaper, 40.0);
      for (double M : default_M_grid(G, 40.0, 4)) {
        const auto r = ev.at(M);
        EXPECT_GE(r.total + r.tolerance, w) << id << " p=" << p << " M=" << M;
      }
    }
  }
}

TEST(Bound, EvaluatorMatchesDirectEvaluation) {
  const auto G = descriptor(GroupId::so3());
  const auto a = random_measure(G, 3, 10), b = random_measure(G, 4, 10);
  BoundEvaluator ev(G, Modulus::power(0.5), a, b, kPaper, 30.0);
  for (double M : {3.0, 7.5, 29.0}) {
    const auto x = ev.at(M);
    const auto y = wg_bound(G, Modulus::power(0.5), a, b, M, kPaper);
    EXPECT_NEAR(x.total, y.total, 1e-12 * y.total);
    EXPECT_EQ(x.irreps_used, y.irreps_used);
  }
  EXPECT_THROW(ev.at(31.0), DomainError);
}

TEST(Bound, IdenticalMeasuresLeaveOnlyPsi) {
  const auto G = descriptor(GroupId::su2());
  const auto a = random_measure(G, 8, 6);
  const auto r = wg_bound(G, Modulus::power(1.0), a, a, 10.0, kPaper);
  EXPECT_EQ(r.fourier_sum, 0.0);
  EXPECT_NEAR(r.total, r.psi, 1e-15);
}

TEST(Bound, FourierSumByHand) {
  // torus(1), two Diracs: |e^{2 pi i m x} - 1|^2 / (4 pi^2 m^2) summed over 0 < |m| < M/(2 pi)
  const auto G = descriptor(GroupId::torus(1));
  GroupElement x;
  x.v = {0.2, 0, 0, 0};
  const auto r = wg_bound(G, Modulus::power(1.0), DiscreteMeasure::dirac(x),
                          DiscreteMeasure::dirac(identity(G)), 20.0, kPaper);
  double S = 0.0;
  for (int m = 1; m <= 3; ++m) S += 2 * (2 - 2 * std::cos(2 * kPi * m * 0.2)) / (4 * kPi * kPi * m * m);
  EXPECT_NEAR(r.fourier_sum, S, 1e-14);
  EXPECT_EQ(r.irreps_used, 6u);
  EXPECT_NEAR(r.total, r.psi + r.phi * std::sqrt(S), 1e-14);
}

TEST(Grid, ParsingAndDefaults) {
  const auto g = parse_M_grid("2:200:3");
  ASSERT_EQ(g.size(), 3u);
  EXPECT_NEAR(g[0], 2.0, 1e-12);
  EXPECT_NEAR(g[1], 20.0, 1e-12);
  EXPECT_NEAR(g[2], 200.0, 1e-12);
  EXPECT_THROW(parse_M_grid("2:1:3"), ConfigError);
  EXPECT_THROW(parse_M_grid("x"), ConfigError);
  const auto G = descriptor(GroupId::su2());
  const auto d = default_M_grid(G);
  EXPECT_NEAR(d.front(), 1.5, 1e-12);
  EXPECT_NEAR(d.back(), 1e3, 1e-9);
  const auto bp = breakpoint_M_grid(G, 4);
  EXPECT_EQ(bp, (std::vector<double>{1.5, 3.0, 4.5, 6.0}));
}

TEST(Optimize, PicksGridMinimum) {
  const auto G = descriptor(GroupId::so3());
  const auto a = random_measure(G, 30, 20), b = random_measure(G, 31, 20);
  const auto grid = default_M_grid(G, 60.0, 8);
  const auto [M, best] = optimize_M(G, Modulus::power(1.0), a, b, kPaper, grid);
  for (double m : grid) EXPECT_LE(best.total, wg_bound(G, Modulus::power(1.0), a, b, m, kPaper).total);
  EXPECT_EQ(M, best.M);
}

TEST(Gap, RelaxedDominatesExact) {
  const auto G = descriptor(GroupId::so3());
  const auto nu = random_measure(G, 40, 16);
  const auto r = haar_bound_from_gap(G, Modulus::power(1.0), nu, 12.0, kPaper);
  EXPECT_GE(r.relaxed.total, r.exact.total - 1e-12);
  EXPECT_GT(r.q_hat, 0.0);
  EXPECT_LT(r.q_hat, 1.0);
}

TEST(Gap, OptimizedBoundIsMonotoneInQ) {
  const auto G = descriptor(GroupId::su2());
  double prev = 0.0;
  for (double q : {1e-4, 1e-3, 1e-2, 1e-1}) {
    const auto [v, M] = optimized_gap_bound(G, Modulus::power(1.0), q, kPaper, 2000);
    EXPECT_GT(v, prev);
    EXPECT_GE(M, G.admissible_level());
    prev = v;
  }
}

TEST(Rate, PredictionFormula) {
  const double v = walk_rate_prediction(3, 1.0, 1, 1.0, 16.0);
  EXPECT_NEAR(v, 4.0 * std::exp(-1.5 * std::sqrt(15.0 / 6.0)), 1e-12);
}
