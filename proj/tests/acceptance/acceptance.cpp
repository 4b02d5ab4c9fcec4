// Acceptance checks. `acceptance --criterion N` runs one criterion and prints
// a single PASS/FAIL line; without arguments all ten run in order.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wgb/bound.hpp"
#include "wgb/errors.hpp"
#include "wgb/fourier.hpp"
#include "wgb/groups.hpp"
#include "wgb/modulus.hpp"
#include "wgb/smoothing.hpp"
#include "wgb/transport.hpp"
#include "wgb/walks.hpp"

using namespace wgb;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> geometric(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i)
    out[i] = lo * std::pow(hi / lo, count == 1 ? 0.0 : double(i) / (count - 1));
  return out;
}

DiscreteMeasure random_measure(const GroupDescriptor& G, std::mt19937_64& rng,
                               std::size_t n) {
  DiscreteMeasure m;
  m.atoms = haar_sample(G, rng(), n);
  std::uniform_real_distribution<double> U(0.05, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += m.weights.emplace_back(U(rng));
  for (double& w : m.weights) w /= s;
  return m;
}

// Atoms moved by exp of a small random algebra element, weights redrawn.
DiscreteMeasure perturbed(const GroupDescriptor& G, const DiscreteMeasure& m,
                          std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U(0.05, 1.0);
  DiscreteMeasure out;
  double s = 0.0;
  for (const auto& x : m.atoms) {
    std::vector<double> X(G.dimension);
    for (double& v : X) v = scale * N(rng);
    out.atoms.push_back(multiply(G, x, exp_algebra(G, X)));
    s += out.weights.emplace_back(U(rng));
  }
  for (double& w : out.weights) w /= s;
  return out;
}

std::vector<GroupDescriptor> dominance_groups() {
  return {descriptor(GroupId::torus(1)), descriptor(GroupId::torus(2)),
          descriptor(GroupId::su2()), descriptor(GroupId::so3())};
}

std::vector<GroupDescriptor> all_groups() {
  return {descriptor(GroupId::torus(1)), descriptor(GroupId::torus(2)),
          descriptor(GroupId::torus(3)), descriptor(GroupId::su2()),
          descriptor(GroupId::so3())};
}

// 1. bound + tolerance >= exact transport cost
Outcome certified_dominance() {
  const auto groups = dominance_groups();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> size(1, 64);
  int violations = 0, checks = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_gap = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& G = groups[trial % 4];
    const double p = (trial / 4) % 2 ? 1.0 : 0.5;
    const auto g = Modulus::power(p);
    const auto nu1 = random_measure(G, rng, size(rng));
    const auto nu2 = (trial / 8) % 2 ? perturbed(G, nu1, rng, 0.05)
                                     : random_measure(G, rng, size(rng));
    const auto lp = exact_wasserstein(G, g, nu1, nu2);
    worst_gap = std::max(worst_gap, std::abs(lp.duality_gap));
    const auto grid = geometric(G.admissible_level(), 40.0, 10);
    const BoundEvaluator eval(G, g, nu1, nu2, BumpProfile{}, grid.back());
    for (double M : grid) {
      const auto r = eval.at(M);
      ++checks;
      const double margin = r.total + r.tolerance - lp.cost;
      worst_margin = std::min(worst_margin, margin);
      if (margin < 0.0) {
        ++violations;
        std::fprintf(stderr, "violation: trial %d %s p=%g M=%g bound=%.17g lp=%.17g\n",
                     trial, G.id.label().c_str(), p, M, r.total, lp.cost);
      }
    }
  }
  return {violations == 0 && worst_gap <= 1e-9,
          fmt("%d checks, %d violations, smallest margin %.3e, max LP duality gap %.1e",
              checks, violations, worst_margin, worst_gap)};
}

// 2. truncated spectral gap of the p = 5 LPS set
Outcome lps_golden_value() {
  const auto G = descriptor(GroupId::so3());
  const auto nu = DiscreteMeasure::uniform(lps_generators(5).rotations);
  const double q = spectral_gap_estimate(G, nu, 25.5);
  const double target = std::sqrt(5.0) / 3;
  return {std::abs(q - target) <= 1e-9,
          fmt("q over levels <= 25 = %.15f, target sqrt(5)/3 = %.15f, difference %.3e",
              q, target, q - target)};
}

// 3. kernel coefficient invariants
Outcome kernel_invariants() {
  double worst_trivial = 0.0, worst_excess = -1e300, worst_plateau = 0.0;
  for (const auto& G : all_groups())
    for (double M : {5.0, 10.0, 20.0}) {
      for (auto prof : {ProfileId::paper, ProfileId::plateau}) {
        const auto K = kernel_coefficients(G, M, BumpProfile{prof});
        worst_trivial = std::max(worst_trivial, std::abs(K.at(make_irrep(G, 0)) - 1.0));
        const double reach = G.a * K.M0 / 2;
        for (const auto& [ir, a] : K.coeffs) {
          worst_excess = std::max(worst_excess, std::abs(a) - ir.dim);
          if (prof == ProfileId::plateau && ir.level() <= reach)
            worst_plateau = std::max(worst_plateau, std::abs(a - ir.dim));
        }
      }
    }
  return {worst_trivial <= 1e-12 && worst_excess <= 1e-10 && worst_plateau <= 1e-10,
          fmt("|a_trivial - 1| <= %.1e, max(|a| - d) = %.3e, plateau deviation %.1e",
              worst_trivial, worst_excess, worst_plateau)};
}

// Irreps entering the orthogonality and Parseval checks: spin <= 6, and
// frequencies |m| < 2.5 on torus(1), torus(2) or |m| < 1.5 on torus(3).
double orth_level(const GroupDescriptor& G) {
  if (!G.is_torus()) return 6.1;
  return 2 * kPi * (G.rank == 3 ? 1.5 : 2.5);
}

// 4. Casimir residuals, character orthogonality, Parseval
Outcome representation_oracles() {
  const double h = 1e-3;
  double worst_nonabelian = 0.0, worst_torus = 0.0;
  int torus_bad = 0;
  for (const auto& G : {descriptor(GroupId::su2()), descriptor(GroupId::so3())})
    for (const auto& ir : enumerate_irreps(G, 6.0 + 1e-9))
      worst_nonabelian = std::max(worst_nonabelian, casimir_relative_residual(G, ir, h));
  const auto t1 = descriptor(GroupId::torus(1));
  std::string torus_rows;
  for (int m = 1; m <= 6; ++m) {
    const double r = casimir_relative_residual(t1, make_irrep(t1, 0, {m, 0, 0}), h);
    worst_torus = std::max(worst_torus, r);
    if (r > 1e-5) ++torus_bad;
    torus_rows += fmt(" m=%d:%.2e", m, r);
  }
  std::fprintf(stderr, "torus(1) relative residuals:%s\n", torus_rows.c_str());

  double worst_orth = 0.0;
  for (const auto& G : all_groups()) {
    const auto irreps = enumerate_irreps(G, orth_level(G), true);
    for (std::size_t i = 0; i < irreps.size(); ++i)
      for (std::size_t j = i; j < irreps.size(); ++j) {
        const auto &a = irreps[i], &b = irreps[j];
        const double expect = i == j ? 1.0 : 0.0;
        const auto v = weyl_integral_complex(G, [&](std::span<const double> s) {
          const std::vector<double> X(s.begin(), s.end());
          const auto x = torus_point(G, X);
          return character(G, a, x) * std::conj(character(G, b, x));
        });
        worst_orth = std::max(worst_orth, std::abs(v - std::complex<double>(expect)));
      }
  }

  double worst_parseval = 0.0;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> N;
  for (const auto& G : all_groups()) {
    const auto irreps = enumerate_irreps(G, orth_level(G), true);
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<std::complex<double>> b;
      double expected = 0.0;
      for (std::size_t i = 0; i < irreps.size(); ++i) {
        b.emplace_back(N(rng), G.is_torus() ? N(rng) : 0.0);
        expected += std::norm(b.back());
      }
      const double v = weyl_integral(G, [&](std::span<const double> s) {
        const std::vector<double> X(s.begin(), s.end());
        const auto x = torus_point(G, X);
        std::complex<double> f = 0.0;
        for (std::size_t i = 0; i < irreps.size(); ++i) f += b[i] * character(G, irreps[i], x);
        return std::norm(f);
      });
      worst_parseval = std::max(worst_parseval, std::abs(v - expected) / std::max(1.0, expected));
    }
  }
  const bool pass = worst_nonabelian <= 1e-5 && torus_bad == 0 && worst_orth <= 1e-8 &&
                    worst_parseval <= 1e-8;
  return {pass, fmt("casimir su2/so3 max %.2e, torus(1) max %.2e (%d of 6 frequencies "
                    "above 1e-5), orthogonality %.1e, Parseval %.1e",
                    worst_nonabelian, worst_torus, torus_bad, worst_orth, worst_parseval)};
}

// 5. first-order, norm and Laplace bounds for the derived representation
Outcome derived_rep_bounds() {
  std::mt19937_64 rng(555);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> spin(0, 12);
  const auto su2 = descriptor(GroupId::su2()), so3 = descriptor(GroupId::so3());
  double sugiura = -1e300, taylor = -1e300, laplace = -1e300;
  for (int trial = 0; trial < 1000; ++trial) {
    int twice = spin(rng);
    const auto& G = (trial % 2 && twice % 2 == 0) ? so3 : su2;
    const auto ir = make_irrep(G, twice);
    std::vector<double> X(3);
    double xn = 0.0;
    for (double& v : X) xn += (v = N(rng)) * v;
    xn = std::sqrt(xn);
    const double u = U(rng);
    const CMatrix I = CMatrix::Identity(ir.dim, ir.dim);

    const CMatrix dX = derived_rep(G, ir, X);
    const double dn = op_norm(dX);
    sugiura = std::max(sugiura, dn - ir.level() * xn);

    std::vector<double> uX(X);
    for (double& v : uX) v *= u;
    const CMatrix R = irrep_matrix(G, ir, exp_algebra(G, uX)) - I - u * dX;
    taylor = std::max(taylor, op_norm(R) - 0.5 * u * u * dn * dn);

    CMatrix S = CMatrix::Zero(ir.dim, ir.dim);
    for (int k = 0; k < 3; ++k) {
      std::vector<double> Y(3, 0.0);
      Y[k] = u;
      const CMatrix D = irrep_matrix(G, ir, exp_algebra(G, Y)) - I;
      S += D.adjoint() * D;
    }
    const double lam = ir.level();
    const double bound = 3 * std::pow(std::abs(u) * lam, 3) + 3 * std::pow(u, 4) / 4 * std::pow(lam, 4);
    laplace = std::max(laplace, op_norm(S - u * u * ir.casimir * I) - bound);
  }
  return {sugiura <= 1e-8 && taylor <= 1e-8 && laplace <= 1e-8,
          fmt("max excess over the bound: norm %.2e, first-order %.2e, Laplace %.2e "
              "(1000 samples)", sugiura, taylor, laplace)};
}

// 6. Fourier decay budget for a capped power of the distance to e
Outcome decay_budget() {
  const auto G = descriptor(GroupId::su2());
  const auto e = identity(G);
  bool pass = true;
  std::string rows;
  for (double p : {0.5, 1.0}) {
    auto f = [&](const GroupElement& x) {
      return std::pow(std::min(geodesic_distance(G, e, x), 1.0), p);
    };
    const auto irreps = enumerate_irreps(G, 10.0 + 1e-9);
    std::vector<double> coeff;
    for (const auto& ir : irreps)
      coeff.push_back(weyl_integral(G, [&](std::span<const double> s) {
        const std::vector<double> X(s.begin(), s.end());
        const auto x = torus_point(G, X);
        return f(x) * character(G, ir, x).real();
      }));
    for (double M : {2.0, 5.0, 10.0}) {
      // class function: f^(pi) = (c / d) I, so d kappa ||f^||_HS^2 = kappa c^2
      double lhs = 0.0;
      for (std::size_t i = 0; i < irreps.size(); ++i)
        if (irreps[i].level() <= M + 1e-12) lhs += irreps[i].casimir * coeff[i] * coeff[i];
      const double budget = fourier_decay_budget(3, Modulus::power(p), M);
      pass = pass && lhs <= budget;
      rows += fmt(" p=%g M=%g: %.4g <= %.4g;", p, M, lhs, budget);
    }
  }
  const double c = (std::sqrt(17.0) - 3) / 2;
  double worst_ratio = 0.0;
  for (int n : {1, 2, 3})
    for (double p : {0.5, 1.0})
      for (double M : {2.0, 5.0, 10.0}) {
        const double b = fourier_decay_budget(n, Modulus::power(p), M, c);
        const double cap = 9 * std::pow(n, 3 - 2 * p) * std::pow(M, 2 - 2 * p);
        worst_ratio = std::max(worst_ratio, b / cap);
      }
  pass = pass && worst_ratio <= 1.0;
  return {pass, fmt("%s closed form at c=(sqrt17-3)/2: max budget/cap %.4f", rows.c_str(),
                    worst_ratio)};
}

// 7. rate slopes
Outcome rate_slopes() {
  const auto so3 = descriptor(GroupId::so3());
  const auto g1 = Modulus::power(1.0);
  std::vector<std::size_t> Ns;
  for (int e = 5; e <= 11; ++e) Ns.push_back(std::size_t{1} << e);

  const auto rows = empirical_experiment(so3, HaarMeasure{}, Ns, 20, g1, 7001);
  std::vector<double> lx, ly;
  for (const auto& r : rows) {
    lx.push_back(std::log(double(r.N)));
    ly.push_back(std::log(r.mean_bound));
  }
  const double s_emp = slope(lx, ly);

  std::vector<double> qy;
  for (std::size_t N : Ns) {
    double mean = 0.0;
    const int reps = 4;
    for (int r = 0; r < reps; ++r) {
      const auto A = haar_sample(so3, derive_seed(7002, N * 16 + r), N);
      mean += voronoi_quantization(so3, g1, A, 100000, derive_seed(7003, N * 16 + r)).value;
    }
    qy.push_back(std::log(mean / reps));
  }
  const double s_vor = slope(lx, qy);

  std::string gap_rows;
  bool gap_ok = true;
  for (const auto& G : {descriptor(GroupId::su2()), so3})
    for (double p : {0.5, 1.0}) {
      std::vector<double> lq, lb;
      for (double q : geometric(1e-5, 1e-2, 7)) {
        lq.push_back(std::log(q));
        lb.push_back(std::log(optimized_gap_bound(G, Modulus::power(p), q, BumpProfile{}, 2000).first));
      }
      const double s = slope(lq, lb), target = 2 * p / 3;
      gap_ok = gap_ok && std::abs(s - target) <= 0.25 * target;
      gap_rows += fmt(" %s p=%g: %.3f (target %.3f);", G.id.label().c_str(), p, s, target);
    }
  const bool emp_ok = s_emp >= -0.45 && s_emp <= -0.22;
  const bool vor_ok = s_vor >= -0.45 && s_vor <= -0.22;
  return {emp_ok && vor_ok && gap_ok,
          fmt("empirical slope %.3f, Voronoi slope %.3f, gap slopes:%s", s_emp, s_vor,
              gap_rows.c_str())};
}

// 8. walk decay: LPS exponential, golden-ratio rotation on the circle polynomial
Outcome walk_decay() {
  const auto so3 = descriptor(GroupId::so3());
  const auto nu = DiscreteMeasure::uniform(lps_generators(5).rotations);
  WalkOptions opt;
  opt.gap_certificate = std::sqrt(5.0) / 3;
  opt.max_level = 1e5;
  const auto steps = walk_evolve(so3, Modulus::power(1.0), nu, 40, opt);
  double worst_ratio = 0.0;
  int worst_k = 0, pinned = 0;
  for (int k = 5; k <= 40; ++k) {
    const double r = steps[k - 1].total / steps[k - 2].total;
    if (r > worst_ratio) {
      worst_ratio = r;
      worst_k = k;
    }
    if (r > 0.9) ++pinned;
  }

  const auto t1 = descriptor(GroupId::torus(1));
  GroupElement x;
  x.v = {(std::sqrt(5.0) - 1) / 2, 0, 0, 0};
  const DiscreteMeasure lazy{{identity(t1), x}, {0.5, 0.5}};
  WalkOptions topt;
  topt.exact_level = 2 * kPi * 400;
  topt.max_level = topt.exact_level;
  const int kmax = 1024;
  const auto tsteps = walk_evolve(t1, Modulus::power(1.0), lazy, kmax, topt);
  auto loglog = [&](int k0, int k1) {
    std::vector<double> a, b;
    for (int k = k0; k <= k1; ++k) {
      a.push_back(std::log(double(k)));
      b.push_back(std::log(tsteps[k - 1].total));
    }
    return slope(a, b);
  };
  const double s_early = loglog(64, 256), s_late = loglog(256, 1024);
  const double last_ratio = tsteps[kmax - 1].total / tsteps[kmax - 2].total;
  // polynomial: a finite, stable negative log-log slope, per-step ratio -> 1
  const bool torus_ok = std::isfinite(s_late) && s_late < 0.0 && s_late > -3.0 &&
                        std::abs(s_late - s_early) <= 0.5 && last_ratio > 0.99;
  return {worst_ratio <= 0.9 && torus_ok,
          fmt("LPS max per-step ratio over k in [5,40] = %.4f at k=%d (best M %.1f, "
              "%d steps above 0.9; ratio at k=40 %.4f, bound %.3e); golden walk log-log "
              "slope %.3f on [64,256], %.3f on [256,1024], last ratio %.5f",
              worst_ratio, worst_k, steps[worst_k - 1].best_M, pinned,
              steps[39].total / steps[38].total, steps[39].total, s_early, s_late,
              last_ratio)};
}

// 9. transport oracles
Outcome transport_integrity() {
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<std::size_t> size(1, 64);
  double worst_gap = 0.0, worst_circle = 0.0, worst_sink = 0.0;
  const auto t1 = descriptor(GroupId::torus(1));
  const auto g1 = Modulus::power(1.0);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_measure(t1, rng, size(rng));
    const auto b = random_measure(t1, rng, size(rng));
    const auto lp = exact_wasserstein(t1, g1, a, b);
    worst_gap = std::max(worst_gap, std::abs(lp.duality_gap));
    worst_circle = std::max(worst_circle, std::abs(circle_w1(t1, a, b) - lp.cost));
  }
  for (const auto& G : dominance_groups())
    for (double p : {0.5, 1.0})
      for (int rep = 0; rep < 3; ++rep) {
        const auto g = Modulus::power(p);
        const auto a = random_measure(G, rng, size(rng));
        const auto b = random_measure(G, rng, size(rng));
        worst_gap = std::max(worst_gap, std::abs(exact_wasserstein(G, g, a, b).duality_gap));
      }
  int sink_runs = 0;
  for (const auto& G : dominance_groups())
    for (int rep = 0; rep < 2; ++rep) {
      const auto a = random_measure(G, rng, 64);
      const auto b = random_measure(G, rng, 64);
      const auto lp = exact_wasserstein(G, g1, a, b);
      worst_gap = std::max(worst_gap, std::abs(lp.duality_gap));
      const auto s = sinkhorn(G, g1, a, b, 1e-3);
      worst_sink = std::max(worst_sink, std::abs(s.cost - lp.cost) / lp.cost);
      ++sink_runs;
    }
  return {worst_gap <= 1e-9 && worst_circle <= 1e-10 && worst_sink <= 0.01,
          fmt("max duality gap %.1e, circle formula vs LP %.1e, Sinkhorn relative "
              "error %.2e over %d runs", worst_gap, worst_circle, worst_sink, sink_runs)};
}

// 10. phi: constant sqrt(n) for g = t, scale law for powers
Outcome phi_closed_form() {
  double worst_lip = 0.0, worst_scale = 0.0;
  const auto ts = geometric(1e-3, 1e3, 25);
  for (int n : {1, 2, 3}) {
    for (double t : ts)
      worst_lip = std::max(worst_lip, std::abs(phi(n, Modulus::power(1.0), t) - std::sqrt(n)));
    for (double p : {0.25, 0.5, 0.75}) {
      const auto g = Modulus::power(p);
      const double ref = phi(n, g, 1.0);
      for (double t : ts)
        worst_scale = std::max(worst_scale,
                               std::abs(phi(n, g, t) * std::pow(t, p - 1) - ref) / ref);
    }
  }
  return {worst_lip <= 1e-10 && worst_scale <= 1e-10,
          fmt("max |phi - sqrt(n)| = %.1e, max relative spread of phi(t) t^(p-1) = %.1e",
              worst_lip, worst_scale)};
}

Outcome run_criterion(int c) {
  switch (c) {
    case 1: return certified_dominance();
    case 2: return lps_golden_value();
    case 3: return kernel_invariants();
    case 4: return representation_oracles();
    case 5: return derived_rep_bounds();
    case 6: return decay_budget();
    case 7: return rate_slopes();
    case 8: return walk_decay();
    case 9: return transport_integrity();
    case 10: return phi_closed_form();
    default: throw DomainError("criterion must be 1..10");
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      which.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  if (which.empty())
    for (int c = 1; c <= 10; ++c) which.push_back(c);
  bool all = true;
  for (int c : which) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = run_criterion(c);
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s %s [%.1f s]\n", c, out.pass ? "PASS" : "FAIL",
                out.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && out.pass;
  }
  return all ? 0 : 1;
}
