#include "wgb/walks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "wgb/errors.hpp"
#include "wgb/kernels.hpp"
#include "wgb/transport.hpp"

namespace wgb {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

CMatrix matrix_power(const CMatrix& B, int k) {
  CMatrix result = CMatrix::Identity(B.rows(), B.cols());
  CMatrix base = B;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

// Breakpoints k * threshold with k thinned to ~per_decade values per decade.
std::vector<double> thinned_breakpoints(const GroupDescriptor& G, double max_level,
                                        int per_decade) {
  const double thr = G.admissible_level();
  const int kmax = static_cast<int>(std::floor(max_level / thr));
  std::set<int> ks;
  if (kmax >= 1) {
    const double step = std::pow(10.0, 1.0 / std::max(1, per_decade));
    for (double k = 1.0; k <= kmax; k *= step) ks.insert(static_cast<int>(std::lround(k)));
    ks.insert(kmax);
  }
  std::vector<double> grid;
  for (int k : ks)
    if (k >= 1 && k <= kmax) grid.push_back(k * thr);
  return grid;
}

}  // namespace

LpsSet lps_generators(int p) {
  if (p > 10000 || !is_prime(p) || p % 4 != 1)
    throw DomainError("LPS sets need a prime p = 1 mod 4 with p <= 10^4");
  const auto G = descriptor(GroupId::so3());
  LpsSet set;
  set.p = p;
  const int r = static_cast<int>(std::floor(std::sqrt(double(p))));
  const double norm = std::sqrt(double(p));
  for (int a = 1; a <= r; a += 2)
    for (int b = -r; b <= r; ++b)
      for (int c = -r; c <= r; ++c)
        for (int d = -r; d <= r; ++d) {
          if (a * a + b * b + c * c + d * d != p) continue;
          GroupElement x;
          x.v = {a / norm, b / norm, c / norm, d / norm};
          set.rotations.push_back(canonicalize(G, x));
        }
  if (static_cast<int>(set.rotations.size()) != p + 1)
    throw DomainError("LPS enumeration did not produce p + 1 elements");
  set.symmetric = std::all_of(set.rotations.begin(), set.rotations.end(), [&](const GroupElement& x) {
    const auto inv = inverse(G, x);
    return std::any_of(set.rotations.begin(), set.rotations.end(),
                       [&](const GroupElement& y) { return approx_equal(G, inv, y, 1e-12); });
  });
  return set;
}

std::vector<WalkStep> walk_evolve(const GroupDescriptor& G, const Modulus& g,
                                  const DiscreteMeasure& nu, int k_max,
                                  const WalkOptions& opt) {
  if (k_max < 1) throw DomainError("walk_evolve: k_max must be >= 1");
  nu.validate();
  const double exact_level = G.is_torus() ? opt.max_level : std::min(opt.exact_level, opt.max_level);
  const auto exact = enumerate_irreps(G, exact_level);
  std::vector<CMatrix> B1(exact.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(exact.size()); ++i)
    B1[i] = measure_transform(G, nu, exact[i]).matrix;

  // Candidate M and the quantities that do not depend on the step.
  const double reach = opt.gap_certificate ? opt.max_level : exact_level;
  auto grid = thinned_breakpoints(G, reach, opt.per_decade);
  if (grid.empty()) throw DomainError("walk_evolve: no admissible M below the exact level");
  std::vector<double> psis(grid.size()), psi_tol(grid.size()), phis(grid.size()), tail(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto ps = psi(G, g, grid[i], opt.profile);
    psis[i] = ps.value;
    psi_tol[i] = ps.tolerance;
    phis[i] = phi(G.dimension, g, grid[i]);
  }
  {
    // sum of d^2 / kappa over exact_level <= |lambda| < M
    const auto all = irrep_summaries(G, grid.back());
    std::size_t j = 0;
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (; j < all.size() && all[j].level < grid[i]; ++j)
        if (all[j].level >= exact_level) acc += double(all[j].dim) * all[j].dim / all[j].casimir;
      tail[i] = acc;
    }
  }

  std::vector<WalkStep> steps;
  std::vector<CMatrix> Bk = B1;
  std::vector<double> energy(exact.size()), opn(exact.size());
  for (int k = 1; k <= k_max; ++k) {
    WalkStep st;
    st.k = k;
    if (k > 1)
      for (std::size_t i = 0; i < exact.size(); ++i) Bk[i] = Bk[i] * B1[i];
    if (opt.recheck_every > 0 && k % opt.recheck_every == 0) {
      double worst = 0.0;
      for (std::size_t i = 0; i < exact.size(); ++i)
        worst = std::max(worst, (matrix_power(B1[i], k) - Bk[i]).cwiseAbs().maxCoeff());
      st.recheck_error = worst;
      if (worst > 1e-9) throw SolverError("walk block powers drifted from recomputation");
    }
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(exact.size()); ++i) {
      energy[i] = Bk[i].squaredNorm();
      opn[i] = op_norm(Bk[i]);
    }
    for (double v : opn) st.q_hat = std::max(st.q_hat, v);
    const double qk = opt.gap_certificate ? std::pow(*opt.gap_certificate, 2.0 * k) : 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::size_t e = 0;
    double exact_sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (; e < exact.size() && exact[e].level() < grid[i]; ++e)
        exact_sum += exact[e].dim / exact[e].casimir * energy[e];
      const double S = exact_sum + qk * tail[i];
      const double total = psis[i] + phis[i] * std::sqrt(S);
      if (total < best) {
        best = total;
        st.best_M = grid[i];
        st.fourier_sum = S;
        st.psi = psis[i];
        st.phi = phis[i];
        st.tolerance = psi_tol[i];
      }
    }
    st.total = best;
    steps.push_back(st);
  }
  return steps;
}

std::vector<GroupElement> sample_walk(const GroupDescriptor& G,
                                      const DiscreteMeasure& nu, int k,
                                      std::size_t n_paths, std::uint64_t seed) {
  nu.validate();
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(nu.weights.begin(), nu.weights.end());
  std::vector<GroupElement> out;
  out.reserve(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) {
    GroupElement x = identity(G);
    for (int s = 0; s < k; ++s) x = multiply(G, x, nu.atoms[pick(rng)]);
    out.push_back(x);
  }
  return out;
}

std::vector<GroupElement> sample_measure(const GroupDescriptor& G, const Measure& nu,
                                         std::size_t N, std::uint64_t seed) {
  if (is_haar(nu)) return haar_sample(G, seed, N);
  const auto& d = std::get<DiscreteMeasure>(nu);
  d.validate();
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(d.weights.begin(), d.weights.end());
  std::vector<GroupElement> out;
  out.reserve(N);
  for (std::size_t i = 0; i < N; ++i) out.push_back(d.atoms[pick(rng)]);
  return out;
}

std::vector<EmpiricalRow> empirical_experiment(const GroupDescriptor& G,
                                               const Measure& source,
                                               const std::vector<std::size_t>& N_list,
                                               std::size_t n_reps, const Modulus& g,
                                               std::uint64_t seed,
                                               const EmpiricalOptions& opt) {
  if (n_reps == 0) throw DomainError("empirical_experiment: need reps");
  if (!std::is_sorted(N_list.begin(), N_list.end()) || N_list.empty() || N_list.front() == 0)
    throw DomainError("empirical_experiment: N_list must be ascending and positive");
  std::vector<double> grid = opt.M_grid;
  if (grid.empty())
    grid = breakpoint_M_grid(G, static_cast<int>(std::floor(128.0 / G.admissible_level())));
  const auto var_irreps = enumerate_irreps(G, opt.variance_level);
  std::vector<EmpiricalRow> rows;
  for (std::size_t N : N_list) {
    EmpiricalRow row;
    row.N = N;
    std::vector<double> bounds(n_reps), Ms(n_reps), oracle(n_reps);
    std::vector<double> var_acc(var_irreps.size(), 0.0);
    for (std::size_t r = 0; r < n_reps; ++r) {
      const auto pts = sample_measure(G, source, N, derive_seed(seed, N * 100003ULL + r));
      const Measure emp = DiscreteMeasure::uniform(pts);
      const auto [Mstar, rep] = optimize_M(G, g, emp, source, opt.profile, grid);
      bounds[r] = rep.total;
      Ms[r] = Mstar;
      const auto v = hs_distance_sq_all(G, emp, source, var_irreps);
      for (std::size_t i = 0; i < v.size(); ++i) var_acc[i] += v[i];
      if (!is_haar(source))
        oracle[r] = exact_wasserstein(G, g, std::get<DiscreteMeasure>(emp),
                                      std::get<DiscreteMeasure>(source)).cost;
    }
    row.mean_bound = pairwise_sum(bounds) / n_reps;
    row.bound_lo = *std::min_element(bounds.begin(), bounds.end());
    row.bound_hi = *std::max_element(bounds.begin(), bounds.end());
    row.mean_best_M = pairwise_sum(Ms) / n_reps;
    for (std::size_t i = 0; i < var_irreps.size(); ++i)
      row.max_variance_ratio = std::max(
          row.max_variance_ratio, var_acc[i] / n_reps / (double(var_irreps[i].dim) / N));
    if (!is_haar(source)) row.mean_oracle = pairwise_sum(oracle) / n_reps;
    rows.push_back(row);
  }
  return rows;
}

AuditReport equidistribution_audit(const GroupDescriptor& G,
                                   const std::vector<GroupElement>& points,
                                   const Modulus& g,
                                   const std::vector<double>& M_grid,
                                   BumpProfile profile, double gap_level) {
  if (points.empty()) throw DomainError("audit: empty point set");
  AuditReport out;
  out.points = points.size();
  const auto nu = DiscreteMeasure::uniform(points);
  out.bound = optimize_M(G, g, nu, HaarMeasure{}, profile, M_grid).second;
  out.gap_level = gap_level;
  out.q_hat = spectral_gap_estimate(G, nu, gap_level);
  const auto irreps = enumerate_irreps(G, gap_level);
  const auto e = hs_distance_sq_all(G, nu, HaarMeasure{}, irreps);
  for (std::size_t i = 0; i < irreps.size(); ++i)
    out.energies.push_back({irreps[i].label(), irreps[i].dim, irreps[i].level(), e[i]});
  return out;
}

}  // namespace wgb
