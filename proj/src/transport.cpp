#include "wgb/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "wgb/errors.hpp"

namespace wgb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Transportation simplex on the bipartite graph rows x columns. The basis is
// a spanning tree with m + n - 1 cells (zero-flow cells allowed).
class TransportSimplex {
 public:
  TransportSimplex(const std::vector<double>& a, const std::vector<double>& b,
                   const std::vector<double>& c)
      : a_(a), b_(b), c_(c), m_(a.size()), n_(b.size()), adj_(m_ + n_) {}

  TransportPlan solve() {
    northwest_corner();
    double cmax = 0.0;
    for (double v : c_) cmax = std::max(cmax, std::abs(v));
    const double tol = 1e-12 * std::max(1.0, cmax);
    const std::size_t cap = 50 * m_ * n_ + 1000;
    const std::size_t block =
        std::max<std::size_t>(64, static_cast<std::size_t>(std::sqrt(double(m_ * n_))));
    std::vector<double> u(m_), v(n_);
    std::size_t cursor = 0, iter = 0;
    for (;; ++iter) {
      if (iter > cap) throw SolverError("transport simplex: iteration cap reached");
      potentials(u, v);
      // block search pricing
      std::size_t scanned = 0, best = npos;
      double best_rc = -tol;
      const std::size_t total = m_ * n_;
      while (scanned < total) {
        const std::size_t end = std::min(total, scanned + block);
        for (; scanned < end; ++scanned) {
          const std::size_t k = cursor;
          cursor = cursor + 1 == total ? 0 : cursor + 1;
          const std::size_t i = k / n_, j = k % n_;
          const double rc = c_[k] - u[i] - v[j];
          if (rc < best_rc) {
            best_rc = rc;
            best = k;
          }
        }
        if (best != npos) break;
      }
      if (best == npos) break;
      pivot(best / n_, best % n_);
    }
    return certificate(iter);
  }

 private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  struct Cell {
    std::size_t i, j;
    double flow;
  };

  void add_cell(std::size_t i, std::size_t j, double flow) {
    const std::size_t id = cells_.size();
    cells_.push_back({i, j, flow});
    adj_[i].push_back(id);
    adj_[m_ + j].push_back(id);
  }

  void northwest_corner() {
    std::vector<double> ra = a_, rb = b_;
    std::size_t i = 0, j = 0;
    while (true) {
      const double x = std::max(0.0, std::min(ra[i], rb[j]));
      add_cell(i, j, x);
      ra[i] -= x;
      rb[j] -= x;
      if (i + 1 == m_ && j + 1 == n_) break;
      if (j + 1 == n_ || (i + 1 < m_ && ra[i] <= rb[j]))
        ++i;
      else
        ++j;
    }
  }

  std::size_t other(std::size_t cell, std::size_t node) const {
    const Cell& c = cells_[cell];
    return node < m_ ? m_ + c.j : c.i;
  }

  void potentials(std::vector<double>& u, std::vector<double>& v) const {
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    u[0] = 0.0;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t id : adj_[node]) {
        const std::size_t nb = other(id, node);
        if (seen[nb]) continue;
        seen[nb] = 1;
        const Cell& c = cells_[id];
        const double cost = c_[c.i * n_ + c.j];
        if (nb >= m_)
          v[nb - m_] = cost - u[node];
        else
          u[nb] = cost - v[node - m_];
        stack.push_back(nb);
      }
    }
  }

  void pivot(std::size_t ei, std::size_t ej) {
    // tree path from row ei to column ej
    const std::size_t src = ei, dst = m_ + ej;
    std::vector<std::size_t> parent_cell(m_ + n_, npos);
    std::vector<char> seen(m_ + n_, 0);
    std::deque<std::size_t> q{src};
    seen[src] = 1;
    while (!q.empty() && !seen[dst]) {
      const std::size_t node = q.front();
      q.pop_front();
      for (std::size_t id : adj_[node]) {
        const std::size_t nb = other(id, node);
        if (seen[nb]) continue;
        seen[nb] = 1;
        parent_cell[nb] = id;
        q.push_back(nb);
      }
    }
    std::vector<std::size_t> path;  // from dst back to src
    for (std::size_t node = dst; node != src;) {
      const std::size_t id = parent_cell[node];
      path.push_back(id);
      node = other(id, node);
    }
    std::reverse(path.begin(), path.end());  // path[0] touches the source row
    // path[0], path[2], ... lose theta
    double theta = kInf;
    std::size_t leave = npos;
    for (std::size_t k = 0; k < path.size(); k += 2)
      if (cells_[path[k]].flow < theta) {
        theta = cells_[path[k]].flow;
        leave = path[k];
      }
    for (std::size_t k = 0; k < path.size(); ++k) {
      double& f = cells_[path[k]].flow;
      f = (k % 2 == 0) ? std::max(0.0, f - theta) : f + theta;
    }
    // replace the leaving cell by the entering one in place
    Cell& lc = cells_[leave];
    auto drop = [&](std::size_t node) {
      auto& lst = adj_[node];
      lst.erase(std::find(lst.begin(), lst.end(), leave));
    };
    drop(lc.i);
    drop(m_ + lc.j);
    lc = {ei, ej, theta};
    adj_[ei].push_back(leave);
    adj_[m_ + ej].push_back(leave);
  }

  TransportPlan certificate(std::size_t iters) const {
    TransportPlan plan;
    plan.iterations = iters;
    std::vector<double> u(m_), v(n_);
    potentials(u, v);
    // c-transform keeps the dual exactly feasible
    for (std::size_t j = 0; j < n_; ++j) {
      double best = kInf;
      for (std::size_t i = 0; i < m_; ++i) best = std::min(best, c_[i * n_ + j] - u[i]);
      v[j] = best;
    }
    std::vector<double> terms;
    for (const Cell& c : cells_)
      if (c.flow > 0.0) {
        plan.coupling.push_back({c.i, c.j, c.flow});
        terms.push_back(c.flow * c_[c.i * n_ + c.j]);
      }
    std::sort(plan.coupling.begin(), plan.coupling.end(),
              [](const CouplingEntry& x, const CouplingEntry& y) {
                return x.i != y.i ? x.i < y.i : x.j < y.j;
              });
    plan.cost = pairwise_sum(terms);
    std::vector<double> dual;
    for (std::size_t i = 0; i < m_; ++i) dual.push_back(a_[i] * u[i]);
    for (std::size_t j = 0; j < n_; ++j) dual.push_back(b_[j] * v[j]);
    plan.dual_objective = pairwise_sum(dual);
    plan.duality_gap = plan.cost - plan.dual_objective;
    plan.row_potential = u;
    plan.col_potential.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) plan.col_potential[j] = -v[j];
    plan.status = PlanStatus::optimal;
    return plan;
  }

  const std::vector<double>& a_;
  const std::vector<double>& b_;
  const std::vector<double>& c_;
  std::size_t m_, n_;
  std::vector<Cell> cells_;
  std::vector<std::vector<std::size_t>> adj_;
};

double log_sum_exp(const double* x, std::size_t n, std::size_t stride) {
  double mx = -kInf;
  for (std::size_t k = 0; k < n; ++k) mx = std::max(mx, x[k * stride]);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::exp(x[k * stride] - mx);
  return mx + std::log(s);
}

}  // namespace

std::string to_string(PlanStatus s) {
  return s == PlanStatus::optimal ? "optimal" : "approx";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TransportPlan solve_transport(const std::vector<double>& a,
                              const std::vector<double>& b,
                              const std::vector<double>& cost) {
  if (a.empty() || b.empty()) throw DomainError("transport: empty marginal");
  if (cost.size() != a.size() * b.size()) throw DomainError("transport: cost size mismatch");
  double sa = 0.0, sb = 0.0;
  for (double v : a) {
    if (!(v >= 0.0)) throw DomainError("transport: negative marginal entry");
    sa += v;
  }
  for (double v : b) {
    if (!(v >= 0.0)) throw DomainError("transport: negative marginal entry");
    sb += v;
  }
  if (std::abs(sa - sb) > 1e-12 * std::max(1.0, sa))
    throw DomainError("transport: marginals have different mass");
  return TransportSimplex(a, b, cost).solve();
}

std::vector<double> cost_matrix(const GroupDescriptor& G, const Modulus& g,
                                const std::vector<GroupElement>& xs,
                                const std::vector<GroupElement>& ys, Exec exec) {
  auto D = distance_matrix(G, xs, ys, exec);
  for (double& d : D) d = g(d);
  return D;
}

TransportPlan exact_wasserstein(const GroupDescriptor& G, const Modulus& g,
                                const DiscreteMeasure& nu1,
                                const DiscreteMeasure& nu2) {
  nu1.validate();
  nu2.validate();
  if (double(nu1.size()) * double(nu2.size()) > 1e6)
    throw DomainError("exact_wasserstein: more than 10^6 atom pairs");
  const auto C = cost_matrix(G, g, nu1.atoms, nu2.atoms);
  return solve_transport(nu1.weights, nu2.weights, C);
}

TransportPlan sinkhorn(const GroupDescriptor& G, const Modulus& g,
                       const DiscreteMeasure& nu1, const DiscreteMeasure& nu2,
                       double epsilon, std::size_t max_iter) {
  if (!(epsilon > 0.0)) throw DomainError("sinkhorn: epsilon must be > 0");
  nu1.validate();
  nu2.validate();
  const std::size_t m = nu1.size(), n = nu2.size();
  const auto C = cost_matrix(G, g, nu1.atoms, nu2.atoms);
  std::vector<double> la(m), lb(n);
  for (std::size_t i = 0; i < m; ++i)
    la[i] = nu1.weights[i] > 0 ? std::log(nu1.weights[i]) : -kInf;
  for (std::size_t j = 0; j < n; ++j)
    lb[j] = nu2.weights[j] > 0 ? std::log(nu2.weights[j]) : -kInf;
  std::vector<double> f(m, 0.0), h(n, 0.0), buf(std::max(m, n));
  double cmax = 0.0;
  for (double v : C) cmax = std::max(cmax, v);
  double eps = std::max(epsilon, 0.5 * cmax);
  std::size_t iter = 0;
  auto update_f = [&](double e) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) buf[j] = (h[j] - C[i * n + j]) / e + lb[j];
      f[i] = -e * log_sum_exp(buf.data(), n, 1);
    }
  };
  auto update_h = [&](double e) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < m; ++i) buf[i] = (f[i] - C[i * n + j]) / e + la[i];
      h[j] = -e * log_sum_exp(buf.data(), m, 1);
    }
  };
  auto row_error = [&](double e) {
    double err = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (la[i] == -kInf) continue;
      for (std::size_t j = 0; j < n; ++j)
        buf[j] = (f[i] + h[j] - C[i * n + j]) / e + lb[j];
      err += std::abs(std::exp(la[i] + log_sum_exp(buf.data(), n, 1)) - nu1.weights[i]);
    }
    return err;
  };
  while (true) {
    const bool last = eps <= epsilon;
    const double stage_tol = last ? 1e-9 : 1e-5;
    double err = kInf;
    while (err > stage_tol) {
      if (iter++ >= max_iter)
        throw SolverError("sinkhorn: no convergence within max_iter");
      update_f(eps);
      update_h(eps);
      if (iter % 10 == 0 || last) err = row_error(eps);
    }
    if (last) break;
    eps = std::max(epsilon, 0.5 * eps);
  }
  TransportPlan plan;
  plan.status = PlanStatus::approximate;
  plan.epsilon = epsilon;
  plan.iterations = iter;
  std::vector<double> terms;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (la[i] == -kInf || lb[j] == -kInf) continue;
      const double p = std::exp((f[i] + h[j] - C[i * n + j]) / epsilon + la[i] + lb[j]);
      if (p > 0.0) {
        plan.coupling.push_back({i, j, p});
        terms.push_back(p * C[i * n + j]);
      }
    }
  plan.cost = pairwise_sum(terms);
  plan.row_potential = f;
  plan.col_potential.resize(n);
  for (std::size_t j = 0; j < n; ++j) plan.col_potential[j] = -h[j];
  std::vector<double> dual;
  for (std::size_t i = 0; i < m; ++i) dual.push_back(nu1.weights[i] * f[i]);
  for (std::size_t j = 0; j < n; ++j) dual.push_back(nu2.weights[j] * h[j]);
  plan.dual_objective = pairwise_sum(dual);
  plan.duality_gap = plan.cost - plan.dual_objective;
  return plan;
}

double circle_w1(const GroupDescriptor& G, const DiscreteMeasure& nu1,
                 const DiscreteMeasure& nu2) {
  if (!(G.is_torus() && G.rank == 1)) throw DomainError("circle_w1 needs torus(1)");
  nu1.validate();
  nu2.validate();
  std::vector<std::pair<double, double>> ev;
  for (std::size_t k = 0; k < nu1.size(); ++k) ev.emplace_back(nu1.atoms[k].v[0], nu1.weights[k]);
  for (std::size_t k = 0; k < nu2.size(); ++k) ev.emplace_back(nu2.atoms[k].v[0], -nu2.weights[k]);
  std::sort(ev.begin(), ev.end());
  // pieces (value of F1 - F2, length)
  std::vector<std::pair<double, double>> pieces;
  pieces.emplace_back(0.0, ev.front().first);
  double cum = 0.0;
  for (std::size_t k = 0; k < ev.size(); ++k) {
    cum += ev[k].second;
    const double end = k + 1 < ev.size() ? ev[k + 1].first : 1.0;
    pieces.emplace_back(cum, end - ev[k].first);
  }
  auto sorted = pieces;
  std::sort(sorted.begin(), sorted.end());
  double acc = 0.0, median = sorted.back().first;
  for (const auto& [val, len] : sorted) {
    acc += len;
    if (acc >= 0.5) {
      median = val;
      break;
    }
  }
  std::vector<double> terms;
  for (const auto& [val, len] : pieces) terms.push_back(len * std::abs(val - median));
  return pairwise_sum(terms);
}

HaarOracleEstimate haar_oracle_distance(const GroupDescriptor& G, const Modulus& g,
                                        const DiscreteMeasure& nu,
                                        std::size_t n_samples, std::size_t n_reps,
                                        std::uint64_t seed) {
  nu.validate();
  if (n_samples < nu.size())
    throw DomainError("haar_oracle_distance: n_samples below the atom count");
  if (n_reps == 0) throw DomainError("haar_oracle_distance: need at least one rep");
  HaarOracleEstimate out;
  out.values.assign(n_reps, 0.0);
  std::string failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(n_reps); ++r) {
    try {
      const auto sample = DiscreteMeasure::uniform(
          haar_sample(G, derive_seed(seed, r), n_samples));
      out.values[r] = exact_wasserstein(G, g, nu, sample).cost;
    } catch (const std::exception& e) {
#pragma omp critical
      failure = e.what();
    }
  }
  if (!failure.empty()) throw SolverError(failure);
  out.estimate = pairwise_sum(out.values) / n_reps;
  out.band_lo = *std::min_element(out.values.begin(), out.values.end());
  out.band_hi = *std::max_element(out.values.begin(), out.values.end());
  return out;
}

QuantizationEstimate voronoi_quantization(const GroupDescriptor& G,
                                          const Modulus& g,
                                          const std::vector<GroupElement>& A,
                                          std::size_t n_samples, std::uint64_t seed,
                                          Exec exec) {
  if (A.empty()) throw DomainError("voronoi_quantization: empty point set");
  if (n_samples < 2) throw DomainError("voronoi_quantization: need >= 2 samples");
  const auto samples = haar_sample(G, seed, n_samples);
  const auto near = nearest_sites(G, A, samples, exec);
  std::vector<double> vals(n_samples), sq(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) vals[s] = g(near.distance[s]);
  QuantizationEstimate out;
  out.value = pairwise_sum(vals) / n_samples;
  for (std::size_t s = 0; s < n_samples; ++s) sq[s] = (vals[s] - out.value) * (vals[s] - out.value);
  out.standard_error = std::sqrt(pairwise_sum(sq) / (n_samples - 1) / n_samples);
  out.cell_mass.assign(A.size(), 0.0);
  for (std::size_t idx : near.index) out.cell_mass[idx] += 1.0 / n_samples;
  return out;
}

}  // namespace wgb
