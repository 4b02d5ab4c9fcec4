#include "wgb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <omp.h>

#include "wgb/errors.hpp"

namespace wgb {

namespace {

double pairwise_rec(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_rec(x, h) + pairwise_rec(x + h, n - h);
}

// Accumulates sum_l w_l U_n(t_l) for n = 0..max_n into out (length max_n+1).
void chebyshev_row(const GroupElement& x, std::span<const GroupElement> atoms,
                   std::span<const double> coeffs, std::size_t k, int max_n,
                   double* out) {
  const std::size_t N = atoms.size();
  for (int n = 0; n <= max_n; ++n) out[n] = 0.0;
  for (std::size_t l = k; l < N; ++l) {
    const double w = (l == k ? 1.0 : 2.0) * coeffs[k] * coeffs[l];
    double t = quat::dot(x.v, atoms[l].v);
    t = std::clamp(t, -1.0, 1.0);
    double um1 = 0.0, u = 1.0;
    out[0] += w;
    for (int n = 1; n <= max_n; ++n) {
      const double up = 2.0 * t * u - um1;
      um1 = u;
      u = up;
      out[n] += w * u;
    }
  }
}

}  // namespace

double pairwise_sum(std::span<const double> xs) {
  return pairwise_rec(xs.data(), xs.size());
}

std::vector<double> quaternion_character_energies(
    std::span<const GroupElement> atoms, std::span<const double> coeffs,
    int max_n, Exec exec) {
  if (atoms.size() != coeffs.size())
    throw DomainError("character energies: atoms/coeffs size mismatch");
  if (max_n < 0) return {};
  const std::size_t N = atoms.size();
  const std::size_t W = static_cast<std::size_t>(max_n) + 1;
  std::vector<double> rows(N * W, 0.0);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(N); ++k)
      chebyshev_row(atoms[k], atoms, coeffs, k, max_n, rows.data() + k * W);
  } else {
    for (std::size_t k = 0; k < N; ++k)
      chebyshev_row(atoms[k], atoms, coeffs, k, max_n, rows.data() + k * W);
  }
  std::vector<double> out(W, 0.0), col(N);
  for (std::size_t n = 0; n < W; ++n) {
    for (std::size_t k = 0; k < N; ++k) col[k] = rows[k * W + n];
    out[n] = std::max(0.0, pairwise_sum(col));
  }
  return out;
}

std::vector<double> torus_mode_energies(int dim,
                                        std::span<const GroupElement> atoms,
                                        std::span<const double> coeffs,
                                        std::span<const std::array<int, 3>> modes,
                                        Exec exec) {
  if (atoms.size() != coeffs.size())
    throw DomainError("mode energies: atoms/coeffs size mismatch");
  const std::size_t N = atoms.size();
  std::vector<double> out(modes.size(), 0.0);
  auto one = [&](std::size_t i, std::vector<double>& re, std::vector<double>& im) {
    const auto& m = modes[i];
    for (std::size_t k = 0; k < N; ++k) {
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) phase += m[a] * atoms[k].v[a];
      phase -= std::floor(phase);
      const double ang = 2.0 * std::numbers::pi * phase;
      re[k] = coeffs[k] * std::cos(ang);
      im[k] = coeffs[k] * std::sin(ang);
    }
    const double r = pairwise_sum(re), s = pairwise_sum(im);
    out[i] = r * r + s * s;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel
    {
      std::vector<double> re(N), im(N);
#pragma omp for schedule(static)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(modes.size()); ++i)
        one(i, re, im);
    }
  } else {
    std::vector<double> re(N), im(N);
    for (std::size_t i = 0; i < modes.size(); ++i) one(i, re, im);
  }
  return out;
}

std::vector<double> distance_matrix(const GroupDescriptor& G,
                                    std::span<const GroupElement> xs,
                                    std::span<const GroupElement> ys,
                                    Exec exec) {
  const std::size_t m = xs.size(), n = ys.size();
  std::vector<double> D(m * n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i)
      for (std::size_t j = 0; j < n; ++j)
        D[i * n + j] = geodesic_distance(G, xs[i], ys[j]);
  } else {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        D[i * n + j] = geodesic_distance(G, xs[i], ys[j]);
  }
  return D;
}

NearestResult nearest_sites(const GroupDescriptor& G,
                            std::span<const GroupElement> sites,
                            std::span<const GroupElement> samples, Exec exec) {
  if (sites.empty()) throw DomainError("nearest_sites: empty site set");
  NearestResult r;
  r.distance.resize(samples.size());
  r.index.resize(samples.size());
  auto one = [&](std::size_t s) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      const double d = geodesic_distance(G, samples[s], sites[i]);
      if (d < best) {
        best = d;
        arg = i;
      }
    }
    r.distance[s] = best;
    r.index[s] = arg;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(samples.size()); ++s)
      one(s);
  } else {
    for (std::size_t s = 0; s < samples.size(); ++s) one(s);
  }
  return r;
}

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace wgb
