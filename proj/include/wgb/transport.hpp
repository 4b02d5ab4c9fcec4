#pragma once

// Optimal-transport oracles used to check the Fourier-side bounds.

#include <cstdint>
#include <string>
#include <vector>

#include "wgb/fourier.hpp"
#include "wgb/groups.hpp"
#include "wgb/kernels.hpp"
#include "wgb/modulus.hpp"

namespace wgb {

struct CouplingEntry {
  std::size_t i = 0, j = 0;
  double mass = 0.0;
};

enum class PlanStatus { optimal, approximate };

struct TransportPlan {
  double cost = 0.0;
  std::vector<CouplingEntry> coupling;  // nonzero entries only
  /// Kantorovich potentials: f(x_i) = row_potential[i], f(y_j) = col_potential[j],
  /// with f(x_i) - f(y_j) <= cost(x_i, y_j).
  std::vector<double> row_potential, col_potential;
  double dual_objective = 0.0;
  double duality_gap = 0.0;  // cost - dual_objective
  PlanStatus status = PlanStatus::optimal;
  double epsilon = 0.0;  // entropic regularization (approximate plans)
  std::size_t iterations = 0;
};

/// Exact transport between two finite weight vectors for a row-major cost
/// matrix (transportation simplex with a certified dual).
TransportPlan solve_transport(const std::vector<double>& a,
                              const std::vector<double>& b,
                              const std::vector<double>& cost);

/// Row-major matrix g(rho(x_i, y_j)).
std::vector<double> cost_matrix(const GroupDescriptor& G, const Modulus& g,
                                const std::vector<GroupElement>& xs,
                                const std::vector<GroupElement>& ys,
                                Exec exec = Exec::parallel);

/// Exact W_g between discrete measures; at most 10^6 atom pairs.
TransportPlan exact_wasserstein(const GroupDescriptor& G, const Modulus& g,
                                const DiscreteMeasure& nu1,
                                const DiscreteMeasure& nu2);

/// Log-domain Sinkhorn with epsilon scaling. Throws SolverError if the
/// marginal error is above 1e-8 after max_iter sweeps.
TransportPlan sinkhorn(const GroupDescriptor& G, const Modulus& g,
                       const DiscreteMeasure& nu1, const DiscreteMeasure& nu2,
                       double epsilon, std::size_t max_iter = 100000);

/// W_1 on the circle torus(1) via the rotated-CDF formula.
double circle_w1(const GroupDescriptor& G, const DiscreteMeasure& nu1,
                 const DiscreteMeasure& nu2);

struct HaarOracleEstimate {
  double estimate = 0.0;  // mean over reps
  double band_lo = 0.0, band_hi = 0.0;
  std::vector<double> values;
};

/// Mean over reps of exact W_g(nu, empirical Haar sample of n_samples points).
/// Biased upward by the sample's own distance to Haar measure.
HaarOracleEstimate haar_oracle_distance(const GroupDescriptor& G, const Modulus& g,
                                        const DiscreteMeasure& nu,
                                        std::size_t n_samples, std::size_t n_reps,
                                        std::uint64_t seed);

struct QuantizationEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::vector<double> cell_mass;  // MC estimate of the Voronoi cell masses
};

/// Monte Carlo estimate of the integral of g(dist(A, x)) against Haar measure.
QuantizationEstimate voronoi_quantization(const GroupDescriptor& G,
                                          const Modulus& g,
                                          const std::vector<GroupElement>& A,
                                          std::size_t n_samples, std::uint64_t seed,
                                          Exec exec = Exec::parallel);

/// Independent seed for stream `stream` derived from `seed` (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

std::string to_string(PlanStatus s);

}  // namespace wgb
