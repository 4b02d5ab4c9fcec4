#pragma once

// Random walks, LPS point sets, empirical-measure experiments and
// equidistribution audits.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wgb/bound.hpp"
#include "wgb/fourier.hpp"
#include "wgb/groups.hpp"
#include "wgb/modulus.hpp"
#include "wgb/smoothing.hpp"

namespace wgb {

struct LpsSet {
  int p = 0;
  std::vector<GroupElement> rotations;  // p + 1 elements of so3
  bool symmetric = false;
};

/// Rotations of the integer quaternions a + bi + cj + dk of norm p with a odd
/// and positive. p must be a prime = 1 mod 4, p <= 10^4.
LpsSet lps_generators(int p);

struct WalkOptions {
  BumpProfile profile{};
  /// Irreps with |lambda| below this level get exact transform blocks.
  double exact_level = 26.0;
  /// Largest smoothing level considered when optimizing M.
  double max_level = 1e3;
  /// Candidate M: breakpoints of psi, thinned to this many per decade.
  int per_decade = 48;
  /// Certified bound on ||nu^(pi)||_op for every nontrivial pi. Needed to
  /// bound the blocks above `exact_level`; without it M stays below it.
  std::optional<double> gap_certificate;
  /// Steps between independent recomputations of the block powers.
  int recheck_every = 8;
};

struct WalkStep {
  int k = 0;
  double q_hat = 0.0;          // max op norm of the exact blocks at step k
  double best_M = 0.0;
  double fourier_sum = 0.0;
  double psi = 0.0;
  double phi = 0.0;
  double total = 0.0;
  double tolerance = 0.0;
  double recheck_error = 0.0;  // 0 unless this step was rechecked
};

/// Bound on W_g(nu^{*k}, Haar) for k = 1..k_max from exact block powers.
std::vector<WalkStep> walk_evolve(const GroupDescriptor& G, const Modulus& g,
                                  const DiscreteMeasure& nu, int k_max,
                                  const WalkOptions& opt);

/// End points of n_paths independent k-step walks driven by nu.
std::vector<GroupElement> sample_walk(const GroupDescriptor& G,
                                      const DiscreteMeasure& nu, int k,
                                      std::size_t n_paths, std::uint64_t seed);

/// Draws N i.i.d. points from a measure (Haar or discrete).
std::vector<GroupElement> sample_measure(const GroupDescriptor& G, const Measure& nu,
                                         std::size_t N, std::uint64_t seed);

struct EmpiricalRow {
  std::size_t N = 0;
  double mean_bound = 0.0, bound_lo = 0.0, bound_hi = 0.0;
  double mean_best_M = 0.0;
  /// max over tested irreps of mean ||nubar^ - nu^||_HS^2 / (d/N)
  double max_variance_ratio = 0.0;
  std::optional<double> mean_oracle;  // exact W_g(nubar, nu), discrete sources
};

struct EmpiricalOptions {
  BumpProfile profile{};
  std::vector<double> M_grid;  // empty: breakpoints up to 128
  double variance_level = 4.0;  // irreps below this enter the variance check
};

std::vector<EmpiricalRow> empirical_experiment(const GroupDescriptor& G,
                                               const Measure& source,
                                               const std::vector<std::size_t>& N_list,
                                               std::size_t n_reps, const Modulus& g,
                                               std::uint64_t seed,
                                               const EmpiricalOptions& opt = {});

struct IrrepEnergy {
  std::string label;
  int dim = 1;
  double level = 0.0;
  double energy = 0.0;  // ||nu^(pi)||_HS^2 = (1/N^2) sum chi(a_k^{-1} a_l)
};

struct AuditReport {
  BoundReport bound;  // optimized over the grid, vs Haar
  double gap_level = 0.0;
  double q_hat = 0.0;
  std::vector<IrrepEnergy> energies;  // irreps below gap_level
  std::size_t points = 0;
};

/// Uniform measure on the points against Haar measure.
AuditReport equidistribution_audit(const GroupDescriptor& G,
                                   const std::vector<GroupElement>& points,
                                   const Modulus& g,
                                   const std::vector<double>& M_grid,
                                   BumpProfile profile, double gap_level = 26.0);

}  // namespace wgb
