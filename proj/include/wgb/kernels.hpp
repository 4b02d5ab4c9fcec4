#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP version selected by `Exec`; both reduce in the same fixed order so
// results agree to rounding (bitwise in practice).

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "wgb/groups.hpp"

namespace wgb {

enum class Exec { serial, parallel };

/// Recursive pairwise summation (order fixed by the input layout).
double pairwise_sum(std::span<const double> xs);

/// For a signed combination sum_k c_k delta_{x_k} of unit quaternions,
/// returns E[n] = sum_{k,l} c_k c_l U_n(<x_k, x_l>) for n = 0..max_n, where U_n
/// is the Chebyshev polynomial of the second kind. E[n] is the squared HS norm
/// of the combination's transform at the spin-n/2 irrep.
std::vector<double> quaternion_character_energies(
    std::span<const GroupElement> atoms, std::span<const double> coeffs,
    int max_n, Exec exec = Exec::parallel);

/// For each frequency m, |sum_k c_k exp(2 pi i m.x_k)|^2 on torus(dim).
std::vector<double> torus_mode_energies(int dim,
                                        std::span<const GroupElement> atoms,
                                        std::span<const double> coeffs,
                                        std::span<const std::array<int, 3>> modes,
                                        Exec exec = Exec::parallel);

/// Row-major |xs| x |ys| matrix of geodesic distances.
std::vector<double> distance_matrix(const GroupDescriptor& G,
                                    std::span<const GroupElement> xs,
                                    std::span<const GroupElement> ys,
                                    Exec exec = Exec::parallel);

/// For each sample, the distance to the nearest point of `sites` and the
/// index of that point (ties go to the lower index).
struct NearestResult {
  std::vector<double> distance;
  std::vector<std::size_t> index;
};
NearestResult nearest_sites(const GroupDescriptor& G,
                            std::span<const GroupElement> sites,
                            std::span<const GroupElement> samples,
                            Exec exec = Exec::parallel);

/// Number of OpenMP threads to use (0 keeps the runtime default).
void set_thread_count(int threads);
int thread_count();

}  // namespace wgb
