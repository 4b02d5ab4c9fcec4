#pragma once

// Irrep matrices, characters and Fourier transforms of discrete measures.
// The transform of nu at pi is sum_k w_k pi(x_k)^*.

#include <complex>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "wgb/groups.hpp"

namespace wgb {

using CMatrix = Eigen::MatrixXcd;

struct DiscreteMeasure {
  std::vector<GroupElement> atoms;
  std::vector<double> weights;

  static DiscreteMeasure uniform(std::vector<GroupElement> atoms);
  static DiscreteMeasure dirac(const GroupElement& x);
  std::size_t size() const { return atoms.size(); }
  /// Throws DomainError unless weights are nonnegative and sum to 1.
  void validate() const;
};

/// Normalized Haar measure (its transform vanishes off the trivial irrep).
struct HaarMeasure {};

using Measure = std::variant<DiscreteMeasure, HaarMeasure>;

bool is_haar(const Measure& m);
/// Same atoms with the same weights, in the same order.
bool atom_identical(const Measure& a, const Measure& b);

struct FourierBlock {
  Irrep irrep;
  CMatrix matrix;
  double hs_norm = 0.0;
  double op_norm = 0.0;
};

double hs_norm(const CMatrix& A);
/// Largest singular value.
double op_norm(const CMatrix& A);
FourierBlock make_block(const Irrep& irrep, CMatrix matrix);

/// Unitary matrix of `irrep` at x. SU(2)/SO(3) use the Euler factorization
/// through a cached eigenbasis of the second ladder generator, which stays
/// accurate for large spins.
CMatrix irrep_matrix(const GroupDescriptor& G, const Irrep& irrep,
                     const GroupElement& x);

/// Reference construction from the action on homogeneous polynomials
/// (binomial expansion). Exact for small spins, loses accuracy past ~j = 20.
CMatrix irrep_matrix_polynomial(const GroupDescriptor& G, const Irrep& irrep,
                                const GroupElement& x);

/// The defining 2x2 matrix of a unit quaternion.
Eigen::Matrix2cd su2_matrix(const GroupElement& x);

std::complex<double> character(const GroupDescriptor& G, const Irrep& irrep,
                               const GroupElement& x);

FourierBlock measure_transform(const GroupDescriptor& G, const Measure& nu,
                               const Irrep& irrep);

/// ||nu1^(pi) - nu2^(pi)||_HS^2 through the character double sum.
double hs_distance_sq(const GroupDescriptor& G, const Measure& nu1,
                      const Measure& nu2, const Irrep& irrep);
/// Same quantity from explicit transform matrices.
double hs_distance_sq_matrix(const GroupDescriptor& G, const Measure& nu1,
                             const Measure& nu2, const Irrep& irrep);

/// Squared HS distances for all given irreps at once (one pass over the
/// atom pairs on SU(2)/SO(3), one transform per frequency on tori).
std::vector<double> hs_distance_sq_all(const GroupDescriptor& G,
                                       const Measure& nu1, const Measure& nu2,
                                       std::span<const Irrep> irreps);

/// max ||nu^(pi)||_op over 0 < |lambda_pi| < M; 0 if there is none.
double spectral_gap_estimate(const GroupDescriptor& G, const DiscreteMeasure& nu,
                             double M);

/// d pi(X) for X in orthonormal algebra coordinates.
CMatrix derived_rep(const GroupDescriptor& G, const Irrep& irrep,
                    std::span<const double> X);

/// Integral over G of a class function against Haar measure, with the class
/// function given on the maximal torus as s -> f(exp(2 pi s)) (s has rank
/// coordinates). Trapezoidal/product rule on a full period.
double weyl_integral(const GroupDescriptor& G,
                     const std::function<double(std::span<const double>)>& f);
std::complex<double> weyl_integral_complex(
    const GroupDescriptor& G,
    const std::function<std::complex<double>(std::span<const double>)>& f);

/// Number of trapezoid nodes per torus coordinate used by weyl_integral.
int weyl_nodes_per_axis(const GroupDescriptor& G);

/// The Weyl density |prod_alpha (e^{2 pi i alpha(s)} - 1)| at exp(2 pi s).
double weyl_density(const GroupDescriptor& G, std::span<const double> s);

}  // namespace wgb
