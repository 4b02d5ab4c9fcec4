#pragma once

// Smoothing kernel: radial bump eta on the torus algebra, its Fourier
// transform F, the Weyl density coefficients and the kernel coefficients a_pi.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wgb/fourier.hpp"
#include "wgb/groups.hpp"
#include "wgb/modulus.hpp"

namespace wgb {

enum class ProfileId { paper, plateau };

/// Radial bump with eta(0) = 1 and support in the open unit ball.
/// paper:   exp(-u^2 / (1 - u^2))
/// plateau: 1 for u <= 1/2, smooth monotone transition to 0 at u = 1.
struct BumpProfile {
  ProfileId id = ProfileId::paper;

  static BumpProfile parse(const std::string& name);
  std::string label() const;
  bool has_plateau() const { return id == ProfileId::plateau; }
  double operator()(double u) const;
  /// d^k/dy1^k of eta(|y|) at a point with |y|^2 = y1^2 + perp2, k <= 6.
  double directional_derivative(int k, double y1, double perp2) const;
};

/// F(x) = integral of eta(Y) e^{2 pi i (x, Y)} dY over R^r, as a radial
/// function. Internally F(x) = 2 int_0^1 P(y) cos(2 pi x y) dy with P the
/// projection of eta onto one axis, evaluated on a fixed Gauss-Legendre grid.
class BumpTransform {
 public:
  BumpTransform(BumpProfile profile, int rank);

  /// Shared instance per (profile, rank); built once, immutable afterwards.
  static const BumpTransform& get(BumpProfile profile, int rank);

  double operator()(double x) const;
  double at_zero() const { return f0_; }
  int rank() const { return rank_; }
  const BumpProfile& profile() const { return profile_; }

  /// Grid of radii 0, h, 2h, ..., table_end and F on it.
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& table() const { return table_; }
  double table_end() const { return grid_.back(); }
  /// Sign changes of F in (0, table_end], refined to machine precision.
  const std::vector<double>& zeros() const { return zeros_; }

  /// C_k with |F(x)| <= C_k / |x|^k for k in {2, 4, 6}.
  double tail_constant(int k) const;

  /// Projection P(y) (integral of eta over the hyperplane y1 = y).
  double projection(double y) const;

 private:
  BumpProfile profile_;
  int rank_;
  std::vector<double> nodes_, weights_;  // fold 2 * P(y) * w into weights_
  double f0_ = 0.0;
  std::vector<double> grid_, table_, zeros_;
  std::map<int, double> tail_;
};

/// Coefficients of the Weyl density as a trigonometric polynomial on the
/// root lattice: pairs (lambda in dual coordinates, integer c_lambda).
std::vector<std::pair<DualVector, int>> weyl_density_coeffs(const GroupDescriptor& G);

/// M_0 = floor(M / (|2 rho+| + a)); throws DomainError below admissibility.
int smoothing_degree(const GroupDescriptor& G, double M);

struct KernelCoefficients {
  double M = 0.0;
  int M0 = 0;
  ProfileId profile = ProfileId::paper;
  std::vector<std::pair<Irrep, double>> coeffs;  // includes the trivial irrep

  /// a_pi for the given irrep (0 when it is not listed).
  double at(const Irrep& irrep) const;
};

/// a_pi = sum over weights mu and root-lattice lambda of
/// (c_lambda / |W|) eta(-lambda/a + mu/(a M_0)), for all pi with |lambda_pi| < M.
KernelCoefficients kernel_coefficients(const GroupDescriptor& G, double M,
                                       BumpProfile profile);

/// Coefficient of a single irrep (any level).
double kernel_coefficient(const GroupDescriptor& G, int M0, const Irrep& irrep,
                          BumpProfile profile);

struct PerFunctionBound {
  double value = 0.0;  // psi + pairing sum
  double psi = 0.0;
  double pairing = 0.0;
  /// Set when the caller asserted f^ vanishes above M (always, by contract).
  bool assumes_band_limit = true;
};

/// psi(M) + sum over 0 < |lambda_pi| < M of
/// d_pi ||f^(pi)||_HS ||nu1^(pi) - nu2^(pi)||_HS.
/// `f_hat` is keyed by Irrep::label(); a missing block throws DomainError.
PerFunctionBound per_function_bound(const GroupDescriptor& G,
                                    const std::map<std::string, CMatrix>& f_hat,
                                    const Modulus& g, double M,
                                    const Measure& nu1, const Measure& nu2,
                                    BumpProfile profile);

/// The bracket sqrt(n / (1 - c - c^2/(4n))) * g(x)/x with x = c/(n t).
double decay_bracket(int n, const Modulus& g, double t, double c);
/// Upper end 2(sqrt(n^2 + n) - n) of the admissible c range.
double decay_c_max(int n);

struct DecayInfimum {
  double value = 0.0;
  double argmin = 0.0;  // 0 when the boundary limit c -> 0 wins
  bool boundary = false;
};
/// Infimum of decay_bracket over c: coarse grid, golden-section refinement,
/// and the c -> 0 limit when g is Lipschitz at 0.
DecayInfimum decay_infimum(int n, const Modulus& g, double t);

/// Bound on sum_pi d_pi kappa_pi ||f^(pi)||_HS^2 over 0 < |lambda| <= M for
/// f with modulus g: the square of the bracket (infimum, or at the given c).
double fourier_decay_budget(int n, const Modulus& g, double M,
                            std::optional<double> c = std::nullopt);

}  // namespace wgb
