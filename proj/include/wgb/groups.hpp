#pragma once

// Concrete compact connected Lie groups: the tori R^d/Z^d (d <= 3), SU(2)
// and SO(3).
//
// Normalization. Every group carries an Ad-invariant inner product and the
// corresponding orthonormal basis X_1..X_n of its Lie algebra.
//   torus(d): the algebra is R^d with exp(X) = X mod Z^d. Weights are 2*pi*m
//             for m in Z^d and the Casimir eigenvalue is 4*pi^2*|m|^2.
//   su2, so3: X_k = e_k/2 for the quaternion units e_1 = i, e_2 = j, e_3 = k,
//             so [X_1, X_2] = X_3 cyclically and exp(u X_3) is a unit speed
//             geodesic. The maximal torus is exp(R X_3), the positive root
//             has length 1 and the spin-j irrep has |lambda| = j and
//             Casimir j(j+1). SU(2) has diameter 2*pi, SO(3) has diameter pi.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wgb {

enum class GroupKind { torus, su2, so3 };

struct GroupId {
  GroupKind kind = GroupKind::su2;
  int torus_dim = 0;

  static GroupId torus(int d);
  static GroupId su2() { return {GroupKind::su2, 0}; }
  static GroupId so3() { return {GroupKind::so3, 0}; }

  /// Accepts "torus(d)", "torusd", "su2", "so3" (case-sensitive).
  static GroupId parse(std::string_view text);
  std::string label() const;

  friend bool operator==(const GroupId&, const GroupId&) = default;
};

/// Coordinates of a vector in t* (or t) with respect to the orthonormal basis.
using DualVector = std::vector<double>;

struct GroupDescriptor {
  GroupId id;
  int dimension = 0;  // n
  int rank = 0;       // r
  std::vector<DualVector> positive_roots;
  DualVector rho_plus;
  double a = 0.0;  // half the minimal root length (pi on tori)
  int weyl_order = 1;
  std::vector<DualVector> weight_lattice_basis;
  double covolume = 1.0;  // Vol(t / Gamma)
  double diameter = 0.0;

  /// |2 rho+|
  double two_rho_norm() const;
  /// Smallest admissible smoothing level |2 rho+| + a.
  double admissible_level() const { return two_rho_norm() + a; }
  bool is_torus() const { return id.kind == GroupKind::torus; }
};

GroupDescriptor descriptor(const GroupId& id);

/// Torus elements store coordinates in [0,1) in v[0..d). SU(2)/SO(3) elements
/// store a unit quaternion (w, x, y, z); SO(3) keeps the canonical sign.
struct GroupElement {
  std::array<double, 4> v{};
};

struct Irrep {
  GroupKind kind = GroupKind::su2;
  int twice_spin = 0;             // su2 / so3: 2j
  std::array<int, 3> frequency{};  // torus: m
  DualVector highest_weight;
  int dim = 1;
  double casimir = 0.0;
  /// Weight multiset; each weight is listed once per unit of multiplicity.
  std::vector<DualVector> weights;

  double level() const;  // |lambda|
  bool is_trivial() const;
  std::string label() const;
};

/// Irrep with the given label: `twice_spin` for su2/so3 (must be even on so3)
/// or `frequency` for tori.
Irrep make_irrep(const GroupDescriptor& G, int twice_spin,
                 std::array<int, 3> frequency = {});

/// All irreps with 0 < |lambda| < level (plus the trivial one when asked),
/// sorted by |lambda| and then by label.
std::vector<Irrep> enumerate_irreps(const GroupDescriptor& G, double level,
                                    bool include_trivial = false);

/// Level, dimension and Casimir of an irrep without its weight list.
struct IrrepSummary {
  double level = 0.0;
  int dim = 1;
  double casimir = 0.0;
};

/// Summaries of the irreps with 0 < |lambda| < level, sorted by level. Cheap
/// for large levels (no weight lists are built).
std::vector<IrrepSummary> irrep_summaries(const GroupDescriptor& G, double level);

GroupElement identity(const GroupDescriptor& G);
GroupElement multiply(const GroupDescriptor& G, const GroupElement& x,
                      const GroupElement& y);
GroupElement inverse(const GroupDescriptor& G, const GroupElement& x);
/// Reduces coordinates mod 1 (torus), renormalizes and canonicalizes the
/// quaternion sign (so3).
GroupElement canonicalize(const GroupDescriptor& G, GroupElement x);
/// exp of an algebra vector given in orthonormal coordinates (size n).
GroupElement exp_algebra(const GroupDescriptor& G, std::span<const double> X);
/// Torus element exp(2 pi X) for X in t given in orthonormal coordinates.
GroupElement torus_point(const GroupDescriptor& G, std::span<const double> X);

double geodesic_distance(const GroupDescriptor& G, const GroupElement& x,
                         const GroupElement& y);

std::vector<GroupElement> haar_sample(const GroupDescriptor& G,
                                      std::uint64_t seed, std::size_t count);

bool approx_equal(const GroupDescriptor& G, const GroupElement& x,
                  const GroupElement& y, double tol);

/// Finite-difference check of Delta chi = -kappa chi: max over the probe set
/// of |sum_k D2_h chi(x exp(u X_k)) + kappa chi(x)|.
double casimir_residual(const GroupDescriptor& G, const Irrep& irrep, double h);

/// casimir_residual scaled by kappa * d (the size of kappa * chi).
double casimir_relative_residual(const GroupDescriptor& G, const Irrep& irrep,
                                 double h);

/// Identity plus 8 fixed pseudo-random points.
std::vector<GroupElement> casimir_probe_set(const GroupDescriptor& G);

namespace quat {
using Quaternion = std::array<double, 4>;
Quaternion mul(const Quaternion& p, const Quaternion& q);
Quaternion conj(const Quaternion& q);
Quaternion normalized(Quaternion q);
double dot(const Quaternion& p, const Quaternion& q);
/// Angle between p and q as vectors of R^4, computed without acos.
double angle(const Quaternion& p, const Quaternion& q);
}  // namespace quat

}  // namespace wgb
