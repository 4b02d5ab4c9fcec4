#pragma once

// Explicit upper bound W_g(nu1, nu2) <= psi(M) + phi(M) sqrt(S(M)) with
// S(M) = sum over 0 < |lambda_pi| < M of (d_pi / kappa_pi) ||nu1^ - nu2^||_HS^2.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wgb/fourier.hpp"
#include "wgb/groups.hpp"
#include "wgb/modulus.hpp"
#include "wgb/smoothing.hpp"

namespace wgb {

struct PsiResult {
  double value = 0.0;       // main integral + rigorous tail
  double main = 0.0;
  double tail = 0.0;
  double quadrature_error = 0.0;  // reported error of the adaptive rule
  double transform_error = 0.0;   // effect of the tabulation error of F
  double tolerance = 0.0;         // quadrature_error + transform_error
  bool tail_warning = false;      // tail > 10% of main
  int M0 = 0;
};

/// psi(t) = (2/|W|) int_t g(2 pi |X| / M_0) a^r |F(aX)| prod |e^{2 pi i alpha(X)} - 1|^2 dX.
PsiResult psi(const GroupDescriptor& G, const Modulus& g, double t,
              BumpProfile profile);

/// phi(t) = inf_c sqrt(n / (1 - c - c^2/(4n))) g(c/(n t)) / (c/(n t)).
double phi(int n, const Modulus& g, double t);

struct BoundReport {
  std::string group;
  std::string g;
  std::string profile;
  double M = 0.0;
  int M0 = 0;
  double psi = 0.0;
  double phi = 0.0;
  double fourier_sum = 0.0;
  double total = 0.0;
  std::size_t irreps_used = 0;
  double tolerance = 0.0;
  double psi_quadrature_error = 0.0;
  double psi_transform_error = 0.0;
  double psi_tail = 0.0;
  double fourier_rounding = 0.0;
  bool psi_tail_warning = false;
};

/// Evaluates the bound at many M from one pass over the measures: the squared
/// HS distances are computed once for all irreps below M_max.
class BoundEvaluator {
 public:
  BoundEvaluator(const GroupDescriptor& G, const Modulus& g, const Measure& nu1,
                 const Measure& nu2, BumpProfile profile, double M_max);

  BoundReport at(double M) const;
  /// Variant with the transform of nu2 = Haar and every ||nu1^(pi)||_HS^2
  /// replaced by d_pi q^2 (q given).
  BoundReport gap_relaxed_at(double M, double q) const;

  const std::vector<Irrep>& irreps() const { return irreps_; }
  const std::vector<double>& distances() const { return dist_; }

 private:
  BoundReport assemble(double M, double fourier_sum, double rounding,
                       std::size_t used) const;

  GroupDescriptor G_;
  Modulus g_;
  BumpProfile profile_;
  double M_max_;
  std::vector<Irrep> irreps_;  // sorted by level
  std::vector<double> dist_;
  double mass_ = 0.0;  // sum of |coefficients| of nu1 - nu2
  std::size_t atoms_ = 0;
};

BoundReport wg_bound(const GroupDescriptor& G, const Modulus& g,
                     const Measure& nu1, const Measure& nu2, double M,
                     BumpProfile profile);

/// Geometric grid, `per_decade` points per decade, from the admissible level
/// to M_max (inclusive of both ends).
std::vector<double> default_M_grid(const GroupDescriptor& G, double M_max = 1e3,
                                   int per_decade = 16);
/// "start:stop:points" geometric grid.
std::vector<double> parse_M_grid(const std::string& text);
/// Breakpoints M = k (|2 rho+| + a), k = 1..k_max: psi only changes there.
std::vector<double> breakpoint_M_grid(const GroupDescriptor& G, int k_max);

/// Grid argmin of the total (ties to the smaller M).
std::pair<double, BoundReport> optimize_M(const GroupDescriptor& G,
                                          const Modulus& g, const Measure& nu1,
                                          const Measure& nu2, BumpProfile profile,
                                          const std::vector<double>& M_grid);

struct GapBoundReport {
  BoundReport exact;    // exact transform blocks of nu
  BoundReport relaxed;  // ||nu^||_HS^2 <= d q^2 with q the truncated gap
  double q_hat = 0.0;
};

GapBoundReport haar_bound_from_gap(const GroupDescriptor& G, const Modulus& g,
                                   const DiscreteMeasure& nu, double M,
                                   BumpProfile profile);

/// min over the breakpoint grid of psi(M) + phi(M) q sqrt(sum d^2/kappa), the
/// gap-relaxed bound as a function of a prescribed gap q.
std::pair<double, double> optimized_gap_bound(const GroupDescriptor& G,
                                              const Modulus& g, double q,
                                              BumpProfile profile, int k_max);

/// k^{1/(A+1)} exp(-(n/2) (b (k - m) / (2 m n))^{1/(A+1)}) (implied constant 1).
double walk_rate_prediction(int n, double b, int m, double A, double k);

}  // namespace wgb
