#include "wgb/bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wgb/errors.hpp"
#include "wgb/kernels.hpp"

namespace wgb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Absolute accuracy of the tabulated transform F.
constexpr double kTransformAbsError = 1e-13;

double sphere_area(int r) {
  switch (r) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * kPi;
    default:
      return 4.0 * kPi;
  }
}

struct RadialIntegral {
  double value = 0.0;
  double error = 0.0;
  double weight_mass = 0.0;  // integral of the weight without |F|
};

// GK31 with bisection until the Kronrod error estimate is below an absolute
// target; relative targets stall where |F| is near rounding level.
template <class Fn>
std::pair<double, double> adaptive_gk(const Fn& f, double lo, double hi, int depth) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0;
  const double v = GK::integrate(f, lo, hi, 0, 0.0, &err);
  if (err <= 1e-12 * (hi - lo) || depth >= 6) return {v, err};
  const double mid = 0.5 * (lo + hi);
  const auto [a, ea] = adaptive_gk(f, lo, mid, depth + 1);
  const auto [b, eb] = adaptive_gk(f, mid, hi, depth + 1);
  return {a + b, ea + eb};
}

// int_0^R w(y) |F(y)| dy with w(y) = gfun(y) y^{r-1} root(y), split at the
// zeros of F.
RadialIntegral radial_integral(const BumpTransform& F, const GroupDescriptor& G,
                               const std::function<double(double)>& gfun) {
  const int r = G.rank;
  auto weight = [&](double y) {
    double w = gfun(y) * std::pow(y, r - 1);
    if (!G.is_torus()) w *= 2.0 - 2.0 * std::cos(2.0 * kPi * y / G.a);
    return w;
  };
  std::vector<double> cuts{0.0};
  for (double z : F.zeros()) cuts.push_back(z);
  cuts.push_back(F.table_end());
  std::vector<double> vals(cuts.size() - 1), errs(cuts.size() - 1), mass(cuts.size() - 1);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cuts.size()) - 1; ++i) {
    auto f = [&](double y) { return weight(y) * std::abs(F(y)); };
    // y = t^2 on the first piece smooths the y^p behaviour at 0
    auto f0 = [&](double t) { return 2.0 * t * f(t * t); };
    const auto [v, e] = i == 0 ? adaptive_gk(f0, 0.0, std::sqrt(cuts[1]), 0)
                               : adaptive_gk(f, cuts[i], cuts[i + 1], 0);
    vals[i] = v;
    errs[i] = e;
    mass[i] = boost::math::quadrature::gauss<double, 30>::integrate(weight, cuts[i],
                                                                    cuts[i + 1]);
  }
  RadialIntegral out;
  out.value = pairwise_sum(vals);
  out.error = pairwise_sum(errs);
  out.weight_mass = pairwise_sum(mass);
  return out;
}

struct CachedIntegral {
  RadialIntegral main;
};

}  // namespace

PsiResult psi(const GroupDescriptor& G, const Modulus& g, double t,
              BumpProfile profile) {
  PsiResult out;
  out.M0 = smoothing_degree(G, t);
  if (g.is_zero()) return out;
  const int r = G.rank;
  const auto& F = BumpTransform::get(profile, r);
  const double scale = 2.0 * kPi / (G.a * out.M0);  // g argument is scale * y
  const double pref = 2.0 / G.weyl_order * sphere_area(r);
  const double root_max = G.is_torus() ? 1.0 : 4.0;
  const double R = F.table_end();

  RadialIntegral I;
  double gfactor = 1.0;
  if (g.is_power()) {
    // g(scale y) = scale^p y^p: the integral is independent of M_0.
    static std::mutex mu;
    static std::map<std::tuple<int, int, int, double>, RadialIntegral> cache;
    const auto key = std::make_tuple(static_cast<int>(G.id.kind), r,
                                     static_cast<int>(profile.id), g.exponent());
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = cache.find(key);
      if (it != cache.end()) I = it->second;
    }
    if (I.value == 0.0) {
      const double p = g.exponent();
      I = radial_integral(F, G, [p](double y) { return p == 1.0 ? y : std::pow(y, p); });
      std::lock_guard<std::mutex> lock(mu);
      cache[key] = I;
    }
    gfactor = std::pow(scale, g.exponent());
  } else {
    I = radial_integral(F, G, [&](double y) { return g(scale * y); });
  }
  out.main = pref * gfactor * I.value;
  out.quadrature_error = pref * gfactor * I.error;
  out.transform_error = pref * gfactor * kTransformAbsError * I.weight_mass;

  // Tail beyond R with |F(y)| <= C_k / y^k.
  double tail = std::numeric_limits<double>::infinity();
  for (int k : {4, 6}) {
    const double Ck = F.tail_constant(k);
    double v;
    if (g.is_power()) {
      const double e = g.exponent() + r - k;  // exponent of y in the integrand
      if (e >= -1.0) continue;
      v = std::pow(scale, g.exponent()) * std::pow(R, e + 1.0) / (-(e + 1.0));
    } else {
      // g(s) <= g(1) (s + 1)
      const double e1 = r - k, e0 = r - 1 - k;
      if (e1 >= -1.0) continue;
      v = g(1.0) * (scale * std::pow(R, e1 + 1.0) / (-(e1 + 1.0)) +
                    std::pow(R, e0 + 1.0) / (-(e0 + 1.0)));
    }
    tail = std::min(tail, pref * root_max * Ck * v);
  }
  out.tail = tail;
  out.value = out.main + out.tail;
  out.tolerance = out.quadrature_error + out.transform_error;
  out.tail_warning = out.tail > 0.1 * out.main;
  return out;
}

double phi(int n, const Modulus& g, double t) {
  if (!(t > 0.0)) throw DomainError("phi needs t > 0");
  return decay_infimum(n, g, t).value;
}

BoundEvaluator::BoundEvaluator(const GroupDescriptor& G, const Modulus& g,
                               const Measure& nu1, const Measure& nu2,
                               BumpProfile profile, double M_max)
    : G_(G), g_(g), profile_(profile), M_max_(M_max) {
  smoothing_degree(G, M_max);
  irreps_ = enumerate_irreps(G, M_max);
  dist_ = hs_distance_sq_all(G, nu1, nu2, irreps_);
  for (const Measure* m : {&nu1, &nu2})
    if (auto* d = std::get_if<DiscreteMeasure>(m)) {
      for (double w : d->weights) mass_ += std::abs(w);
      atoms_ += d->size();
    }
  if (atom_identical(nu1, nu2)) mass_ = 0.0;
}

BoundReport BoundEvaluator::assemble(double M, double fourier_sum,
                                     double rounding, std::size_t used) const {
  BoundReport rep;
  rep.group = G_.id.label();
  rep.g = g_.label();
  rep.profile = profile_.label();
  rep.M = M;
  const PsiResult ps = psi(G_, g_, M, profile_);
  rep.M0 = ps.M0;
  rep.psi = ps.value;
  rep.phi = phi(G_.dimension, g_, M);
  rep.fourier_sum = fourier_sum;
  rep.total = rep.psi + rep.phi * std::sqrt(fourier_sum);
  rep.irreps_used = used;
  rep.psi_quadrature_error = ps.quadrature_error;
  rep.psi_transform_error = ps.transform_error;
  rep.psi_tail = ps.tail;
  rep.psi_tail_warning = ps.tail_warning;
  rep.fourier_rounding = rounding;
  rep.tolerance = ps.tolerance + rep.phi * std::sqrt(rounding);
  return rep;
}

BoundReport BoundEvaluator::at(double M) const {
  if (M > M_max_ * (1.0 + 1e-12))
    throw DomainError("BoundEvaluator: M above the precomputed range");
  std::vector<double> terms, errs;
  std::size_t used = 0;
  for (std::size_t i = 0; i < irreps_.size() && irreps_[i].level() < M; ++i) {
    const auto& ir = irreps_[i];
    const double w = ir.dim / ir.casimir;
    terms.push_back(w * dist_[i]);
    // rounding of the pair sum: |coeffs|_1^2 times the size of the character
    const double chi_max = G_.is_torus() ? 1.0 : double(ir.dim) * ir.dim;
    errs.push_back(w * mass_ * mass_ * chi_max * 8.0 * kEps * std::max<std::size_t>(atoms_, 1));
    ++used;
  }
  return assemble(M, pairwise_sum(terms), pairwise_sum(errs), used);
}

BoundReport BoundEvaluator::gap_relaxed_at(double M, double q) const {
  std::vector<double> terms;
  std::size_t used = 0;
  for (std::size_t i = 0; i < irreps_.size() && irreps_[i].level() < M; ++i) {
    const auto& ir = irreps_[i];
    terms.push_back(double(ir.dim) * ir.dim / ir.casimir * q * q);
    ++used;
  }
  return assemble(M, pairwise_sum(terms), 0.0, used);
}

BoundReport wg_bound(const GroupDescriptor& G, const Modulus& g,
                     const Measure& nu1, const Measure& nu2, double M,
                     BumpProfile profile) {
  return BoundEvaluator(G, g, nu1, nu2, profile, M).at(M);
}

std::vector<double> default_M_grid(const GroupDescriptor& G, double M_max,
                                   int per_decade) {
  const double lo = G.admissible_level();
  if (!(M_max >= lo)) throw DomainError("M grid upper end below admissibility");
  std::vector<double> grid;
  const double step = std::pow(10.0, 1.0 / per_decade);
  for (double m = lo; m < M_max * (1.0 - 1e-12); m *= step) grid.push_back(m);
  grid.push_back(M_max);
  return grid;
}

std::vector<double> parse_M_grid(const std::string& text) {
  std::istringstream is(text);
  std::string a, b, c;
  if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c))
    throw ConfigError("M grid must be start:stop:points");
  double lo, hi;
  int n;
  try {
    lo = std::stod(a);
    hi = std::stod(b);
    n = std::stoi(c);
  } catch (const std::exception&) {
    throw ConfigError("M grid must be start:stop:points");
  }
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw ConfigError("invalid M grid");
  std::vector<double> grid;
  for (int i = 0; i < n; ++i)
    grid.push_back(n == 1 ? lo : lo * std::pow(hi / lo, double(i) / (n - 1)));
  return grid;
}

std::vector<double> breakpoint_M_grid(const GroupDescriptor& G, int k_max) {
  std::vector<double> grid;
  for (int k = 1; k <= k_max; ++k) grid.push_back(k * G.admissible_level());
  return grid;
}

std::pair<double, BoundReport> optimize_M(const GroupDescriptor& G,
                                          const Modulus& g, const Measure& nu1,
                                          const Measure& nu2, BumpProfile profile,
                                          const std::vector<double>& M_grid) {
  std::vector<double> grid;
  for (double m : M_grid)
    if (m >= G.admissible_level()) grid.push_back(m);
  if (grid.empty()) throw DomainError("optimize_M: no admissible M in the grid");
  std::sort(grid.begin(), grid.end());
  BoundEvaluator ev(G, g, nu1, nu2, profile, grid.back());
  std::optional<BoundReport> best;
  for (double m : grid) {
    BoundReport r = ev.at(m);
    if (!best || r.total < best->total) best = r;
  }
  return {best->M, *best};
}

GapBoundReport haar_bound_from_gap(const GroupDescriptor& G, const Modulus& g,
                                   const DiscreteMeasure& nu, double M,
                                   BumpProfile profile) {
  GapBoundReport out;
  BoundEvaluator ev(G, g, nu, HaarMeasure{}, profile, M);
  out.exact = ev.at(M);
  out.q_hat = spectral_gap_estimate(G, nu, M);
  out.relaxed = ev.gap_relaxed_at(M, out.q_hat);
  return out;
}

std::pair<double, double> optimized_gap_bound(const GroupDescriptor& G,
                                              const Modulus& g, double q,
                                              BumpProfile profile, int k_max) {
  if (!(q >= 0.0)) throw DomainError("gap must be >= 0");
  const auto grid = breakpoint_M_grid(G, k_max);
  const auto irreps = irrep_summaries(G, grid.back());
  double best = std::numeric_limits<double>::infinity(), best_M = grid.front();
  std::size_t i = 0;
  double acc = 0.0;
  for (double M : grid) {
    for (; i < irreps.size() && irreps[i].level < M; ++i)
      acc += double(irreps[i].dim) * irreps[i].dim / irreps[i].casimir;
    const double total =
        psi(G, g, M, profile).value + phi(G.dimension, g, M) * q * std::sqrt(acc);
    if (total < best) {
      best = total;
      best_M = M;
    }
  }
  return {best, best_M};
}

double walk_rate_prediction(int n, double b, int m, double A, double k) {
  if (n < 1 || !(b > 0.0) || m < 1 || !(A >= 1.0 && A <= 2.0) || !(k > m))
    throw DomainError("walk_rate_prediction: parameters out of range");
  const double e = 1.0 / (A + 1.0);
  return std::pow(k, e) * std::exp(-0.5 * n * std::pow(b * (k - m) / (2.0 * m * n), e));
}

}  // namespace wgb
