#include "wgb/smoothing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "wgb/bound.hpp"
#include "wgb/errors.hpp"
#include "wgb/kernels.hpp"

namespace wgb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kJetOrder = 6;
constexpr double kUnderflow = 700.0;  // exp(-700) is treated as 0

// Truncated Taylor series in one variable.
struct Jet {
  std::array<double, kJetOrder + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  bool is_zero() const {
    return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
  }
};

Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  for (int k = 0; k <= kJetOrder; ++k) r.c[k] = a.c[k] + b.c[k];
  return r;
}
Jet operator-(double s, const Jet& a) {
  Jet r;
  for (int k = 0; k <= kJetOrder; ++k) r.c[k] = -a.c[k];
  r.c[0] += s;
  return r;
}
Jet operator*(double s, const Jet& a) {
  Jet r;
  for (int k = 0; k <= kJetOrder; ++k) r.c[k] = s * a.c[k];
  return r;
}
Jet operator/(const Jet& a, const Jet& b) {
  Jet q;
  for (int k = 0; k <= kJetOrder; ++k) {
    double s = a.c[k];
    for (int i = 1; i <= k; ++i) s -= b.c[i] * q.c[k - i];
    q.c[k] = s / b.c[0];
  }
  return q;
}
Jet exp(const Jet& a) {
  Jet e;
  e.c[0] = std::exp(a.c[0]);
  for (int k = 1; k <= kJetOrder; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += i * a.c[i] * e.c[k - i];
    e.c[k] = s / k;
  }
  return e;
}
Jet sqrt(const Jet& a) {
  Jet s;
  s.c[0] = std::sqrt(a.c[0]);
  for (int k = 1; k <= kJetOrder; ++k) {
    double t = a.c[k];
    for (int i = 1; i < k; ++i) t -= s.c[i] * s.c[k - i];
    s.c[k] = t / (2.0 * s.c[0]);
  }
  return s;
}

// exp(-1/t), zero jet once the value underflows.
Jet flat_step(const Jet& t) {
  if (t.c[0] <= 1.0 / kUnderflow) return Jet{};
  return exp(0.0 - (Jet::constant(1.0) / t));
}

double flat_step(double t) { return t <= 0.0 ? 0.0 : std::exp(-1.0 / t); }

Jet eta_jet(ProfileId id, double y1, double perp2) {
  Jet s;
  s.c[0] = y1 * y1 + perp2;
  s.c[1] = 2.0 * y1;
  s.c[2] = 1.0;
  if (s.c[0] >= 1.0) return Jet{};
  if (id == ProfileId::paper) {
    const Jet w = 1.0 - s;
    if (1.0 / w.c[0] > kUnderflow) return Jet{};
    return exp(1.0 - (Jet::constant(1.0) / w));
  }
  if (s.c[0] <= 0.25) return Jet::constant(1.0);
  const Jet u = sqrt(s);
  const Jet A = flat_step(2.0 * (1.0 - u));
  const Jet B = flat_step(2.0 * u + Jet::constant(-1.0));
  if (A.is_zero()) return Jet{};
  return A / (A + B);
}

// Gauss-Legendre nodes and weights on [lo, hi] split into `panels` pieces.
void composite_gauss(double lo, double hi, int panels, std::vector<double>& x,
                     std::vector<double>& w) {
  using GL = boost::math::quadrature::gauss<double, 20>;
  const auto& ab = GL::abscissa();
  const auto& wt = GL::weights();
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h, half = 0.5 * h;
    for (std::size_t i = 0; i < ab.size(); ++i) {
      x.push_back(mid - half * ab[i]);
      w.push_back(half * wt[i]);
      if (ab[i] != 0.0) {
        x.push_back(mid + half * ab[i]);
        w.push_back(half * wt[i]);
      }
    }
  }
}

double integrate_panels(double lo, double hi, int panels,
                        const std::function<double(double)>& f) {
  std::vector<double> x, w;
  composite_gauss(lo, hi, panels, x, w);
  std::vector<double> terms(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) terms[i] = w[i] * f(x[i]);
  return pairwise_sum(terms);
}

constexpr int kMainPanels = 64;
constexpr double kGridStep = 1.0 / 64.0;
constexpr double kGridEnd = 64.0;

}  // namespace

BumpProfile BumpProfile::parse(const std::string& name) {
  if (name == "paper") return {ProfileId::paper};
  if (name == "plateau") return {ProfileId::plateau};
  throw ConfigError("unknown profile '" + name + "'");
}

std::string BumpProfile::label() const {
  return id == ProfileId::paper ? "paper" : "plateau";
}

double BumpProfile::operator()(double u) const {
  u = std::abs(u);
  if (u >= 1.0) return 0.0;
  if (id == ProfileId::paper) return std::exp(-u * u / (1.0 - u * u));
  if (u <= 0.5) return 1.0;
  const double A = flat_step(2.0 * (1.0 - u)), B = flat_step(2.0 * u - 1.0);
  return A / (A + B);
}

double BumpProfile::directional_derivative(int k, double y1, double perp2) const {
  if (k < 0 || k > kJetOrder) throw DomainError("derivative order out of range");
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return fact * eta_jet(id, y1, perp2).c[k];
}

double BumpTransform::projection(double y) const {
  y = std::abs(y);
  if (y >= 1.0) return 0.0;
  if (rank_ == 1) return profile_(y);
  const double top = std::sqrt(1.0 - y * y);
  if (rank_ == 2)
    return 2.0 * integrate_panels(0.0, top, 8, [&](double t) {
             return profile_(std::sqrt(y * y + t * t));
           });
  return 2.0 * kPi * integrate_panels(0.0, top, 8, [&](double t) {
           return profile_(std::sqrt(y * y + t * t)) * t;
         });
}

BumpTransform::BumpTransform(BumpProfile profile, int rank)
    : profile_(profile), rank_(rank) {
  if (rank < 1 || rank > 3) throw DomainError("bump transform rank must be 1, 2 or 3");
  std::vector<double> w;
  composite_gauss(0.0, 1.0, kMainPanels, nodes_, w);
  weights_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    weights_[i] = 2.0 * w[i] * projection(nodes_[i]);
  f0_ = pairwise_sum(weights_);

  const int npts = static_cast<int>(std::lround(kGridEnd / kGridStep));
  grid_.resize(npts + 1);
  table_.resize(npts + 1);
#pragma omp parallel for schedule(static)
  for (int i = 0; i <= npts; ++i) {
    grid_[i] = i * kGridStep;
    table_[i] = (*this)(grid_[i]);
  }
  for (int i = 0; i < npts; ++i) {
    if (table_[i] == 0.0) {
      if (i > 0) zeros_.push_back(grid_[i]);
      continue;
    }
    if (table_[i] * table_[i + 1] < 0.0) {
      boost::uintmax_t iters = 200;
      auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::max(1.0, a); };
      const auto r = boost::math::tools::toms748_solve(
          [this](double x) { return (*this)(x); }, grid_[i], grid_[i + 1],
          table_[i], table_[i + 1], tol, iters);
      zeros_.push_back(0.5 * (r.first + r.second));
    }
  }

  // Tail majorants: |F(x)| <= (2 pi |x|)^{-k} * integral |d^k eta / dy1^k|.
  for (int k : {2, 4, 6}) {
    double integral = 0.0;
    auto line = [&](double perp2) {
      const double top = std::sqrt(std::max(0.0, 1.0 - perp2));
      return 2.0 * integrate_panels(0.0, top, 32, [&](double y1) {
               return std::abs(profile_.directional_derivative(k, y1, perp2));
             });
    };
    if (rank_ == 1) {
      integral = line(0.0);
    } else if (rank_ == 2) {
      integral = 2.0 * integrate_panels(0.0, 1.0, 32, [&](double y2) { return line(y2 * y2); });
    } else {
      integral = 2.0 * kPi * integrate_panels(0.0, 1.0, 32, [&](double rho) {
                   return rho * line(rho * rho);
                 });
    }
    tail_[k] = 1.1 * integral / std::pow(2.0 * kPi, k);
  }
}

const BumpTransform& BumpTransform::get(BumpProfile profile, int rank) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<BumpTransform>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(static_cast<int>(profile.id), rank);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<BumpTransform>(profile, rank)).first;
  return *it->second;
}

double BumpTransform::operator()(double x) const {
  x = std::abs(x);
  if (x == 0.0) return f0_;
  std::vector<double> terms(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    terms[i] = weights_[i] * std::cos(2.0 * kPi * x * nodes_[i]);
  return pairwise_sum(terms);
}

double BumpTransform::tail_constant(int k) const {
  auto it = tail_.find(k);
  if (it == tail_.end()) throw DomainError("tail constant available for k = 2, 4, 6");
  return it->second;
}

std::vector<std::pair<DualVector, int>> weyl_density_coeffs(const GroupDescriptor& G) {
  if (G.is_torus()) return {{DualVector(G.rank, 0.0), 1}};
  // |e^{2 pi i s} - 1|^2 = 2 - e^{2 pi i s} - e^{-2 pi i s}
  return {{{-1.0}, -1}, {{0.0}, 2}, {{1.0}, -1}};
}

int smoothing_degree(const GroupDescriptor& G, double M) {
  const double thr = G.admissible_level();
  if (!(M >= thr))
    throw DomainError("M = " + std::to_string(M) + " is below the admissible level " +
                      std::to_string(thr));
  return static_cast<int>(std::floor(M / thr + 1e-12));
}

double KernelCoefficients::at(const Irrep& irrep) const {
  for (const auto& [ir, a] : coeffs)
    if (ir.twice_spin == irrep.twice_spin && ir.frequency == irrep.frequency) return a;
  return 0.0;
}

double kernel_coefficient(const GroupDescriptor& G, int M0, const Irrep& irrep,
                          BumpProfile profile) {
  if (M0 < 1) throw DomainError("kernel degree must be >= 1");
  const double scale = G.a * M0;
  const auto cl = weyl_density_coeffs(G);
  std::vector<double> terms;
  for (const auto& mu : irrep.weights) {
    for (const auto& [lam, c] : cl) {
      double r2 = 0.0;
      for (std::size_t i = 0; i < mu.size(); ++i) {
        const double v = -lam[i] / G.a + mu[i] / scale;
        r2 += v * v;
      }
      if (r2 < 1.0) terms.push_back(double(c) / G.weyl_order * profile(std::sqrt(r2)));
    }
  }
  return pairwise_sum(terms);
}

KernelCoefficients kernel_coefficients(const GroupDescriptor& G, double M,
                                       BumpProfile profile) {
  KernelCoefficients K;
  K.M = M;
  K.M0 = smoothing_degree(G, M);
  K.profile = profile.id;
  for (auto& ir : enumerate_irreps(G, M, true)) {
    const double a = kernel_coefficient(G, K.M0, ir, profile);
    K.coeffs.emplace_back(std::move(ir), a);
  }
  return K;
}

PerFunctionBound per_function_bound(const GroupDescriptor& G,
                                    const std::map<std::string, CMatrix>& f_hat,
                                    const Modulus& g, double M,
                                    const Measure& nu1, const Measure& nu2,
                                    BumpProfile profile) {
  const auto irreps = enumerate_irreps(G, M);
  for (const auto& ir : irreps)
    if (!f_hat.count(ir.label()))
      throw DomainError("per_function_bound: missing block for " + ir.label());
  PerFunctionBound out;
  out.psi = psi(G, g, M, profile).value;
  const auto dist = hs_distance_sq_all(G, nu1, nu2, irreps);
  std::vector<double> terms(irreps.size());
  for (std::size_t i = 0; i < irreps.size(); ++i)
    terms[i] = irreps[i].dim * hs_norm(f_hat.at(irreps[i].label())) * std::sqrt(dist[i]);
  out.pairing = pairwise_sum(terms);
  out.value = out.psi + out.pairing;
  return out;
}

double decay_c_max(int n) { return 2.0 * (std::sqrt(double(n) * n + n) - n); }

double decay_bracket(int n, const Modulus& g, double t, double c) {
  if (n < 1) throw DomainError("dimension must be >= 1");
  if (!(t > 0.0)) throw DomainError("decay bracket needs t > 0");
  if (!(c > 0.0 && c < decay_c_max(n))) throw DomainError("c outside (0, 2(sqrt(n^2+n)-n))");
  const double x = c / (n * t);
  return std::sqrt(n / (1.0 - c - c * c / (4.0 * n))) * g(x) / x;
}

DecayInfimum decay_infimum(int n, const Modulus& g, double t) {
  const double eps = 1e-6, hi = decay_c_max(n) - eps;
  auto h = [&](double c) { return decay_bracket(n, g, t, c); };
  // coarse log-spaced grid, then golden section around the best cell
  constexpr int kGrid = 200;
  std::vector<double> cs(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) cs[i] = eps * std::pow(hi / eps, double(i) / kGrid);
  int best = 0;
  double best_val = h(cs[0]);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = h(cs[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = cs[std::max(0, best - 1)], b = cs[std::min(kGrid, best + 1)];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c1 = b - invphi * (b - a), c2 = a + invphi * (b - a);
  double f1 = h(c1), f2 = h(c2);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * b; ++it) {
    if (f1 <= f2) {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - invphi * (b - a);
      f1 = h(c1);
    } else {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + invphi * (b - a);
      f2 = h(c2);
    }
  }
  DecayInfimum out;
  out.argmin = f1 <= f2 ? c1 : c2;
  out.value = std::min({f1, f2, best_val});
  if (best_val < std::min(f1, f2)) out.argmin = cs[best];
  const double slope = g.slope_at_zero();
  if (std::isfinite(slope)) {
    const double limit = std::sqrt(double(n)) * slope;
    if (limit <= out.value) {
      out.value = limit;
      out.argmin = 0.0;
      out.boundary = true;
    }
  }
  return out;
}

double fourier_decay_budget(int n, const Modulus& g, double M, std::optional<double> c) {
  if (!(M > 0.0)) throw DomainError("decay budget needs M > 0");
  const double v = c ? decay_bracket(n, g, M, *c) : decay_infimum(n, g, M).value;
  return v * v;
}

}  // namespace wgb
