#include "wgb/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "wgb/errors.hpp"
#include "wgb/kernels.hpp"

namespace wgb {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr cd kI{0.0, 1.0};

// Ladder generator -i d pi(X_2) for twice_spin n, in the monomial basis.
Eigen::MatrixXcd ladder_y(int n) {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    if (k < n) A(k + 1, k) = 0.5 * std::sqrt(double(n - k) * (k + 1));
    if (k > 0) A(k - 1, k) = -0.5 * std::sqrt(double(k) * (n - k + 1));
  }
  return -kI * A;
}

struct Eigenbasis {
  Eigen::MatrixXcd V;
  Eigen::VectorXd h;
};

std::shared_ptr<const Eigenbasis> eigenbasis(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const Eigenbasis>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ladder_y(n));
  auto eb = std::make_shared<Eigenbasis>();
  eb->V = es.eigenvectors();
  eb->h.resize(n + 1);
  // The spectrum is the weight string -j..j; snap to it exactly.
  for (int k = 0; k <= n; ++k) eb->h(k) = -0.5 * n + k;
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(n, eb).first->second;
}

int twice_spin_of(const Irrep& irrep) { return irrep.twice_spin; }

double chebyshev_u(int n, double t) {
  t = std::clamp(t, -1.0, 1.0);
  double um1 = 0.0, u = 1.0;
  for (int k = 1; k <= n; ++k) {
    const double up = 2.0 * t * u - um1;
    um1 = u;
    u = up;
  }
  return u;
}

double torus_phase(const GroupDescriptor& G, const Irrep& irrep,
                   const GroupElement& x) {
  double ph = 0.0;
  for (int a = 0; a < G.rank; ++a) ph += irrep.frequency[a] * x.v[a];
  ph -= std::floor(ph);
  return 2.0 * kPi * ph;
}

struct SignedAtoms {
  std::vector<GroupElement> atoms;
  std::vector<double> coeffs;
};

SignedAtoms signed_combination(const Measure& nu1, const Measure& nu2) {
  SignedAtoms s;
  if (auto* d = std::get_if<DiscreteMeasure>(&nu1)) {
    s.atoms = d->atoms;
    s.coeffs = d->weights;
  }
  if (auto* d = std::get_if<DiscreteMeasure>(&nu2)) {
    s.atoms.insert(s.atoms.end(), d->atoms.begin(), d->atoms.end());
    for (double w : d->weights) s.coeffs.push_back(-w);
  }
  return s;
}

void check_measure(const Measure& m) {
  if (auto* d = std::get_if<DiscreteMeasure>(&m)) d->validate();
}

}  // namespace

DiscreteMeasure DiscreteMeasure::uniform(std::vector<GroupElement> atoms) {
  if (atoms.empty()) throw DomainError("uniform measure needs atoms");
  DiscreteMeasure m;
  m.weights.assign(atoms.size(), 1.0 / atoms.size());
  m.atoms = std::move(atoms);
  return m;
}

DiscreteMeasure DiscreteMeasure::dirac(const GroupElement& x) {
  return {{x}, {1.0}};
}

void DiscreteMeasure::validate() const {
  if (atoms.empty()) throw DomainError("measure has no atoms");
  if (atoms.size() != weights.size())
    throw DomainError("measure atoms/weights size mismatch");
  for (double w : weights)
    if (!(w >= 0.0)) throw DomainError("measure has a negative weight");
  const double s = pairwise_sum(weights);
  if (std::abs(s - 1.0) > 1e-12) throw DomainError("measure weights do not sum to 1");
}

bool is_haar(const Measure& m) { return std::holds_alternative<HaarMeasure>(m); }

bool atom_identical(const Measure& a, const Measure& b) {
  if (is_haar(a) || is_haar(b)) return is_haar(a) && is_haar(b);
  const auto& x = std::get<DiscreteMeasure>(a);
  const auto& y = std::get<DiscreteMeasure>(b);
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x.atoms[i].v != y.atoms[i].v || x.weights[i] != y.weights[i]) return false;
  return true;
}

double hs_norm(const CMatrix& A) { return A.norm(); }

double op_norm(const CMatrix& A) {
  if (A.size() == 0) return 0.0;
  if (A.size() == 1) return std::abs(A(0, 0));
  if (A.rows() <= 16) {
    Eigen::JacobiSVD<CMatrix> svd(A);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<CMatrix> svd(A);
  return svd.singularValues()(0);
}

FourierBlock make_block(const Irrep& irrep, CMatrix matrix) {
  FourierBlock b;
  b.irrep = irrep;
  b.hs_norm = hs_norm(matrix);
  b.op_norm = op_norm(matrix);
  b.matrix = std::move(matrix);
  return b;
}

Eigen::Matrix2cd su2_matrix(const GroupElement& x) {
  const auto& q = x.v;
  Eigen::Matrix2cd U;
  U << cd(q[0], q[3]), cd(-q[2], q[1]), cd(q[2], q[1]), cd(q[0], -q[3]);
  return U;
}

CMatrix irrep_matrix(const GroupDescriptor& G, const Irrep& irrep,
                     const GroupElement& x) {
  if (G.is_torus()) {
    CMatrix m(1, 1);
    m(0, 0) = std::polar(1.0, torus_phase(G, irrep, x));
    return m;
  }
  const int n = twice_spin_of(irrep);
  if (n == 0) return CMatrix::Identity(1, 1);
  const auto& q = x.v;
  // U = exp(phi X3) exp(beta X2) exp(psi X3)
  const double r11 = std::hypot(q[0], q[3]), r21 = std::hypot(q[2], q[1]);
  const double beta = 2.0 * std::atan2(r21, r11);
  const double arg11 = r11 > 0.0 ? std::atan2(q[3], q[0]) : 0.0;
  const double arg21 = r21 > 0.0 ? std::atan2(q[1], q[2]) : 0.0;
  const double phi = arg11 - arg21, psi = arg11 + arg21;
  const auto eb = eigenbasis(n);
  Eigen::VectorXcd ph(n + 1);
  for (int k = 0; k <= n; ++k) ph(k) = std::polar(1.0, beta * eb->h(k));
  CMatrix d = eb->V * ph.asDiagonal() * eb->V.adjoint();
  const double j = 0.5 * n;
  for (int l = 0; l <= n; ++l)
    for (int k = 0; k <= n; ++k)
      d(l, k) *= std::polar(1.0, phi * (j - l) + psi * (j - k));
  return d;
}

CMatrix irrep_matrix_polynomial(const GroupDescriptor& G, const Irrep& irrep,
                                const GroupElement& x) {
  if (G.is_torus()) return irrep_matrix(G, irrep, x);
  const int n = twice_spin_of(irrep);
  const Eigen::Matrix2cd U = su2_matrix(x);
  auto binom = [](int a, int b) {
    return std::exp(std::lgamma(a + 1.0) - std::lgamma(b + 1.0) -
                    std::lgamma(a - b + 1.0));
  };
  auto lfact = [](int a) { return std::lgamma(a + 1.0); };
  auto pw = [](cd z, int e) {
    cd r = 1.0;
    for (int i = 0; i < e; ++i) r *= z;
    return r;
  };
  CMatrix P = CMatrix::Zero(n + 1, n + 1);
  // e_k -> (U11 z1 + U21 z2)^{n-k} (U12 z1 + U22 z2)^k / sqrt(k!(n-k)!)
  for (int k = 0; k <= n; ++k)
    for (int l = 0; l <= n; ++l) {
      cd coef = 0.0;
      for (int s = std::max(0, l - k); s <= std::min(n - k, l); ++s) {
        coef += binom(n - k, s) * pw(U(0, 0), n - k - s) * pw(U(1, 0), s) *
                binom(k, l - s) * pw(U(0, 1), k - l + s) * pw(U(1, 1), l - s);
      }
      P(l, k) = coef * std::exp(0.5 * (lfact(l) + lfact(n - l) - lfact(k) -
                                       lfact(n - k)));
    }
  return P;
}

std::complex<double> character(const GroupDescriptor& G, const Irrep& irrep,
                               const GroupElement& x) {
  if (G.is_torus()) return std::polar(1.0, torus_phase(G, irrep, x));
  return chebyshev_u(twice_spin_of(irrep), x.v[0]);
}

FourierBlock measure_transform(const GroupDescriptor& G, const Measure& nu,
                               const Irrep& irrep) {
  check_measure(nu);
  if (irrep.is_trivial()) return make_block(irrep, CMatrix::Ones(1, 1));
  if (is_haar(nu))
    return make_block(irrep, CMatrix::Zero(irrep.dim, irrep.dim));
  const auto& d = std::get<DiscreteMeasure>(nu);
  CMatrix acc = CMatrix::Zero(irrep.dim, irrep.dim);
  for (std::size_t k = 0; k < d.size(); ++k)
    acc += d.weights[k] * irrep_matrix(G, irrep, d.atoms[k]).adjoint();
  return make_block(irrep, std::move(acc));
}

double hs_distance_sq_matrix(const GroupDescriptor& G, const Measure& nu1,
                             const Measure& nu2, const Irrep& irrep) {
  const auto a = measure_transform(G, nu1, irrep);
  const auto b = measure_transform(G, nu2, irrep);
  return (a.matrix - b.matrix).squaredNorm();
}

double hs_distance_sq(const GroupDescriptor& G, const Measure& nu1,
                      const Measure& nu2, const Irrep& irrep) {
  return hs_distance_sq_all(G, nu1, nu2, std::span<const Irrep>(&irrep, 1))[0];
}

std::vector<double> hs_distance_sq_all(const GroupDescriptor& G,
                                       const Measure& nu1, const Measure& nu2,
                                       std::span<const Irrep> irreps) {
  check_measure(nu1);
  check_measure(nu2);
  std::vector<double> out(irreps.size(), 0.0);
  if (irreps.empty() || atom_identical(nu1, nu2)) return out;
  const SignedAtoms s = signed_combination(nu1, nu2);
  if (G.is_torus()) {
    std::vector<std::array<int, 3>> modes;
    modes.reserve(irreps.size());
    for (const auto& ir : irreps) modes.push_back(ir.frequency);
    out = torus_mode_energies(G.rank, s.atoms, s.coeffs, modes);
  } else {
    int max_n = 0;
    for (const auto& ir : irreps) max_n = std::max(max_n, ir.twice_spin);
    const auto e = quaternion_character_energies(s.atoms, s.coeffs, max_n);
    for (std::size_t i = 0; i < irreps.size(); ++i) out[i] = e[irreps[i].twice_spin];
  }
  // both transforms equal 1 at the trivial irrep
  for (std::size_t i = 0; i < irreps.size(); ++i)
    if (irreps[i].is_trivial()) out[i] = 0.0;
  return out;
}

double spectral_gap_estimate(const GroupDescriptor& G, const DiscreteMeasure& nu,
                             double M) {
  if (!(M > 0.0)) throw DomainError("spectral_gap_estimate: M must be > 0");
  nu.validate();
  const auto irreps = enumerate_irreps(G, M);
  std::vector<double> norms(irreps.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(irreps.size()); ++i)
    norms[i] = measure_transform(G, nu, irreps[i]).op_norm;
  double q = 0.0;
  for (double v : norms) q = std::max(q, v);
  return q;
}

CMatrix derived_rep(const GroupDescriptor& G, const Irrep& irrep,
                    std::span<const double> X) {
  if (static_cast<int>(X.size()) != G.dimension)
    throw DomainError("derived_rep: wrong algebra dimension");
  if (G.is_torus()) {
    double lx = 0.0;
    for (int a = 0; a < G.rank; ++a) lx += irrep.highest_weight[a] * X[a];
    CMatrix m(1, 1);
    m(0, 0) = cd(0.0, lx);
    return m;
  }
  const int n = twice_spin_of(irrep);
  const double j = 0.5 * n;
  CMatrix D = CMatrix::Zero(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    const double up = k < n ? std::sqrt(double(n - k) * (k + 1)) : 0.0;
    const double dn = k > 0 ? std::sqrt(double(k) * (n - k + 1)) : 0.0;
    if (k < n) D(k + 1, k) += 0.5 * kI * X[0] * up + 0.5 * X[1] * up;
    if (k > 0) D(k - 1, k) += 0.5 * kI * X[0] * dn - 0.5 * X[1] * dn;
    D(k, k) += kI * X[2] * (j - k);
  }
  return D;
}

int weyl_nodes_per_axis(const GroupDescriptor& G) {
  if (!G.is_torus()) return 1 << 14;
  switch (G.rank) {
    case 1:
      return 1 << 14;
    case 2:
      return 512;
    default:
      return 64;
  }
}

double weyl_density(const GroupDescriptor& G, std::span<const double> s) {
  if (G.is_torus()) return 1.0;
  return 2.0 - 2.0 * std::cos(2.0 * kPi * s[0]);
}

std::complex<double> weyl_integral_complex(
    const GroupDescriptor& G,
    const std::function<std::complex<double>(std::span<const double>)>& f) {
  const int r = G.rank;
  const int nodes = weyl_nodes_per_axis(G);
  double period = 1.0 / (2.0 * kPi);
  if (G.id.kind == GroupKind::su2) period = 2.0;
  if (G.id.kind == GroupKind::so3) period = 1.0;
  std::size_t total = 1;
  for (int a = 0; a < r; ++a) total *= nodes;
  std::vector<double> re(total), im(total);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(total); ++idx) {
    std::array<double, 3> s{};
    std::size_t rest = idx;
    for (int a = 0; a < r; ++a) {
      s[a] = period * double(rest % nodes) / nodes;
      rest /= nodes;
    }
    std::span<const double> sp(s.data(), r);
    const cd v = f(sp) * weyl_density(G, sp);
    re[idx] = v.real();
    im[idx] = v.imag();
  }
  const double scale = 1.0 / (double(total) * G.weyl_order);
  return cd(pairwise_sum(re), pairwise_sum(im)) * scale;
}

double weyl_integral(const GroupDescriptor& G,
                     const std::function<double(std::span<const double>)>& f) {
  return weyl_integral_complex(
             G, [&](std::span<const double> s) { return cd(f(s), 0.0); })
      .real();
}

}  // namespace wgb
