#include "wgb/groups.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include "wgb/errors.hpp"
#include "wgb/fourier.hpp"

namespace wgb {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_quaternionic(GroupKind k) { return k != GroupKind::torus; }

double wrap_unit(double t) {
  double r = t - std::floor(t);
  if (r >= 1.0) r = 0.0;  // floor rounding for tiny negatives
  return r;
}

}  // namespace

namespace quat {

Quaternion mul(const Quaternion& p, const Quaternion& q) {
  return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
          p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
          p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}

Quaternion conj(const Quaternion& q) { return {q[0], -q[1], -q[2], -q[3]}; }

Quaternion normalized(Quaternion q) {
  const double n = std::sqrt(dot(q, q));
  for (auto& c : q) c /= n;
  return q;
}

double dot(const Quaternion& p, const Quaternion& q) {
  return p[0] * q[0] + p[1] * q[1] + p[2] * q[2] + p[3] * q[3];
}

double angle(const Quaternion& p, const Quaternion& q) {
  double diff = 0.0, sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    diff += (p[i] - q[i]) * (p[i] - q[i]);
    sum += (p[i] + q[i]) * (p[i] + q[i]);
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

}  // namespace quat

GroupId GroupId::torus(int d) {
  if (d < 1 || d > 3) throw DomainError("torus dimension must be 1, 2 or 3");
  return {GroupKind::torus, d};
}

GroupId GroupId::parse(std::string_view text) {
  if (text == "su2") return su2();
  if (text == "so3") return so3();
  if (text.starts_with("torus")) {
    std::string_view rest = text.substr(5);
    if (rest.starts_with("(") && rest.ends_with(")"))
      rest = rest.substr(1, rest.size() - 2);
    if (rest.size() == 1 && rest[0] >= '1' && rest[0] <= '3')
      return torus(rest[0] - '0');
  }
  throw DomainError("unsupported group id '" + std::string(text) + "'");
}

std::string GroupId::label() const {
  switch (kind) {
    case GroupKind::torus:
      return "torus(" + std::to_string(torus_dim) + ")";
    case GroupKind::su2:
      return "su2";
    case GroupKind::so3:
      return "so3";
  }
  return "?";
}

double GroupDescriptor::two_rho_norm() const {
  double s = 0.0;
  for (double c : rho_plus) s += 4.0 * c * c;
  return std::sqrt(s);
}

GroupDescriptor descriptor(const GroupId& id) {
  GroupDescriptor G;
  G.id = id;
  switch (id.kind) {
    case GroupKind::torus: {
      const int d = id.torus_dim;
      if (d < 1 || d > 3) throw DomainError("unsupported torus dimension");
      G.dimension = d;
      G.rank = d;
      G.rho_plus.assign(d, 0.0);
      G.a = kPi;
      G.weyl_order = 1;
      for (int i = 0; i < d; ++i) {
        DualVector b(d, 0.0);
        b[i] = 2.0 * kPi;
        G.weight_lattice_basis.push_back(b);
      }
      G.covolume = std::pow(1.0 / (2.0 * kPi), d);
      G.diameter = std::sqrt(static_cast<double>(d)) / 2.0;
      break;
    }
    case GroupKind::su2:
    case GroupKind::so3: {
      const bool su2 = id.kind == GroupKind::su2;
      G.dimension = 3;
      G.rank = 1;
      G.positive_roots = {{1.0}};
      G.rho_plus = {0.5};
      G.a = 0.5;
      G.weyl_order = 2;
      G.weight_lattice_basis = {{su2 ? 0.5 : 1.0}};
      G.covolume = su2 ? 2.0 : 1.0;
      G.diameter = su2 ? 2.0 * kPi : kPi;
      break;
    }
  }
  return G;
}

double Irrep::level() const {
  double s = 0.0;
  for (double c : highest_weight) s += c * c;
  return std::sqrt(s);
}

bool Irrep::is_trivial() const {
  if (kind == GroupKind::torus)
    return frequency == std::array<int, 3>{0, 0, 0};
  return twice_spin == 0;
}

std::string Irrep::label() const {
  std::ostringstream os;
  if (kind == GroupKind::torus) {
    const auto d = highest_weight.size();
    os << "m=(";
    for (std::size_t i = 0; i < d; ++i) os << (i ? "," : "") << frequency[i];
    os << ")";
  } else if (twice_spin % 2 == 0) {
    os << "j=" << twice_spin / 2;
  } else {
    os << "j=" << twice_spin << "/2";
  }
  return os.str();
}

Irrep make_irrep(const GroupDescriptor& G, int twice_spin,
                 std::array<int, 3> frequency) {
  Irrep ir;
  ir.kind = G.id.kind;
  if (G.is_torus()) {
    const int d = G.rank;
    ir.frequency = {0, 0, 0};
    double m2 = 0.0;
    ir.highest_weight.assign(d, 0.0);
    for (int i = 0; i < d; ++i) {
      ir.frequency[i] = frequency[i];
      ir.highest_weight[i] = 2.0 * kPi * frequency[i];
      m2 += static_cast<double>(frequency[i]) * frequency[i];
    }
    ir.dim = 1;
    ir.casimir = 4.0 * kPi * kPi * m2;
    ir.weights = {ir.highest_weight};
    return ir;
  }
  if (twice_spin < 0) throw DomainError("negative spin");
  if (G.id.kind == GroupKind::so3 && twice_spin % 2 != 0)
    throw DomainError("so3 has integer spins only");
  const double j = 0.5 * twice_spin;
  ir.twice_spin = twice_spin;
  ir.highest_weight = {j};
  ir.dim = twice_spin + 1;
  ir.casimir = j * (j + 1.0);
  ir.weights.reserve(ir.dim);
  for (int k = 0; k <= twice_spin; ++k) ir.weights.push_back({j - k});
  return ir;
}

std::vector<Irrep> enumerate_irreps(const GroupDescriptor& G, double level,
                                    bool include_trivial) {
  if (!(level > 0.0)) throw DomainError("enumerate_irreps: level must be > 0");
  std::vector<Irrep> out;
  if (include_trivial) out.push_back(make_irrep(G, 0));
  if (G.is_torus()) {
    const int d = G.rank;
    const int mmax = static_cast<int>(std::ceil(level / (2.0 * kPi)));
    std::array<int, 3> m{};
    const int lo1 = -mmax, hi1 = mmax;
    const int lo2 = d >= 2 ? -mmax : 0, hi2 = d >= 2 ? mmax : 0;
    const int lo3 = d >= 3 ? -mmax : 0, hi3 = d >= 3 ? mmax : 0;
    for (m[0] = lo1; m[0] <= hi1; ++m[0])
      for (m[1] = lo2; m[1] <= hi2; ++m[1])
        for (m[2] = lo3; m[2] <= hi3; ++m[2]) {
          if (m == std::array<int, 3>{0, 0, 0}) continue;
          Irrep ir = make_irrep(G, 0, m);
          if (ir.level() < level) out.push_back(std::move(ir));
        }
    std::stable_sort(out.begin() + (include_trivial ? 1 : 0), out.end(),
                     [](const Irrep& x, const Irrep& y) {
                       const double lx = x.level(), ly = y.level();
                       if (lx != ly) return lx < ly;
                       return x.frequency < y.frequency;
                     });
    return out;
  }
  const int step = G.id.kind == GroupKind::so3 ? 2 : 1;
  for (int n = step; 0.5 * n < level; n += step) out.push_back(make_irrep(G, n));
  return out;
}

std::vector<IrrepSummary> irrep_summaries(const GroupDescriptor& G, double level) {
  std::vector<IrrepSummary> out;
  if (!(level > 0.0)) return out;
  if (G.is_torus()) {
    for (const auto& ir : enumerate_irreps(G, level))
      out.push_back({ir.level(), 1, ir.casimir});
    return out;
  }
  const int step = G.id.kind == GroupKind::so3 ? 2 : 1;
  for (int n = step; 0.5 * n < level; n += step) {
    const double j = 0.5 * n;
    out.push_back({j, n + 1, j * (j + 1.0)});
  }
  return out;
}

GroupElement identity(const GroupDescriptor& G) {
  GroupElement e;
  if (is_quaternionic(G.id.kind)) e.v = {1.0, 0.0, 0.0, 0.0};
  return e;
}

GroupElement canonicalize(const GroupDescriptor& G, GroupElement x) {
  if (G.is_torus()) {
    for (int i = 0; i < G.rank; ++i) x.v[i] = wrap_unit(x.v[i]);
    return x;
  }
  x.v = quat::normalized(x.v);
  if (G.id.kind == GroupKind::so3) {
    bool flip = x.v[0] < 0.0;
    if (x.v[0] == 0.0) {
      for (int i = 1; i < 4; ++i)
        if (x.v[i] != 0.0) {
          flip = x.v[i] < 0.0;
          break;
        }
    }
    if (flip)
      for (auto& c : x.v) c = -c;
  }
  return x;
}

GroupElement multiply(const GroupDescriptor& G, const GroupElement& x,
                      const GroupElement& y) {
  GroupElement z;
  if (G.is_torus()) {
    for (int i = 0; i < G.rank; ++i) z.v[i] = x.v[i] + y.v[i];
  } else {
    z.v = quat::mul(x.v, y.v);
  }
  return canonicalize(G, z);
}

GroupElement inverse(const GroupDescriptor& G, const GroupElement& x) {
  GroupElement z;
  if (G.is_torus()) {
    for (int i = 0; i < G.rank; ++i) z.v[i] = -x.v[i];
  } else {
    z.v = quat::conj(x.v);
  }
  return canonicalize(G, z);
}

GroupElement exp_algebra(const GroupDescriptor& G, std::span<const double> X) {
  if (static_cast<int>(X.size()) != G.dimension)
    throw DomainError("exp_algebra: wrong algebra dimension");
  GroupElement z;
  if (G.is_torus()) {
    for (int i = 0; i < G.rank; ++i) z.v[i] = X[i];
    return canonicalize(G, z);
  }
  const double norm = std::sqrt(X[0] * X[0] + X[1] * X[1] + X[2] * X[2]);
  const double half = 0.5 * norm;
  // sin(half)/norm, with the limit 1/2 at norm = 0
  const double s = norm > 1e-300 ? std::sin(half) / norm : 0.5;
  z.v = {std::cos(half), s * X[0], s * X[1], s * X[2]};
  return canonicalize(G, z);
}

GroupElement torus_point(const GroupDescriptor& G, std::span<const double> X) {
  if (static_cast<int>(X.size()) != G.rank)
    throw DomainError("torus_point: wrong torus dimension");
  GroupElement z;
  if (G.is_torus()) {
    for (int i = 0; i < G.rank; ++i) z.v[i] = 2.0 * kPi * X[i];
    return canonicalize(G, z);
  }
  z.v = {std::cos(kPi * X[0]), 0.0, 0.0, std::sin(kPi * X[0])};
  return canonicalize(G, z);
}

double geodesic_distance(const GroupDescriptor& G, const GroupElement& x,
                         const GroupElement& y) {
  switch (G.id.kind) {
    case GroupKind::torus: {
      double s = 0.0;
      for (int i = 0; i < G.rank; ++i) {
        double d = std::abs(x.v[i] - y.v[i]);
        d -= std::floor(d);
        d = std::min(d, 1.0 - d);
        s += d * d;
      }
      return std::sqrt(s);
    }
    case GroupKind::su2:
      return 2.0 * quat::angle(x.v, y.v);
    case GroupKind::so3: {
      const double a = quat::angle(x.v, y.v);
      return 2.0 * std::min(a, kPi - a);
    }
  }
  return 0.0;
}

std::vector<GroupElement> haar_sample(const GroupDescriptor& G,
                                      std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<GroupElement> out;
  out.reserve(count);
  if (G.is_torus()) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t k = 0; k < count; ++k) {
      GroupElement x;
      for (int i = 0; i < G.rank; ++i) x.v[i] = unif(rng);
      out.push_back(canonicalize(G, x));
    }
    return out;
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t k = 0; k < count; ++k) {
    GroupElement x;
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (auto& c : x.v) {
        c = normal(rng);
        n2 += c * c;
      }
    } while (n2 < 1e-20);
    out.push_back(canonicalize(G, x));
  }
  return out;
}

bool approx_equal(const GroupDescriptor& G, const GroupElement& x,
                  const GroupElement& y, double tol) {
  return geodesic_distance(G, x, y) <= tol;
}

std::vector<GroupElement> casimir_probe_set(const GroupDescriptor& G) {
  std::vector<GroupElement> probes{identity(G)};
  auto rnd = haar_sample(G, 0x5eedcafeULL, 8);
  probes.insert(probes.end(), rnd.begin(), rnd.end());
  return probes;
}

double casimir_residual(const GroupDescriptor& G, const Irrep& irrep, double h) {
  if (!(h > 0.0) || h > 1e-2)
    throw DomainError("casimir_residual: step must lie in (0, 1e-2]");
  if (irrep.is_trivial()) return 0.0;
  const int n = G.dimension;
  double worst = 0.0;
  std::vector<double> X(n, 0.0);
  for (const auto& x : casimir_probe_set(G)) {
    const std::complex<double> chi0 = character(G, irrep, x);
    std::complex<double> lap = 0.0;
    for (int k = 0; k < n; ++k) {
      std::fill(X.begin(), X.end(), 0.0);
      X[k] = h;
      const auto plus = character(G, irrep, multiply(G, x, exp_algebra(G, X)));
      X[k] = -h;
      const auto minus = character(G, irrep, multiply(G, x, exp_algebra(G, X)));
      lap += (plus - 2.0 * chi0 + minus) / (h * h);
    }
    worst = std::max(worst, std::abs(lap + irrep.casimir * chi0));
  }
  return worst;
}

double casimir_relative_residual(const GroupDescriptor& G, const Irrep& irrep,
                                 double h) {
  if (irrep.is_trivial()) return 0.0;
  return casimir_residual(G, irrep, h) / (irrep.casimir * irrep.dim);
}

}  // namespace wgb
