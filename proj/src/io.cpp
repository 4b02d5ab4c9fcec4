#include "wgb/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wgb/errors.hpp"

namespace wgb {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& tok, int lineno) {
  const std::string t = trim(tok);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v))
    throw IoError("line " + std::to_string(lineno) + ": bad number '" + t + "'");
  return v;
}

}  // namespace

PointFile read_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open point file '" + path.string() + "'");
  PointFile pf;
  std::string line;
  int lineno = 0;
  bool header = false;
  GroupDescriptor G;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (!header) {
      const std::string key = "# group=";
      if (line.rfind(key, 0) != 0)
        throw IoError("line " + std::to_string(lineno) + ": expected '# group=<id>' header");
      try {
        pf.group = GroupId::parse(trim(line.substr(key.size())));
      } catch (const DomainError& e) {
        throw IoError("line " + std::to_string(lineno) + ": " + e.what());
      }
      G = descriptor(pf.group);
      header = true;
      continue;
    }
    if (line[0] == '#') continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(parse_number(tok, lineno));
    const std::size_t want = G.is_torus() ? G.rank : 4;
    if (vals.size() != want)
      throw IoError("line " + std::to_string(lineno) + ": expected " + std::to_string(want) +
                    " values, got " + std::to_string(vals.size()));
    GroupElement x;
    if (G.is_torus()) {
      for (std::size_t i = 0; i < want; ++i) {
        if (vals[i] < 0.0 || vals[i] >= 1.0)
          throw IoError("line " + std::to_string(lineno) + ": torus coordinate outside [0,1)");
        x.v[i] = vals[i];
      }
    } else {
      double n2 = 0.0;
      for (std::size_t i = 0; i < 4; ++i) {
        x.v[i] = vals[i];
        n2 += vals[i] * vals[i];
      }
      if (!(n2 > 1e-24)) throw IoError("line " + std::to_string(lineno) + ": zero quaternion");
    }
    pf.points.push_back(canonicalize(G, x));
  }
  if (!header) throw IoError("point file '" + path.string() + "' has no header");
  if (pf.points.empty()) throw IoError("point file '" + path.string() + "' has no points");
  return pf;
}

std::vector<GroupElement> read_points(const std::filesystem::path& path,
                                      const GroupId& expected) {
  auto pf = read_points(path);
  if (!(pf.group == expected))
    throw IoError("point file group " + pf.group.label() + " does not match " +
                  expected.label());
  return std::move(pf.points);
}

void write_points(const std::filesystem::path& path, const GroupId& group,
                  const std::vector<GroupElement>& points) {
  const auto G = descriptor(group);
  std::ostringstream os;
  os << "# group=" << group.label() << "\n";
  const int n = G.is_torus() ? G.rank : 4;
  for (const auto& x : points) {
    for (int i = 0; i < n; ++i) os << (i ? "," : "") << format_double(x.v[i]);
    os << "\n";
  }
  write_text(path, os.str());
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json to_json(const FourierBlock& b) {
  json m = json::array();
  for (Eigen::Index r = 0; r < b.matrix.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < b.matrix.cols(); ++c)
      row.push_back({b.matrix(r, c).real(), b.matrix(r, c).imag()});
    m.push_back(row);
  }
  return {{"irrep", b.irrep.label()},
          {"dim", b.irrep.dim},
          {"matrix", m},
          {"hs_norm", b.hs_norm},
          {"op_norm", b.op_norm}};
}

json to_json(const BoundReport& r) {
  return {{"group_id", r.group},
          {"g", r.g},
          {"profile_id", r.profile},
          {"M", r.M},
          {"M0", r.M0},
          {"psi", r.psi},
          {"phi", r.phi},
          {"fourier_sum", r.fourier_sum},
          {"total", r.total},
          {"irreps_used", r.irreps_used},
          {"tolerance", r.tolerance},
          {"tolerances",
           {{"psi_quadrature", r.psi_quadrature_error},
            {"psi_transform", r.psi_transform_error},
            {"psi_tail_included", r.psi_tail},
            {"fourier_rounding", r.fourier_rounding}}},
          {"psi_tail_warning", r.psi_tail_warning}};
}

json to_json(const KernelCoefficients& k) {
  json list = json::array();
  for (const auto& [ir, a] : k.coeffs)
    list.push_back({{"irrep", ir.label()}, {"a", a}, {"dim", ir.dim}});
  return {{"M", k.M},
          {"M0", k.M0},
          {"profile_id", BumpProfile{k.profile}.label()},
          {"coefficients", list}};
}

json to_json(const TransportPlan& p) {
  json coupling = json::array();
  for (const auto& e : p.coupling) coupling.push_back({e.i, e.j, e.mass});
  json out = {{"cost", p.cost},
              {"status", to_string(p.status)},
              {"coupling", coupling},
              {"row_potential", p.row_potential},
              {"col_potential", p.col_potential},
              {"dual_objective", p.dual_objective},
              {"duality_gap", p.duality_gap}};
  if (p.status == PlanStatus::approximate) out["epsilon"] = p.epsilon;
  return out;
}

json to_json(const WalkStep& s) {
  return {{"k", s.k},           {"q_hat", s.q_hat}, {"M", s.best_M},
          {"fourier_sum", s.fourier_sum}, {"psi", s.psi}, {"phi", s.phi},
          {"total", s.total},   {"tolerance", s.tolerance},
          {"recheck_error", s.recheck_error}};
}

json to_json(const AuditReport& a) {
  json energies = json::array();
  for (const auto& e : a.energies)
    energies.push_back(
        {{"irrep", e.label}, {"dim", e.dim}, {"level", e.level}, {"energy", e.energy}});
  return {{"points", a.points},
          {"bound", to_json(a.bound)},
          {"gap_level", a.gap_level},
          {"q_hat", a.q_hat},
          {"character_energies", energies}};
}

json to_json(const EmpiricalRow& r) {
  json out = {{"N", r.N},
              {"mean_bound", r.mean_bound},
              {"bound_lo", r.bound_lo},
              {"bound_hi", r.bound_hi},
              {"mean_M", r.mean_best_M},
              {"max_variance_ratio", r.max_variance_ratio}};
  if (r.mean_oracle) out["mean_oracle"] = *r.mean_oracle;
  return out;
}

std::string sweep_csv_header() {
  return "group,g,M,psi,phi,fourier_sum,total,tolerance,seed\n";
}

std::string sweep_csv_row(const BoundReport& r, std::uint64_t seed) {
  std::ostringstream os;
  os << r.group << "," << r.g << "," << format_double(r.M) << "," << format_double(r.psi)
     << "," << format_double(r.phi) << "," << format_double(r.fourier_sum) << ","
     << format_double(r.total) << "," << format_double(r.tolerance) << "," << seed << "\n";
  return os.str();
}

std::string config_hash(const json& config) {
  // sorted keys make the dump canonical
  const std::string s = nlohmann::json::parse(config.dump()).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace wgb
