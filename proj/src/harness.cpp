#include "wgb/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <set>
#include <sstream>

#include "wgb/errors.hpp"
#include "wgb/kernels.hpp"

namespace wgb {

namespace {

const std::set<std::string> kCommands{"audit", "walk", "empirical", "kernel", "bound", "oracle"};

// Monte Carlo size of the Voronoi lower bound used against Haar measure.
constexpr std::size_t kVoronoiSamples = 20000;
constexpr double kDualityGapLimit = 1e-9;

struct Inputs {
  GroupDescriptor G;
  Modulus g = Modulus::power(1.0);
  BumpProfile profile;
  std::vector<DiscreteMeasure> measures;
};

Inputs load_inputs(const RunConfig& cfg) {
  Inputs in;
  try {
    in.G = descriptor(GroupId::parse(cfg.group));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  in.g = Modulus::parse(cfg.g);
  in.profile = BumpProfile::parse(cfg.profile);
  for (const auto& p : cfg.points)
    in.measures.push_back(DiscreteMeasure::uniform(read_points(p, in.G.id)));
  return in;
}

std::vector<double> grid_of(const RunConfig& cfg, const GroupDescriptor& G) {
  if (cfg.M) return {*cfg.M};
  if (cfg.M_grid) return parse_M_grid(*cfg.M_grid);
  return default_M_grid(G);
}

json envelope(const RunConfig& cfg, const std::string& hash) {
  return {{"command", cfg.command},
          {"config", cfg.to_json()},
          {"config_hash", hash},
          {"versions", module_versions()}};
}

std::string csv_preamble(const std::string& hash) {
  return "# config_hash=" + hash + "\n# versions=" + module_versions().dump() + "\n";
}

struct Verification {
  bool ran = false;
  bool violated = false;
  json detail = json::object();
};

// Oracle for W_g(nu1, nu2): exact LP for two discrete measures, the Voronoi
// lower bound when nu2 is Haar.
Verification verify_bound(const Inputs& in, const DiscreteMeasure& nu1,
                          const DiscreteMeasure* nu2, const BoundReport& rep,
                          std::uint64_t seed) {
  Verification v;
  v.ran = true;
  const double upper = rep.total + rep.tolerance;
  if (nu2) {
    const auto plan = exact_wasserstein(in.G, in.g, nu1, *nu2);
    if (std::abs(plan.duality_gap) > kDualityGapLimit)
      throw SolverError("transport duality gap above 1e-9");
    v.violated = upper < plan.cost;
    v.detail = {{"oracle", "exact_lp"},
                {"oracle_value", plan.cost},
                {"duality_gap", plan.duality_gap},
                {"bound_plus_tolerance", upper},
                {"dominance", !v.violated}};
  } else {
    const auto q = voronoi_quantization(in.G, in.g, nu1.atoms, kVoronoiSamples, seed);
    const double lower = q.value - 3.0 * q.standard_error;
    v.violated = upper < lower;
    v.detail = {{"oracle", "voronoi_lower_bound"},
                {"oracle_value", lower},
                {"mc_estimate", q.value},
                {"mc_standard_error", q.standard_error},
                {"bound_plus_tolerance", upper},
                {"dominance", !v.violated}};
  }
  return v;
}

int finish(const Verification& v, std::ostream& log) {
  if (v.ran && v.violated) {
    log << "dominance violation: " << v.detail.dump() << "\n";
    return exit_dominance;
  }
  return exit_ok;
}

int run_bound(const RunConfig& cfg, const Inputs& in, const std::string& hash,
              std::ostream& log) {
  if (in.measures.empty()) throw ConfigError("bound needs --points");
  const auto& nu1 = in.measures[0];
  const DiscreteMeasure* nu2 = in.measures.size() > 1 ? &in.measures[1] : nullptr;
  const Measure m2 = nu2 ? Measure(*nu2) : Measure(HaarMeasure{});
  auto grid = grid_of(cfg, in.G);
  std::sort(grid.begin(), grid.end());
  for (double M : grid) smoothing_degree(in.G, M);
  BoundEvaluator ev(in.G, in.g, nu1, m2, in.profile, grid.back());
  std::string csv = csv_preamble(hash) + sweep_csv_header();
  std::optional<BoundReport> best;
  for (double M : grid) {
    const auto r = ev.at(M);
    csv += sweep_csv_row(r, cfg.seed);
    if (!best || r.total < best->total) best = r;
  }
  json out = envelope(cfg, hash);
  out["tolerances"] = {{"psi_quadrature", best->psi_quadrature_error},
                       {"psi_transform", best->psi_transform_error},
                       {"fourier_rounding", best->fourier_rounding},
                       {"total", best->tolerance}};
  out["report"] = to_json(*best);
  out["measures"] = {{"nu1_atoms", nu1.size()},
                     {"nu2", nu2 ? std::to_string(nu2->size()) + " atoms" : "haar"}};
  Verification v;
  if (cfg.verify) {
    v = verify_bound(in, nu1, nu2, *best, cfg.seed);
    out["verification"] = v.detail;
  }
  write_text(std::filesystem::path(cfg.out) / "bound.json", out.dump(2) + "\n");
  if (grid.size() > 1) write_text(std::filesystem::path(cfg.out) / "sweep.csv", csv);
  log << "bound total " << format_double(best->total) << " at M " << format_double(best->M) << "\n";
  return finish(v, log);
}

int run_audit(const RunConfig& cfg, const Inputs& in, const std::string& hash,
              std::ostream& log) {
  if (in.measures.size() != 1) throw ConfigError("audit needs exactly one --points file");
  const auto& nu = in.measures[0];
  const auto rep = equidistribution_audit(in.G, nu.atoms, in.g, grid_of(cfg, in.G),
                                          in.profile, cfg.gap_level);
  json out = envelope(cfg, hash);
  out["tolerances"] = {{"psi_quadrature", rep.bound.psi_quadrature_error},
                       {"psi_transform", rep.bound.psi_transform_error},
                       {"fourier_rounding", rep.bound.fourier_rounding},
                       {"total", rep.bound.tolerance}};
  out["audit"] = to_json(rep);
  Verification v;
  if (cfg.verify) {
    v = verify_bound(in, nu, nullptr, rep.bound, cfg.seed);
    out["verification"] = v.detail;
  }
  write_text(std::filesystem::path(cfg.out) / "audit.json", out.dump(2) + "\n");
  log << "audit q_hat " << format_double(rep.q_hat) << " bound " << format_double(rep.bound.total)
      << "\n";
  return finish(v, log);
}

int run_walk(const RunConfig& cfg, const Inputs& in, const std::string& hash,
             std::ostream& log) {
  DiscreteMeasure nu;
  WalkOptions opt;
  opt.profile = in.profile;
  opt.exact_level = cfg.exact_level;
  opt.gap_certificate = cfg.gap_certificate;
  std::string source;
  if (!in.measures.empty()) {
    nu = in.measures[0];
    source = cfg.points[0];
  } else if (cfg.lps_prime) {
    if (in.G.id.kind != GroupKind::so3) throw ConfigError("LPS walks live on so3");
    nu = DiscreteMeasure::uniform(lps_generators(*cfg.lps_prime).rotations);
    source = "lps:" + std::to_string(*cfg.lps_prime);
  } else {
    throw ConfigError("walk needs --points or --lps-prime");
  }
  if (cfg.M) opt.max_level = *cfg.M;
  if (cfg.M_grid) opt.max_level = parse_M_grid(*cfg.M_grid).back();
  const auto steps = walk_evolve(in.G, in.g, nu, cfg.kmax, opt);
  json out = envelope(cfg, hash);
  out["source"] = source;
  json list = json::array();
  std::string csv = csv_preamble(hash) + "k,q_hat,M,fourier_sum,psi,phi,total,tolerance\n";
  double tol = 0.0;
  for (const auto& s : steps) {
    list.push_back(to_json(s));
    tol = std::max(tol, s.tolerance);
    csv += std::to_string(s.k) + "," + format_double(s.q_hat) + "," + format_double(s.best_M) +
           "," + format_double(s.fourier_sum) + "," + format_double(s.psi) + "," +
           format_double(s.phi) + "," + format_double(s.total) + "," +
           format_double(s.tolerance) + "\n";
  }
  out["tolerances"] = {{"psi_max", tol}, {"block_recheck", 1e-9}};
  out["steps"] = list;
  write_text(std::filesystem::path(cfg.out) / "walk.json", out.dump(2) + "\n");
  write_text(std::filesystem::path(cfg.out) / "walk.csv", csv);
  log << "walk total at k=" << steps.back().k << ": " << format_double(steps.back().total) << "\n";
  return exit_ok;
}

int run_empirical(const RunConfig& cfg, const Inputs& in, const std::string& hash,
                  std::ostream& log) {
  const Measure source = in.measures.empty() ? Measure(HaarMeasure{}) : Measure(in.measures[0]);
  EmpiricalOptions opt;
  opt.profile = in.profile;
  if (cfg.M_grid) opt.M_grid = parse_M_grid(*cfg.M_grid);
  const auto rows =
      empirical_experiment(in.G, source, cfg.N_list, cfg.reps, in.g, cfg.seed, opt);
  json out = envelope(cfg, hash);
  json list = json::array();
  std::string csv = csv_preamble(hash) + "N,mean_bound,bound_lo,bound_hi,mean_M,max_variance_ratio\n";
  Verification v;
  for (const auto& r : rows) {
    list.push_back(to_json(r));
    csv += std::to_string(r.N) + "," + format_double(r.mean_bound) + "," +
           format_double(r.bound_lo) + "," + format_double(r.bound_hi) + "," +
           format_double(r.mean_best_M) + "," + format_double(r.max_variance_ratio) + "\n";
    if (cfg.verify && r.mean_oracle) {
      v.ran = true;
      if (r.mean_bound < *r.mean_oracle) v.violated = true;
    }
  }
  out["rows"] = list;
  out["tolerances"] = {{"bound_tolerances", "per report, see bound command"}};
  if (v.ran) out["verification"] = {{"oracle", "exact_lp_mean"}, {"dominance", !v.violated}};
  write_text(std::filesystem::path(cfg.out) / "empirical.json", out.dump(2) + "\n");
  write_text(std::filesystem::path(cfg.out) / "empirical.csv", csv);
  log << "empirical rows " << rows.size() << "\n";
  return finish(v, log);
}

int run_kernel(const RunConfig& cfg, const Inputs& in, const std::string& hash,
               std::ostream& log) {
  json out = envelope(cfg, hash);
  json list = json::array();
  for (double M : grid_of(cfg, in.G)) list.push_back(to_json(kernel_coefficients(in.G, M, in.profile)));
  out["tolerances"] = json::object();
  out["kernels"] = list;
  write_text(std::filesystem::path(cfg.out) / "kernel.json", out.dump(2) + "\n");
  log << "kernel coefficients for " << list.size() << " M values\n";
  return exit_ok;
}

int run_oracle(const RunConfig& cfg, const Inputs& in, const std::string& hash,
               std::ostream& log) {
  if (in.measures.empty()) throw ConfigError("oracle needs --points");
  json out = envelope(cfg, hash);
  if (in.measures.size() > 1) {
    const auto plan = exact_wasserstein(in.G, in.g, in.measures[0], in.measures[1]);
    if (std::abs(plan.duality_gap) > kDualityGapLimit)
      throw SolverError("transport duality gap above 1e-9");
    out["exact"] = to_json(plan);
    out["tolerances"] = {{"duality_gap_limit", kDualityGapLimit}};
    if (cfg.epsilon) {
      const auto s = sinkhorn(in.G, in.g, in.measures[0], in.measures[1], *cfg.epsilon);
      out["sinkhorn"] = {{"cost", s.cost}, {"epsilon", s.epsilon}, {"iterations", s.iterations}};
    }
    log << "exact cost " << format_double(plan.cost) << "\n";
  } else {
    const auto& nu = in.measures[0];
    const auto est = haar_oracle_distance(in.G, in.g, nu, std::max(cfg.samples, nu.size()),
                                          cfg.reps, cfg.seed);
    const auto q = voronoi_quantization(in.G, in.g, nu.atoms, kVoronoiSamples, cfg.seed);
    out["haar_estimate"] = {{"estimate", est.estimate},
                            {"band", {est.band_lo, est.band_hi}},
                            {"samples", std::max(cfg.samples, nu.size())},
                            {"reps", cfg.reps}};
    out["voronoi"] = {{"value", q.value}, {"standard_error", q.standard_error}};
    out["tolerances"] = {{"voronoi_samples", kVoronoiSamples}};
    log << "haar estimate " << format_double(est.estimate) << "\n";
  }
  write_text(std::filesystem::path(cfg.out) / "oracle.json", out.dump(2) + "\n");
  return exit_ok;
}

template <class T>
void take(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}
template <class T>
void take(const json& j, const char* key, std::optional<T>& field) {
  if (j.contains(key) && !j.at(key).is_null()) field = j.at(key).get<T>();
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  static const std::set<std::string> known{
      "command", "group", "g", "M", "M_grid", "profile", "seed", "reps", "points", "out",
      "verify", "threads", "kmax", "lps_prime", "gap_certificate", "exact_level",
      "gap_level", "N_list", "samples", "epsilon"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigError("unknown config field '" + key + "'");
  RunConfig c;
  try {
    take(j, "command", c.command);
    take(j, "group", c.group);
    take(j, "g", c.g);
    take(j, "M", c.M);
    take(j, "M_grid", c.M_grid);
    take(j, "profile", c.profile);
    take(j, "seed", c.seed);
    take(j, "reps", c.reps);
    take(j, "points", c.points);
    take(j, "out", c.out);
    take(j, "verify", c.verify);
    take(j, "threads", c.threads);
    take(j, "kmax", c.kmax);
    take(j, "lps_prime", c.lps_prime);
    take(j, "gap_certificate", c.gap_certificate);
    take(j, "exact_level", c.exact_level);
    take(j, "gap_level", c.gap_level);
    take(j, "N_list", c.N_list);
    take(j, "samples", c.samples);
    take(j, "epsilon", c.epsilon);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  }
  return c;
}

json RunConfig::to_json() const {
  json j = {{"command", command}, {"group", group},   {"g", g},
            {"M", M ? json(*M) : json(nullptr)},
            {"M_grid", M_grid ? json(*M_grid) : json(nullptr)},
            {"profile", profile},   {"seed", seed},     {"reps", reps},
            {"points", points},     {"out", out},       {"verify", verify},
            {"threads", threads},   {"kmax", kmax},
            {"lps_prime", lps_prime ? json(*lps_prime) : json(nullptr)},
            {"gap_certificate", gap_certificate ? json(*gap_certificate) : json(nullptr)},
            {"exact_level", exact_level}, {"gap_level", gap_level},
            {"N_list", N_list},     {"samples", samples},
            {"epsilon", epsilon ? json(*epsilon) : json(nullptr)}};
  return j;
}

void RunConfig::validate() const {
  if (!kCommands.count(command)) throw ConfigError("unknown command '" + command + "'");
  if (M && M_grid) throw ConfigError("give either M or M_grid, not both");
  if (reps < 1) throw ConfigError("reps must be >= 1");
  if (kmax < 1) throw ConfigError("kmax must be >= 1");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (points.size() > 2) throw ConfigError("at most two --points files");
  if (gap_certificate && !(*gap_certificate >= 0.0 && *gap_certificate <= 1.0))
    throw ConfigError("gap certificate must lie in [0, 1]");
  if (epsilon && !(*epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
}

json module_versions() {
  return {{"groups", "1.0.0"},    {"fourier", "1.0.0"}, {"smoothing", "1.0.0"},
          {"bound", "1.0.0"},     {"transport", "1.0.0"},
          {"walks_and_points", "1.0.0"}, {"harness", "1.0.0"}};
}

int run(const RunConfig& cfg, std::ostream& log) {
  try {
    cfg.validate();
    set_thread_count(cfg.threads);
    const Inputs in = load_inputs(cfg);
    std::filesystem::create_directories(cfg.out);
    const std::string hash = config_hash(cfg.to_json());
    if (cfg.command == "bound") return run_bound(cfg, in, hash, log);
    if (cfg.command == "audit") return run_audit(cfg, in, hash, log);
    if (cfg.command == "walk") return run_walk(cfg, in, hash, log);
    if (cfg.command == "empirical") return run_empirical(cfg, in, hash, log);
    if (cfg.command == "kernel") return run_kernel(cfg, in, hash, log);
    return run_oracle(cfg, in, hash, log);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const DomainError& e) {
    log << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const IoError& e) {
    log << "i/o error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "i/o error: " << e.what() << "\n";
    return exit_io;
  } catch (const SolverError& e) {
    log << "solver error: " << e.what() << "\n";
    return exit_solver;
  }
}

}  // namespace wgb
