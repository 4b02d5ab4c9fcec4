// wgb_cli: Fourier-side Wasserstein bounds on compact groups.
//
//   wgb_cli bound --group su2 --g power:1 --points a.csv [--points b.csv] [--verify]
//   wgb_cli walk --group so3 --lps-prime 5 --kmax 40
//   wgb_cli audit|empirical|kernel|oracle ...

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wgb/errors.hpp"
#include "wgb/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Wasserstein bounds from Fourier data on compact groups"};
  app.set_version_flag("--version", "wgb 1.0.0");

  wgb::RunConfig cfg;
  std::string config_file;
  std::optional<double> M;
  std::optional<std::string> M_grid;
  std::optional<int> lps_prime;
  std::optional<double> gap_cert, epsilon;
  std::vector<std::size_t> N_list;

  app.add_option("command", cfg.command, "audit | walk | empirical | kernel | bound | oracle")
      ->check(CLI::IsMember({"audit", "walk", "empirical", "kernel", "bound", "oracle"}));
  app.add_option("--config", config_file, "JSON config; command-line flags override it");
  auto* o_group = app.add_option("--group", cfg.group, "torus(d), su2 or so3");
  auto* o_g = app.add_option("--g", cfg.g, "power:<p> or table:<file>");
  app.add_option("--M", M, "smoothing level");
  app.add_option("--M-grid", M_grid, "start:stop:points (geometric)");
  auto* o_profile = app.add_option("--profile", cfg.profile, "paper or plateau");
  auto* o_seed = app.add_option("--seed", cfg.seed);
  auto* o_reps = app.add_option("--reps", cfg.reps);
  auto* o_points = app.add_option("--points", cfg.points, "point CSV (repeat for nu2)");
  auto* o_out = app.add_option("--out", cfg.out, "artifact directory");
  auto* o_verify = app.add_flag("--verify", cfg.verify, "check dominance against an oracle");
  auto* o_threads = app.add_option("--threads", cfg.threads, "0 = runtime default");
  auto* o_kmax = app.add_option("--kmax", cfg.kmax);
  app.add_option("--lps-prime", lps_prime);
  app.add_option("--gap-certificate", gap_cert);
  auto* o_exact = app.add_option("--exact-level", cfg.exact_level);
  auto* o_gap = app.add_option("--gap-level", cfg.gap_level);
  app.add_option("--N", N_list, "sample sizes for empirical");
  auto* o_samples = app.add_option("--samples", cfg.samples);
  app.add_option("--epsilon", epsilon, "Sinkhorn regularization for oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return wgb::exit_config;
  }

  try {
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) {
        std::cerr << "i/o error: cannot open config '" << config_file << "'\n";
        return wgb::exit_io;
      }
      wgb::json j;
      try {
        j = wgb::json::parse(in);
      } catch (const wgb::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return wgb::exit_config;
      }
      wgb::RunConfig base = wgb::RunConfig::from_json(j);
      // flags given on the command line win
      if (!cfg.command.empty()) base.command = cfg.command;
      if (o_group->count()) base.group = cfg.group;
      if (o_g->count()) base.g = cfg.g;
      if (o_profile->count()) base.profile = cfg.profile;
      if (o_seed->count()) base.seed = cfg.seed;
      if (o_reps->count()) base.reps = cfg.reps;
      if (o_points->count()) base.points = cfg.points;
      if (o_out->count()) base.out = cfg.out;
      if (o_verify->count()) base.verify = cfg.verify;
      if (o_threads->count()) base.threads = cfg.threads;
      if (o_kmax->count()) base.kmax = cfg.kmax;
      if (o_exact->count()) base.exact_level = cfg.exact_level;
      if (o_gap->count()) base.gap_level = cfg.gap_level;
      if (o_samples->count()) base.samples = cfg.samples;
      cfg = base;
    }
  } catch (const wgb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return wgb::exit_config;
  }
  if (M) cfg.M = M;
  if (M_grid) cfg.M_grid = M_grid;
  if (lps_prime) cfg.lps_prime = lps_prime;
  if (gap_cert) cfg.gap_certificate = gap_cert;
  if (epsilon) cfg.epsilon = epsilon;
  if (!N_list.empty()) cfg.N_list = N_list;
  if (cfg.command.empty()) {
    std::cerr << "config error: no command given\n";
    return wgb::exit_config;
  }
  return wgb::run(cfg, std::cerr);
}
