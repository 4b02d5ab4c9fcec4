#pragma once

// Command orchestration behind the CLI: configuration, artifacts, exit codes.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wgb/io.hpp"

namespace wgb {

enum ExitCode : int {
  exit_ok = 0,
  exit_config = 2,
  exit_io = 3,
  exit_solver = 4,
  exit_dominance = 5,
};

struct RunConfig {
  std::string command;  // audit | walk | empirical | kernel | bound | oracle
  std::string group = "su2";
  std::string g = "power:1";
  std::optional<double> M;
  std::optional<std::string> M_grid;  // start:stop:points
  std::string profile = "paper";
  std::uint64_t seed = 1;
  int reps = 10;
  std::vector<std::string> points;  // first: nu1, second: nu2 (Haar if absent)
  std::string out = ".";
  bool verify = false;
  int threads = 0;
  // command specific
  int kmax = 40;
  std::optional<int> lps_prime;
  std::optional<double> gap_certificate;
  double exact_level = 26.0;
  double gap_level = 26.0;
  std::vector<std::size_t> N_list{32, 64, 128, 256, 512, 1024, 2048};
  std::size_t samples = 256;
  std::optional<double> epsilon;

  /// Unknown fields and wrong types throw ConfigError.
  static RunConfig from_json(const json& j);
  json to_json() const;
  void validate() const;
};

/// Versions of the modules that produce artifacts.
json module_versions();

/// Runs one command, writes its artifacts under cfg.out and returns an exit
/// code. Diagnostics go to `log`.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace wgb
