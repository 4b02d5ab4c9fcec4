#pragma once

// Point-set files, JSON/CSV emitters and the config hash.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgb/bound.hpp"
#include "wgb/fourier.hpp"
#include "wgb/groups.hpp"
#include "wgb/smoothing.hpp"
#include "wgb/transport.hpp"
#include "wgb/walks.hpp"

namespace wgb {

using json = nlohmann::ordered_json;

struct PointFile {
  GroupId group;
  std::vector<GroupElement> points;
};

/// Reads a point-set CSV. The first non-empty line must be `# group=<id>`;
/// each further row holds d coordinates in [0,1) (torus(d)) or a quaternion
/// (su2/so3, normalized on read). Throws IoError on any malformed content.
PointFile read_points(const std::filesystem::path& path);
/// As read_points, and the header must name `expected`.
std::vector<GroupElement> read_points(const std::filesystem::path& path,
                                      const GroupId& expected);
void write_points(const std::filesystem::path& path, const GroupId& group,
                  const std::vector<GroupElement>& points);

json to_json(const FourierBlock& b);
json to_json(const BoundReport& r);
json to_json(const KernelCoefficients& k);
json to_json(const TransportPlan& p);
json to_json(const WalkStep& s);
json to_json(const AuditReport& a);
json to_json(const EmpiricalRow& r);

/// Header row and one data row of the sweep CSV
/// (group, g, M, psi, phi, fourier_sum, total, tolerance, seed).
std::string sweep_csv_header();
std::string sweep_csv_row(const BoundReport& r, std::uint64_t seed);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

/// FNV-1a 64-bit hash of the compact dump of `config`, as 16 hex digits.
std::string config_hash(const json& config);

/// Writes text to a file (throws IoError).
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace wgb
