#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "masscut/geometry.hpp"

namespace masscut {

struct InstanceFile {
  std::size_t dim = 0;
  std::vector<Mass> masses;
  /// Generator name, seed and parameters; free-form.
  nlohmann::json metadata = nlohmann::json::object();

  bool operator==(const InstanceFile&) const = default;
};

/// m clouds of n unit-weight standard-normal points. Without `centers`
/// the cloud centers are drawn uniformly from [-3, 3]^d.
std::vector<Mass> gen_gaussian(std::size_t d, std::size_t n, std::size_t m, std::uint64_t seed,
                               const std::optional<std::vector<Point>>& centers = std::nullopt);

/// n/4 points in the open unit first quadrant plus their rotations by 90,
/// 180 and 270 degrees. Requires n divisible by 4.
Mass gen_symmetric(std::size_t n, std::uint64_t seed);

/// m copies of the integer grid {0..side-1}^d; copy j is shifted by
/// j / (m + 1) in every coordinate.
std::vector<Mass> gen_grid(std::size_t d, std::size_t side, std::size_t m);

/// JSON text for an instance / a cut arrangement.
std::string instance_to_json(const InstanceFile& instance);
std::string cuts_to_json(const Arrangement& arrangement);

/// Parse from JSON text. ParseError for malformed text or missing and
/// mistyped fields, SchemaError for invariant violations.
InstanceFile instance_from_json(const std::string& text);
Arrangement cuts_from_json(const std::string& text);

InstanceFile read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const InstanceFile& instance);
Arrangement read_cuts(const std::filesystem::path& path);
void write_cuts(const std::filesystem::path& path, const Arrangement& arrangement);

}  // namespace masscut
