#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "nsf/field.hpp"

namespace nsf {

/// Binary snapshot layout (little-endian):
///   char[4]  magic "NSFF"
///   u32      version (1)
///   u32      dim
///   u32      node count per axis (dim entries)
///   f64      extent per axis (dim entries)
///   f64[]    one row-major payload per field, node-count values each
/// The number of fields follows from the file size.
inline constexpr std::uint32_t snapshot_version = 1;

struct Snapshot {
  int dim = 0;
  std::array<std::uint32_t, 2> nodes{1, 1};
  std::array<double, 2> extents{0.0, 0.0};
  std::vector<std::vector<double>> fields;
};

void write_snapshot(const std::filesystem::path& path, const std::vector<const ScalarField*>& fields);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace nsf
