#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "amhd/field.hpp"

namespace amhd {

/// Field snapshot file: little-endian; "AMHD1", n1, n2, n3, component count
/// (u32 each), time (f64), then each component's physical samples (f64,
/// row-major, x3 fastest).
struct Snapshot {
  Grid grid;
  double time = 0.0;
  std::vector<SpectralScalar> components;
};

void write_snapshot(const std::filesystem::path& path, std::span<const SpectralScalar> components, double time);
void write_snapshot(const std::filesystem::path& path, const VectorField& field, double time);

/// Reads a snapshot written with the default box length.
Snapshot read_snapshot(const std::filesystem::path& path, double length = 2.0 * std::numbers::pi);
VectorField read_vector_snapshot(const std::filesystem::path& path, double* time = nullptr,
                                 double length = 2.0 * std::numbers::pi);

}  // namespace amhd
