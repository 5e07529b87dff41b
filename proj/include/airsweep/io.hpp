#pragma once

#include <string>

#include "airsweep/grid.hpp"

namespace airsweep {

// Shortest round-trippable decimal for tables ("%.12g").
std::string g12(double x);

// Whole-file helpers; both throw std::runtime_error on I/O failure.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Binary 8-bit graymap of a field, row 0 first, linearly scaled so the
// field maximum maps to 255. Returns the counts-per-unit scale (0 for an
// all-zero field).
std::string field_pgm_bytes(const Field& f, double* counts_per_unit = nullptr);

// Writes the graymap to `path` and a `path`.txt sidecar recording grid
// shape, cell size, timestamp, field maximum, and the pixel scale.
void write_heatmap(const std::string& path, const Field& f);

}  // namespace airsweep
