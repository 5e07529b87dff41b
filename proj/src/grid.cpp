#include "airsweep/grid.hpp"

#include <cmath>

namespace airsweep {

namespace {

// Extent must be a whole multiple of the cell size (within fp slack).
int cell_count(double extent, double cell, const char* name) {
  const long n = std::lround(extent / cell);
  if (n < 1 || std::fabs(static_cast<double>(n) * cell - extent) > 1e-9 * std::max(extent, cell)) {
    throw ConfigError(std::string(name) + " (" + std::to_string(extent) +
                      " m) is not a whole multiple of the cell size " + std::to_string(cell) + " m");
  }
  return static_cast<int>(n);
}

}  // namespace

int RoomGeometry::rows() const { return cell_count(width, cell, "room width"); }
int RoomGeometry::cols() const { return cell_count(length, cell, "room length"); }

void RoomGeometry::validate() const {
  if (width <= 0 || length <= 0 || height <= 0 || cell <= 0) {
    throw ConfigError("room dimensions and cell size must be strictly positive");
  }
  (void)rows();
  (void)cols();
}

Field new_field(const RoomGeometry& geom) {
  geom.validate();
  Field f;
  f.geom = geom;
  f.timestamp = 0.0;
  f.v.assign(static_cast<size_t>(geom.rows()) * geom.cols(), 0.0);
  return f;
}

int capture_index(double coord, double cell, int n_cells) {
  const double q = coord / cell;
  const double extent = static_cast<double>(n_cells);
  if (q < -1e-6 || q > extent + 1e-6) {
    throw ConfigError("point at " + std::to_string(coord) + " m lies outside the room");
  }
  const long b = std::lround(q);
  int idx;
  if (std::fabs(q - static_cast<double>(b)) < 1e-6) {
    // On the boundary between cells b-1 and b: resolve toward the room center.
    idx = (q < 0.5 * extent) ? static_cast<int>(b) : static_cast<int>(b) - 1;
  } else {
    idx = static_cast<int>(std::floor(q));
  }
  if (idx < 0) idx = 0;
  if (idx >= n_cells) idx = n_cells - 1;
  return idx;
}

}  // namespace airsweep
