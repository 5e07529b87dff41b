#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace airsweep {

// Invalid geometry, parameters, or config input. The CLI maps this to exit 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr double kDefaultCellSize = 0.1;  // meters

// Closed rectangular room. x runs along the length (the facing direction),
// y along the width. Width and length must be whole multiples of the cell
// size.
struct RoomGeometry {
  double width = 3.0;   // m, lateral extent (y)
  double length = 8.0;  // m, longitudinal extent (x)
  double height = 3.5;  // m, used for vertical averaging
  double cell = kDefaultCellSize;

  int rows() const;  // width / cell
  int cols() const;  // length / cell
  void validate() const;
  bool operator==(const RoomGeometry&) const = default;
};

// Dense row-major 2D grid of per-cell values. Row index follows y, column
// index follows x, so the array shape is (width/cell, length/cell).
struct Field {
  RoomGeometry geom;
  double timestamp = 0.0;  // seconds
  std::vector<double> v;

  double& at(int row, int col) { return v[static_cast<size_t>(row) * geom.cols() + col]; }
  double at(int row, int col) const { return v[static_cast<size_t>(row) * geom.cols() + col]; }
  size_t size() const { return v.size(); }
};

struct CellRef {
  int row = 0;
  int col = 0;
  bool operator==(const CellRef&) const = default;
};
using CellSet = std::vector<CellRef>;

// All-zero field at timestamp 0. Throws ConfigError on invalid geometry.
Field new_field(const RoomGeometry& geom);

// Cell index of a point coordinate along one axis. Points within 1e-6 cells
// of a cell boundary resolve toward the room center, so mirrored points land
// in mirrored cells. Throws ConfigError when the point lies outside [0, n*cell].
int capture_index(double coord, double cell, int n_cells);

}  // namespace airsweep
