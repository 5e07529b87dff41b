#pragma once

#include <string>
#include <vector>

#include "airsweep/field.hpp"
#include "airsweep/grid.hpp"
#include "airsweep/plume.hpp"

namespace airsweep {

inline constexpr double kNearStaticOffset = 1.3;  // m in front of the source
inline constexpr double kFarStaticOffset = 2.0;   // m in front of FrontCenter
inline constexpr double kDefaultVmax = 1.5;       // m/s speed bound

// Seats on a rectangular grid, everyone facing +x. Row i sits at
// origin_x + i*d_x, column j at origin_y + j*d_y. first_row_dir is the sweep
// direction (+1 toward +y) of row 0; following rows alternate.
struct ClassroomLayout {
  double d_x = 2.0;  // m, longitudinal seat spacing
  double d_y = 1.5;  // m, lateral seat spacing
  int rows = 3;
  int cols = 2;
  double origin_x = 0.5;
  double origin_y = 0.75;
  int first_row_dir = +1;

  void validate(const RoomGeometry& geom) const;
};

struct Point2 {
  double x = 0;
  double y = 0;
};

Point2 seat_position(const ClassroomLayout& lay, int row, int col);

// Layout reflected about the lateral centerline of a room of the given
// width; seat (i, j) maps to (i, cols-1-j) and the sweep direction flips.
ClassroomLayout mirrored(const ClassroomLayout& lay, double room_width);

struct PathParams {
  double v = 0.5;  // m/s robot speed
  double r = 1.3;  // m passing distance in front of a row
  int n = 10;      // people serviced per cycle

  void validate(double d_x) const;
};

enum class FilterMode { none, fixed, patrol };

struct FilterPlacement {
  FilterMode mode = FilterMode::none;
  PathParams path;     // patrol
  Point2 position;     // fixed
};

struct RobotSpec {
  double footprint_x = 0.5;  // m
  double footprint_y = 0.5;  // m
  double flow = 0.047;       // m^3/s

  // Q*dt / (footprint volume), clamped to [0, 1]; *clamped reports whether
  // the clamp engaged.
  double sink_fraction(double height, double dt, bool* clamped = nullptr) const;
  void validate() const;
};

struct EmissionEvent {
  int seat_row = 0;
  int seat_col = 0;
  double time = 0.0;  // only t = 0 is supported
};

struct Scenario {
  RoomGeometry geometry;
  ClassroomLayout layout;
  std::vector<EmissionEvent> emissions{{0, 0, 0.0}};
  FilterPlacement filter;
  DiffusionParams diffusion;
  RobotSpec robot;
  double horizon = 600.0;  // s

  void validate() const;
  // Seat anchoring the robot's release phase (first emission, or (0,0)).
  EmissionEvent anchor_seat() const;
};

// tau = N * d_y / v; also T_1 = d_y / v.
double cycle_time(int n, double d_y, double v);
double service_time(double d_y, double v);

// {0, T_1, ..., (N-1)*T_1}.
std::vector<double> release_offsets(int n, double t_1);

struct Observer {
  std::string label;
  double x = 0;
  double y = 0;
  int seat_row = 0;
  int seat_col = 0;
  bool present = false;  // the offset seat exists in the layout
};

// The five seats to the front and sides of the source, in the order
// FrontLeft, FrontCenter, FrontRight, Left, Right. Entries whose seat falls
// outside the layout are returned with present = false.
std::vector<Observer> observer_positions(const ClassroomLayout& lay, int src_row, int src_col);

struct RobotPose {
  bool in_zone = false;
  double x = 0;
  double y = 0;
};

// Serpentine sweep along each row's front line (seat line + r in +x) at
// speed v, alternating direction per row with zero row-switch time; time
// beyond the in-room sweep and before cycle end is off-zone. The phase is
// anchored so the robot fronts the source seat at release_offset + m*tau.
RobotPose robot_pose(const PathParams& path, const ClassroomLayout& lay, int src_row,
                     int src_col, double t, double release_offset);

struct StaticPlacements {
  Point2 near;
  Point2 far;
  bool near_clamped = false;
  bool far_clamped = false;
};

// Baseline fixed-filter spots: 1.3 m in front of the source and 2 m in
// front of the FrontCenter seat; clamped into the room interior if needed.
StaticPlacements static_placements(const ClassroomLayout& lay, const RoomGeometry& geom,
                                   int src_row, int src_col);

// Cells whose centers fall inside the footprint rectangle centered at
// (cx, cy), clipped to the grid.
CellSet footprint_cells(const RobotSpec& robot, const RoomGeometry& geom, double cx, double cy);

}  // namespace airsweep
