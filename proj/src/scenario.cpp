#include "airsweep/scenario.hpp"

#include <cmath>

namespace airsweep {

namespace {

// Serpentine direction of a row: row 0 follows first_row_dir, then alternate.
int row_dir(const ClassroomLayout& lay, int row) {
  return (row % 2 == 0) ? lay.first_row_dir : -lay.first_row_dir;
}

// Sweep-time at which the robot fronts a seat, measured from cycle start.
double seat_sweep_time(const ClassroomLayout& lay, double t_1, int row, int col) {
  const int j_dir = (row_dir(lay, row) > 0) ? col : lay.cols - 1 - col;
  return (static_cast<double>(row) * lay.cols + j_dir + 0.5) * t_1;
}

}  // namespace

Point2 seat_position(const ClassroomLayout& lay, int row, int col) {
  return {lay.origin_x + row * lay.d_x, lay.origin_y + col * lay.d_y};
}

void ClassroomLayout::validate(const RoomGeometry& geom) const {
  if (!(d_x > 0) || !(d_y > 0)) throw ConfigError("seat spacing must be > 0");
  if (rows < 1 || cols < 1) throw ConfigError("layout needs at least one row and column");
  if (first_row_dir != 1 && first_row_dir != -1) {
    throw ConfigError("first row sweep direction must be +1 or -1");
  }
  const Point2 first = seat_position(*this, 0, 0);
  const Point2 last = seat_position(*this, rows - 1, cols - 1);
  if (first.x <= 0 || first.y <= 0 || last.x >= geom.length || last.y >= geom.width) {
    throw ConfigError("seat grid does not fit inside the room");
  }
}

ClassroomLayout mirrored(const ClassroomLayout& lay, double room_width) {
  ClassroomLayout m = lay;
  m.origin_y = room_width - (lay.origin_y + (lay.cols - 1) * lay.d_y);
  m.first_row_dir = -lay.first_row_dir;
  return m;
}

void PathParams::validate(double d_x) const {
  if (!(v > 0)) throw ConfigError("robot speed must be > 0");
  if (!(r > 0) || !(r < d_x)) throw ConfigError("passing distance must lie strictly in (0, d_x)");
  if (n < 1) throw ConfigError("service count N must be >= 1");
}

double RobotSpec::sink_fraction(double height, double dt, bool* clamped) const {
  validate();
  const double volume = footprint_x * footprint_y * height;
  double k_f = flow * dt / volume;
  const bool over = k_f > 1.0;
  if (over) k_f = 1.0;
  if (clamped) *clamped = over;
  return k_f;
}

void RobotSpec::validate() const {
  if (!(footprint_x > 0) || !(footprint_y > 0)) throw ConfigError("robot footprint must be > 0");
  if (flow < 0) throw ConfigError("filter flow must be >= 0");
}

EmissionEvent Scenario::anchor_seat() const {
  return emissions.empty() ? EmissionEvent{} : emissions.front();
}

void Scenario::validate() const {
  geometry.validate();
  layout.validate(geometry);
  diffusion.validate(geometry.cell);
  robot.validate();
  if (!(horizon > 0)) throw ConfigError("horizon must be > 0");
  for (const EmissionEvent& e : emissions) {
    if (e.seat_row < 0 || e.seat_row >= layout.rows || e.seat_col < 0 || e.seat_col >= layout.cols) {
      throw ConfigError("emission seat outside the layout");
    }
    if (e.time != 0.0) throw ConfigError("only emission time 0 is supported");
  }
  if (filter.mode == FilterMode::patrol) {
    filter.path.validate(layout.d_x);
    const EmissionEvent a = anchor_seat();
    // The phase anchor requires the source within the swept seats.
    const double t_1 = service_time(layout.d_y, filter.path.v);
    const double tau = cycle_time(filter.path.n, layout.d_y, filter.path.v);
    if (seat_sweep_time(layout, t_1, a.seat_row, a.seat_col) >= tau) {
      throw ConfigError("source seat is beyond the robot's N serviced seats");
    }
  } else if (filter.mode == FilterMode::fixed) {
    if (filter.position.x <= 0 || filter.position.x >= geometry.length ||
        filter.position.y <= 0 || filter.position.y >= geometry.width) {
      throw ConfigError("fixed filter position must lie inside the room");
    }
  }
}

double cycle_time(int n, double d_y, double v) {
  if (!(v > 0)) throw ConfigError("robot speed must be > 0");
  if (n < 1) throw ConfigError("service count N must be >= 1");
  return n * d_y / v;
}

double service_time(double d_y, double v) {
  if (!(v > 0)) throw ConfigError("robot speed must be > 0");
  return d_y / v;
}

std::vector<double> release_offsets(int n, double t_1) {
  if (n < 1) throw ConfigError("service count N must be >= 1");
  std::vector<double> offsets(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) offsets[static_cast<size_t>(i)] = i * t_1;
  return offsets;
}

std::vector<Observer> observer_positions(const ClassroomLayout& lay, int src_row, int src_col) {
  struct Offset {
    const char* label;
    int drow;
    int dcol;
  };
  // Left is toward -y (smaller column), per the facing-+x convention.
  static constexpr Offset kOffsets[] = {
      {"FrontLeft", 1, -1}, {"FrontCenter", 1, 0}, {"FrontRight", 1, 1},
      {"Left", 0, -1},      {"Right", 0, 1},
  };
  std::vector<Observer> out;
  out.reserve(5);
  for (const Offset& o : kOffsets) {
    Observer obs;
    obs.label = o.label;
    obs.seat_row = src_row + o.drow;
    obs.seat_col = src_col + o.dcol;
    obs.present = obs.seat_row >= 0 && obs.seat_row < lay.rows && obs.seat_col >= 0 &&
                  obs.seat_col < lay.cols;
    const Point2 p = seat_position(lay, obs.seat_row, obs.seat_col);
    obs.x = p.x;
    obs.y = p.y;
    out.push_back(std::move(obs));
  }
  return out;
}

RobotPose robot_pose(const PathParams& path, const ClassroomLayout& lay, int src_row,
                     int src_col, double t, double release_offset) {
  const double t_1 = service_time(lay.d_y, path.v);
  const double tau = cycle_time(path.n, lay.d_y, path.v);
  const int seats = lay.rows * lay.cols;
  const int in_sweep = std::min(path.n, seats);
  const double u_src = seat_sweep_time(lay, t_1, src_row, src_col);
  double u = std::fmod(t - release_offset + u_src, tau);
  if (u < 0) u += tau;
  RobotPose pose;
  if (u >= in_sweep * t_1) return pose;  // off-zone leg of the cycle
  int row = static_cast<int>(u / (lay.cols * t_1));
  if (row > lay.rows - 1) row = lay.rows - 1;
  const double u_row = u - static_cast<double>(row) * lay.cols * t_1;
  const int dir = row_dir(lay, row);
  const double y_start = (dir > 0) ? lay.origin_y - 0.5 * lay.d_y
                                   : lay.origin_y + (lay.cols - 1) * lay.d_y + 0.5 * lay.d_y;
  pose.in_zone = true;
  pose.x = lay.origin_x + row * lay.d_x + path.r;
  pose.y = y_start + dir * path.v * u_row;
  return pose;
}

StaticPlacements static_placements(const ClassroomLayout& lay, const RoomGeometry& geom,
                                   int src_row, int src_col) {
  const Point2 src = seat_position(lay, src_row, src_col);
  const double margin = 0.5 * geom.cell;
  auto clamp_into = [&](Point2 p, bool* flagged) {
    Point2 q = p;
    if (q.x < margin) q.x = margin;
    if (q.x > geom.length - margin) q.x = geom.length - margin;
    if (q.y < margin) q.y = margin;
    if (q.y > geom.width - margin) q.y = geom.width - margin;
    *flagged = (q.x != p.x) || (q.y != p.y);
    return q;
  };
  StaticPlacements sp;
  sp.near = clamp_into({src.x + kNearStaticOffset, src.y}, &sp.near_clamped);
  sp.far = clamp_into({src.x + lay.d_x + kFarStaticOffset, src.y}, &sp.far_clamped);
  return sp;
}

CellSet footprint_cells(const RobotSpec& robot, const RoomGeometry& geom, double cx, double cy) {
  const double cell = geom.cell;
  const int rows = geom.rows();
  const int cols = geom.cols();
  const double x_lo = cx - 0.5 * robot.footprint_x;
  const double x_hi = cx + 0.5 * robot.footprint_x;
  const double y_lo = cy - 0.5 * robot.footprint_y;
  const double y_hi = cy + 0.5 * robot.footprint_y;
  const int c0 = std::max(0, static_cast<int>(std::floor(x_lo / cell)) - 1);
  const int c1 = std::min(cols - 1, static_cast<int>(std::floor(x_hi / cell)) + 1);
  const int r0 = std::max(0, static_cast<int>(std::floor(y_lo / cell)) - 1);
  const int r1 = std::min(rows - 1, static_cast<int>(std::floor(y_hi / cell)) + 1);
  CellSet cells;
  for (int r = r0; r <= r1; ++r) {
    const double yc = (r + 0.5) * cell;
    if (yc < y_lo || yc >= y_hi) continue;
    for (int c = c0; c <= c1; ++c) {
      const double xc = (c + 0.5) * cell;
      if (xc < x_lo || xc >= x_hi) continue;
      cells.push_back({r, c});
    }
  }
  return cells;
}

}  // namespace airsweep
