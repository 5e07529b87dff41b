#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "airsweep/scenario.hpp"

using namespace airsweep;

TEST_CASE("cycle time tau = N d_y / v") {
  CHECK(cycle_time(10, 1.5, 0.5) == 30.0);
  CHECK(cycle_time(12, 1.5, 0.5) == 36.0);
  CHECK(cycle_time(14, 1.5, 0.5) == 42.0);
  CHECK(service_time(1.5, 0.5) == 3.0);
  CHECK_THROWS_AS(cycle_time(0, 1.5, 0.5), ConfigError);
  CHECK_THROWS_AS(cycle_time(10, 1.5, 0.0), ConfigError);
  CHECK_THROWS_AS(service_time(1.5, -1.0), ConfigError);
}

TEST_CASE("release offsets are the n multiples of the service time") {
  const std::vector<double> offs = release_offsets(3, 3.0);
  REQUIRE(offs.size() == 3);
  CHECK(offs[0] == 0.0);
  CHECK(offs[1] == 3.0);
  CHECK(offs[2] == 6.0);
  const std::vector<double> many = release_offsets(14, 3.0);
  CHECK(many.size() == 14);
  CHECK(many.back() == 39.0);
  CHECK_THROWS_AS(release_offsets(0, 3.0), ConfigError);
}

TEST_CASE("seat positions on the grid") {
  ClassroomLayout lay;
  CHECK(seat_position(lay, 0, 0).x == 0.5);
  CHECK(seat_position(lay, 0, 0).y == 0.75);
  CHECK(seat_position(lay, 2, 1).x == doctest::Approx(4.5));
  CHECK(seat_position(lay, 2, 1).y == doctest::Approx(2.25));
}

TEST_CASE("layout validation") {
  RoomGeometry geom;
  ClassroomLayout lay;
  CHECK_NOTHROW(lay.validate(geom));
  SUBCASE("grid overruns the room") {
    lay.d_x = 4.0;  // last row at x = 8.5 in an 8 m room
    CHECK_THROWS_AS(lay.validate(geom), ConfigError);
  }
  SUBCASE("non-positive spacing") {
    lay.d_y = 0.0;
    CHECK_THROWS_AS(lay.validate(geom), ConfigError);
  }
  SUBCASE("sweep direction flag") {
    lay.first_row_dir = 2;
    CHECK_THROWS_AS(lay.validate(geom), ConfigError);
  }
}

TEST_CASE("the five observers around a source seat") {
  ClassroomLayout lay;
  lay.rows = 3;
  lay.cols = 3;

  SUBCASE("interior source: all present, Left is one seat toward -y") {
    const auto obs = observer_positions(lay, 1, 1);
    REQUIRE(obs.size() == 5);
    CHECK(obs[0].label == "FrontLeft");
    CHECK(obs[1].label == "FrontCenter");
    CHECK(obs[2].label == "FrontRight");
    CHECK(obs[3].label == "Left");
    CHECK(obs[4].label == "Right");
    const Point2 src = seat_position(lay, 1, 1);
    for (const Observer& o : obs) CHECK(o.present);
    CHECK(obs[1].x == doctest::Approx(src.x + lay.d_x));
    CHECK(obs[1].y == doctest::Approx(src.y));
    CHECK(obs[3].x == doctest::Approx(src.x));
    CHECK(obs[3].y == doctest::Approx(src.y - lay.d_y));
    CHECK(obs[4].y == doctest::Approx(src.y + lay.d_y));
    CHECK(obs[0].x == doctest::Approx(src.x + lay.d_x));
    CHECK(obs[0].y == doctest::Approx(src.y - lay.d_y));
  }

  SUBCASE("corner source: out-of-grid seats are flagged absent") {
    const auto obs = observer_positions(lay, 0, 0);
    CHECK_FALSE(obs[0].present);  // FrontLeft
    CHECK(obs[1].present);
    CHECK(obs[2].present);
    CHECK_FALSE(obs[3].present);  // Left
    CHECK(obs[4].present);
  }

  SUBCASE("last row: front seats absent") {
    const auto obs = observer_positions(lay, 2, 1);
    CHECK_FALSE(obs[0].present);
    CHECK_FALSE(obs[1].present);
    CHECK_FALSE(obs[2].present);
    CHECK(obs[3].present);
    CHECK(obs[4].present);
  }
}

TEST_CASE("robot pose fronts the source at the release offset and every cycle after") {
  ClassroomLayout lay;  // 3 x 2 seats
  PathParams path;      // v = 0.5, r = 1.3, n = 10
  const double tau = cycle_time(path.n, lay.d_y, path.v);
  for (int src_row : {0, 1, 2}) {
    for (int src_col : {0, 1}) {
      const Point2 src = seat_position(lay, src_row, src_col);
      for (double off : {0.0, 3.0, 7.5}) {
        for (int m = 0; m < 3; ++m) {
          const RobotPose p = robot_pose(path, lay, src_row, src_col, off + m * tau, off);
          CHECK(p.in_zone);
          CHECK(p.x == doctest::Approx(src.x + path.r).epsilon(1e-12));
          CHECK(p.y == doctest::Approx(src.y).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("robot pose walks the serpentine one seat per service time") {
  ClassroomLayout lay;
  PathParams path;
  const double t_1 = service_time(lay.d_y, path.v);  // 3 s

  // From seat (0,0), row 0 sweeps toward +y, so one service later: seat (0,1).
  RobotPose p = robot_pose(path, lay, 0, 0, t_1, 0.0);
  CHECK(p.in_zone);
  CHECK(p.x == doctest::Approx(0.5 + path.r));
  CHECK(p.y == doctest::Approx(0.75 + lay.d_y));

  // Two services later it has moved to row 1, which sweeps back toward -y.
  p = robot_pose(path, lay, 0, 0, 2 * t_1, 0.0);
  CHECK(p.x == doctest::Approx(0.5 + lay.d_x + path.r));
  CHECK(p.y == doctest::Approx(0.75 + lay.d_y));
  p = robot_pose(path, lay, 0, 0, 3 * t_1, 0.0);
  CHECK(p.y == doctest::Approx(0.75));
}

TEST_CASE("beyond the swept seats the robot is off-zone until the cycle ends") {
  ClassroomLayout lay;  // 6 seats
  PathParams path;      // n = 10 -> 18 s sweep inside a 30 s cycle
  const double t_1 = service_time(lay.d_y, path.v);
  int in = 0, out = 0;
  for (double t = 0.05; t < 30.0; t += 0.1) {
    const RobotPose p = robot_pose(path, lay, 0, 0, t, 0.0);
    (p.in_zone ? in : out)++;
    if (p.in_zone) {
      CHECK(p.y >= 0.75 - 0.5 * lay.d_y - 1e-9);
      CHECK(p.y <= 0.75 + 1.5 + 0.5 * lay.d_y + 1e-9);
    }
  }
  // The sweep covers 6 seats * 3 s = 18 s; off-zone is the remaining 12 s
  // shifted by the phase anchor.
  CHECK(in == 180);
  CHECK(out == 120);

  // With n <= seat count there is no off-zone leg at all.
  path.n = 4;
  const double tau = cycle_time(path.n, lay.d_y, path.v);
  for (double t = 0.05; t < 2 * tau; t += 0.1) {
    CHECK(robot_pose(path, lay, 0, 0, t, 0.0).in_zone);
  }
  (void)t_1;
}

TEST_CASE("negative and far-future times wrap to the same cycle phase") {
  ClassroomLayout lay;
  PathParams path;
  const double tau = cycle_time(path.n, lay.d_y, path.v);
  for (double t : {0.7, 4.4, 19.0}) {
    const RobotPose a = robot_pose(path, lay, 1, 0, t, 3.0);
    const RobotPose b = robot_pose(path, lay, 1, 0, t - tau, 3.0);
    const RobotPose c = robot_pose(path, lay, 1, 0, t + 5 * tau, 3.0);
    CHECK(a.in_zone == b.in_zone);
    CHECK(a.in_zone == c.in_zone);
    if (a.in_zone) {
      CHECK(a.x == doctest::Approx(b.x).epsilon(1e-9));
      CHECK(a.y == doctest::Approx(b.y).epsilon(1e-9));
      CHECK(a.x == doctest::Approx(c.x).epsilon(1e-9));
      CHECK(a.y == doctest::Approx(c.y).epsilon(1e-9));
    }
  }
}

TEST_CASE("a mirrored layout yields the laterally mirrored robot path") {
  RoomGeometry geom;
  ClassroomLayout lay;
  lay.origin_y = 0.5;  // deliberately asymmetric
  PathParams path;
  const ClassroomLayout mir = mirrored(lay, geom.width);
  CHECK(mir.first_row_dir == -lay.first_row_dir);
  const int src_row = 1, src_col = 0;
  const int mir_col = lay.cols - 1 - src_col;
  for (double t = 0.0; t < 30.0; t += 0.37) {
    const RobotPose a = robot_pose(path, lay, src_row, src_col, t, 0.0);
    const RobotPose b = robot_pose(path, mir, src_row, mir_col, t, 0.0);
    CHECK(a.in_zone == b.in_zone);
    if (a.in_zone) {
      CHECK(b.x == doctest::Approx(a.x).epsilon(1e-12));
      CHECK(b.y == doctest::Approx(geom.width - a.y).epsilon(1e-12));
    }
  }
}

TEST_CASE("sink fraction is Q dt over the footprint column volume, clamped at 1") {
  RobotSpec robot;
  bool clamped = true;
  const double k_f = robot.sink_fraction(3.5, 1.0, &clamped);
  CHECK(k_f == doctest::Approx(0.047 / 0.875).epsilon(1e-12));
  CHECK(k_f == doctest::Approx(0.05371).epsilon(1e-4));
  CHECK_FALSE(clamped);

  CHECK(robot.sink_fraction(3.5, 100.0, &clamped) == 1.0);
  CHECK(clamped);

  robot.flow = 0.0;
  CHECK(robot.sink_fraction(3.5, 1.0) == 0.0);

  robot.flow = -1.0;
  CHECK_THROWS_AS(robot.sink_fraction(3.5, 1.0), ConfigError);
}

TEST_CASE("static filter spots sit in front of the source and clamp at walls") {
  RoomGeometry geom;
  ClassroomLayout lay;

  SUBCASE("interior source") {
    const StaticPlacements sp = static_placements(lay, geom, 0, 0);
    CHECK(sp.near.x == doctest::Approx(0.5 + 1.3));
    CHECK(sp.near.y == doctest::Approx(0.75));
    CHECK(sp.far.x == doctest::Approx(0.5 + 2.0 + 2.0));
    CHECK(sp.far.y == doctest::Approx(0.75));
    CHECK_FALSE(sp.near_clamped);
    CHECK_FALSE(sp.far_clamped);
  }

  SUBCASE("last-row source pushes the far spot outside; it clamps") {
    const StaticPlacements sp = static_placements(lay, geom, 2, 1);
    CHECK(sp.far.x == doctest::Approx(geom.length - 0.05));
    CHECK(sp.far_clamped);
    CHECK_FALSE(sp.near_clamped);
  }
}

TEST_CASE("footprint cells tile the robot rectangle") {
  RobotSpec robot;  // 0.5 x 0.5 m
  RoomGeometry geom;

  const CellSet cells = footprint_cells(robot, geom, 2.0, 1.5);
  CHECK(cells.size() == 25);
  for (const CellRef& c : cells) {
    const double xc = (c.col + 0.5) * geom.cell;
    const double yc = (c.row + 0.5) * geom.cell;
    CHECK(xc >= 2.0 - 0.25 - 1e-9);
    CHECK(xc <= 2.0 + 0.25 + 1e-9);
    CHECK(yc >= 1.5 - 0.25 - 1e-9);
    CHECK(yc <= 1.5 + 0.25 + 1e-9);
  }

  // Clipped at a corner: only the in-room quarter remains.
  const CellSet corner = footprint_cells(robot, geom, 0.1, 0.1);
  CHECK(corner.size() == 9);
  for (const CellRef& c : corner) {
    CHECK(c.row >= 0);
    CHECK(c.col >= 0);
  }
}

TEST_CASE("path parameter validation") {
  PathParams path;
  CHECK_NOTHROW(path.validate(2.0));
  SUBCASE("speed") {
    path.v = 0.0;
    CHECK_THROWS_AS(path.validate(2.0), ConfigError);
  }
  SUBCASE("distance must stay inside the row gap") {
    path.r = 2.0;
    CHECK_THROWS_AS(path.validate(2.0), ConfigError);
    path.r = 0.0;
    CHECK_THROWS_AS(path.validate(2.0), ConfigError);
  }
  SUBCASE("service count") {
    path.n = 0;
    CHECK_THROWS_AS(path.validate(2.0), ConfigError);
  }
}

TEST_CASE("scenario validation") {
  Scenario scn;
  CHECK_NOTHROW(scn.validate());

  SUBCASE("emission seat must exist") {
    scn.emissions = {{5, 0, 0.0}};
    CHECK_THROWS_AS(scn.validate(), ConfigError);
  }
  SUBCASE("only emissions at t = 0") {
    scn.emissions = {{0, 0, 1.0}};
    CHECK_THROWS_AS(scn.validate(), ConfigError);
  }
  SUBCASE("patrol with the source beyond the serviced seats") {
    scn.filter.mode = FilterMode::patrol;
    scn.filter.path.n = 1;
    scn.emissions = {{0, 1, 0.0}};  // swept after the first seat
    CHECK_THROWS_AS(scn.validate(), ConfigError);
    scn.emissions = {{0, 0, 0.0}};
    CHECK_NOTHROW(scn.validate());
  }
  SUBCASE("fixed filter must sit inside the room") {
    scn.filter.mode = FilterMode::fixed;
    scn.filter.position = {9.0, 1.0};
    CHECK_THROWS_AS(scn.validate(), ConfigError);
    scn.filter.position = {4.0, 1.5};
    CHECK_NOTHROW(scn.validate());
  }
  SUBCASE("horizon must be positive") {
    scn.horizon = 0.0;
    CHECK_THROWS_AS(scn.validate(), ConfigError);
  }
  SUBCASE("anchor seat defaults to the first emission") {
    scn.emissions = {{1, 1, 0.0}, {0, 0, 0.0}};
    CHECK(scn.anchor_seat().seat_row == 1);
    CHECK(scn.anchor_seat().seat_col == 1);
    scn.emissions.clear();
    CHECK(scn.anchor_seat().seat_row == 0);
  }
}

TEST_CASE("mirroring a layout reflects the seat columns about the room midline") {
  RoomGeometry geom;
  ClassroomLayout lay;
  lay.origin_y = 0.5;
  lay.cols = 2;
  lay.d_y = 1.0;
  const ClassroomLayout mir = mirrored(lay, geom.width);
  for (int r = 0; r < lay.rows; ++r) {
    for (int c = 0; c < lay.cols; ++c) {
      const Point2 p = seat_position(lay, r, c);
      const Point2 q = seat_position(mir, r, lay.cols - 1 - c);
      CHECK(q.x == doctest::Approx(p.x));
      CHECK(q.y == doctest::Approx(geom.width - p.y));
    }
  }
}
