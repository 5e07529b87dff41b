#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "airsweep/grid.hpp"

namespace airsweep {

inline constexpr int kDefaultHandoff = 60;  // seconds of source series

struct CoughSpec {
  int droplet_count = 14000;
  double diameter_min = 1e-6;       // m
  double diameter_max = 500e-6;     // m
  double rr_mean_diameter = 80e-6;  // m, Rosin-Rammler scale
  double rr_spread = 2.0;           // Rosin-Rammler exponent
  double jet_duration = 0.61;       // s
  double jet_peak_velocity = 22.06; // m/s
  double jet_peak_time = 0.066;     // s
  double cone_half_angle = 15.0 * 3.14159265358979323846 / 180.0;  // rad
  double mouth_height = 1.2;        // m

  void validate() const;
};

struct VirologyParams {
  double c_saliva = 1e12;  // PFU per m^3 of saliva
  double k_evap = 10.0;    // evaporation consolidation factor

  void validate() const;
};

struct AirParams {
  double mu_air = 1.81e-5;      // Pa s
  double rho_water = 1000.0;    // kg/m^3
  double gravity = 9.81;        // m/s^2
  double settle_cap = 9.65;     // m/s, cap where Stokes drag is invalid
  double tau_jet = 1.0;         // s, exponential decay of the jet velocity
  double dt_jet = 0.01;         // s, fine step while the jet blows
  double dt_drift = 0.1;        // s, fine step afterwards

  void validate() const;
};

struct Droplet {
  double px = 0, py = 0, pz = 0;  // m
  double vx = 0, vy = 0, vz = 0;  // m/s, decaying jet velocity remainder
  double radius = 0;              // m
  bool active = true;
};

struct DropletCloud {
  std::vector<Droplet> drops;
  double time = 0.0;  // s
};

// Capped Stokes terminal settling speed for a droplet radius.
double settling_speed(double radius, const AirParams& air);

// Jet speed at emission time: piecewise linear, 0 at t=0, peak at
// jet_peak_time, back to 0 at jet_duration.
double jet_speed_at(const CoughSpec& spec, double t_emit);

// Samples the cough cloud at the mouth (origin_x, origin_y, mouth_height),
// facing +x. Diameters follow the Rosin-Rammler law truncated to
// [diameter_min, diameter_max]; lateral cone angles are drawn in mirrored
// +/- pairs so a centered source yields an exactly mirror-symmetric cloud.
DropletCloud sample_droplets(const CoughSpec& spec, double origin_x, double origin_y,
                             std::uint64_t seed);

// Moves active droplets by dt: jet velocity decays with tau_jet, constant
// settling acts downward, side walls and the ceiling reflect, the floor
// deposits (droplet becomes inactive).
void advance_droplets(DropletCloud& cloud, double dt, const AirParams& air,
                      const RoomGeometry& geom);

// Bins active droplets into a vertically averaged concentration field:
// each contributes k_evap*c_saliva*(4pi/3)*r^3 / (H*cell^2) to its cell.
Field bin_concentration(const DropletCloud& cloud, const RoomGeometry& geom,
                        const VirologyParams& vir);

// Per-second concentration fields for t = 0..t_handoff.
struct SourceSeries {
  RoomGeometry geom;
  int t_handoff = kDefaultHandoff;
  std::vector<Field> fields;  // size t_handoff + 1

  const Field& at(int t) const { return fields.at(static_cast<size_t>(t)); }
};

// Runs the droplet model at fine internal steps (dt_jet during the jet,
// dt_drift after) and snapshots the binned field at each whole second.
SourceSeries generate_source_series(const CoughSpec& spec, const RoomGeometry& geom,
                                    const VirologyParams& vir, const AirParams& air,
                                    double origin_x, double origin_y, std::uint64_t seed,
                                    int t_handoff = kDefaultHandoff);

// All-zero series (no emission).
SourceSeries zero_series(const RoomGeometry& geom, int t_handoff = kDefaultHandoff);

// Cellwise sum of two series with identical geometry and handoff.
void add_series(SourceSeries& into, const SourceSeries& other);

// Versioned binary snapshot of a series (magic header, geometry block,
// per-second dense field blocks); byte-identical for identical series.
void save_series(const SourceSeries& s, const std::string& path);
SourceSeries load_series(const std::string& path);

// Radius around (sx, sy) whose cells hold mass_fraction of the field's
// total mass (cells sorted by center distance; 0 for an empty field).
double spread_extent(const Field& f, double sx, double sy, double mass_fraction = 0.9);

}  // namespace airsweep
