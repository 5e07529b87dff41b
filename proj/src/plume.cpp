#include "airsweep/plume.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <utility>

#include "airsweep/util.hpp"

namespace airsweep {

void CoughSpec::validate() const {
  if (droplet_count <= 0) throw ConfigError("droplet count must be > 0");
  if (!(diameter_min > 0) || diameter_min > diameter_max) {
    throw ConfigError("droplet diameter range must satisfy 0 < min <= max");
  }
  if (!(rr_mean_diameter > 0) || !(rr_spread > 0)) {
    throw ConfigError("size distribution mean and spread must be > 0");
  }
  if (!(jet_duration > 0) || !(jet_peak_velocity > 0) ||
      jet_peak_time <= 0 || jet_peak_time >= jet_duration) {
    throw ConfigError("jet profile needs 0 < peak time < duration and positive peak speed");
  }
  if (cone_half_angle < 0 || cone_half_angle > std::numbers::pi / 4) {
    throw ConfigError("cone half-angle must lie in [0, 45] degrees");
  }
  if (!(mouth_height > 0)) throw ConfigError("mouth height must be > 0");
}

void VirologyParams::validate() const {
  if (!(c_saliva > 0) || !(k_evap > 0)) {
    throw ConfigError("virus concentration and evaporation factor must be > 0");
  }
}

void AirParams::validate() const {
  if (!(mu_air > 0) || !(rho_water > 0) || !(gravity > 0) || !(settle_cap > 0) ||
      !(tau_jet > 0)) {
    throw ConfigError("air parameters must be strictly positive");
  }
  if (!(dt_jet > 0) || dt_jet > 0.01 + 1e-12 || !(dt_drift > 0) || dt_drift > 0.1 + 1e-12) {
    throw ConfigError("fine steps must satisfy 0 < dt_jet <= 0.01 s and 0 < dt_drift <= 0.1 s");
  }
}

double settling_speed(double radius, const AirParams& air) {
  const double d = 2.0 * radius;
  const double v = air.rho_water * air.gravity * d * d / (18.0 * air.mu_air);
  return std::min(v, air.settle_cap);
}

double jet_speed_at(const CoughSpec& spec, double t_emit) {
  if (t_emit <= 0 || t_emit >= spec.jet_duration) return 0.0;
  if (t_emit <= spec.jet_peak_time) {
    return spec.jet_peak_velocity * (t_emit / spec.jet_peak_time);
  }
  return spec.jet_peak_velocity *
         ((spec.jet_duration - t_emit) / (spec.jet_duration - spec.jet_peak_time));
}

namespace {

struct RrSampler {
  double dbar, n, f_min, delta_f, d_min, d_max;

  explicit RrSampler(const CoughSpec& spec)
      : dbar(spec.rr_mean_diameter),
        n(spec.rr_spread),
        d_min(spec.diameter_min),
        d_max(spec.diameter_max) {
    // F(d) = 1 - exp(-(d/dbar)^n), truncated and renormalized to [d_min, d_max].
    f_min = -std::expm1(-std::pow(d_min / dbar, n));
    const double f_max = -std::expm1(-std::pow(d_max / dbar, n));
    delta_f = f_max - f_min;
    if (d_min < d_max && delta_f < 1e-12) {
      throw ConfigError("droplet size distribution has no mass in the diameter range");
    }
  }

  double diameter(double u) const {
    if (d_min == d_max) return d_min;
    const double q = f_min + u * delta_f;
    const double d = dbar * std::pow(-std::log1p(-q), 1.0 / n);
    return std::min(std::max(d, d_min), d_max);
  }
};

}  // namespace

DropletCloud sample_droplets(const CoughSpec& spec, double origin_x, double origin_y,
                             std::uint64_t seed) {
  spec.validate();
  const RrSampler sizes(spec);
  std::mt19937_64 rng(seed);
  DropletCloud cloud;
  cloud.time = 0.0;
  cloud.drops.reserve(static_cast<size_t>(spec.droplet_count));
  int remaining = spec.droplet_count;
  while (remaining > 0) {
    const double diam = sizes.diameter(u01(rng));
    const double speed = jet_speed_at(spec, u01(rng) * spec.jet_duration);
    const double elev = (2.0 * u01(rng) - 1.0) * spec.cone_half_angle;
    const double lateral = (2.0 * u01(rng) - 1.0) * spec.cone_half_angle;
    Droplet d;
    d.px = origin_x;
    d.py = origin_y;
    d.pz = spec.mouth_height;
    d.vx = speed * std::cos(elev) * std::cos(lateral);
    d.vy = speed * std::cos(elev) * std::sin(lateral);
    d.vz = speed * std::sin(elev);
    d.radius = 0.5 * diam;
    d.active = true;
    cloud.drops.push_back(d);
    --remaining;
    if (remaining > 0) {
      Droplet m = d;  // mirrored lateral partner
      m.vy = -d.vy;
      cloud.drops.push_back(m);
      --remaining;
    }
  }
  return cloud;
}

void advance_droplets(DropletCloud& cloud, double dt, const AirParams& air,
                      const RoomGeometry& geom) {
  if (dt == 0.0) return;
  if (dt < 0) throw ConfigError("droplet step dt must be >= 0");
  const double decay = std::exp(-dt / air.tau_jet);
  const double len = geom.length;
  const double wid = geom.width;
  const double hgt = geom.height;
  for (Droplet& d : cloud.drops) {
    if (!d.active) continue;
    const double vs = settling_speed(d.radius, air);
    d.px += d.vx * dt;
    d.py += d.vy * dt;
    d.pz += (d.vz - vs) * dt;
    d.vx *= decay;
    d.vy *= decay;
    d.vz *= decay;
    while (d.px < 0.0 || d.px > len) {
      d.px = (d.px < 0.0) ? -d.px : 2.0 * len - d.px;
      d.vx = -d.vx;
    }
    while (d.py < 0.0 || d.py > wid) {
      d.py = (d.py < 0.0) ? -d.py : 2.0 * wid - d.py;
      d.vy = -d.vy;
    }
    while (d.pz > hgt) {
      d.pz = 2.0 * hgt - d.pz;
      d.vz = -d.vz;
    }
    if (d.pz <= 0.0) {
      d.pz = 0.0;
      d.active = false;
    }
  }
  cloud.time += dt;
}

Field bin_concentration(const DropletCloud& cloud, const RoomGeometry& geom,
                        const VirologyParams& vir) {
  vir.validate();
  Field f = new_field(geom);
  f.timestamp = cloud.time;
  const int rows = geom.rows();
  const int cols = geom.cols();
  // k*c*(4pi/3)*r^3 spread over the cell column of volume H*cell^2.
  const double coef =
      vir.k_evap * vir.c_saliva * (4.0 * std::numbers::pi / 3.0) / (geom.height * geom.cell * geom.cell);
  for (const Droplet& d : cloud.drops) {
    if (!d.active) continue;
    int col = static_cast<int>(std::floor(d.px / geom.cell));
    int row = static_cast<int>(std::floor(d.py / geom.cell));
    col = std::min(std::max(col, 0), cols - 1);
    row = std::min(std::max(row, 0), rows - 1);
    f.at(row, col) += coef * d.radius * d.radius * d.radius;
  }
  return f;
}

SourceSeries generate_source_series(const CoughSpec& spec, const RoomGeometry& geom,
                                    const VirologyParams& vir, const AirParams& air,
                                    double origin_x, double origin_y, std::uint64_t seed,
                                    int t_handoff) {
  geom.validate();
  air.validate();
  if (t_handoff < 0) throw ConfigError("source series length must be >= 0");
  DropletCloud cloud = sample_droplets(spec, origin_x, origin_y, seed);
  SourceSeries series;
  series.geom = geom;
  series.t_handoff = t_handoff;
  series.fields.reserve(static_cast<size_t>(t_handoff) + 1);
  series.fields.push_back(bin_concentration(cloud, geom, vir));
  double now = 0.0;
  for (int s = 1; s <= t_handoff; ++s) {
    const double target = static_cast<double>(s);
    while (now < target - 1e-9) {
      double step = (now < spec.jet_duration - 1e-12) ? air.dt_jet : air.dt_drift;
      step = std::min(step, target - now);
      advance_droplets(cloud, step, air, geom);
      now += step;
    }
    now = target;
    cloud.time = target;
    Field snap = bin_concentration(cloud, geom, vir);
    snap.timestamp = target;
    series.fields.push_back(std::move(snap));
  }
  return series;
}

SourceSeries zero_series(const RoomGeometry& geom, int t_handoff) {
  SourceSeries series;
  series.geom = geom;
  series.t_handoff = t_handoff;
  series.fields.reserve(static_cast<size_t>(t_handoff) + 1);
  for (int t = 0; t <= t_handoff; ++t) {
    Field f = new_field(geom);
    f.timestamp = t;
    series.fields.push_back(std::move(f));
  }
  return series;
}

void add_series(SourceSeries& into, const SourceSeries& other) {
  if (!(into.geom == other.geom) || into.t_handoff != other.t_handoff) {
    throw ConfigError("cannot combine source series with different geometry or length");
  }
  for (size_t t = 0; t < into.fields.size(); ++t) {
    auto& a = into.fields[t].v;
    const auto& b = other.fields[t].v;
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  }
}

namespace {

constexpr char kMagic[8] = {'A', 'S', 'W', 'S', 'R', 'C', '0', '1'};

template <typename T>
void put(std::ofstream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::ifstream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  return value;
}

}  // namespace

void save_series(const SourceSeries& s, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(s.geom.rows()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(s.geom.cols()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(s.t_handoff));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(s.fields.size()));
  put<double>(os, s.geom.width);
  put<double>(os, s.geom.length);
  put<double>(os, s.geom.height);
  put<double>(os, s.geom.cell);
  for (const Field& f : s.fields) {
    put<double>(os, f.timestamp);
    os.write(reinterpret_cast<const char*>(f.v.data()),
             static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  }
  if (!os) throw std::runtime_error("short write to " + path);
}

SourceSeries load_series(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open source cache " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ConfigError(path + " is not a supported source cache file");
  }
  const auto rows = take<std::uint32_t>(is);
  const auto cols = take<std::uint32_t>(is);
  const auto handoff = take<std::uint32_t>(is);
  const auto nfields = take<std::uint32_t>(is);
  SourceSeries s;
  s.geom.width = take<double>(is);
  s.geom.length = take<double>(is);
  s.geom.height = take<double>(is);
  s.geom.cell = take<double>(is);
  if (!is) throw ConfigError(path + ": truncated header");
  s.geom.validate();
  if (rows != static_cast<std::uint32_t>(s.geom.rows()) ||
      cols != static_cast<std::uint32_t>(s.geom.cols()) || nfields != handoff + 1) {
    throw ConfigError(path + ": inconsistent cache header");
  }
  s.t_handoff = static_cast<int>(handoff);
  s.fields.reserve(nfields);
  const size_t cells = static_cast<size_t>(rows) * cols;
  for (std::uint32_t t = 0; t < nfields; ++t) {
    Field f = new_field(s.geom);
    f.timestamp = take<double>(is);
    is.read(reinterpret_cast<char*>(f.v.data()),
            static_cast<std::streamsize>(cells * sizeof(double)));
    if (!is) throw ConfigError(path + ": truncated field block");
    s.fields.push_back(std::move(f));
  }
  is.peek();
  if (!is.eof()) throw ConfigError(path + ": trailing bytes after last field block");
  return s;
}

double spread_extent(const Field& f, double sx, double sy, double mass_fraction) {
  if (!(mass_fraction > 0 && mass_fraction <= 1)) {
    throw ConfigError("mass fraction must be in (0, 1]");
  }
  const int rows = f.geom.rows();
  const int cols = f.geom.cols();
  std::vector<std::pair<double, double>> cells;  // (distance, mass)
  cells.reserve(f.size());
  double total = 0.0;
  for (int i = 0; i < rows; ++i) {
    const double cy = (i + 0.5) * f.geom.cell;
    for (int j = 0; j < cols; ++j) {
      const double cx = (j + 0.5) * f.geom.cell;
      const double m = f.at(i, j);
      total += m;
      cells.emplace_back(std::hypot(cx - sx, cy - sy), m);
    }
  }
  if (!(total > 0)) return 0.0;
  std::sort(cells.begin(), cells.end());
  double cum = 0.0;
  for (const auto& [dist, m] : cells) {
    cum += m;
    if (cum >= mass_fraction * total) return dist;
  }
  return cells.back().first;
}

}  // namespace airsweep
