#include "airsweep/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace airsweep {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  const size_t a = s.find_first_not_of(ws);
  if (a == std::string::npos) return {};
  const size_t b = s.find_last_not_of(ws);
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_tokens(const std::string& value) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : value) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& tok, int line) {
  double out{};
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  if (ec != std::errc() || p != tok.data() + tok.size() || !std::isfinite(out)) {
    fail(line, "expected a number, got '" + tok + "'");
  }
  return out;
}

long to_long(const std::string& tok, int line) {
  long out{};
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    fail(line, "expected an integer, got '" + tok + "'");
  }
  return out;
}

int to_int(const std::string& tok, int line) {
  const long v = to_long(tok, line);
  if (v < -1000000000L || v > 1000000000L) fail(line, "integer out of range: '" + tok + "'");
  return static_cast<int>(v);
}

double one_double(const std::string& value, int line) {
  const auto toks = split_tokens(value);
  if (toks.size() != 1) fail(line, "expected one number");
  return to_double(toks[0], line);
}

int one_int(const std::string& value, int line) {
  const auto toks = split_tokens(value);
  if (toks.size() != 1) fail(line, "expected one integer");
  return to_int(toks[0], line);
}

std::vector<double> double_list(const std::string& value, int line) {
  const auto toks = split_tokens(value);
  if (toks.empty()) fail(line, "expected a list of numbers");
  std::vector<double> out;
  out.reserve(toks.size());
  for (const auto& t : toks) out.push_back(to_double(t, line));
  return out;
}

std::vector<int> int_list(const std::string& value, int line) {
  const auto toks = split_tokens(value);
  if (toks.empty()) fail(line, "expected a list of integers");
  std::vector<int> out;
  out.reserve(toks.size());
  for (const auto& t : toks) out.push_back(to_int(t, line));
  return out;
}

}  // namespace

SearchBounds SimSetup::bounds() const {
  SearchBounds b;
  b.v_lo = 0.0;
  b.v_hi = optimize.v_max;
  b.r_lo = 0.0;
  b.r_hi = optimize.r_max > 0 ? optimize.r_max : scenario.layout.d_x;
  return b;
}

void SimSetup::validate() const {
  scenario.validate();
  cough.validate();
  virology.validate();
  air.validate();
  breathing.validate();
  if (release_offset < 0) throw ConfigError("filter.offset must be >= 0");
  if (t_handoff < 1) throw ConfigError("source.handoff must be >= 1 second");
  if (t_handoff > scenario.horizon) {
    throw ConfigError("source.handoff must not exceed the horizon");
  }
  if (optimize.n_list.empty()) throw ConfigError("optimize.n_list must not be empty");
  for (int n : optimize.n_list) {
    if (n < 1) throw ConfigError("optimize.n_list entries must be >= 1");
  }
  if (optimize.grid_v < 1 || optimize.grid_r < 1) {
    throw ConfigError("optimize grid resolution must be at least 1x1");
  }
  if (!(optimize.tolerance > 0)) throw ConfigError("optimize.tolerance must be > 0");
  if (optimize.budget < 1) throw ConfigError("optimize.budget must be >= 1");
  bounds().validate();
}

SimSetup parse_config_text(const std::string& text) {
  SimSetup setup;
  bool saw_emission = false;

  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(line, "missing key before '='");
    if (value.empty() && key != "emission") fail(line, "missing value for '" + key + "'");

    Scenario& scn = setup.scenario;
    if (key == "room.width") {
      scn.geometry.width = one_double(value, line);
    } else if (key == "room.length") {
      scn.geometry.length = one_double(value, line);
    } else if (key == "room.height") {
      scn.geometry.height = one_double(value, line);
    } else if (key == "room.cell") {
      scn.geometry.cell = one_double(value, line);
    } else if (key == "layout.d_x") {
      scn.layout.d_x = one_double(value, line);
    } else if (key == "layout.d_y") {
      scn.layout.d_y = one_double(value, line);
    } else if (key == "layout.rows") {
      scn.layout.rows = one_int(value, line);
    } else if (key == "layout.cols") {
      scn.layout.cols = one_int(value, line);
    } else if (key == "layout.origin_x") {
      scn.layout.origin_x = one_double(value, line);
    } else if (key == "layout.origin_y") {
      scn.layout.origin_y = one_double(value, line);
    } else if (key == "layout.first_row_dir") {
      const int dir = one_int(value, line);
      if (dir != 1 && dir != -1) fail(line, "layout.first_row_dir must be 1 or -1");
      scn.layout.first_row_dir = dir;
    } else if (key == "emission") {
      if (!saw_emission) {
        scn.emissions.clear();
        saw_emission = true;
      }
      if (value == "none") {
        if (!scn.emissions.empty()) fail(line, "'emission = none' conflicts with earlier emissions");
        continue;
      }
      const auto toks = split_tokens(value);
      if (toks.size() != 2 && toks.size() != 3) {
        fail(line, "emission takes 'seat_row seat_col [time_s]' or 'none'");
      }
      EmissionEvent e;
      e.seat_row = to_int(toks[0], line);
      e.seat_col = to_int(toks[1], line);
      e.time = toks.size() == 3 ? to_double(toks[2], line) : 0.0;
      if (e.time != 0.0) fail(line, "only emissions at t = 0 are supported");
      scn.emissions.push_back(e);
    } else if (key == "filter.mode") {
      if (value == "none") {
        scn.filter.mode = FilterMode::none;
      } else if (value == "fixed") {
        scn.filter.mode = FilterMode::fixed;
      } else if (value == "patrol") {
        scn.filter.mode = FilterMode::patrol;
      } else {
        fail(line, "filter.mode must be none, fixed, or patrol");
      }
    } else if (key == "filter.x") {
      scn.filter.position.x = one_double(value, line);
    } else if (key == "filter.y") {
      scn.filter.position.y = one_double(value, line);
    } else if (key == "filter.v") {
      scn.filter.path.v = one_double(value, line);
    } else if (key == "filter.r") {
      scn.filter.path.r = one_double(value, line);
    } else if (key == "filter.n") {
      scn.filter.path.n = one_int(value, line);
    } else if (key == "filter.offset") {
      setup.release_offset = one_double(value, line);
    } else if (key == "robot.footprint_x") {
      scn.robot.footprint_x = one_double(value, line);
    } else if (key == "robot.footprint_y") {
      scn.robot.footprint_y = one_double(value, line);
    } else if (key == "robot.flow") {
      scn.robot.flow = one_double(value, line);
    } else if (key == "diffusion.k_diffuse") {
      scn.diffusion.k_diffuse = one_double(value, line);
    } else if (key == "diffusion.k_decay") {
      scn.diffusion.k_decay = one_double(value, line);
    } else if (key == "diffusion.dt") {
      scn.diffusion.dt = one_double(value, line);
    } else if (key == "horizon") {
      scn.horizon = one_double(value, line);
    } else if (key == "breathing.tidal_volume") {
      setup.breathing.tidal_volume = one_double(value, line);
    } else if (key == "breathing.window") {
      setup.breathing.window = one_double(value, line);
    } else if (key == "cough.droplet_count") {
      setup.cough.droplet_count = one_int(value, line);
    } else if (key == "cough.diameter_min") {
      setup.cough.diameter_min = one_double(value, line);
    } else if (key == "cough.diameter_max") {
      setup.cough.diameter_max = one_double(value, line);
    } else if (key == "cough.mean_diameter") {
      setup.cough.rr_mean_diameter = one_double(value, line);
    } else if (key == "cough.spread") {
      setup.cough.rr_spread = one_double(value, line);
    } else if (key == "cough.jet_duration") {
      setup.cough.jet_duration = one_double(value, line);
    } else if (key == "cough.jet_peak_velocity") {
      setup.cough.jet_peak_velocity = one_double(value, line);
    } else if (key == "cough.jet_peak_time") {
      setup.cough.jet_peak_time = one_double(value, line);
    } else if (key == "cough.cone_half_angle") {
      setup.cough.cone_half_angle = one_double(value, line);
    } else if (key == "cough.mouth_height") {
      setup.cough.mouth_height = one_double(value, line);
    } else if (key == "virology.c_saliva") {
      setup.virology.c_saliva = one_double(value, line);
    } else if (key == "virology.k_evap") {
      setup.virology.k_evap = one_double(value, line);
    } else if (key == "air.mu_air") {
      setup.air.mu_air = one_double(value, line);
    } else if (key == "air.rho_water") {
      setup.air.rho_water = one_double(value, line);
    } else if (key == "air.gravity") {
      setup.air.gravity = one_double(value, line);
    } else if (key == "air.settle_cap") {
      setup.air.settle_cap = one_double(value, line);
    } else if (key == "air.tau_jet") {
      setup.air.tau_jet = one_double(value, line);
    } else if (key == "air.dt_jet") {
      setup.air.dt_jet = one_double(value, line);
    } else if (key == "air.dt_drift") {
      setup.air.dt_drift = one_double(value, line);
    } else if (key == "source.handoff") {
      setup.t_handoff = one_int(value, line);
    } else if (key == "optimize.n_list") {
      setup.optimize.n_list = int_list(value, line);
    } else if (key == "optimize.grid_v") {
      setup.optimize.grid_v = one_int(value, line);
    } else if (key == "optimize.grid_r") {
      setup.optimize.grid_r = one_int(value, line);
    } else if (key == "optimize.v_max") {
      setup.optimize.v_max = one_double(value, line);
    } else if (key == "optimize.r_max") {
      setup.optimize.r_max = one_double(value, line);
    } else if (key == "optimize.tolerance") {
      setup.optimize.tolerance = one_double(value, line);
    } else if (key == "optimize.budget") {
      setup.optimize.budget = to_long(value, line);
    } else if (key == "optimize.slice_v") {
      setup.optimize.slice_v = double_list(value, line);
    } else if (key == "optimize.slice_r") {
      setup.optimize.slice_r = double_list(value, line);
    } else if (key == "optimize.slice_r_fixed") {
      setup.optimize.slice_r_fixed = one_double(value, line);
    } else if (key == "optimize.slice_v_fixed") {
      setup.optimize.slice_v_fixed = one_double(value, line);
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }
  return setup;
}

SimSetup load_config_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  if (is.bad()) throw ConfigError("cannot read config file: " + path);
  return parse_config_text(os.str());
}

}  // namespace airsweep
