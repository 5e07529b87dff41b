#pragma once

// Plain-text scenario configuration: one `key = value` pair per line,
// `#` comments, all quantities in SI units. Unknown keys and malformed
// values raise ConfigError with the offending line number.

#include <string>
#include <vector>

#include "airsweep/exposure.hpp"
#include "airsweep/optimize.hpp"
#include "airsweep/plume.hpp"
#include "airsweep/scenario.hpp"

namespace airsweep {

struct OptimizeSettings {
  std::vector<int> n_list{10, 12, 14};
  int grid_v = 8;
  int grid_r = 8;
  double v_max = kDefaultVmax;
  double r_max = 0.0;  // 0 = use the layout's d_x
  double tolerance = 1e-3;
  long budget = 200;
  std::vector<double> slice_v{0.3, 0.5, 0.8, 1.2};  // m/s, sampled at r_fixed
  std::vector<double> slice_r{0.5, 0.9, 1.3, 1.7};  // m, sampled at v_fixed
  double slice_r_fixed = 1.3;
  double slice_v_fixed = 0.5;
};

struct SimSetup {
  Scenario scenario;
  CoughSpec cough;
  VirologyParams virology;
  AirParams air;
  BreathingParams breathing;
  double release_offset = 0.0;  // s, patrol cleaning delay for `simulate`
  int t_handoff = kDefaultHandoff;
  OptimizeSettings optimize;

  SearchBounds bounds() const;
  void validate() const;
};

SimSetup parse_config_text(const std::string& text);
SimSetup load_config_file(const std::string& path);

}  // namespace airsweep
