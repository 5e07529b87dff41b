#pragma once

// Min-max search over the robot's (speed, passing distance) pair: a coarse
// interior grid pass followed by a derivative-free simplex refinement, both
// driven by the worst-case robust dosage across observers and release offsets.

#include <functional>
#include <string>
#include <vector>

#include "airsweep/exposure.hpp"
#include "airsweep/scenario.hpp"

namespace airsweep {

// One objective evaluation at a candidate (v, r).
struct ObjectiveSample {
  double v = 0.0;      // m/s
  double r = 0.0;      // m
  std::string worst_observer;
  double worst_t_c = 0.0;  // s, release offset realizing the max
  double value = 0.0;      // PFU, max robust dosage
};

struct OptimizationResult {
  double v_star = 0.0;
  double r_star = 0.0;
  double value_star = 0.0;
  double efficacy_star = 0.0;  // filled by optimize_path
  std::vector<ObjectiveSample> table;
  long evaluations = 0;
  bool budget_exhausted = false;
};

// Open rectangle of admissible (v, r); endpoints themselves are not valid.
struct SearchBounds {
  double v_lo = 0.0;
  double v_hi = kDefaultVmax;
  double r_lo = 0.0;
  double r_hi = 2.0;

  void validate() const;
  bool contains(double v, double r) const;
};

using ObjectiveFn = std::function<ObjectiveSample(double v, double r)>;

// Worst-case robust dosage for one candidate: max over present observers and
// over every release offset in the N-seat schedule. Throws on bound violation
// via ConfigError.
ObjectiveSample evaluate_objective(double v, double r, int n, const Scenario& templ,
                                   const SourceSeries& source, const BreathingParams& breathing,
                                   const SearchBounds& bounds, int jobs = 1);

// Adapter binding a scenario template into an ObjectiveFn. The referenced
// template and source must outlive the returned callable.
ObjectiveFn scenario_objective(const Scenario& templ, const SourceSeries& source,
                               const BreathingParams& breathing, int n, const SearchBounds& bounds,
                               int jobs = 1);

// Exhaustive pass over an n_v x n_r grid of interior points (1% margin keeps
// the samples off the open-interval endpoints; a 1-point axis sits at the
// midpoint). Ties resolve to the smaller v, then the smaller r.
OptimizationResult grid_search(const ObjectiveFn& objective, const SearchBounds& bounds, int n_v,
                               int n_r, int jobs = 1);
OptimizationResult grid_search(int n, const SearchBounds& bounds, int n_v, int n_r,
                               const Scenario& templ, const SourceSeries& source,
                               const BreathingParams& breathing, int jobs = 1);

struct RefineSettings {
  double tolerance = 1e-3;  // simplex diameter, in normalized bound units
  long max_evals = 200;
};

// Nelder-Mead descent from a start point, projected into the bounds. Never
// returns a point worse than the start; sets budget_exhausted when it stops
// on the evaluation budget instead of the diameter tolerance.
OptimizationResult refine_local(const ObjectiveFn& objective, double v0, double r0,
                                const SearchBounds& bounds, const RefineSettings& settings = {});
OptimizationResult refine_local(double v0, double r0, const SearchBounds& bounds,
                                const Scenario& templ, const SourceSeries& source,
                                const BreathingParams& breathing, int n,
                                const RefineSettings& settings = {}, int jobs = 1);

// Grid pass (default 8x8) plus refinement from the grid argmin; efficacy_star
// is measured against the unfiltered baseline of the same scenario.
OptimizationResult optimize_path(int n, const SearchBounds& bounds, const Scenario& templ,
                                 const SourceSeries& source, const BreathingParams& breathing,
                                 int n_v = 8, int n_r = 8, int jobs = 1,
                                 const RefineSettings& settings = {});

// Grid-axis positions used by grid_search, exposed for slice reports.
std::vector<double> grid_axis(double lo, double hi, int n);

// Monotonicity report over a grid table: the objective is expected to be
// nonincreasing in v at fixed r and nonincreasing in r at fixed v, within a
// relative slack. Returns one line per violation; empty means clean.
std::vector<std::string> trend_violations(const OptimizationResult& grid, int n_v, int n_r,
                                          double rel_slack = 0.02);

std::string objective_table_csv(const std::vector<ObjectiveSample>& table);
std::string optimization_summary(const OptimizationResult& result, int n);

}  // namespace airsweep
