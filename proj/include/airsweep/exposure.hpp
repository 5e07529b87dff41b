#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "airsweep/scenario.hpp"

namespace airsweep {

inline constexpr double kRiskReferencePfu = 10.0;

struct BreathingParams {
  double tidal_volume = 5e-4;  // m^3 per breath
  double window = 5.0;         // s, one breath per averaging window

  void validate() const;
};

struct DosageRecord {
  std::string label;
  bool present = false;
  CellRef capture;
  bool neighborhood_clipped = false;       // 3x3 ring clipped at a wall
  std::vector<double> cumulative;          // PFU at each window boundary
  double final_dose = 0.0;                 // PFU at the capture cell
  double robust_dose = 0.0;                // max over the 3x3 neighborhood
};

struct RunResult {
  std::vector<DosageRecord> observers;
  double removed_total = 0.0;      // PFU captured by the filter
  long clamp_count = 0;            // cells where net went negative pre-clamp
  double ledger_max_rel = 0.0;     // worst |B - R - net_pre| / B over the run
  bool sink_fraction_clamped = false;
  std::vector<Field> snapshots;    // net field at requested whole seconds
};

// Advances base field B (source series through t_handoff, diffusion after)
// and removal field R (diffused every step, fed by the sink from the net
// field), samples net = max(B - R, 0) once per second, and accumulates
// per-window dosage for the five observers around the anchor seat.
// release_offset must be one of release_offsets(N, T_1) for patrol filters.
RunResult run_scenario(const Scenario& scn, const SourceSeries& source, double release_offset,
                       const BreathingParams& breathing, const std::vector<double>& snapshot_times = {});

// Dosage at the cell containing (x, y) from per-second net samples: each
// window contributes (mean of the window's samples) * tidal volume. The
// sample count must be a whole number of windows.
DosageRecord accumulate_dosage(const std::vector<Field>& net_series, double x, double y,
                               const BreathingParams& breathing);

// Maximum over the per-cell doses of a neighborhood.
double robust_dosage(const std::vector<double>& neighborhood_doses);

// 1 - filtered/baseline. Throws std::domain_error when baseline <= 0.
double efficacy(double robust_filtered, double robust_baseline);

enum class RiskLabel { below_reference, above_reference };

// below-reference for D < 10 PFU, above-reference from 10 PFU up.
RiskLabel risk_label(double dose);
const char* risk_label_name(RiskLabel label);

// Combined source series for all emission events of a scenario (cellwise
// sum; per-event seed derived from the base seed and the event index).
SourceSeries scenario_source_series(const Scenario& scn, const CoughSpec& cough,
                                    const VirologyParams& vir, const AirParams& air,
                                    std::uint64_t seed, int t_handoff = kDefaultHandoff);

// RunResult as CSV: one row per (observer, window) with cumulative dosage,
// then one summary row per observer with D, D-hat, and the risk label.
std::string run_result_csv(const RunResult& result, const BreathingParams& breathing);

}  // namespace airsweep
