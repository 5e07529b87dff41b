#include "airsweep/exposure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "airsweep/kernels.hpp"
#include "airsweep/util.hpp"

namespace airsweep {

void BreathingParams::validate() const {
  if (!(tidal_volume > 0)) throw ConfigError("tidal volume must be > 0");
  if (!(window > 0)) throw ConfigError("breathing window must be > 0");
}

namespace {

// Whole number a/b within fp slack, or -1.
long whole_ratio(double a, double b) {
  const long n = std::lround(a / b);
  if (n < 0 || std::fabs(n * b - a) > 1e-9 * std::max(std::fabs(a), 1.0)) return -1;
  return n;
}

struct TrackedObserver {
  size_t record_idx = 0;
  std::vector<CellRef> cells;  // capture cell first, then the 3x3 ring
  std::vector<double> window_partial;
  std::vector<double> cumulative;
};

}  // namespace

RunResult run_scenario(const Scenario& scn, const SourceSeries& source, double release_offset,
                       const BreathingParams& breathing, const std::vector<double>& snapshot_times) {
  scn.validate();
  breathing.validate();
  if (!(source.geom == scn.geometry)) {
    throw std::invalid_argument("source series geometry does not match the scenario");
  }
  if (std::fabs(scn.diffusion.dt - 1.0) > 1e-12) {
    throw ConfigError("scenario runs require a 1 s diffusion step");
  }
  const long window_samples = whole_ratio(breathing.window, scn.diffusion.dt);
  const long total_samples = whole_ratio(scn.horizon, scn.diffusion.dt);
  if (window_samples < 1 || total_samples < 1 || whole_ratio(scn.horizon, breathing.window) < 1) {
    throw ConfigError("horizon must be a whole number of breathing windows");
  }

  const EmissionEvent anchor = scn.anchor_seat();
  const double t_1 = (scn.filter.mode == FilterMode::patrol)
                         ? service_time(scn.layout.d_y, scn.filter.path.v)
                         : 0.0;
  if (scn.filter.mode == FilterMode::patrol) {
    const double idx = release_offset / t_1;
    const double snapped = std::round(idx);
    if (std::fabs(idx - snapped) > 1e-9 || snapped < 0 || snapped >= scn.filter.path.n) {
      throw ConfigError("release offset must be one of the quantum release times n*T_1");
    }
  }

  RunResult result;
  const int rows = scn.geometry.rows();
  const int cols = scn.geometry.cols();

  // Observer bookkeeping: capture cell plus clipped 3x3 neighborhood.
  std::vector<TrackedObserver> tracked;
  for (const Observer& obs : observer_positions(scn.layout, anchor.seat_row, anchor.seat_col)) {
    DosageRecord rec;
    rec.label = obs.label;
    rec.present = obs.present;
    if (obs.present) {
      rec.capture.col = capture_index(obs.x, scn.geometry.cell, cols);
      rec.capture.row = capture_index(obs.y, scn.geometry.cell, rows);
      TrackedObserver t;
      t.record_idx = result.observers.size();
      t.cells.push_back(rec.capture);
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const int rr = rec.capture.row + dr;
          const int cc = rec.capture.col + dc;
          if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) {
            rec.neighborhood_clipped = true;
            continue;
          }
          t.cells.push_back({rr, cc});
        }
      }
      t.window_partial.assign(t.cells.size(), 0.0);
      t.cumulative.assign(t.cells.size(), 0.0);
      tracked.push_back(std::move(t));
    }
    result.observers.push_back(std::move(rec));
  }

  const bool filtered = scn.filter.mode != FilterMode::none;
  const double k_f = filtered
                         ? scn.robot.sink_fraction(scn.geometry.height, scn.diffusion.dt,
                                                   &result.sink_fraction_clamped)
                         : 0.0;
  CellSet fixed_cells;
  if (scn.filter.mode == FilterMode::fixed) {
    fixed_cells = footprint_cells(scn.robot, scn.geometry, scn.filter.position.x,
                                  scn.filter.position.y);
  }

  Field base = source.at(0);
  Field removal = new_field(scn.geometry);
  Field net = new_field(scn.geometry);
  Field scratch = new_field(scn.geometry);
  double removed_cells_sum = 0.0;
  const kernels::Backend& kern = kernels::active();
  const size_t ncells = base.v.size();

  for (long step = 0; step <= total_samples; ++step) {
    const double t = step * scn.diffusion.dt;
    if (step > 0) {
      if (step <= source.t_handoff) {
        base.v = source.at(static_cast<int>(step)).v;
        base.timestamp = t;
      } else {
        step_diffuse_into(base, scratch, scn.diffusion);
      }
      if (filtered) step_diffuse_into(removal, scratch, scn.diffusion);
    }

    Field* sampled = &base;
    if (filtered) {
      result.clamp_count += static_cast<long>(
          kern.sub_clamp(net.v.data(), base.v.data(), removal.v.data(), ncells));
      net.timestamp = t;
      const double sum_b = kern.sum(base.v.data(), ncells);
      const double sum_r = kern.sum(removal.v.data(), ncells);
      const double sum_pre = kern.sum_diff(base.v.data(), removal.v.data(), ncells);
      const double resid = std::fabs(sum_b - sum_r - sum_pre);
      if (sum_b > 0) result.ledger_max_rel = std::max(result.ledger_max_rel, resid / sum_b);
      sampled = &net;

      if (scn.filter.mode == FilterMode::fixed) {
        removed_cells_sum += apply_sink_into(net, fixed_cells, k_f, removal);
      } else {
        const RobotPose pose = robot_pose(scn.filter.path, scn.layout, anchor.seat_row,
                                          anchor.seat_col, t, release_offset);
        if (pose.in_zone) {
          const CellSet cells = footprint_cells(scn.robot, scn.geometry, pose.x, pose.y);
          removed_cells_sum += apply_sink_into(net, cells, k_f, removal);
        }
      }
    }

    if (step < total_samples) {
      for (TrackedObserver& tr : tracked) {
        for (size_t i = 0; i < tr.cells.size(); ++i) {
          tr.window_partial[i] += sampled->at(tr.cells[i].row, tr.cells[i].col);
        }
      }
      if ((step + 1) % window_samples == 0) {
        for (TrackedObserver& tr : tracked) {
          for (size_t i = 0; i < tr.cells.size(); ++i) {
            tr.cumulative[i] += tr.window_partial[i] / static_cast<double>(window_samples) *
                                breathing.tidal_volume;
            tr.window_partial[i] = 0.0;
          }
          result.observers[tr.record_idx].cumulative.push_back(tr.cumulative[0]);
        }
      }
    }

    for (double want : snapshot_times) {
      if (std::fabs(want - t) < 1e-9) {
        result.snapshots.push_back(*sampled);
        break;
      }
    }
  }

  for (TrackedObserver& tr : tracked) {
    DosageRecord& rec = result.observers[tr.record_idx];
    rec.final_dose = tr.cumulative[0];
    rec.robust_dose = *std::max_element(tr.cumulative.begin(), tr.cumulative.end());
  }
  result.removed_total = removed_cells_sum * scn.geometry.cell * scn.geometry.cell * scn.geometry.height;
  return result;
}

DosageRecord accumulate_dosage(const std::vector<Field>& net_series, double x, double y,
                               const BreathingParams& breathing) {
  breathing.validate();
  if (net_series.empty()) throw ConfigError("dosage needs at least one sample field");
  const RoomGeometry& geom = net_series.front().geom;
  const long window_samples = whole_ratio(breathing.window, 1.0);
  if (window_samples < 1 || net_series.size() % static_cast<size_t>(window_samples) != 0) {
    throw ConfigError("sample count must be a whole number of breathing windows");
  }
  DosageRecord rec;
  rec.present = true;
  rec.capture.col = capture_index(x, geom.cell, geom.cols());
  rec.capture.row = capture_index(y, geom.cell, geom.rows());
  double cum = 0.0;
  double partial = 0.0;
  for (size_t i = 0; i < net_series.size(); ++i) {
    partial += net_series[i].at(rec.capture.row, rec.capture.col);
    if ((i + 1) % static_cast<size_t>(window_samples) == 0) {
      cum += partial / static_cast<double>(window_samples) * breathing.tidal_volume;
      partial = 0.0;
      rec.cumulative.push_back(cum);
    }
  }
  rec.final_dose = cum;
  rec.robust_dose = cum;
  return rec;
}

double robust_dosage(const std::vector<double>& neighborhood_doses) {
  if (neighborhood_doses.empty()) throw ConfigError("robust dosage needs at least one cell");
  return *std::max_element(neighborhood_doses.begin(), neighborhood_doses.end());
}

double efficacy(double robust_filtered, double robust_baseline) {
  if (!(robust_baseline > 0)) {
    throw std::domain_error("efficacy is undefined for a zero baseline dosage");
  }
  return 1.0 - robust_filtered / robust_baseline;
}

RiskLabel risk_label(double dose) {
  return dose < kRiskReferencePfu ? RiskLabel::below_reference : RiskLabel::above_reference;
}

const char* risk_label_name(RiskLabel label) {
  return label == RiskLabel::below_reference ? "below-reference" : "above-reference";
}

SourceSeries scenario_source_series(const Scenario& scn, const CoughSpec& cough,
                                    const VirologyParams& vir, const AirParams& air,
                                    std::uint64_t seed, int t_handoff) {
  if (scn.emissions.empty()) return zero_series(scn.geometry, t_handoff);
  SourceSeries combined;
  for (size_t i = 0; i < scn.emissions.size(); ++i) {
    const EmissionEvent& e = scn.emissions[i];
    const Point2 origin = seat_position(scn.layout, e.seat_row, e.seat_col);
    SourceSeries one = generate_source_series(cough, scn.geometry, vir, air, origin.x, origin.y,
                                              mix_seed(seed, i), t_handoff);
    if (i == 0) {
      combined = std::move(one);
    } else {
      add_series(combined, one);
    }
  }
  return combined;
}

std::string run_result_csv(const RunResult& result, const BreathingParams& breathing) {
  std::ostringstream os;
  os << "observer,window_end_s,cumulative_dose_pfu\n";
  char buf[64];
  for (const DosageRecord& rec : result.observers) {
    if (!rec.present) continue;
    for (size_t w = 0; w < rec.cumulative.size(); ++w) {
      std::snprintf(buf, sizeof(buf), "%.12g", rec.cumulative[w]);
      os << rec.label << ',' << (w + 1) * static_cast<long>(breathing.window) << ',' << buf << '\n';
    }
  }
  os << "observer,final_dose_pfu,robust_dose_pfu,risk,risk_margin_pfu\n";
  for (const DosageRecord& rec : result.observers) {
    if (!rec.present) {
      os << rec.label << ",absent,absent,absent,absent\n";
      continue;
    }
    std::snprintf(buf, sizeof(buf), "%.12g", rec.final_dose);
    os << rec.label << ',' << buf;
    std::snprintf(buf, sizeof(buf), "%.12g", rec.robust_dose);
    os << ',' << buf << ',' << risk_label_name(risk_label(rec.final_dose));
    std::snprintf(buf, sizeof(buf), "%.12g", rec.final_dose - kRiskReferencePfu);
    os << ',' << buf << '\n';
  }
  return os.str();
}

}  // namespace airsweep
