#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "airsweep/config.hpp"
#include "airsweep/io.hpp"
#include "airsweep/optimize.hpp"
#include "airsweep/util.hpp"

namespace fs = std::filesystem;

namespace {

using namespace airsweep;

const char* mode_name(FilterMode m) {
  switch (m) {
    case FilterMode::none: return "none";
    case FilterMode::fixed: return "fixed";
    case FilterMode::patrol: return "patrol";
  }
  return "?";
}

// Net/source field at time t: copied from the per-second series while it
// covers t, diffused forward from the handoff field afterwards.
Field field_at(const SourceSeries& src, double t, const DiffusionParams& dp) {
  const long sec = std::lround(t);
  if (sec <= src.t_handoff && std::fabs(t - sec) < 1e-9) {
    return src.at(static_cast<int>(sec));
  }
  Field f = src.at(src.t_handoff);
  Field scratch = new_field(f.geom);
  while (f.timestamp < t - 1e-9) step_diffuse_into(f, scratch, dp);
  return f;
}

std::string observer_block(const RunResult& run) {
  std::ostringstream os;
  for (const DosageRecord& rec : run.observers) {
    if (!rec.present) {
      os << "observer." << rec.label << " = absent\n";
      continue;
    }
    os << "observer." << rec.label << " = final " << g12(rec.final_dose) << " pfu, robust "
       << g12(rec.robust_dose) << " pfu, " << risk_label_name(risk_label(rec.final_dose)) << '\n';
  }
  return os.str();
}

int cmd_simulate(const SimSetup& setup, const fs::path& out, std::uint64_t seed, int /*jobs*/,
                 const std::vector<double>& snapshot_times) {
  const Scenario& scn = setup.scenario;
  const SourceSeries src =
      scenario_source_series(scn, setup.cough, setup.virology, setup.air, seed, setup.t_handoff);

  std::vector<double> wanted;
  for (double t : snapshot_times) {
    if (t <= scn.horizon + 1e-9) wanted.push_back(t);
  }
  std::vector<double> requested = wanted;
  bool horizon_requested = false;
  for (double t : wanted) horizon_requested |= std::fabs(t - scn.horizon) < 1e-9;
  if (!horizon_requested) requested.push_back(scn.horizon);

  const double offset = scn.filter.mode == FilterMode::patrol ? setup.release_offset : 0.0;
  const RunResult run = run_scenario(scn, src, offset, setup.breathing, requested);

  fs::create_directories(out);
  write_text_file((out / "dosage.csv").string(), run_result_csv(run, setup.breathing));

  std::ostringstream sum;
  sum << "command = simulate\n";
  sum << "mode = " << mode_name(scn.filter.mode) << '\n';
  if (scn.filter.mode == FilterMode::patrol) {
    sum << "v_mps = " << g12(scn.filter.path.v) << '\n';
    sum << "r_m = " << g12(scn.filter.path.r) << '\n';
    sum << "n = " << scn.filter.path.n << '\n';
    sum << "release_offset_s = " << g12(offset) << '\n';
  }
  if (scn.filter.mode == FilterMode::fixed) {
    sum << "filter_x_m = " << g12(scn.filter.position.x) << '\n';
    sum << "filter_y_m = " << g12(scn.filter.position.y) << '\n';
  }
  sum << "horizon_s = " << g12(scn.horizon) << '\n';
  sum << "seed = " << seed << '\n';
  sum << "removed_total_pfu = " << g12(run.removed_total) << '\n';
  sum << "clamp_count = " << run.clamp_count << '\n';
  sum << "ledger_max_rel = " << g12(run.ledger_max_rel) << '\n';
  sum << "sink_fraction_clamped = " << (run.sink_fraction_clamped ? 1 : 0) << '\n';
  for (const Field& f : run.snapshots) {
    sum << "total_virus_t" << g12(f.timestamp) << "_pfu = " << g12(total_virus(f)) << '\n';
  }
  sum << observer_block(run);
  write_text_file((out / "summary.txt").string(), sum.str());

  for (const Field& f : run.snapshots) {
    bool user_asked = false;
    for (double t : wanted) user_asked |= std::fabs(t - f.timestamp) < 1e-9;
    if (!user_asked) continue;
    write_heatmap((out / ("net_t" + g12(f.timestamp) + ".pgm")).string(), f);
  }
  return 0;
}

int cmd_plume(const SimSetup& setup, const fs::path& out, std::uint64_t seed) {
  const Scenario& scn = setup.scenario;
  const SourceSeries src =
      scenario_source_series(scn, setup.cough, setup.virology, setup.air, seed, setup.t_handoff);

  const EmissionEvent anchor = scn.anchor_seat();
  const Point2 spos = seat_position(scn.layout, anchor.seat_row, anchor.seat_col);
  const Field f1 = field_at(src, 1.0, scn.diffusion);
  const Field f60 = field_at(src, 60.0, scn.diffusion);
  const Field f300 = field_at(src, 300.0, scn.diffusion);

  fs::create_directories(out);
  save_series(src, (out / "source.bin").string());
  write_heatmap((out / "plume_t1.pgm").string(), f1);
  write_heatmap((out / "plume_t300.pgm").string(), f300);

  std::ostringstream sum;
  sum << "command = plume\n";
  sum << "seed = " << seed << '\n';
  sum << "cache = source.bin\n";
  sum << "handoff_s = " << src.t_handoff << '\n';
  sum << "source_x_m = " << g12(spos.x) << '\n';
  sum << "source_y_m = " << g12(spos.y) << '\n';
  sum << "total_virus_t0_pfu = " << g12(total_virus(src.at(0))) << '\n';
  sum << "total_virus_t1_pfu = " << g12(total_virus(f1)) << '\n';
  sum << "total_virus_t60_pfu = " << g12(total_virus(f60)) << '\n';
  sum << "total_virus_t300_pfu = " << g12(total_virus(f300)) << '\n';
  sum << "extent90_t1_m = " << g12(spread_extent(f1, spos.x, spos.y)) << '\n';
  sum << "extent90_t60_m = " << g12(spread_extent(f60, spos.x, spos.y)) << '\n';
  sum << "extent90_t300_m = " << g12(spread_extent(f300, spos.x, spos.y)) << '\n';
  write_text_file((out / "summary.txt").string(), sum.str());
  return 0;
}

int cmd_optimize(const SimSetup& setup, const fs::path& out, std::uint64_t seed, int jobs) {
  const Scenario& scn = setup.scenario;
  const SourceSeries src =
      scenario_source_series(scn, setup.cough, setup.virology, setup.air, seed, setup.t_handoff);
  const SearchBounds bounds = setup.bounds();
  const RefineSettings refine{setup.optimize.tolerance, setup.optimize.budget};

  struct PerN {
    int n = 0;
    OptimizationResult res;
    std::vector<ObjectiveSample> slice_v;
    std::vector<ObjectiveSample> slice_r;
    std::vector<std::string> violations;
  };
  std::vector<PerN> blocks;
  for (int n : setup.optimize.n_list) {
    PerN b;
    b.n = n;
    b.res = optimize_path(n, bounds, scn, src, setup.breathing, setup.optimize.grid_v,
                          setup.optimize.grid_r, jobs, refine);
    b.slice_v.resize(setup.optimize.slice_v.size());
    parallel_for(b.slice_v.size(), jobs, [&](size_t i) {
      b.slice_v[i] = evaluate_objective(setup.optimize.slice_v[i], setup.optimize.slice_r_fixed, n,
                                        scn, src, setup.breathing, bounds, 1);
    });
    b.slice_r.resize(setup.optimize.slice_r.size());
    parallel_for(b.slice_r.size(), jobs, [&](size_t i) {
      b.slice_r[i] = evaluate_objective(setup.optimize.slice_v_fixed, setup.optimize.slice_r[i], n,
                                        scn, src, setup.breathing, bounds, 1);
    });
    b.violations = trend_violations(b.res, setup.optimize.grid_v, setup.optimize.grid_r);
    blocks.push_back(std::move(b));
  }

  fs::create_directories(out);
  std::ostringstream sum;
  sum << "command = optimize\n";
  sum << "seed = " << seed << '\n';
  for (const PerN& b : blocks) {
    const std::string tag = "N" + std::to_string(b.n);
    write_text_file((out / ("grid_" + tag + ".csv")).string(), objective_table_csv(b.res.table));
    write_text_file((out / ("slice_speed_" + tag + ".csv")).string(),
                    objective_table_csv(b.slice_v));
    write_text_file((out / ("slice_distance_" + tag + ".csv")).string(),
                    objective_table_csv(b.slice_r));
    sum << '\n' << optimization_summary(b.res, b.n);
    if (b.violations.empty()) {
      sum << "grid_trend = ok\n";
    } else {
      for (const std::string& v : b.violations) sum << "grid_trend_violation = " << v << '\n';
    }
  }
  sum << "\nvalue_star_by_n =";
  for (const PerN& b : blocks) sum << ' ' << g12(b.res.value_star);
  sum << '\n';
  bool n_trend_ok = true;
  for (size_t i = 1; i < blocks.size(); ++i) {
    if (blocks[i].res.value_star < blocks[i - 1].res.value_star * 0.98) n_trend_ok = false;
  }
  sum << "n_trend = " << (n_trend_ok ? "ok" : "violated") << '\n';
  write_text_file((out / "optimize_summary.txt").string(), sum.str());
  return 0;
}

int cmd_compare(const SimSetup& setup, const fs::path& out, std::uint64_t seed, int jobs) {
  const Scenario& base = setup.scenario;
  const SourceSeries src =
      scenario_source_series(base, setup.cough, setup.virology, setup.air, seed, setup.t_handoff);
  const EmissionEvent anchor = base.anchor_seat();
  const StaticPlacements sp =
      static_placements(base.layout, base.geometry, anchor.seat_row, anchor.seat_col);

  struct Case {
    std::string name;
    Scenario scn;
    double offset = 0.0;
  };
  std::vector<Case> cases;
  for (int n : setup.optimize.n_list) {
    Case c;
    c.name = "mobile_N" + std::to_string(n);
    c.scn = base;
    c.scn.filter.mode = FilterMode::patrol;
    c.scn.filter.path.n = n;
    c.offset = (n - 1) * service_time(base.layout.d_y, c.scn.filter.path.v);
    cases.push_back(std::move(c));
  }
  for (const auto& [name, pos] : {std::pair<const char*, Point2>{"near_static", sp.near},
                                  std::pair<const char*, Point2>{"far_static", sp.far}}) {
    Case c;
    c.name = name;
    c.scn = base;
    c.scn.filter.mode = FilterMode::fixed;
    c.scn.filter.position = pos;
    cases.push_back(std::move(c));
  }
  {
    Case c;
    c.name = "no_filter";
    c.scn = base;
    c.scn.filter.mode = FilterMode::none;
    cases.push_back(std::move(c));
  }
  for (const Case& c : cases) c.scn.validate();

  std::vector<RunResult> runs(cases.size());
  parallel_for(cases.size(), jobs, [&](size_t i) {
    runs[i] = run_scenario(cases[i].scn, src, cases[i].offset, setup.breathing);
  });

  double normalizer = 0.0;
  for (const RunResult& run : runs) {
    for (const DosageRecord& rec : run.observers) {
      if (rec.present) normalizer = std::max(normalizer, rec.robust_dose);
    }
  }

  const auto table_csv = [&](bool normalized) {
    std::ostringstream os;
    os << "observer";
    for (const Case& c : cases) os << ',' << c.name;
    os << '\n';
    const size_t n_obs = runs.front().observers.size();
    for (size_t oi = 0; oi < n_obs; ++oi) {
      os << runs.front().observers[oi].label;
      for (size_t ci = 0; ci < cases.size(); ++ci) {
        const DosageRecord& rec = runs[ci].observers[oi];
        if (!rec.present) {
          os << ",absent";
        } else if (normalized) {
          os << ',' << g12(normalizer > 0 ? rec.robust_dose / normalizer : 0.0);
        } else {
          os << ',' << g12(rec.robust_dose);
        }
      }
      os << '\n';
    }
    return os.str();
  };

  fs::create_directories(out);
  write_text_file((out / "compare.csv").string(), table_csv(true));
  write_text_file((out / "compare_raw.csv").string(), table_csv(false));

  std::ostringstream sum;
  sum << "command = compare\n";
  sum << "seed = " << seed << '\n';
  sum << "normalizer_pfu = " << g12(normalizer) << '\n';
  for (size_t ci = 0; ci < cases.size(); ++ci) {
    const Case& c = cases[ci];
    sum << "case." << c.name << " = mode " << mode_name(c.scn.filter.mode) << ", offset "
        << g12(c.offset) << " s, removed " << g12(runs[ci].removed_total) << " pfu\n";
  }
  write_text_file((out / "summary.txt").string(), sum.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classroom airborne-virus transport with a patrolling filter robot"};
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 12345;
  int jobs = 1;
  std::vector<double> snapshots{1.0, 60.0, 300.0};
  app.add_option("--config", config_path, "scenario config file (key = value lines)");
  app.add_option("--out", out_dir, "output directory (created on success)");
  app.add_option("--seed", seed, "droplet sampling seed");
  app.add_option("--jobs", jobs, "worker thread cap for independent runs");
  app.add_option("--snapshot", snapshots, "heatmap snapshot times in seconds")->delimiter(',');

  CLI::App* sim = app.add_subcommand("simulate", "run one scenario, write dosage CSV and heatmaps");
  CLI::App* opt = app.add_subcommand("optimize", "search (v, r) per configured N, write tables");
  CLI::App* cmp = app.add_subcommand("compare", "mobile vs static vs none comparison table");
  CLI::App* plm = app.add_subcommand("plume", "generate and cache the cough source series");
  for (CLI::App* sub : {sim, opt, cmp, plm}) sub->fallthrough();
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    SimSetup setup;
    if (!config_path.empty()) setup = load_config_file(config_path);
    setup.validate();
    if (jobs < 1) throw airsweep::ConfigError("--jobs must be at least 1");
    for (double t : snapshots) {
      if (t < 0) throw airsweep::ConfigError("--snapshot times must be >= 0");
    }
    const fs::path out(out_dir);
    if (sim->parsed()) return cmd_simulate(setup, out, seed, jobs, snapshots);
    if (opt->parsed()) return cmd_optimize(setup, out, seed, jobs);
    if (cmp->parsed()) return cmd_compare(setup, out, seed, jobs);
    if (plm->parsed()) return cmd_plume(setup, out, seed);
    return 2;
  } catch (const airsweep::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
