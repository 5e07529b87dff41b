#include "airsweep/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "airsweep/util.hpp"

namespace airsweep {

void SearchBounds::validate() const {
  if (!(v_lo >= 0) || !(v_hi > v_lo) || !(r_lo >= 0) || !(r_hi > r_lo)) {
    throw ConfigError("search bounds must satisfy 0 <= lo < hi on both axes");
  }
}

bool SearchBounds::contains(double v, double r) const {
  return v > v_lo && v < v_hi && r > r_lo && r < r_hi;
}

ObjectiveSample evaluate_objective(double v, double r, int n, const Scenario& templ,
                                   const SourceSeries& source, const BreathingParams& breathing,
                                   const SearchBounds& bounds, int jobs) {
  bounds.validate();
  if (!bounds.contains(v, r)) {
    throw ConfigError("candidate (v, r) lies outside the open search bounds");
  }
  Scenario scn = templ;
  scn.filter.mode = FilterMode::patrol;
  scn.filter.path.v = v;
  scn.filter.path.r = r;
  scn.filter.path.n = n;

  const double t_1 = service_time(scn.layout.d_y, v);
  const std::vector<double> offsets = release_offsets(n, t_1);
  std::vector<ObjectiveSample> per(offsets.size());
  parallel_for(offsets.size(), jobs, [&](size_t i) {
    const RunResult run = run_scenario(scn, source, offsets[i], breathing);
    ObjectiveSample s;
    s.v = v;
    s.r = r;
    s.worst_t_c = offsets[i];
    s.value = -1.0;
    for (const DosageRecord& rec : run.observers) {
      if (!rec.present) continue;
      if (rec.robust_dose > s.value) {
        s.value = rec.robust_dose;
        s.worst_observer = rec.label;
      }
    }
    per[i] = std::move(s);
  });

  ObjectiveSample best = per.front();
  for (size_t i = 1; i < per.size(); ++i) {
    if (per[i].value > best.value) best = per[i];
  }
  if (best.value < 0) throw ConfigError("objective needs at least one present observer");
  return best;
}

ObjectiveFn scenario_objective(const Scenario& templ, const SourceSeries& source,
                               const BreathingParams& breathing, int n, const SearchBounds& bounds,
                               int jobs) {
  return [&templ, &source, &breathing, n, bounds, jobs](double v, double r) {
    return evaluate_objective(v, r, n, templ, source, breathing, bounds, jobs);
  };
}

std::vector<double> grid_axis(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<size_t>(n));
  if (n == 1) {
    xs[0] = 0.5 * (lo + hi);
    return xs;
  }
  const double margin = 0.01 * (hi - lo);
  const double a = lo + margin;
  const double b = hi - margin;
  for (int i = 0; i < n; ++i) {
    xs[static_cast<size_t>(i)] = a + (b - a) * i / (n - 1);
  }
  return xs;
}

OptimizationResult grid_search(const ObjectiveFn& objective, const SearchBounds& bounds, int n_v,
                               int n_r, int jobs) {
  bounds.validate();
  if (n_v < 1 || n_r < 1) throw ConfigError("grid resolution must be at least 1x1");
  const std::vector<double> vs = grid_axis(bounds.v_lo, bounds.v_hi, n_v);
  const std::vector<double> rs = grid_axis(bounds.r_lo, bounds.r_hi, n_r);

  OptimizationResult res;
  res.table.resize(static_cast<size_t>(n_v) * static_cast<size_t>(n_r));
  parallel_for(res.table.size(), jobs, [&](size_t k) {
    const size_t iv = k / static_cast<size_t>(n_r);
    const size_t ir = k % static_cast<size_t>(n_r);
    res.table[k] = objective(vs[iv], rs[ir]);
  });
  res.evaluations = static_cast<long>(res.table.size());

  // Ascending (v, r) scan with a strict comparison keeps the smallest v, then
  // the smallest r, among tied minima.
  const ObjectiveSample* best = &res.table.front();
  for (const ObjectiveSample& s : res.table) {
    if (s.value < best->value) best = &s;
  }
  res.v_star = best->v;
  res.r_star = best->r;
  res.value_star = best->value;
  return res;
}

OptimizationResult grid_search(int n, const SearchBounds& bounds, int n_v, int n_r,
                               const Scenario& templ, const SourceSeries& source,
                               const BreathingParams& breathing, int jobs) {
  const ObjectiveFn fn = scenario_objective(templ, source, breathing, n, bounds, 1);
  return grid_search(fn, bounds, n_v, n_r, jobs);
}

namespace {

struct SimplexVertex {
  double zv = 0.0;
  double zr = 0.0;
  ObjectiveSample s;
};

double project01(double z) { return std::min(0.99, std::max(0.01, z)); }

double simplex_diameter(const std::array<SimplexVertex, 3>& sx) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      d = std::max(d, std::hypot(sx[i].zv - sx[j].zv, sx[i].zr - sx[j].zr));
    }
  }
  return d;
}

bool vertex_less(const SimplexVertex& a, const SimplexVertex& b) {
  if (a.s.value != b.s.value) return a.s.value < b.s.value;
  if (a.zv != b.zv) return a.zv < b.zv;
  return a.zr < b.zr;
}

}  // namespace

OptimizationResult refine_local(const ObjectiveFn& objective, double v0, double r0,
                                const SearchBounds& bounds, const RefineSettings& settings) {
  bounds.validate();
  if (!bounds.contains(v0, r0)) throw ConfigError("refine start lies outside the open bounds");
  if (!(settings.tolerance > 0)) throw ConfigError("refine tolerance must be > 0");
  if (settings.max_evals < 1) throw ConfigError("refine budget must allow at least one evaluation");

  const double v_span = bounds.v_hi - bounds.v_lo;
  const double r_span = bounds.r_hi - bounds.r_lo;
  const auto to_v = [&](double zv) { return bounds.v_lo + zv * v_span; };
  const auto to_r = [&](double zr) { return bounds.r_lo + zr * r_span; };

  OptimizationResult res;
  ObjectiveSample best;
  bool have_best = false;
  const auto eval = [&](double zv, double zr) {
    ObjectiveSample s = objective(to_v(zv), to_r(zr));
    ++res.evaluations;
    res.table.push_back(s);
    if (!have_best || s.value < best.value) {
      best = s;
      have_best = true;
    }
    return s;
  };
  const auto out_of_budget = [&] { return res.evaluations >= settings.max_evals; };

  // The start is scored as-is; the simplex is built from its projection.
  SimplexVertex start;
  start.zv = (v0 - bounds.v_lo) / v_span;
  start.zr = (r0 - bounds.r_lo) / r_span;
  start.s = eval(start.zv, start.zr);

  const double z0v = project01(start.zv);
  const double z0r = project01(start.zr);
  const double step_v = (z0v + 0.05 <= 0.99) ? 0.05 : -0.05;
  const double step_r = (z0r + 0.05 <= 0.99) ? 0.05 : -0.05;
  std::array<SimplexVertex, 3> sx;
  sx[0].zv = z0v;
  sx[0].zr = z0r;
  sx[1].zv = z0v + step_v;
  sx[1].zr = z0r;
  sx[2].zv = z0v;
  sx[2].zr = z0r + step_r;

  const auto finish = [&] {
    res.v_star = best.v;
    res.r_star = best.r;
    res.value_star = best.value;
    return res;
  };

  if (settings.tolerance >= simplex_diameter(sx)) return finish();
  sx[0].s = (z0v == start.zv && z0r == start.zr) ? start.s : eval(sx[0].zv, sx[0].zr);
  for (int i = 1; i < 3; ++i) {
    if (out_of_budget()) {
      res.budget_exhausted = true;
      return finish();
    }
    sx[i].s = eval(sx[i].zv, sx[i].zr);
  }

  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  while (true) {
    std::sort(sx.begin(), sx.end(), vertex_less);
    if (simplex_diameter(sx) < settings.tolerance) break;
    if (out_of_budget()) {
      res.budget_exhausted = true;
      break;
    }

    const double cv = 0.5 * (sx[0].zv + sx[1].zv);
    const double cr = 0.5 * (sx[0].zr + sx[1].zr);
    const double rv = project01(cv + kReflect * (cv - sx[2].zv));
    const double rr = project01(cr + kReflect * (cr - sx[2].zr));
    const ObjectiveSample refl = eval(rv, rr);

    if (refl.value < sx[0].s.value) {
      if (out_of_budget()) {
        sx[2] = {rv, rr, refl};
        res.budget_exhausted = true;
        break;
      }
      const double xv = project01(cv + kExpand * (rv - cv));
      const double xr = project01(cr + kExpand * (rr - cr));
      const ObjectiveSample expd = eval(xv, xr);
      sx[2] = (expd.value < refl.value) ? SimplexVertex{xv, xr, expd} : SimplexVertex{rv, rr, refl};
      continue;
    }
    if (refl.value < sx[1].s.value) {
      sx[2] = {rv, rr, refl};
      continue;
    }

    const bool outside = refl.value < sx[2].s.value;
    const double tv = outside ? rv : sx[2].zv;
    const double tr = outside ? rr : sx[2].zr;
    if (out_of_budget()) {
      if (outside) sx[2] = {rv, rr, refl};
      res.budget_exhausted = true;
      break;
    }
    const double qv = project01(cv + kContract * (tv - cv));
    const double qr = project01(cr + kContract * (tr - cr));
    const ObjectiveSample cont = eval(qv, qr);
    const double gate = outside ? refl.value : sx[2].s.value;
    if (cont.value <= gate) {
      sx[2] = {qv, qr, cont};
      continue;
    }

    bool stopped = false;
    for (int i = 1; i < 3; ++i) {
      if (out_of_budget()) {
        res.budget_exhausted = true;
        stopped = true;
        break;
      }
      sx[i].zv = project01(sx[0].zv + kShrink * (sx[i].zv - sx[0].zv));
      sx[i].zr = project01(sx[0].zr + kShrink * (sx[i].zr - sx[0].zr));
      sx[i].s = eval(sx[i].zv, sx[i].zr);
    }
    if (stopped) break;
  }
  return finish();
}

OptimizationResult refine_local(double v0, double r0, const SearchBounds& bounds,
                                const Scenario& templ, const SourceSeries& source,
                                const BreathingParams& breathing, int n,
                                const RefineSettings& settings, int jobs) {
  const ObjectiveFn fn = scenario_objective(templ, source, breathing, n, bounds, jobs);
  return refine_local(fn, v0, r0, bounds, settings);
}

OptimizationResult optimize_path(int n, const SearchBounds& bounds, const Scenario& templ,
                                 const SourceSeries& source, const BreathingParams& breathing,
                                 int n_v, int n_r, int jobs, const RefineSettings& settings) {
  OptimizationResult grid = grid_search(n, bounds, n_v, n_r, templ, source, breathing, jobs);
  OptimizationResult fine =
      refine_local(grid.v_star, grid.r_star, bounds, templ, source, breathing, n, settings, jobs);

  OptimizationResult res;
  res.v_star = fine.v_star;
  res.r_star = fine.r_star;
  res.value_star = fine.value_star;
  res.table = std::move(grid.table);
  res.evaluations = grid.evaluations + fine.evaluations;
  res.budget_exhausted = fine.budget_exhausted;

  Scenario baseline = templ;
  baseline.filter.mode = FilterMode::none;
  const RunResult run = run_scenario(baseline, source, 0.0, breathing);
  double worst = 0.0;
  for (const DosageRecord& rec : run.observers) {
    if (rec.present) worst = std::max(worst, rec.robust_dose);
  }
  res.efficacy_star = efficacy(res.value_star, worst);
  return res;
}

std::vector<std::string> trend_violations(const OptimizationResult& grid, int n_v, int n_r,
                                          double rel_slack) {
  std::vector<std::string> out;
  if (grid.table.size() != static_cast<size_t>(n_v) * static_cast<size_t>(n_r)) {
    throw ConfigError("trend report needs the full grid table");
  }
  const auto cell = [&](int iv, int ir) -> const ObjectiveSample& {
    return grid.table[static_cast<size_t>(iv) * static_cast<size_t>(n_r) +
                      static_cast<size_t>(ir)];
  };
  char buf[160];
  for (int ir = 0; ir < n_r; ++ir) {
    for (int iv = 0; iv + 1 < n_v; ++iv) {
      const ObjectiveSample& a = cell(iv, ir);
      const ObjectiveSample& b = cell(iv + 1, ir);
      if (b.value > a.value * (1.0 + rel_slack)) {
        std::snprintf(buf, sizeof(buf),
                      "objective rises with v at r=%.6g: f(%.6g)=%.6g -> f(%.6g)=%.6g", a.r, a.v,
                      a.value, b.v, b.value);
        out.emplace_back(buf);
      }
    }
  }
  for (int iv = 0; iv < n_v; ++iv) {
    for (int ir = 0; ir + 1 < n_r; ++ir) {
      const ObjectiveSample& a = cell(iv, ir);
      const ObjectiveSample& b = cell(iv, ir + 1);
      if (b.value > a.value * (1.0 + rel_slack)) {
        std::snprintf(buf, sizeof(buf),
                      "objective rises with r at v=%.6g: f(%.6g)=%.6g -> f(%.6g)=%.6g", a.v, a.r,
                      a.value, b.r, b.value);
        out.emplace_back(buf);
      }
    }
  }
  return out;
}

std::string objective_table_csv(const std::vector<ObjectiveSample>& table) {
  std::ostringstream os;
  os << "v_mps,r_m,worst_T_C_s,worst_observer,robust_dose_pfu\n";
  char buf[64];
  for (const ObjectiveSample& s : table) {
    std::snprintf(buf, sizeof(buf), "%.12g", s.v);
    os << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.12g", s.r);
    os << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.12g", s.worst_t_c);
    os << buf << ',' << s.worst_observer << ',';
    std::snprintf(buf, sizeof(buf), "%.12g", s.value);
    os << buf << '\n';
  }
  return os.str();
}

std::string optimization_summary(const OptimizationResult& result, int n) {
  std::ostringstream os;
  char buf[64];
  os << "N = " << n << '\n';
  std::snprintf(buf, sizeof(buf), "%.12g", result.v_star);
  os << "v_star_mps = " << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.12g", result.r_star);
  os << "r_star_m = " << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.12g", result.value_star);
  os << "value_star_pfu = " << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.12g", result.efficacy_star);
  os << "efficacy_star = " << buf << '\n';
  os << "evaluations = " << result.evaluations << '\n';
  os << "budget_exhausted = " << (result.budget_exhausted ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace airsweep
