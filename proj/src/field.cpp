#include "airsweep/field.hpp"

#include <cmath>

#include "airsweep/kernels.hpp"

namespace airsweep {

int DiffusionParams::substeps(double cell) const {
  const double ratio = k_diffuse * dt / (0.25 * cell * cell);
  int n = static_cast<int>(std::ceil(ratio - 1e-12));
  if (n < 1) n = 1;
  return n;
}

void DiffusionParams::validate(double cell) const {
  if (k_diffuse < 0) throw ConfigError("diffusivity must be >= 0");
  if (!(k_decay > 0) || k_decay > 1) throw ConfigError("decay base must lie in (0, 1]");
  if (!(dt > 0)) throw ConfigError("diffusion step dt must be > 0");
  if (substeps(cell) > kMaxSubsteps) {
    throw ConfigError("diffusion is unstable at this cell size: would need more than " +
                      std::to_string(kMaxSubsteps) + " substeps");
  }
}

void step_diffuse_into(Field& f, Field& scratch, const DiffusionParams& p) {
  p.validate(f.geom.cell);
  const int n = p.substeps(f.geom.cell);
  const double sub_dt = p.dt / n;
  const double alpha = p.k_diffuse * sub_dt / (f.geom.cell * f.geom.cell);
  const double decay = std::pow(p.k_decay, sub_dt);
  const int rows = f.geom.rows();
  const int cols = f.geom.cols();
  const kernels::Backend& k = kernels::active();
  for (int s = 0; s < n; ++s) {
    k.diffuse(scratch.v.data(), f.v.data(), rows, cols, alpha, decay);
    f.v.swap(scratch.v);
  }
  f.timestamp += p.dt;
}

Field step_diffuse(const Field& f, const DiffusionParams& p) {
  Field out = f;
  Field scratch = f;
  step_diffuse_into(out, scratch, p);
  return out;
}

double apply_sink_into(Field& f, const CellSet& footprint, double k_f, Field& removal_accum) {
  if (!(k_f >= 0.0) || k_f > 1.0) throw ConfigError("sink fraction must lie in [0, 1]");
  const int rows = f.geom.rows();
  const int cols = f.geom.cols();
  double removed_sum = 0.0;
  for (const CellRef& c : footprint) {
    if (c.row < 0 || c.row >= rows || c.col < 0 || c.col >= cols) {
      throw std::out_of_range("sink footprint cell outside the grid");
    }
    double& v = f.at(c.row, c.col);
    const double after = v - k_f * v;
    // Store the round-trip difference so that after + removed == v exactly.
    const double removed = v - after;
    v = after;
    removal_accum.at(c.row, c.col) += removed;
    removed_sum += removed;
  }
  return removed_sum;
}

std::pair<Field, Field> apply_sink(const Field& f, const CellSet& footprint, double k_f) {
  Field out = f;
  Field removal = new_field(f.geom);
  removal.timestamp = f.timestamp;
  apply_sink_into(out, footprint, k_f, removal);
  return {std::move(out), std::move(removal)};
}

double total_virus(const Field& f) {
  const double cell_volume = f.geom.cell * f.geom.cell * f.geom.height;
  return kernels::active().sum(f.v.data(), f.v.size()) * cell_volume;
}

}  // namespace airsweep
