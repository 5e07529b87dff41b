#pragma once

#include <utility>

#include "airsweep/grid.hpp"

namespace airsweep {

inline constexpr int kMaxSubsteps = 4096;

struct DiffusionParams {
  double k_diffuse = 0.003;  // m^2/s
  double k_decay = 0.98;     // per-second base; a dt step applies k_decay^dt
  double dt = 1.0;           // seconds

  // Minimal number of equal substeps so that k_diffuse*sub_dt/h^2 <= 0.25.
  int substeps(double cell) const;
  void validate(double cell) const;
};

// One public step of dt seconds:
//   C <- k_decay^dt * (C + k_diffuse*dt*lap C)
// run as stability-bounded substeps. Reflecting walls make the stencil
// sum-conserving, so the cell sum decays by exactly k_decay^dt per step.
Field step_diffuse(const Field& f, const DiffusionParams& p);

// Same result as step_diffuse, ping-ponging through caller scratch to avoid
// per-step allocation. scratch must have the same geometry as f.
void step_diffuse_into(Field& f, Field& scratch, const DiffusionParams& p);

// Removes the fraction k_f of each footprint cell. The returned removal
// field holds the removed amounts (zero elsewhere) and satisfies
// out + removal == in cellwise bit-exactly.
std::pair<Field, Field> apply_sink(const Field& f, const CellSet& footprint, double k_f);

// In-place variant: subtracts from f, adds the removed amounts into
// removal_accum, and returns the total removed (in field units).
double apply_sink_into(Field& f, const CellSet& footprint, double k_f, Field& removal_accum);

// Total virus mass: sum of values * cell^2 * H (PFU).
double total_virus(const Field& f);

}  // namespace airsweep
