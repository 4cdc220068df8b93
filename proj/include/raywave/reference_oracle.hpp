#pragma once

#include <functional>
#include <vector>

#include "raywave/field_assembler.hpp"
#include "raywave/sources.hpp"
#include "raywave/velocity.hpp"

namespace raywave {

// Second-order finite-difference solution of the forced wave equation
//   eta_tt - div(c^2 grad eta) = lambda^2 g0'(lambda t) V(x/mu)
// on [-half_extent, half_extent]^2 with zero Dirichlet boundary and zero
// initial data, used as the acceptance arbiter for the asymptotic fields.
struct FDConfig {
  double half_extent = 1.0;
  double h = 0.01;             // target spacing; rounded to fit the extent
  double dt = 0.0;             // 0 selects 0.4 h / max c
  double t_end = 1.0;
  const VelocityField* velocity = nullptr;

  ScaleParams scales;
  SpatialSource spatial;
  TemporalSource temporal;
  bool forced = true;  // false: homogeneous run from `initial`

  // optional initial displacement (initial velocity is always zero)
  std::function<double(Vec2)> initial;

  // kept clear of boundary reflections: the validator requires
  // 2 half_extent >= 2 (max c) t_end + comparison_radius
  double comparison_radius = 0.0;

  void validate() const;  // throws std::invalid_argument (CFL, reflections)
};

struct FDSolution {
  std::vector<FieldGrid> eta;    // component = oracle
  std::vector<FieldGrid> eta_t;  // matching time derivative snapshots
};

// Leapfrog in time, centered differences with face-sampled c^2 in space.
// Snapshot times are hit exactly by re-seeding the two-level state with a
// second-order velocity estimate at each segment boundary.
FDSolution solve_fd(const FDConfig& cfg, std::vector<double> snapshot_times);

// discrete energy (midpoint rule): 1/2 \int eta_t^2 + c^2 |grad eta|^2
double energy(const FieldGrid& eta, const FieldGrid& eta_t,
              const VelocityField& vel);

}  // namespace raywave
