#pragma once

#include <vector>

#include "raywave/ray_tracer.hpp"
#include "raywave/vec2.hpp"

namespace raywave {

struct Branch {
  double psi = 0.0;       // refined launch angle
  double S = 0.0;         // phase <P, x - X>
  int morse = 0;
  double xpsi_norm = 0.0;
  double c_at = 0.0;      // velocity at the front point
  Vec2 X, P;
};

struct ChartPoint {
  Vec2 x;
  double t = 0.0;
  std::vector<Branch> branches;   // regular branches only
  int dropped_focal = 0;          // branches discarded by the focal filter
  int newton_failures = 0;        // candidates dropped for non-convergence
};

// Periodic interpolation layer over one time slice of a FrontSet.  X_psi comes
// from the variational samples; X_psipsi from differentiating its interpolant.
class FrontChart {
 public:
  FrontChart(const FrontSet& front, std::size_t time_index);

  Vec2 X(double psi) const;
  Vec2 P(double psi) const;
  Vec2 Xpsi(double psi) const;
  Vec2 Xpsipsi(double psi) const;
  double c_at(double psi) const;

  const FrontSet& front() const { return *front_; }
  double t() const { return t_; }

 private:
  const FrontSet* front_;
  std::size_t it_;
  double t_;
};

// All regular branches whose front point lies within `band` of x: grid
// candidates are clustered into arcs, each local distance minimum is refined
// by Newton on <x - X(psi), X_psi(psi)> = 0 (bisection fallback), focal
// branches are filtered out.
ChartPoint locate_branches(const FrontSet& front, Vec2 x, double t,
                           double band, double focal_threshold = 1e-3);

// |X_psi(t, psi)| > threshold * c0 * t, interpolated on the angular grid.
bool is_regular(const FrontSet& front, double psi, double t,
                double threshold = 1e-3);

}  // namespace raywave
