#pragma once

#include <memory>
#include <vector>

#include "raywave/vec2.hpp"

namespace raywave {

struct GaussianBump {
  double amp = 0.0;   // signed; c stays positive is validated
  double x0 = 0.0, y0 = 0.0;
  double width = 1.0;
};

// Smooth positive velocity field, constant outside a stabilization disk.
// Supplies value, gradient and Hessian (the latter feeds the variational ray
// equations).
class VelocityField {
 public:
  static VelocityField constant(double c0);
  static VelocityField gaussian_sum(double c0, std::vector<GaussianBump> bumps);
  // Row-major samples on a regular grid, bicubic (Catmull-Rom) interpolation;
  // clamped to the boundary value outside the extent.
  static VelocityField tabulated(Vec2 origin, Vec2 spacing, int nx, int ny,
                                 std::vector<double> values);

  double c(Vec2 x) const;
  Vec2 grad(Vec2 x) const;
  Mat2 hess(Vec2 x) const;

  double c_background() const { return c0_; }
  double c_min() const { return c_min_; }
  double c_max() const { return c_max_; }
  double stabilization_radius() const { return r_stab_; }

 private:
  VelocityField() = default;
  enum class Kind { constant, gaussians, tabulated } kind_ = Kind::constant;
  double c0_ = 1.0, c_min_ = 1.0, c_max_ = 1.0, r_stab_ = 0.0;
  std::vector<GaussianBump> bumps_;
  // tabulated
  Vec2 origin_{}, spacing_{};
  int nx_ = 0, ny_ = 0;
  std::vector<double> values_;
};

}  // namespace raywave
