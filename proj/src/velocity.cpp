#include "raywave/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace raywave {

namespace {

// Catmull-Rom cubic through p[0..3] at parameter u in [0,1] between p[1],p[2];
// also returns d/du and d2/du2.
struct CubicEval {
  double v, d1, d2;
};

CubicEval cubic(const double p[4], double u) {
  const double c0 = 2.0 * p[1];
  const double c1 = -p[0] + p[2];
  const double c2 = 2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3];
  const double c3 = -p[0] + 3.0 * p[1] - 3.0 * p[2] + p[3];
  CubicEval e;
  e.v = 0.5 * (c0 + u * (c1 + u * (c2 + u * c3)));
  e.d1 = 0.5 * (c1 + u * (2.0 * c2 + 3.0 * u * c3));
  e.d2 = 0.5 * (2.0 * c2 + 6.0 * u * c3);
  return e;
}

}  // namespace

VelocityField VelocityField::constant(double c0) {
  if (!(c0 > 0.0))
    throw std::invalid_argument("velocity: c0 must be positive");
  VelocityField v;
  v.kind_ = Kind::constant;
  v.c0_ = v.c_min_ = v.c_max_ = c0;
  v.r_stab_ = 0.0;
  return v;
}

VelocityField VelocityField::gaussian_sum(double c0,
                                          std::vector<GaussianBump> bumps) {
  if (!(c0 > 0.0))
    throw std::invalid_argument("velocity: c0 must be positive");
  VelocityField v;
  v.kind_ = Kind::gaussians;
  v.c0_ = c0;
  double lo = c0, hi = c0, r = 0.0;
  for (const auto& b : bumps) {
    if (!(b.width > 0.0))
      throw std::invalid_argument("velocity: bump width must be positive");
    lo += std::min(0.0, b.amp);  // conservative positivity bound
    hi += std::max(0.0, b.amp);
    r = std::max(r, std::hypot(b.x0, b.y0) + 6.5 * b.width);
  }
  if (!(lo > 0.0))
    throw std::invalid_argument(
        "velocity: bump depths admit c <= 0 somewhere");
  v.c_min_ = lo;
  v.c_max_ = hi;
  v.r_stab_ = r;
  v.bumps_ = std::move(bumps);
  return v;
}

VelocityField VelocityField::tabulated(Vec2 origin, Vec2 spacing, int nx,
                                       int ny, std::vector<double> values) {
  if (nx < 4 || ny < 4 ||
      values.size() != static_cast<std::size_t>(nx) * ny)
    throw std::invalid_argument("velocity: tabulated grid must be >= 4x4");
  if (!(spacing.x > 0.0) || !(spacing.y > 0.0))
    throw std::invalid_argument("velocity: spacing must be positive");
  VelocityField v;
  v.kind_ = Kind::tabulated;
  v.origin_ = origin;
  v.spacing_ = spacing;
  v.nx_ = nx;
  v.ny_ = ny;
  double lo = values[0], hi = values[0];
  for (double x : values) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (!(lo > 0.0))
    throw std::invalid_argument("velocity: tabulated values must be positive");
  v.c_min_ = lo;
  v.c_max_ = hi;
  v.c0_ = values[0];
  v.r_stab_ = std::hypot(std::abs(origin.x) + nx * spacing.x,
                         std::abs(origin.y) + ny * spacing.y);
  v.values_ = std::move(values);
  return v;
}

double VelocityField::c(Vec2 x) const {
  switch (kind_) {
    case Kind::constant:
      return c0_;
    case Kind::gaussians: {
      double v = c0_;
      for (const auto& b : bumps_) {
        const double dx = x.x - b.x0, dy = x.y - b.y0;
        v += b.amp * std::exp(-(dx * dx + dy * dy) / (b.width * b.width));
      }
      return v;
    }
    case Kind::tabulated: {
      double sx = (x.x - origin_.x) / spacing_.x;
      double sy = (x.y - origin_.y) / spacing_.y;
      sx = std::clamp(sx, 0.0, static_cast<double>(nx_ - 1));
      sy = std::clamp(sy, 0.0, static_cast<double>(ny_ - 1));
      const int ix = std::min(static_cast<int>(sx), nx_ - 2);
      const int iy = std::min(static_cast<int>(sy), ny_ - 2);
      const double ux = sx - ix, uy = sy - iy;
      double col[4];
      for (int j = 0; j < 4; ++j) {
        const int jy = std::clamp(iy - 1 + j, 0, ny_ - 1);
        double row[4];
        for (int i = 0; i < 4; ++i) {
          const int jx = std::clamp(ix - 1 + i, 0, nx_ - 1);
          row[i] = values_[static_cast<std::size_t>(jy) * nx_ + jx];
        }
        col[j] = cubic(row, ux).v;
      }
      return cubic(col, uy).v;
    }
  }
  return c0_;
}

Vec2 VelocityField::grad(Vec2 x) const {
  switch (kind_) {
    case Kind::constant:
      return {0.0, 0.0};
    case Kind::gaussians: {
      Vec2 g{0.0, 0.0};
      for (const auto& b : bumps_) {
        const double w2 = b.width * b.width;
        const double dx = x.x - b.x0, dy = x.y - b.y0;
        const double f =
            b.amp * std::exp(-(dx * dx + dy * dy) / w2) * (-2.0 / w2);
        g.x += f * dx;
        g.y += f * dy;
      }
      return g;
    }
    case Kind::tabulated: {
      double sx = (x.x - origin_.x) / spacing_.x;
      double sy = (x.y - origin_.y) / spacing_.y;
      if (sx < 0.0 || sx > nx_ - 1 || sy < 0.0 || sy > ny_ - 1) {
        // clamped outside the table: treat as locally constant
        return {0.0, 0.0};
      }
      const int ix = std::min(static_cast<int>(sx), nx_ - 2);
      const int iy = std::min(static_cast<int>(sy), ny_ - 2);
      const double ux = sx - ix, uy = sy - iy;
      double v[4], vx[4];
      for (int j = 0; j < 4; ++j) {
        const int jy = std::clamp(iy - 1 + j, 0, ny_ - 1);
        double row[4];
        for (int i = 0; i < 4; ++i) {
          const int jx = std::clamp(ix - 1 + i, 0, nx_ - 1);
          row[i] = values_[static_cast<std::size_t>(jy) * nx_ + jx];
        }
        const CubicEval e = cubic(row, ux);
        v[j] = e.v;
        vx[j] = e.d1;
      }
      return {cubic(vx, uy).v / spacing_.x, cubic(v, uy).d1 / spacing_.y};
    }
  }
  return {0.0, 0.0};
}

Mat2 VelocityField::hess(Vec2 x) const {
  switch (kind_) {
    case Kind::constant:
      return {};
    case Kind::gaussians: {
      Mat2 h{};
      for (const auto& b : bumps_) {
        const double w2 = b.width * b.width;
        const double dx = x.x - b.x0, dy = x.y - b.y0;
        const double e = b.amp * std::exp(-(dx * dx + dy * dy) / w2);
        h.xx += e * (4.0 * dx * dx / (w2 * w2) - 2.0 / w2);
        h.yy += e * (4.0 * dy * dy / (w2 * w2) - 2.0 / w2);
        h.xy += e * 4.0 * dx * dy / (w2 * w2);
      }
      return h;
    }
    case Kind::tabulated: {
      double sx = (x.x - origin_.x) / spacing_.x;
      double sy = (x.y - origin_.y) / spacing_.y;
      if (sx < 0.0 || sx > nx_ - 1 || sy < 0.0 || sy > ny_ - 1) return {};
      const int ix = std::min(static_cast<int>(sx), nx_ - 2);
      const int iy = std::min(static_cast<int>(sy), ny_ - 2);
      const double ux = sx - ix, uy = sy - iy;
      double v[4], vx[4], vxx[4];
      for (int j = 0; j < 4; ++j) {
        const int jy = std::clamp(iy - 1 + j, 0, ny_ - 1);
        double row[4];
        for (int i = 0; i < 4; ++i) {
          const int jx = std::clamp(ix - 1 + i, 0, nx_ - 1);
          row[i] = values_[static_cast<std::size_t>(jy) * nx_ + jx];
        }
        const CubicEval e = cubic(row, ux);
        v[j] = e.v;
        vx[j] = e.d1;
        vxx[j] = e.d2;
      }
      Mat2 h;
      h.xx = cubic(vxx, uy).v / (spacing_.x * spacing_.x);
      h.xy = cubic(vx, uy).d1 / (spacing_.x * spacing_.y);
      h.yy = cubic(v, uy).d2 / (spacing_.y * spacing_.y);
      return h;
    }
  }
  return {};
}

}  // namespace raywave
