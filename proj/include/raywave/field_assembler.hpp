#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "raywave/front_chart.hpp"
#include "raywave/ray_tracer.hpp"
#include "raywave/sources.hpp"
#include "raywave/vec2.hpp"

namespace raywave {

enum class FieldComponent : std::uint32_t {
  transient = 0,
  propagating = 1,
  total = 2,
  U1 = 3,
  U2 = 4,
  oracle = 5,
};

// value stored in masked cells (the mask bitmap is authoritative)
inline constexpr double kMaskedSentinel = -9.0e99;

struct FieldGrid {
  Vec2 origin{}, spacing{};
  int nx = 0, ny = 0;
  double t = 0.0;
  FieldComponent component = FieldComponent::total;
  std::vector<double> values;      // row-major, x fastest
  std::vector<std::uint8_t> mask;  // 1 = masked, same layout

  double& at(int ix, int iy) { return values[std::size_t(iy) * nx + ix]; }
  double at(int ix, int iy) const { return values[std::size_t(iy) * nx + ix]; }
  bool masked(int ix, int iy) const {
    return mask[std::size_t(iy) * nx + ix] != 0;
  }
  Vec2 cell(int ix, int iy) const {
    return {origin.x + ix * spacing.x, origin.y + iy * spacing.y};
  }
  void allocate() {
    values.assign(std::size_t(nx) * ny, 0.0);
    mask.assign(std::size_t(nx) * ny, 0);
  }
};

struct GridSpec {
  Vec2 origin{}, spacing{};
  int nx = 0, ny = 0;
};

// binary snapshot format ("RWV1"), plus a plain-text matrix export
void write_field(const FieldGrid& grid, const std::string& path);
FieldGrid read_field(const std::string& path);
void write_field_text(const FieldGrid& grid, const std::string& path);

// Fourier data of the equivalent initial sources:
//   U1(p) = Re G0(omega |p|, 0) V~(p)
//   U2(p) = lambda^{-1} [Im G0(xi,0)/xi at xi = omega|p|] V~(p)
// (the bracket at p = 0 via the even-extension limit).
std::pair<cplx, cplx> equivalent_sources(const ScaleParams& scales,
                                         const SpatialSource& spatial,
                                         const TemporalSource& temporal,
                                         Vec2 p);

// Wave profile F(z, psi): oscillatory half-line integral of
// sqrt(rho) conj(g~0)(omega rho) V~(rho n(psi)) e^{i z rho}, evaluated either
// through the error-function kernel (closed_form) or adaptively (quadrature).
struct ProfileFn {
  const SpatialSource* spatial = nullptr;
  const TemporalSource* temporal = nullptr;
  double omega = 1.0;
  enum class Mode { closed_form, quadrature } mode = Mode::closed_form;
};

cplx wave_profile(const ProfileFn& pf, double z, double psi);

// Transient component on a grid; closed forms for the built-in temporal kinds
// with a derivative-free spatial source, quadrature otherwise (or when
// force_quadrature is set).  n_psi = 0 selects the angular resolution
// automatically per cell radius.
FieldGrid transient_field(const ScaleParams& scales,
                          const SpatialSource& spatial,
                          const TemporalSource& temporal, const GridSpec& grid,
                          double t, int n_psi = 0,
                          bool force_quadrature = false);

// Propagating component near the front: sqrt(mu) Re sum over regular branches
// of e^{-i pi m/2} |X_psi|^{-1/2} sqrt(c0/c(X)) F(S/mu, psi).  Cells with no
// branch in the band are zero; cells whose only branches are focal are masked.
// band = 0 selects the default 12 mu omega b_max.
FieldGrid propagating_field(const FrontSet& front, const ProfileFn& pf,
                            const ScaleParams& scales, const GridSpec& grid,
                            double t, double band = 0.0,
                            double focal_threshold = 1e-3);

// pointwise sum with mask union; grids must match exactly
FieldGrid total_field(const FieldGrid& transient, const FieldGrid& propagating);

}  // namespace raywave
