#pragma once

#include <complex>
#include <vector>

#include "raywave/vec2.hpp"

namespace raywave {

using cplx = std::complex<double>;

// Governing scales of the problem.  omega is always recomputed from the other
// three so it cannot drift out of sync.
struct ScaleParams {
  double lambda = 1.0;  // temporal decay rate of the forcing (1/time)
  double mu = 0.1;      // source size (length)
  double c0 = 1.0;      // velocity at the origin (length/time)
  double nu = 1.0;      // decay exponent used in decay-rate checks

  double omega() const { return c0 / (lambda * mu); }
  void validate() const;  // throws std::invalid_argument
};

// Spatial factor: rotated ellipsoidal profile A(1 + (u1/b1)^2 + (u2/b2)^2)^{-3/2}
// with an optional constant-coefficient derivative d1,d2 applied in the
// unrotated frame.
struct SpatialSource {
  double A = 1.0;
  double b1 = 1.0, b2 = 1.0;
  double theta = 0.0;  // frame rotation angle (radians)
  int d1 = 0, d2 = 0;  // derivative multi-index (before rotation), d1+d2 <= 6

  bool deriv_free() const { return d1 == 0 && d2 == 0; }
  double b_min() const { return b1 < b2 ? b1 : b2; }
  double b_max() const { return b1 > b2 ? b1 : b2; }
  // beta(psi) = sqrt(b1^2 cos^2 psi + b2^2 sin^2 psi), in the unrotated frame
  double beta(double psi) const;
  void validate() const;
};

double eval_spatial(const SpatialSource& src, Vec2 y);

// Exact transform under the convention V~(p) = (2pi)^{-1} \int V(y) e^{-i<p,y>} dy:
// for the derivative-free profile A b1 b2 exp(-sqrt(b1^2 p1'^2 + b2^2 p2'^2)),
// p' the rotated momentum; the derivative contributes (i p')^{(d1,d2)}.
cplx eval_spatial_fourier(const SpatialSource& src, Vec2 p);

// Temporal factor g0: normalized (integral one), vanishing at tau = 0,
// exponentially decaying.
struct TemporalSource {
  enum class Kind { sine, polynomial, tabulated };
  Kind kind = Kind::sine;

  // sine: g0(tau) = a e^{-tau} (sin(alpha tau + phi0) - sin phi0)
  double alpha = 2.0, phi0 = 0.0;

  // polynomial: g0(tau) = e^{-tau} sum_k P_k tau^k / k!, k = 1..n, sum P_k = 1
  std::vector<double> coeffs;  // coeffs[k-1] = P_k, n <= 8

  // tabulated: uniform samples of g0 on [0, tau_max], zero beyond
  std::vector<double> samples;
  double tau_max = 0.0;

  static TemporalSource sine(double alpha, double phi0 = 0.0);
  static TemporalSource polynomial(std::vector<double> p);
  static TemporalSource tabulated(std::vector<double> samples, double tau_max);

  double sine_norm() const;  // the normalizing factor a
  void validate() const;
};

double eval_temporal(const TemporalSource& src, double tau);
double eval_temporal_derivative(const TemporalSource& src, double tau);

// G0(xi, t) = \int_0^inf e^{-i xi tau} g0(tau + t) dtau.  Built-in kinds use
// the closed forms; the tabulated kind falls back to quadrature.
cplx eval_G0(const TemporalSource& src, double xi, double t);

// Direct adaptive quadrature of the defining integral (test oracle; also the
// implementation path for tabulated sources).
cplx eval_G0_quadrature(const TemporalSource& src, double xi, double t);

// Even symbols generated by G0:
//   f1(xi) = Re G0(sqrt(xi), 0)
//   f2(xi) = xi^{-1/2} Im G0(sqrt(xi), 0)   (removable singularity at 0)
//   f3(xi, t) = Re G0(sqrt(xi), t)
struct Symbols {
  double f1, f2, f3;
};
Symbols eval_symbols(const TemporalSource& src, double xi, double t);

}  // namespace raywave
