#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "raywave/quadrature.hpp"
#include "raywave/sources.hpp"

using namespace raywave;

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel_err(cplx got, cplx want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

// Polar reduction of the plane integral (2pi)^{-1} \int V e^{-i<p,y>} dy for
// the derivative-free profile: after scaling to the unit-ball variable the
// transform is A b1 b2 \int_0^inf r (1+r^2)^{-3/2} J0(q r) dr.
cplx fourier_oracle(const SpatialSource& src, Vec2 p) {
  const Vec2 q = rotate_frame(p, src.theta);
  const double w =
      std::sqrt(src.b1 * src.b1 * q.x * q.x + src.b2 * src.b2 * q.y * q.y);
  auto f = [&](double r) {
    return r * std::pow(1.0 + r * r, -1.5) * std::cyl_bessel_j(0.0, w * r);
  };
  double total = 0.0;
  double a = 0.0;
  for (double b : {1.0, 10.0, 50.0, 200.0}) {
    total += quad::adaptive_gk<double>(f, a, b, 1e-12, 1e-10);
    a = b;
  }
  return src.A * src.b1 * src.b2 * total;
}

}  // namespace

TEST_CASE("scale parameters") {
  ScaleParams s{20.0, 0.05, 1.0, 1.0};
  s.validate();
  CHECK(s.omega() == doctest::Approx(1.0).epsilon(1e-14));
  ScaleParams bad = s;
  bad.mu = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("spatial profile point values") {
  SpatialSource unit;
  CHECK(eval_spatial(unit, {0.0, 0.0}) == doctest::Approx(1.0));
  SpatialSource s{2.0, 1.0, 2.0, 0.0};
  CHECK(eval_spatial(s, {1.0, 0.0}) ==
        doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-14));
  // rotation moves the long axis
  SpatialSource rot{1.0, 1.0, 4.0, kPi / 10.0};
  const Vec2 along = unit_dir(kPi / 2.0 + kPi / 10.0);  // rotated long axis
  const Vec2 across = unit_dir(kPi / 10.0);
  CHECK(eval_spatial(rot, 2.0 * along) > eval_spatial(rot, 2.0 * across));
  CHECK(std::abs(eval_spatial(rot, 2.0 * along) -
                 eval_spatial(SpatialSource{1.0, 1.0, 4.0, 0.0},
                              {0.0, 2.0})) < 1e-13);
}

TEST_CASE("spatial derivative decoration vs finite differences") {
  const SpatialSource base{1.3, 0.8, 1.7, 0.3};
  SpatialSource dx = base, dxy = base, dxx = base;
  dx.d1 = 1;
  dxy.d1 = 1, dxy.d2 = 1;
  dxx.d1 = 2;
  const double h = 1e-5;
  const std::vector<Vec2> pts = {{0.2, -0.4}, {1.0, 0.7}, {-2.0, 0.1}};
  for (Vec2 y : pts) {
    // derivatives act in the rotated frame: displace along the frame axes
    const Vec2 e1 = {std::cos(base.theta), std::sin(base.theta)};
    const Vec2 e2 = {-std::sin(base.theta), std::cos(base.theta)};
    const double fd1 =
        (eval_spatial(base, y + h * e1) - eval_spatial(base, y - h * e1)) /
        (2.0 * h);
    CHECK(std::abs(eval_spatial(dx, y) - fd1) < 1e-8);
    const double fd11 = (eval_spatial(base, y + h * e1) -
                         2.0 * eval_spatial(base, y) +
                         eval_spatial(base, y - h * e1)) /
                        (h * h);
    CHECK(std::abs(eval_spatial(dxx, y) - fd11) < 1e-5);
    const double fd12 =
        (eval_spatial(dx, y + h * e2) - eval_spatial(dx, y - h * e2)) /
        (2.0 * h);
    CHECK(std::abs(eval_spatial(dxy, y) - fd12) < 1e-7);
  }
}

TEST_CASE("spatial Fourier transform closed form") {
  SpatialSource s{1.0, 1.0, 2.0, 0.0};
  CHECK(eval_spatial_fourier(s, {0.0, 0.0}).real() == doctest::Approx(2.0));
  SpatialSource circ{1.0, 1.0, 1.0, 0.0};
  CHECK(eval_spatial_fourier(circ, {3.0, 4.0}).real() ==
        doctest::Approx(std::exp(-5.0)).epsilon(1e-12));
  // even and real for derivative-free sources
  SpatialSource rot{0.7, 0.9, 2.2, 0.4};
  const Vec2 p{0.8, -0.5};
  const cplx plus = eval_spatial_fourier(rot, p);
  const cplx minus = eval_spatial_fourier(rot, {-p.x, -p.y});
  CHECK(plus.imag() == 0.0);
  CHECK(plus.real() == doctest::Approx(minus.real()).epsilon(1e-14));
  // against the independent polar-reduction quadrature
  for (Vec2 pp : std::vector<Vec2>{{0.5, 0.0}, {0.7, 0.9}, {-1.2, 0.4}}) {
    INFO("p = (", pp.x, ", ", pp.y, ")");
    CHECK(rel_err(eval_spatial_fourier(rot, pp), fourier_oracle(rot, pp)) <
          1e-4);
  }
  // derivative factor
  SpatialSource der = rot;
  der.d1 = 1;
  der.d2 = 2;
  const Vec2 q = rotate_frame(p, rot.theta);
  const cplx expect = plus * (cplx{0.0, 1.0} * q.x) *
                      (cplx{0.0, 1.0} * q.y) * (cplx{0.0, 1.0} * q.y);
  CHECK(rel_err(eval_spatial_fourier(der, p), expect) < 1e-13);
}

TEST_CASE("temporal sources: normalization, zero start, derivative") {
  const auto sine = TemporalSource::sine(2.0, 0.3);
  const auto poly = TemporalSource::polynomial({0.2, 0.8});
  for (const auto& src : {sine, poly}) {
    CHECK(std::abs(eval_temporal(src, 0.0)) < 1e-14);
    auto f = [&](double tau) { return eval_temporal(src, tau); };
    const double integral =
        quad::adaptive_gk_decaying<double>(f, 0.0, 40.0, 1e-13, 1e-12);
    CHECK(std::abs(integral - 1.0) < 1e-10);
    // derivative against central differences
    for (double tau : {0.3, 1.7, 5.0}) {
      const double h = 1e-6;
      const double fd = (f(tau + h) - f(tau - h)) / (2.0 * h);
      CHECK(std::abs(eval_temporal_derivative(src, tau) - fd) < 1e-7);
    }
  }
  // the reference example: g0(tau) = e^{-tau}(0.2 tau + 0.4 tau^2)
  CHECK(eval_temporal(poly, 1.0) ==
        doctest::Approx(std::exp(-1.0) * 0.6).epsilon(1e-13));
  CHECK_THROWS_AS(eval_temporal(poly, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(TemporalSource::polynomial({0.2, 0.3}),
                  std::invalid_argument);
}

TEST_CASE("G0 closed forms against quadrature") {
  const auto sine = TemporalSource::sine(2.0, 0.3);
  const auto poly = TemporalSource::polynomial({0.1, 0.5, 0.4});
  for (const auto& src : {sine, poly}) {
    CHECK(rel_err(eval_G0(src, 0.0, 0.0), {1.0, 0.0}) < 1e-12);
    for (double xi : {0.0, 0.7, 3.7, 21.0}) {
      for (double t : {0.0, 0.5, 2.5}) {
        INFO("xi = ", xi, ", t = ", t);
        CHECK(rel_err(eval_G0(src, xi, t), eval_G0_quadrature(src, xi, t)) <
              1e-8);
      }
    }
    // parity in xi
    const cplx gp = eval_G0(src, 1.3, 0.4);
    const cplx gm = eval_G0(src, -1.3, 0.4);
    CHECK(std::abs(gp.real() - gm.real()) < 1e-12);
    CHECK(std::abs(gp.imag() + gm.imag()) < 1e-12);
  }
}

TEST_CASE("tabulated temporal source reproduces the sine results") {
  const auto sine = TemporalSource::sine(2.0, 0.0);
  const int n = 8001;
  const double tau_max = 40.0;
  std::vector<double> samples(n);
  for (int i = 0; i < n; ++i)
    samples[i] = eval_temporal(sine, tau_max * i / (n - 1));
  const auto tab = TemporalSource::tabulated(samples, tau_max);
  CHECK(std::abs(eval_temporal(tab, 1.234) - eval_temporal(sine, 1.234)) <
        1e-5);
  CHECK(rel_err(eval_G0(tab, 1.5, 0.3), eval_G0(sine, 1.5, 0.3)) < 1e-4);
}

TEST_CASE("even symbols") {
  const auto sine = TemporalSource::sine(2.0, 0.1);
  const Symbols s0 = eval_symbols(sine, 0.0, 0.0);
  CHECK(s0.f1 == doctest::Approx(1.0).epsilon(1e-10));
  const Symbols s1 = eval_symbols(sine, 2.4, 0.0);
  CHECK(s1.f3 == doctest::Approx(s1.f1).epsilon(1e-13));
  // f2 is continuous across the extrapolation/direct dispatch boundary and
  // through the removable singularity at xi = 0
  const double below = eval_symbols(sine, 1e-8 * 0.9999, 0.0).f2;
  const double above = eval_symbols(sine, 1e-8 * 1.0001, 0.0).f2;
  CHECK(std::abs(below - above) < 1e-10 * std::abs(below));
  const double origin = eval_symbols(sine, 0.0, 0.0).f2;
  CHECK(std::abs(origin - below) < 1e-7 * std::abs(origin));
  // |f1| decays at least like 1/(1+xi) up to a constant
  double cbound = 0.0;
  for (double xi = 0.0; xi <= 1000.0; xi += 7.3)
    cbound = std::max(cbound,
                      std::abs(eval_symbols(sine, xi, 0.0).f1) * (1.0 + xi));
  CHECK(cbound < 50.0);
}
