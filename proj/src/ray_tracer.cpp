#include "raywave/ray_tracer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "raywave/parallel.hpp"

namespace raywave {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

ode::State<8> ray_rhs(const VelocityField& vel, const ode::State<8>& y) {
  const Vec2 x{y[0], y[1]};
  const Vec2 p{y[2], y[3]};
  const Vec2 dx{y[4], y[5]};
  const Vec2 dp{y[6], y[7]};
  const double pn = norm(p);
  if (pn < 1e-6)
    throw std::runtime_error("ray tracer: |p| collapsed below 1e-6");
  const double cv = vel.c(x);
  const Vec2 g = vel.grad(x);
  const Mat2 h = vel.hess(x);
  const Vec2 pu = p / pn;
  ode::State<8> f;
  // xdot = c p/|p|, pdot = -|p| grad c
  f[0] = cv * pu.x;
  f[1] = cv * pu.y;
  f[2] = -pn * g.x;
  f[3] = -pn * g.y;
  // tangent flow
  const double gdx = dot(g, dx);
  const double pdp = dot(pu, dp);
  const Vec2 dxdot = gdx * pu + (cv / pn) * (dp - pdp * pu);
  const Vec2 hdx = h * dx;
  const Vec2 dpdot = -1.0 * (pdp * g + pn * hdx);
  f[4] = dxdot.x;
  f[5] = dxdot.y;
  f[6] = dpdot.x;
  f[7] = dpdot.y;
  return f;
}

}  // namespace

RayPoint RayTrajectory::eval(double tau) const {
  const ode::State<8> y = sol_.eval(tau);
  return {{y[0], y[1]}, {y[2], y[3]}, {y[4], y[5]}, {y[6], y[7]}};
}

RayTrajectory integrate_ray(const VelocityField& vel, double psi, double t_end,
                            double tol, double fixed_dt) {
  if (t_end < 0.0 || !(tol > 0.0))
    throw std::invalid_argument("integrate_ray: need t_end >= 0 and tol > 0");
  const Vec2 n = unit_dir(psi);
  ode::State<8> y0{0.0, 0.0, n.x, n.y, 0.0, 0.0, -n.y, n.x};
  auto rhs = [&vel](double, const ode::State<8>& y) { return ray_rhs(vel, y); };
  // local tolerance a couple of orders below the drift contract
  const double rtol = tol / 50.0;
  const double atol = rtol * 1e-2;
  return RayTrajectory(
      ode::integrate<8>(rhs, y0, 0.0, t_end, rtol, atol, fixed_dt), t_end);
}

double FrontSet::psi_of(int ipsi) const {
  return kTwoPi * ipsi / psi_count;
}

std::size_t FrontSet::time_index(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) < 1e-12 * (1.0 + std::abs(t))) return i;
  throw std::out_of_range("front: time not among the sampled snapshots");
}

FrontSet build_front(const VelocityField& vel, int psi_count,
                     std::vector<double> times, double tol) {
  if (psi_count < 16 || (psi_count & (psi_count - 1)) != 0)
    throw std::invalid_argument(
        "build_front: psi_count must be a power of two >= 16");
  if (times.empty()) throw std::invalid_argument("build_front: no times");
  std::sort(times.begin(), times.end());
  const double t_max = times.back();
  FrontSet front;
  front.times = times;
  front.psi_count = psi_count;
  front.c0 = vel.c({0.0, 0.0});
  front.samples.resize(times.size() * psi_count);
  front.focal_times.resize(psi_count);

  const int fine = 2048;  // tau sampling for zero detection of j(tau)
  const double focal_rel = 1e-3;

  parallel_for(static_cast<std::size_t>(psi_count), [&](std::size_t k) {
    const double psi = kTwoPi * static_cast<double>(k) / psi_count;
    const RayTrajectory ray = integrate_ray(vel, psi, t_max, tol);
    // zeros of j(tau) = det[X_psi, Xdot]/|Xdot| on (0, t_max]
    auto jfun = [&](double tau) {
      const RayPoint r = ray.eval(tau);
      const Vec2 xdot = vel.c(r.x) * (r.p / norm(r.p));
      return cross(r.xpsi, xdot) / norm(xdot);
    };
    std::vector<double>& zeros = front.focal_times[k];
    double j_pp = 0.0;                    // j at tau_{i-2}
    double tau_prev = t_max / fine;
    double j_prev = jfun(tau_prev);       // j at tau_{i-1}
    for (int i = 2; i <= fine; ++i) {
      const double tau = t_max * i / fine;
      const double j = jfun(tau);
      if (j_prev == 0.0 || j * j_prev < 0.0) {
        // bracketed sign change: bisect
        double a = tau_prev, b = tau, fa = j_prev;
        for (int it = 0; it < 60; ++it) {
          const double m = 0.5 * (a + b);
          const double fm = jfun(m);
          if (fa * fm <= 0.0)
            b = m;
          else
            a = m, fa = fm;
        }
        zeros.push_back(0.5 * (a + b));
      } else if (i >= 3) {
        // tangential zero: local dip of |j| at tau_{i-1} below threshold
        // without a sign change; decide via a quadratic fit extremum
        const double thr = 1e-9 * front.c0 * tau_prev;
        if (std::abs(j_prev) < thr && std::abs(j_prev) <= std::abs(j_pp) &&
            std::abs(j_prev) <= std::abs(j) && j_pp * j_prev > 0.0) {
          const double curv = j_pp - 2.0 * j_prev + j;
          const double fit_ext =
              curv != 0.0
                  ? j_prev - 0.125 * (j - j_pp) * (j - j_pp) / curv
                  : j_prev;
          if (std::abs(fit_ext) < thr) zeros.push_back(tau_prev);
        }
      }
      j_pp = j_prev;
      j_prev = j;
      tau_prev = tau;
    }
    std::sort(zeros.begin(), zeros.end());
    for (std::size_t it = 0; it < front.times.size(); ++it) {
      const double t = front.times[it];
      const RayPoint r = ray.eval(t);
      FrontSample& s = front.samples[it * psi_count + k];
      s.X = r.x;
      s.P = r.p;
      s.Xpsi = r.xpsi;
      s.c_at = vel.c(r.x);
      s.morse = static_cast<int>(
          std::upper_bound(zeros.begin(), zeros.end(),
                           t + 1e-12 * (1.0 + t)) -
          zeros.begin());
      s.focal = norm(r.xpsi) <= focal_rel * front.c0 * t;
    }
  });

  // consistency of the variational X_psi against a 4th-order angular
  // finite difference on the grid
  double worst = 0.0;
  const double dpsi = kTwoPi / psi_count;
  for (std::size_t it = 0; it < front.times.size(); ++it) {
    const double t = front.times[it];
    if (t <= 0.0) continue;
    for (int k = 0; k < psi_count; ++k) {
      auto X = [&](int idx) {
        return front.samples[it * psi_count +
                             ((idx % psi_count) + psi_count) % psi_count]
            .X;
      };
      const Vec2 diff =
          (1.0 / (12.0 * dpsi)) *
          (X(k - 2) - 8.0 * X(k - 1) + 8.0 * X(k + 1) - X(k + 2));
      const FrontSample& s = front.samples[it * psi_count + k];
      const double dev =
          norm(diff - s.Xpsi) / (front.c0 * t + norm(s.Xpsi));
      worst = std::max(worst, dev);
    }
  }
  front.xpsi_consistency = worst;
  return front;
}

int morse_index(const FrontSet& front, double psi, double t) {
  const double wrapped =
      psi - kTwoPi * std::floor(psi / kTwoPi);
  const int k = static_cast<int>(
                    std::lround(wrapped / kTwoPi * front.psi_count)) %
                front.psi_count;
  const auto& zeros = front.focal_times[k];
  return static_cast<int>(
      std::upper_bound(zeros.begin(), zeros.end(), t + 1e-12 * (1.0 + t)) -
      zeros.begin());
}

}  // namespace raywave
