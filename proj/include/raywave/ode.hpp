#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace raywave::ode {

template <std::size_t N>
using State = std::array<double, N>;

// Dormand-Prince 5(4) embedded pair with 4th-order dense output.
// Adaptive by default; pass fixed_dt > 0 to disable step control (used by the
// order-convergence tests).
template <std::size_t N>
struct DenseSolution {
  struct Segment {
    double t0, h;
    State<N> r1, r2, r3, r4, r5;
  };
  double t_begin = 0.0, t_end = 0.0;
  std::vector<Segment> segments;

  State<N> eval(double t) const {
    if (segments.empty()) throw std::logic_error("empty dense solution");
    const double dir = t_end >= t_begin ? 1.0 : -1.0;
    const double slack = 1e-9 * (1.0 + std::abs(t_end - t_begin));
    if (dir * (t - t_begin) < -slack || dir * (t - t_end) > slack)
      throw std::out_of_range("dense evaluation outside the integrated span");
    // binary search for the segment containing t
    std::size_t lo = 0, hi = segments.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      const double seg_end = segments[mid].t0 + segments[mid].h;
      if (dir * (t - seg_end) > 0.0)
        lo = mid + 1;
      else
        hi = mid;
    }
    const Segment& s = segments[lo];
    double theta = (t - s.t0) / s.h;
    if (theta < 0.0) theta = 0.0;
    if (theta > 1.0) theta = 1.0;
    const double th1 = 1.0 - theta;
    State<N> y;
    for (std::size_t i = 0; i < N; ++i)
      y[i] = s.r1[i] +
             theta * (s.r2[i] +
                      th1 * (s.r3[i] +
                             theta * (s.r4[i] + th1 * s.r5[i])));
    return y;
  }
};

namespace detail {
// Butcher tableau
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                        c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695,
                        e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                        e6 = 187.0 / 2100, e7 = 1.0 / 40;
// dense-output weights
inline constexpr double d1 = -12715105075.0 / 11282082432.0;
inline constexpr double d3 = 87487479700.0 / 32700410799.0;
inline constexpr double d4 = -10690763975.0 / 1880347072.0;
inline constexpr double d5 = 701980252875.0 / 199316789632.0;
inline constexpr double d6 = -1453857185.0 / 822651844.0;
inline constexpr double d7 = 69997945.0 / 29380423.0;
}  // namespace detail

template <std::size_t N, class F>
DenseSolution<N> integrate(F&& rhs, State<N> y0, double t0, double t1,
                           double rtol, double atol, double fixed_dt = 0.0) {
  using namespace detail;
  DenseSolution<N> out;
  out.t_begin = t0;
  out.t_end = t1;
  if (t0 == t1) {
    // degenerate span: a single zero-length segment holding y0
    typename DenseSolution<N>::Segment s{};
    s.t0 = t0;
    s.h = 1.0;  // eval clamps theta to 0 on this degenerate span
    s.r1 = y0;
    out.segments.push_back(s);
    return out;
  }
  const double dir = t1 > t0 ? 1.0 : -1.0;
  double t = t0;
  State<N> y = y0;
  double h = fixed_dt > 0.0 ? dir * fixed_dt
                            : dir * std::min(1e-2, std::abs(t1 - t0) / 10.0);
  const double span = std::abs(t1 - t0);
  State<N> k1, k2, k3, k4, k5, k6, k7, ytmp, y5;
  auto axpy = [&](State<N>& dst, const State<N>& base,
                  std::initializer_list<std::pair<double, const State<N>*>>
                      terms,
                  double hh) {
    for (std::size_t i = 0; i < N; ++i) {
      double acc = 0.0;
      for (const auto& [coef, kk] : terms) acc += coef * (*kk)[i];
      dst[i] = base[i] + hh * acc;
    }
  };
  while (dir * (t1 - t) > 1e-14 * span) {
    if (dir * (t + h - t1) > 0.0) h = t1 - t;
    if (std::abs(h) < 1e-14 * (1.0 + std::abs(t)))
      throw std::runtime_error("ODE step size underflow at t = " +
                               std::to_string(t));
    k1 = rhs(t, y);
    axpy(ytmp, y, {{a21, &k1}}, h);
    k2 = rhs(t + c2 * h, ytmp);
    axpy(ytmp, y, {{a31, &k1}, {a32, &k2}}, h);
    k3 = rhs(t + c3 * h, ytmp);
    axpy(ytmp, y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h);
    k4 = rhs(t + c4 * h, ytmp);
    axpy(ytmp, y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h);
    k5 = rhs(t + c5 * h, ytmp);
    axpy(ytmp, y,
         {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h);
    k6 = rhs(t + h, ytmp);
    axpy(y5, y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
    k7 = rhs(t + h, y5);
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double y4i = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                     e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale =
          atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double d = (y5[i] - y4i) / scale;
      err += d * d;
    }
    err = std::sqrt(err / static_cast<double>(N));
    if (fixed_dt > 0.0 || err <= 1.0) {
      typename DenseSolution<N>::Segment s;
      s.t0 = t;
      s.h = h;
      for (std::size_t i = 0; i < N; ++i) {
        const double dy = y5[i] - y[i];
        s.r1[i] = y[i];
        s.r2[i] = dy;
        s.r3[i] = h * k1[i] - dy;
        s.r4[i] = dy - h * k7[i] - s.r3[i];
        s.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                       d6 * k6[i] + d7 * k7[i]);
      }
      out.segments.push_back(s);
      t += h;
      y = y5;
    }
    if (fixed_dt <= 0.0) {
      const double factor =
          err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::min(5.0, std::max(0.2, factor));
    }
    if (out.segments.size() > 10000000)
      throw std::runtime_error("ODE integration exceeded the step budget");
  }
  return out;
}

}  // namespace raywave::ode
