#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <utility>
#include <vector>

namespace raywave::quad {

// Gauss 7 / Kronrod 15 pair on [-1,1]; nodes given for the positive half.
inline constexpr double gk_nodes[8] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813};
inline constexpr double k15_weights[8] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785,
    0.169004726639267, 0.140653259715525, 0.104790010322250,
    0.063092092629979, 0.022935322010529};
// Gauss weights for nodes 0, 2, 4, 6 of the list above.
inline constexpr double g7_weights[4] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

template <class T, class F>
inline void gk15_panel(F&& f, double a, double b, T& k15, double& err) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T f0 = f(mid);
  T k = k15_weights[0] * f0;
  T g = g7_weights[0] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * gk_nodes[i];
    const T fi = f(mid + dx) + f(mid - dx);
    k += k15_weights[i] * fi;
    if (i % 2 == 0) g += g7_weights[i / 2] * fi;
  }
  k15 = half * k;
  err = std::abs(half * (k - g));
}

// Adaptive bisection on [a,b].  T is double or std::complex<double>.
template <class T, class F>
inline T adaptive_gk(F&& f, double a, double b, double abstol = 1e-12,
                     double reltol = 1e-10, int max_depth = 40) {
  struct Interval {
    double a, b, err;
    T val;
    int depth;
  };
  T total{};
  double total_err = 0;
  std::vector<Interval> stack;
  {
    T v;
    double e;
    gk15_panel<T>(f, a, b, v, e);
    stack.push_back({a, b, e, v, 0});
    total = v;
    total_err = e;
  }
  auto tolerance = [&](void) {
    return std::max(abstol, reltol * std::abs(total));
  };
  while (total_err > tolerance()) {
    // split the worst interval
    std::size_t worst = 0;
    for (std::size_t i = 1; i < stack.size(); ++i)
      if (stack[i].err > stack[worst].err) worst = i;
    Interval iv = stack[worst];
    if (iv.depth >= max_depth)
      break;  // error estimate is conservative; accept what we have
    stack[worst] = stack.back();
    stack.pop_back();
    const double m = 0.5 * (iv.a + iv.b);
    T vl, vr;
    double el, er;
    gk15_panel<T>(f, iv.a, m, vl, el);
    gk15_panel<T>(f, m, iv.b, vr, er);
    total += (vl + vr) - iv.val;
    total_err += (el + er) - iv.err;
    stack.push_back({iv.a, m, el, vl, iv.depth + 1});
    stack.push_back({m, iv.b, er, vr, iv.depth + 1});
    if (stack.size() > 100000) break;
  }
  return total;
}

// Semi-infinite integral of an exponentially decaying integrand: integrates
// on [a, a+length] where the caller guarantees the tail beyond is negligible.
template <class T, class F>
inline T adaptive_gk_decaying(F&& f, double a, double length,
                              double abstol = 1e-12, double reltol = 1e-10) {
  // Seed with geometrically growing panels so the adaptive pass starts from a
  // partition already matched to the decay.
  T total{};
  double x = a;
  double h = length / 64.0;
  while (x < a + length) {
    double x1 = std::min(x + h, a + length);
    total += adaptive_gk<T>(f, x, x1, abstol * h / length, reltol);
    x = x1;
    h *= 1.5;
  }
  return total;
}

}  // namespace raywave::quad
