#include "raywave/front_chart.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace raywave {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// periodic Catmull-Rom over a uniform grid, with first derivative
struct Interp {
  double v, d;
};

template <class Get>
Interp catmull_periodic(int n, double psi, Get&& get) {
  const double s = psi / kTwoPi * n;
  const double fl = std::floor(s);
  const int k = static_cast<int>(fl);
  const double u = s - fl;
  auto at = [&](int idx) { return get(((idx % n) + n) % n); };
  const double p0 = at(k - 1), p1 = at(k), p2 = at(k + 1), p3 = at(k + 2);
  const double c0 = 2.0 * p1;
  const double c1 = -p0 + p2;
  const double c2 = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
  const double c3 = -p0 + 3.0 * p1 - 3.0 * p2 + p3;
  Interp e;
  e.v = 0.5 * (c0 + u * (c1 + u * (c2 + u * c3)));
  e.d = 0.5 * (c1 + u * (2.0 * c2 + 3.0 * u * c3)) * (n / kTwoPi);
  return e;
}

}  // namespace

FrontChart::FrontChart(const FrontSet& front, std::size_t time_index)
    : front_(&front), it_(time_index), t_(front.times.at(time_index)) {}

Vec2 FrontChart::X(double psi) const {
  const int n = front_->psi_count;
  return {catmull_periodic(n, psi, [&](int k) { return front_->at(it_, k).X.x; }).v,
          catmull_periodic(n, psi, [&](int k) { return front_->at(it_, k).X.y; }).v};
}

Vec2 FrontChart::P(double psi) const {
  const int n = front_->psi_count;
  return {catmull_periodic(n, psi, [&](int k) { return front_->at(it_, k).P.x; }).v,
          catmull_periodic(n, psi, [&](int k) { return front_->at(it_, k).P.y; }).v};
}

Vec2 FrontChart::Xpsi(double psi) const {
  const int n = front_->psi_count;
  return {
      catmull_periodic(n, psi, [&](int k) { return front_->at(it_, k).Xpsi.x; }).v,
      catmull_periodic(n, psi, [&](int k) { return front_->at(it_, k).Xpsi.y; }).v};
}

Vec2 FrontChart::Xpsipsi(double psi) const {
  const int n = front_->psi_count;
  return {
      catmull_periodic(n, psi, [&](int k) { return front_->at(it_, k).Xpsi.x; }).d,
      catmull_periodic(n, psi, [&](int k) { return front_->at(it_, k).Xpsi.y; }).d};
}

double FrontChart::c_at(double psi) const {
  const int n = front_->psi_count;
  return catmull_periodic(n, psi, [&](int k) { return front_->at(it_, k).c_at; })
      .v;
}

ChartPoint locate_branches(const FrontSet& front, Vec2 x, double t,
                           double band, double focal_threshold) {
  if (!(band > 0.0))
    throw std::invalid_argument("locate_branches: band must be positive");
  const std::size_t it = front.time_index(t);
  const FrontChart chart(front, it);
  const int n = front.psi_count;

  ChartPoint out;
  out.x = x;
  out.t = t;

  std::vector<double> dist(n);
  for (int k = 0; k < n; ++k) dist[k] = norm(x - front.at(it, k).X);

  // candidate angles and their arc clustering (circular)
  std::vector<bool> in_band(n);
  bool any = false, all = true;
  for (int k = 0; k < n; ++k) {
    in_band[k] = dist[k] < band;
    any = any || in_band[k];
    all = all && in_band[k];
  }
  if (!any) return out;

  // seed a refinement at every in-band local extremum of the sampled
  // distance: orthogonality roots are distance extrema, and behind a caustic
  // the middle sheet shows up as a local maximum, not a minimum
  std::vector<int> seeds;
  for (int k = 0; k < n; ++k) {
    if (!in_band[k]) continue;
    const double dm = dist[((k - 1) % n + n) % n];
    const double dp = dist[(k + 1) % n];
    if ((dist[k] <= dm && dist[k] < dp) || (dist[k] >= dm && dist[k] > dp))
      seeds.push_back(k);
  }
  if (seeds.empty()) {
    // band touches the front only tangentially; fall back to the global
    // in-band minimum
    int best = -1;
    for (int k = 0; k < n; ++k)
      if (in_band[k] && (best < 0 || dist[k] < dist[best])) best = k;
    seeds.push_back(best);
  }
  (void)all;

  auto g = [&](double psi) { return dot(x - chart.X(psi), chart.Xpsi(psi)); };

  const double dpsi = kTwoPi / n;
  std::vector<double> roots;
  for (int seed : seeds) {
    double psi = seed * dpsi;
    bool ok = false;
    for (int iter = 0; iter < 60; ++iter) {
      const Vec2 xp = chart.Xpsi(psi);
      const Vec2 dxv = x - chart.X(psi);
      const double gval = dot(dxv, xp);
      const double scale = std::max(norm(xp) * norm(dxv), 1e-14);
      if (std::abs(gval) <= 1e-10 * scale) {
        ok = true;
        break;
      }
      const double gp = -dot(xp, xp) + dot(dxv, chart.Xpsipsi(psi));
      if (gp == 0.0) break;
      const double step = gval / gp;
      psi -= step;
      if (std::abs(step) > 3.0 * dpsi && iter > 4) break;  // running away
    }
    if (!ok) {
      // bisection fallback on a bracket around the seed
      double a = (seed - 1) * dpsi, b = (seed + 1) * dpsi;
      double fa = g(a), fb = g(b);
      if (fa * fb <= 0.0) {
        for (int iter = 0; iter < 80; ++iter) {
          const double m = 0.5 * (a + b);
          const double fm = g(m);
          if (fa * fm <= 0.0) {
            b = m;
            fb = fm;
          } else {
            a = m;
            fa = fm;
          }
        }
        psi = 0.5 * (a + b);
        ok = true;
      }
    }
    if (!ok) {
      ++out.newton_failures;
      continue;
    }
    psi -= kTwoPi * std::floor(psi / kTwoPi);
    roots.push_back(psi);
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique_roots;
  for (double r : roots) {
    bool dup = false;
    for (double u : unique_roots) {
      double d = std::abs(r - u);
      d = std::min(d, kTwoPi - d);
      if (d < 1e-6) dup = true;
    }
    if (!dup) unique_roots.push_back(r);
  }

  for (double psi : unique_roots) {
    const Vec2 X = chart.X(psi);
    const Vec2 dxv = x - X;
    if (norm(dxv) > band * 1.001) continue;
    const Vec2 xp = chart.Xpsi(psi);
    if (norm(xp) <= focal_threshold * front.c0 * t) {
      ++out.dropped_focal;
      continue;
    }
    Branch br;
    br.psi = psi;
    br.X = X;
    br.P = chart.P(psi);
    br.S = dot(br.P, dxv);
    br.morse = morse_index(front, psi, t);
    br.xpsi_norm = norm(xp);
    br.c_at = chart.c_at(psi);
    out.branches.push_back(br);
  }
  return out;
}

bool is_regular(const FrontSet& front, double psi, double t,
                double threshold) {
  const std::size_t it = front.time_index(t);
  const FrontChart chart(front, it);
  return norm(chart.Xpsi(psi)) > threshold * front.c0 * t;
}

}  // namespace raywave
