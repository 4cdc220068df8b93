#include "raywave/reference_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "raywave/parallel.hpp"

namespace raywave {

namespace {

struct Stencil {
  int n = 0;        // nodes per side
  double h = 0.0;   // effective spacing
  double origin = 0.0;
  std::vector<double> cx;  // c^2 on x-faces, (n-1) x n
  std::vector<double> cy;  // c^2 on y-faces, n x (n-1)

  double x_of(int i) const { return origin + i * h; }

  // div(c^2 grad u) at interior node (i, j), u in row-major n x n
  double div_grad(const std::vector<double>& u, int i, int j) const {
    const std::size_t id = std::size_t(j) * n + i;
    const double fe = cx[std::size_t(j) * (n - 1) + i] * (u[id + 1] - u[id]);
    const double fw =
        cx[std::size_t(j) * (n - 1) + i - 1] * (u[id] - u[id - 1]);
    const double fn = cy[std::size_t(j) * n + i] * (u[id + n] - u[id]);
    const double fs = cy[std::size_t(j - 1) * n + i] * (u[id] - u[id - n]);
    return (fe - fw + fn - fs) / (h * h);
  }
};

Stencil make_stencil(const FDConfig& cfg) {
  Stencil st;
  st.n = static_cast<int>(std::round(2.0 * cfg.half_extent / cfg.h)) + 1;
  st.h = 2.0 * cfg.half_extent / (st.n - 1);
  st.origin = -cfg.half_extent;
  const int n = st.n;
  st.cx.resize(std::size_t(n - 1) * n);
  st.cy.resize(std::size_t(n) * (n - 1));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n - 1; ++i) {
      const double c =
          cfg.velocity->c({st.x_of(i) + 0.5 * st.h, st.x_of(j)});
      st.cx[std::size_t(j) * (n - 1) + i] = c * c;
    }
  for (int j = 0; j < n - 1; ++j)
    for (int i = 0; i < n; ++i) {
      const double c =
          cfg.velocity->c({st.x_of(i), st.x_of(j) + 0.5 * st.h});
      st.cy[std::size_t(j) * n + i] = c * c;
    }
  return st;
}

double effective_dt(const FDConfig& cfg, double h_eff) {
  return cfg.dt > 0.0 ? cfg.dt : 0.4 * h_eff / cfg.velocity->c_max();
}

}  // namespace

void FDConfig::validate() const {
  if (!velocity) throw std::invalid_argument("fd: velocity field required");
  if (!(half_extent > 0.0) || !(h > 0.0) || !(t_end > 0.0))
    throw std::invalid_argument("fd: extent, spacing, t_end must be positive");
  const Stencil st = make_stencil(*this);
  const double cmax = velocity->c_max();
  const double step = effective_dt(*this, st.h);
  if (step > 0.5 * st.h / cmax)
    throw std::invalid_argument(
        "fd: CFL violated, need dt <= 0.5 h / max c");
  if (2.0 * half_extent < 2.0 * cmax * t_end + comparison_radius)
    throw std::invalid_argument(
        "fd: domain too small, boundary reflections would reach the "
        "comparison region before t_end");
  if (forced) {
    scales.validate();
    spatial.validate();
    temporal.validate();
  }
}

FDSolution solve_fd(const FDConfig& cfg, std::vector<double> snapshot_times) {
  cfg.validate();
  const Stencil st = make_stencil(cfg);
  const int n = st.n;
  const std::size_t cells = std::size_t(n) * n;
  const double base_dt = effective_dt(cfg, st.h);

  std::sort(snapshot_times.begin(), snapshot_times.end());
  for (double s : snapshot_times)
    if (s < 0.0 || s > cfg.t_end + 1e-12)
      throw std::invalid_argument("fd: snapshot outside [0, t_end]");

  // spatial factor of the forcing, precomputed
  std::vector<double> vgrid(cells, 0.0);
  if (cfg.forced) {
    parallel_for(cells, [&](std::size_t id) {
      const int i = int(id % n), j = int(id / n);
      vgrid[id] = eval_spatial(
          cfg.spatial,
          {st.x_of(i) / cfg.scales.mu, st.x_of(j) / cfg.scales.mu});
    });
  }
  const double lam = cfg.scales.lambda;
  auto time_factor = [&](double t) {
    return cfg.forced ? lam * lam * eval_temporal_derivative(cfg.temporal,
                                                             lam * t)
                      : 0.0;
  };

  // acceleration  L u + Q(t)  on interior nodes
  std::vector<double> acc(cells, 0.0);
  auto accel = [&](const std::vector<double>& u, double t) {
    const double tf = time_factor(t);
    parallel_for(std::size_t(n - 2), [&](std::size_t row) {
      const int j = int(row) + 1;
      for (int i = 1; i < n - 1; ++i)
        acc[std::size_t(j) * n + i] =
            st.div_grad(u, i, j) + tf * vgrid[std::size_t(j) * n + i];
    });
  };

  std::vector<double> cur(cells, 0.0), prev(cells), next(cells, 0.0);
  if (cfg.initial) {
    for (std::size_t id = 0; id < cells; ++id) {
      const int i = int(id % n), j = int(id / n);
      if (i > 0 && i < n - 1 && j > 0 && j < n - 1)
        cur[id] = cfg.initial({st.x_of(i), st.x_of(j)});
    }
  }
  std::vector<double> vel(cells, 0.0);  // eta_t at the current boundary time

  FDSolution out;
  auto snapshot = [&](double t) {
    FieldGrid g;
    g.origin = {st.origin, st.origin};
    g.spacing = {st.h, st.h};
    g.nx = n;
    g.ny = n;
    g.t = t;
    g.component = FieldComponent::oracle;
    g.values = cur;
    g.mask.assign(cells, 0);
    out.eta.push_back(std::move(g));
    FieldGrid gv = out.eta.back();
    gv.values = vel;
    out.eta_t.push_back(std::move(gv));
  };

  double t = 0.0;
  std::size_t si = 0;
  while (si < snapshot_times.size() && snapshot_times[si] <= 1e-14) {
    snapshot(0.0);
    ++si;
  }

  // segment boundaries: every snapshot plus t_end
  std::vector<double> bounds(snapshot_times.begin() + si,
                             snapshot_times.end());
  if (bounds.empty() || bounds.back() < cfg.t_end - 1e-12)
    bounds.push_back(cfg.t_end);

  for (double t1 : bounds) {
    const double span = t1 - t;
    const int m = std::max(1, static_cast<int>(std::ceil(span / base_dt)));
    const double dt = span / m;
    // re-seed the two-level state so the first leapfrog step from this
    // boundary is second-order consistent with (cur, vel)
    accel(cur, t);
    parallel_for(cells, [&](std::size_t id) {
      prev[id] = cur[id] - dt * vel[id] + 0.5 * dt * dt * acc[id];
    });
    for (int k = 0; k < m; ++k) {
      accel(cur, t + k * dt);
      parallel_for(cells, [&](std::size_t id) {
        next[id] = 2.0 * cur[id] - prev[id] + dt * dt * acc[id];
      });
      std::swap(prev, cur);
      std::swap(cur, next);
    }
    t = t1;
    // second-order velocity at the boundary from the trailing difference
    accel(cur, t);
    parallel_for(cells, [&](std::size_t id) {
      vel[id] = (cur[id] - prev[id]) / dt + 0.5 * dt * acc[id];
    });
    while (si < snapshot_times.size() &&
           std::abs(snapshot_times[si] - t) <= 1e-12) {
      snapshot(t);
      ++si;
    }
  }
  return out;
}

double energy(const FieldGrid& eta, const FieldGrid& eta_t,
              const VelocityField& vel) {
  if (eta.nx != eta_t.nx || eta.ny != eta_t.ny)
    throw std::invalid_argument("energy: mismatched grids");
  const int nx = eta.nx, ny = eta.ny;
  const double hx = eta.spacing.x, hy = eta.spacing.y;
  double kinetic = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) kinetic += eta_t.at(i, j) * eta_t.at(i, j);
  double strain = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      const Vec2 mid{eta.origin.x + (i + 0.5) * hx, eta.origin.y + j * hy};
      const double c = vel.c(mid);
      const double d = (eta.at(i + 1, j) - eta.at(i, j)) / hx;
      strain += c * c * d * d;
    }
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Vec2 mid{eta.origin.x + i * hx, eta.origin.y + (j + 0.5) * hy};
      const double c = vel.c(mid);
      const double d = (eta.at(i, j + 1) - eta.at(i, j)) / hy;
      strain += c * c * d * d;
    }
  return 0.5 * hx * hy * (kinetic + strain);
}

}  // namespace raywave
