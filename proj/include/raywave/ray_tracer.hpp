#pragma once

#include <vector>

#include "raywave/ode.hpp"
#include "raywave/vec2.hpp"
#include "raywave/velocity.hpp"

namespace raywave {

struct RayState {
  Vec2 x, p;
  double t = 0.0;
};

// Ray + tangent (variational) state evaluated from dense output.
struct RayPoint {
  Vec2 x, p;      // position and momentum
  Vec2 xpsi, ppsi;  // derivatives with respect to the launch angle
};

class RayTrajectory {
 public:
  RayTrajectory(ode::DenseSolution<8> sol, double t_end)
      : sol_(std::move(sol)), t_end_(t_end) {}
  RayPoint eval(double tau) const;
  double t_end() const { return t_end_; }

 private:
  ode::DenseSolution<8> sol_;
  double t_end_;
};

// Integrates dx/dt = c p/|p|, dp/dt = -|p| grad c from x = 0, p = n(psi),
// together with the variational equations for (d/dpsi) initialized with
// xpsi = 0, ppsi = n'(psi).  The Hamiltonian |p| c(x) is preserved to ~tol.
RayTrajectory integrate_ray(const VelocityField& vel, double psi, double t_end,
                            double tol, double fixed_dt = 0.0);

struct FrontSample {
  Vec2 X, P, Xpsi;
  int morse = 0;
  bool focal = false;
  double c_at = 0.0;  // velocity at X
};

struct FrontSet {
  std::vector<double> times;          // ordered
  int psi_count = 0;                  // uniform angles psi_k = 2 pi k / count
  std::vector<FrontSample> samples;   // times.size() x psi_count, row-major
  std::vector<std::vector<double>> focal_times;  // per psi, sorted
  double xpsi_consistency = 0.0;  // variational vs finite-difference deviation
  double c0 = 1.0;

  const FrontSample& at(std::size_t it, int ipsi) const {
    return samples[it * psi_count + ipsi];
  }
  double psi_of(int ipsi) const;
  std::size_t time_index(double t) const;  // exact match required (1e-12)
};

// Traces all rays of a uniform power-of-two psi grid up to max(times), fills
// front samples at each requested time, accumulates Morse indices from the
// zeros of det[X_psi, Xdot]/|Xdot|, and flags focal samples.
FrontSet build_front(const VelocityField& vel, int psi_count,
                     std::vector<double> times, double tol);

// Zeros of |X_psi(tau, psi)| for tau in (0, t], from the nearest grid angle.
int morse_index(const FrontSet& front, double psi, double t);

}  // namespace raywave
