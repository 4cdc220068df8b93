#include "raywave/sources.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "raywave/quadrature.hpp"

namespace raywave {

namespace {
const cplx I{0.0, 1.0};
}

void ScaleParams::validate() const {
  if (!(lambda > 0.0) || !(mu > 0.0) || !(c0 > 0.0) || !(nu > 0.0))
    throw std::invalid_argument(
        "scales: lambda, mu, c0, nu must all be positive");
}

double SpatialSource::beta(double psi) const {
  const double c = std::cos(psi), s = std::sin(psi);
  return std::sqrt(b1 * b1 * c * c + b2 * b2 * s * s);
}

void SpatialSource::validate() const {
  if (!(b1 > 0.0) || !(b2 > 0.0))
    throw std::invalid_argument("spatial source: semi-axes must be positive");
  if (d1 < 0 || d2 < 0 || d1 + d2 > 6)
    throw std::invalid_argument(
        "spatial source: derivative order must be in [0, 6]");
  if (!std::isfinite(A) || !std::isfinite(theta))
    throw std::invalid_argument("spatial source: non-finite parameter");
}

double eval_spatial(const SpatialSource& src, Vec2 y) {
  src.validate();
  const Vec2 u = rotate_frame(y, src.theta);
  const double q = (u.x / src.b1) * (u.x / src.b1) +
                   (u.y / src.b2) * (u.y / src.b2);
  if (src.deriv_free()) return src.A * std::pow(1.0 + q, -1.5);
  // Symbolic differentiation: maintain terms coef * u1^e1 * u2^e2 (1+q)^{-3/2-k}.
  struct Key {
    int e1, e2, k;
    bool operator<(const Key& o) const {
      if (e1 != o.e1) return e1 < o.e1;
      if (e2 != o.e2) return e2 < o.e2;
      return k < o.k;
    }
  };
  std::map<Key, double> terms{{{0, 0, 0}, 1.0}};
  auto differentiate = [&](int axis, double b) {
    std::map<Key, double> next;
    const double inv_b2 = 1.0 / (b * b);
    for (const auto& [key, coef] : terms) {
      const int e = axis == 0 ? key.e1 : key.e2;
      if (e > 0) {
        Key down = key;
        (axis == 0 ? down.e1 : down.e2) -= 1;
        next[down] += coef * e;
      }
      Key up = key;
      (axis == 0 ? up.e1 : up.e2) += 1;
      up.k += 1;
      next[up] += coef * (-(1.5 + key.k)) * 2.0 * inv_b2;
    }
    terms = std::move(next);
  };
  for (int i = 0; i < src.d1; ++i) differentiate(0, src.b1);
  for (int i = 0; i < src.d2; ++i) differentiate(1, src.b2);
  double sum = 0.0;
  for (const auto& [key, coef] : terms)
    sum += coef * std::pow(u.x, key.e1) * std::pow(u.y, key.e2) *
           std::pow(1.0 + q, -1.5 - key.k);
  return src.A * sum;
}

cplx eval_spatial_fourier(const SpatialSource& src, Vec2 p) {
  src.validate();
  const Vec2 q = rotate_frame(p, src.theta);
  const double arg =
      std::sqrt(src.b1 * src.b1 * q.x * q.x + src.b2 * src.b2 * q.y * q.y);
  cplx value = src.A * src.b1 * src.b2 * std::exp(-arg);
  for (int i = 0; i < src.d1; ++i) value *= I * q.x;
  for (int i = 0; i < src.d2; ++i) value *= I * q.y;
  return value;
}

TemporalSource TemporalSource::sine(double alpha, double phi0) {
  TemporalSource s;
  s.kind = Kind::sine;
  s.alpha = alpha;
  s.phi0 = phi0;
  s.validate();
  return s;
}

TemporalSource TemporalSource::polynomial(std::vector<double> p) {
  TemporalSource s;
  s.kind = Kind::polynomial;
  s.coeffs = std::move(p);
  s.validate();
  return s;
}

TemporalSource TemporalSource::tabulated(std::vector<double> samples,
                                         double tau_max) {
  TemporalSource s;
  s.kind = Kind::tabulated;
  s.samples = std::move(samples);
  s.tau_max = tau_max;
  s.validate();
  return s;
}

double TemporalSource::sine_norm() const {
  const double den = alpha * std::cos(phi0) - alpha * alpha * std::sin(phi0);
  return (alpha * alpha + 1.0) / den;
}

void TemporalSource::validate() const {
  switch (kind) {
    case Kind::sine: {
      const double den =
          alpha * std::cos(phi0) - alpha * alpha * std::sin(phi0);
      if (std::abs(den) < 1e-12)
        throw std::invalid_argument(
            "sine source: alpha*cos(phi0) - alpha^2*sin(phi0) vanishes; "
            "the normalization is undefined");
      break;
    }
    case Kind::polynomial: {
      if (coeffs.empty() || coeffs.size() > 8)
        throw std::invalid_argument(
            "polynomial source: degree must be in [1, 8]");
      double sum = 0.0;
      for (double c : coeffs) sum += c;
      if (std::abs(sum - 1.0) > 1e-10)
        throw std::invalid_argument(
            "polynomial source: coefficients must sum to 1");
      break;
    }
    case Kind::tabulated: {
      if (samples.size() < 4 || !(tau_max > 0.0))
        throw std::invalid_argument("tabulated source: need >= 4 samples");
      if (std::abs(samples.front()) > 1e-12)
        throw std::invalid_argument("tabulated source: g0(0) must be 0");
      if (std::abs(samples.back()) > 1e-10)
        throw std::invalid_argument(
            "tabulated source: last sample must be < 1e-10 (decayed tail)");
      break;
    }
  }
}

double eval_temporal(const TemporalSource& src, double tau) {
  if (tau < 0.0)
    throw std::invalid_argument("eval_temporal: tau must be nonnegative");
  switch (src.kind) {
    case TemporalSource::Kind::sine:
      return src.sine_norm() * std::exp(-tau) *
             (std::sin(src.alpha * tau + src.phi0) - std::sin(src.phi0));
    case TemporalSource::Kind::polynomial: {
      double poly = 0.0, fact = 1.0, power = 1.0;
      for (std::size_t k = 1; k <= src.coeffs.size(); ++k) {
        power *= tau;
        fact *= static_cast<double>(k);
        poly += src.coeffs[k - 1] * power / fact;
      }
      return std::exp(-tau) * poly;
    }
    case TemporalSource::Kind::tabulated: {
      if (tau >= src.tau_max) return 0.0;
      const double step =
          src.tau_max / static_cast<double>(src.samples.size() - 1);
      const double s = tau / step;
      const std::size_t i0 = std::min<std::size_t>(
          static_cast<std::size_t>(s), src.samples.size() - 2);
      const double f = s - static_cast<double>(i0);
      return (1.0 - f) * src.samples[i0] + f * src.samples[i0 + 1];
    }
  }
  return 0.0;
}

double eval_temporal_derivative(const TemporalSource& src, double tau) {
  if (tau < 0.0)
    throw std::invalid_argument(
        "eval_temporal_derivative: tau must be nonnegative");
  switch (src.kind) {
    case TemporalSource::Kind::sine: {
      const double a = src.sine_norm();
      const double ph = src.alpha * tau + src.phi0;
      return a * std::exp(-tau) *
             (src.alpha * std::cos(ph) - std::sin(ph) + std::sin(src.phi0));
    }
    case TemporalSource::Kind::polynomial: {
      // d/dtau [e^{-tau} sum P_k tau^k/k!] =
      //   e^{-tau} sum P_k (tau^{k-1}/(k-1)! - tau^k/k!)
      double poly = 0.0, fact = 1.0, power = 1.0;  // tau^{k-1}/(k-1)!
      for (std::size_t k = 1; k <= src.coeffs.size(); ++k) {
        poly += src.coeffs[k - 1] * power / fact * (1.0 - tau / k);
        power *= tau;
        fact *= static_cast<double>(k);
      }
      return std::exp(-tau) * poly;
    }
    case TemporalSource::Kind::tabulated: {
      const double h = 1e-6 * std::max(1.0, src.tau_max);
      const double lo = std::max(0.0, tau - h);
      return (eval_temporal(src, tau + h) - eval_temporal(src, lo)) /
             (tau + h - lo);
    }
  }
  return 0.0;
}

cplx eval_G0_quadrature(const TemporalSource& src, double xi, double t) {
  double length;
  if (src.kind == TemporalSource::Kind::tabulated) {
    length = src.tau_max - t;
    if (length <= 0.0) return {0.0, 0.0};
  } else {
    length = 45.0;  // e^{-tau} envelope is < 1e-19 beyond
  }
  auto f = [&](double tau) {
    return std::exp(-I * xi * tau) * eval_temporal(src, tau + t);
  };
  return quad::adaptive_gk_decaying<cplx>(f, 0.0, length, 1e-14, 1e-12);
}

cplx eval_G0(const TemporalSource& src, double xi, double t) {
  if (t < 0.0) throw std::invalid_argument("eval_G0: t must be nonnegative");
  switch (src.kind) {
    case TemporalSource::Kind::sine: {
      const double a = src.sine_norm();
      const double chi = src.alpha * t + src.phi0;
      const cplx e_minus = std::exp(-I * chi), e_plus = std::exp(I * chi);
      const cplx ixi = I * xi;
      return a * std::exp(-t) *
             (0.5 * I * e_minus / (1.0 + I * src.alpha + ixi) -
              0.5 * I * e_plus / (1.0 - I * src.alpha + ixi) -
              std::sin(src.phi0) / (1.0 + ixi));
    }
    case TemporalSource::Kind::polynomial: {
      // G0 = e^{-t} sum_m d_m(t) / (1+i xi)^{m+1},
      // d_m(t) = sum_{k>=max(m,1)} P_k t^{k-m} / (k-m)!
      const std::size_t n = src.coeffs.size();
      const cplx base = 1.0 / (1.0 + I * xi);
      cplx sum{0.0, 0.0};
      cplx denom = base;  // (1+i xi)^{-(m+1)}
      for (std::size_t m = 0; m <= n; ++m) {
        double dm = 0.0, fact = 1.0, power = 1.0;  // t^{k-m}/(k-m)!
        for (std::size_t k = std::max<std::size_t>(m, 1); k <= n; ++k) {
          if (k > m) {
            power *= t;
            fact *= static_cast<double>(k - m);
          }
          dm += src.coeffs[k - 1] * power / fact;
          // prepare next k: power/fact currently t^{k-m}/(k-m)!
        }
        sum += dm * denom;
        denom *= base;
      }
      return std::exp(-t) * sum;
    }
    case TemporalSource::Kind::tabulated:
      return eval_G0_quadrature(src, xi, t);
  }
  return {0.0, 0.0};
}

Symbols eval_symbols(const TemporalSource& src, double xi, double t) {
  if (xi < 0.0)
    throw std::invalid_argument("eval_symbols: xi must be nonnegative");
  const double root = std::sqrt(xi);
  const cplx g_zero = eval_G0(src, root, 0.0);
  Symbols out;
  out.f1 = g_zero.real();
  constexpr double eps = 1e-4;
  if (root >= eps) {
    out.f2 = g_zero.imag() / root;
  } else {
    // Even-extension Richardson step: h(z) = Im G0(z,0)/z = h0 + h2 z^2 + ...
    const double h1 = eval_G0(src, eps, 0.0).imag() / eps;
    const double h2 = eval_G0(src, 2.0 * eps, 0.0).imag() / (2.0 * eps);
    const double h0 = (4.0 * h1 - h2) / 3.0;
    const double curv = (h2 - h1) / (3.0 * eps * eps);
    out.f2 = h0 + curv * xi;
  }
  out.f3 = eval_G0(src, root, t).real();
  return out;
}

}  // namespace raywave
