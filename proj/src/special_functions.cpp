#include "raywave/special_functions.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace raywave::sf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.77245385090551602730;
constexpr double kEulerGamma = 0.57721566490153286061;
const cplx kI{0.0, 1.0};

// Weideman rational approximation of the Faddeeva function, upper half-plane.
// Coefficients of the degree-(N-1) polynomial in Z = (L+iz)/(L-iz).
struct WeidemanTable {
  static constexpr int N = 64;
  double L;
  std::array<double, N> a;  // a[n-1] multiplies Z^{n-1}
  WeidemanTable() {
    const int M = 2 * N;
    L = std::sqrt(N / std::sqrt(2.0));
    std::vector<double> g(2 * M);
    for (int j = 0; j < 2 * M; ++j) {
      const double theta = j * kPi / M;  // in [0, 2pi)
      if (j == M) {
        g[j] = 0.0;  // theta = pi corresponds to t = infinity
        continue;
      }
      const double t = L * std::tan(0.5 * theta);
      g[j] = std::exp(-t * t) * (L * L + t * t);
    }
    for (int n = 1; n <= N; ++n) {
      double s = 0.0;
      for (int j = 0; j < 2 * M; ++j) s += g[j] * std::cos(n * j * kPi / M);
      a[n - 1] = s / (2.0 * M);
    }
  }
};

const WeidemanTable& weideman() {
  static const WeidemanTable table;
  return table;
}

cplx faddeeva_weideman(cplx z) {
  const auto& tab = weideman();
  const cplx liz = tab.L - kI * z;
  const cplx zz = (tab.L + kI * z) / liz;
  cplx p{0.0, 0.0};
  for (int n = WeidemanTable::N - 1; n >= 0; --n) p = p * zz + tab.a[n];
  return 2.0 * p / (liz * liz) + (1.0 / kSqrtPi) / liz;
}

// Laplace continued fraction, accurate for |z| >= ~8 in the upper half-plane.
cplx faddeeva_contfrac(cplx z) {
  cplx t{0.0, 0.0};
  for (int n = 40; n >= 1; --n) t = (0.5 * n) / (z - t);
  return kI / kSqrtPi / (z - t);
}

cplx exp_checked(cplx z) {
  if (z.real() > 700.0)
    throw std::overflow_error("complex exponential overflow");
  return std::exp(z);
}

// E1 power series: -gamma - log z + sum_{k>=1} (-1)^{k+1} z^k / (k k!).
cplx e1_series(cplx z) {
  cplx sum{0.0, 0.0};
  cplx term{1.0, 0.0};
  for (int k = 1; k <= 600; ++k) {
    term *= -z / static_cast<double>(k);
    const cplx add = -term / static_cast<double>(k);
    sum += add;
    if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
  }
  return -kEulerGamma - std::log(z) + sum;
}

// Modified Lentz evaluation of E1(z) = e^{-z} / (z+1- 1/(z+3- 4/(z+5- ...))).
// Returns the scaled value e^{z} E1(z).
cplx e1_contfrac_scaled(cplx z) {
  const double tiny = 1e-290;
  cplx b = z + 1.0;
  cplx c{1.0 / tiny, 0.0};
  cplx d = 1.0 / b;
  cplx h = d;
  for (int k = 1; k <= 4000; ++k) {
    const cplx a = -static_cast<double>(k) * static_cast<double>(k);
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const cplx delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) return h;
  }
  throw std::runtime_error("E1 continued fraction failed to converge");
}

bool e1_use_series(cplx z) {
  if (std::abs(z) <= 4.0) return true;
  return z.real() <= 0.0 && std::abs(z.imag()) <= 4.0 && std::abs(z) <= 300.0;
}

}  // namespace

cplx faddeeva_w(cplx z) {
  if (z.imag() >= 0.0) {
    if (std::abs(z) >= 12.0) return faddeeva_contfrac(z);
    return faddeeva_weideman(z);
  }
  const cplx zn = -z;
  const cplx wu =
      (std::abs(zn) >= 12.0) ? faddeeva_contfrac(zn) : faddeeva_weideman(zn);
  return 2.0 * exp_checked(-z * z) - wu;
}

cplx erfc(cplx w) {
  if (w.real() >= 0.0) {
    const cplx iw = kI * w;  // upper half-plane
    return exp_checked(-w * w) * faddeeva_w(iw);
  }
  return 2.0 - erfc(-w);
}

cplx erfcx(cplx w) {
  if (w.real() >= 0.0) return faddeeva_w(kI * w);
  return 2.0 * exp_checked(w * w) - faddeeva_w(-kI * w);
}

cplx expint_e1(cplx z) {
  if (z == cplx{0.0, 0.0})
    throw std::domain_error("E1 undefined at the origin");
  if (e1_use_series(z)) return e1_series(z);
  return std::exp(-z) * e1_contfrac_scaled(z);
}

cplx expint_e1_scaled(cplx z) {
  if (z == cplx{0.0, 0.0})
    throw std::domain_error("E1 undefined at the origin");
  if (e1_use_series(z)) return std::exp(z) * e1_series(z);
  return e1_contfrac_scaled(z);
}

SiCi sin_cos_integrals(cplx z) {
  if (z == cplx{0.0, 0.0})
    throw std::domain_error("Ci undefined at the origin");
  if (z.real() < 0.0) {
    const SiCi r = sin_cos_integrals(-z);
    return {-r.si, r.ci + std::log(z) - std::log(-z)};
  }
  if (z.real() <= 4.0) {
    // series; the entire parts Si and Cin converge for any bounded |z|
    const cplx z2 = z * z;
    cplx si = z, si_term = z;
    cplx cin{0.0, 0.0};
    cplx cin_term{1.0, 0.0};
    for (int k = 1; k <= 500; ++k) {
      si_term *= -z2 / ((2.0 * k) * (2.0 * k + 1.0));  // now z^{2k+1}/(2k+1)!
      si += si_term / (2.0 * k + 1.0);
      cin_term *= -z2 / ((2.0 * k - 1.0) * (2.0 * k));
      cin += -cin_term / (2.0 * k);
      if (std::abs(si_term) < 1e-18 * (1.0 + std::abs(si)) &&
          std::abs(cin_term) < 1e-18 * (1.0 + std::abs(cin)))
        break;
    }
    return {si, kEulerGamma + std::log(z) - cin};
  }
  const cplx e_plus = expint_e1(kI * z);
  const cplx e_minus = expint_e1(-kI * z);
  const cplx si = 0.5 * kPi + (e_plus - e_minus) / (2.0 * kI);
  const cplx ci = -0.5 * (e_plus + e_minus);
  return {si, ci};
}

namespace {
// When zw lands exactly on the E1 branch cut, the signed zero of its
// imaginary part must agree with the side the rotated contour approaches
// from (set by the sign of arg z); otherwise the strict residue-window
// comparisons below pair the wrong E1 sheet with no correction.
cplx canonical_zeta(cplx zeta, double theta) {
  if (zeta.imag() == 0.0 && zeta.real() < 0.0)
    return {zeta.real(), theta > 0.0 ? 0.0 : -0.0};
  return zeta;
}
}  // namespace

cplx laplace_pole_integral(cplx z, cplx w) {
  if (z.real() <= 0.0)
    throw std::domain_error("laplace_pole_integral requires Re z > 0");
  if (w.imag() == 0.0 && w.real() <= 0.0)
    throw std::domain_error("laplace_pole_integral: pole on the path");
  const cplx zeta = canonical_zeta(z * w, std::arg(z));
  cplx value = expint_e1_scaled(zeta);
  // The substitution u = z t turns the path into the ray arg u = arg z; the
  // rotation back to the real axis picks up the pole at u = -zeta when its
  // argument lies strictly between 0 and arg z.
  const double theta = std::arg(z);
  const double phi = std::arg(-zeta);
  if (theta > 0.0 && phi > 0.0 && phi < theta)
    value -= 2.0 * kPi * kI * std::exp(zeta);
  else if (theta < 0.0 && phi < 0.0 && phi > theta)
    value += 2.0 * kPi * kI * std::exp(zeta);
  return value;
}

void laplace_pole_powers(cplx z, cplx w, int count, cplx* out) {
  if (count < 1) return;
  const cplx zeta = canonical_zeta(z * w, std::arg(z));
  if (std::abs(zeta) >= 40.0) {
    // Asymptotic expansion in 1/(zw), plus the rotated-contour residue of the
    // order-m pole where applicable.
    const double theta = std::arg(z);
    const double phi = std::arg(-zeta);
    double residue_sign = 0.0;
    if (theta > 0.0 && phi > 0.0 && phi < theta)
      residue_sign = -1.0;
    else if (theta < 0.0 && phi < 0.0 && phi > theta)
      residue_sign = 1.0;
    for (int m = 1; m <= count; ++m) {
      cplx sum{0.0, 0.0};
      cplx term = 1.0 / (std::pow(w, m) * z);  // j = 0 term
      double prev = std::abs(term);
      for (int j = 0; j < 60; ++j) {
        sum += term;
        term *= -static_cast<double>(m + j) / (z * w);
        const double mag = std::abs(term);
        if (mag >= prev || mag < 1e-18 * std::abs(sum)) break;
        prev = mag;
      }
      out[m - 1] = sum;
      if (residue_sign != 0.0) {
        double fact = 1.0;
        for (int j = 2; j < m; ++j) fact *= j;
        const double parity = (m % 2 == 1) ? 1.0 : -1.0;
        out[m - 1] += residue_sign * std::pow(z, m - 1) * 2.0 * kPi * kI *
                      parity * std::exp(zeta) / fact;
      }
    }
    return;
  }
  out[0] = laplace_pole_integral(z, w);
  cplx wpow{1.0, 0.0};  // w^{m-1}... maintained as w^{-m} below
  for (int m = 1; m < count; ++m) {
    wpow /= w;  // now w^{-m}
    out[m] = (wpow - z * out[m - 1]) / static_cast<double>(m);
  }
}

cplx i0_kernel(cplx c1, cplx c2) {
  cplx v[1];
  i0_kernel_powers(c1, c2, 1, v);
  return v[0];
}

void i0_kernel_powers(cplx c1, cplx c2, int count, cplx* out) {
  if (c1.real() <= 0.0)
    throw std::domain_error("i0_kernel requires Re C1 > 0");
  if (c2.real() == 0.0 && c2.imag() >= 0.0)
    throw std::domain_error("i0_kernel: C2 on the positive imaginary axis");
  if (count < 1) return;
  const cplx sqrt_c1 = std::sqrt(c1);
  if (std::abs(c1 * c2) >= 30.0) {
    // Asymptotic expansion around rho = 0:
    // (C2 - i rho)^{-m} = C2^{-m} sum_j C(m+j-1,j) (i rho / C2)^j.
    for (int m = 1; m <= count; ++m) {
      cplx sum{0.0, 0.0};
      // j = 0: Gamma(3/2) / C1^{3/2} / C2^m
      cplx term = 0.5 * kSqrtPi / (c1 * sqrt_c1 * std::pow(c2, m));
      double prev = std::abs(term);
      for (int j = 0; j < 60; ++j) {
        sum += term;
        term *= kI * static_cast<double>(m + j) * (j + 1.5) /
                ((j + 1.0) * c1 * c2);
        const double mag = std::abs(term);
        if (mag >= prev || mag < 1e-18 * std::abs(sum)) break;
        prev = mag;
      }
      out[m - 1] = sum;
    }
    return;
  }
  // Seed values: H_m = \int rho^{-1/2} e^{-C1 rho} (C2 - i rho)^{-m} drho.
  const cplx h0 = kSqrtPi / sqrt_c1;
  const cplx sqrt_ic2 = std::sqrt(kI * c2);
  const cplx h1 = kI * kPi / sqrt_ic2 * erfcx(sqrt_ic2 * sqrt_c1);
  cplx h_prev = h1;
  out[0] = kI * h0 - kI * c2 * h1;
  for (int m = 2; m <= count; ++m) {
    const cplx im =
        (c1 * out[m - 2] - 0.5 * h_prev) / (kI * static_cast<double>(m - 1));
    out[m - 1] = im;
    h_prev = (kI * h_prev - im) / (kI * c2);  // H_m from I_m = i H_{m-1} - i C2 H_m
  }
}

}  // namespace raywave::sf
