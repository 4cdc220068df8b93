#pragma once

#include <complex>

namespace raywave::sf {

using cplx = std::complex<double>;

// Faddeeva function w(z) = e^{-z^2} erfc(-iz).
// Rational approximation (Weideman, N = 64) for moderate |z| in the upper
// half-plane, Laplace continued fraction for |z| >= 12, reflection
// w(-z) = 2 e^{-z^2} - w(z) below the real axis.
cplx faddeeva_w(cplx z);

// Complementary error function of a complex argument.
// Accuracy ~1e-13 relative for |w| <= 30; throws std::overflow_error when the
// result magnitude exceeds the double range (|e^{-w^2}| overflows).
cplx erfc(cplx w);

// Scaled complement e^{w^2} erfc(w); never overflows for Re w >= 0.
cplx erfcx(cplx w);

// Principal-branch exponential integral E1(z), cut on the negative real axis.
// Power series for |z| <= 4, Laplace continued fraction otherwise.
// z == 0 is a domain error.
cplx expint_e1(cplx z);

// e^{z} E1(z); safe against underflow/overflow of the exponential prefactor.
cplx expint_e1_scaled(cplx z);

struct SiCi {
  cplx si, ci;
};

// Sine and cosine integrals Si(z), Ci(z), principal branch.
// Ci(0) is a domain error (logarithmic singularity).
SiCi sin_cos_integrals(cplx z);

// I0(C1,C2) = \int_0^inf sqrt(rho) e^{-C1 rho} / (C2 - i rho) drho,
// Re C1 > 0 and C2 off the positive imaginary axis.
cplx i0_kernel(cplx c1, cplx c2);

// out[m-1] = \int_0^inf sqrt(rho) e^{-C1 rho} / (C2 - i rho)^m drho for
// m = 1..count (count <= 12).  Forward recursion seeded by the erfcx closed
// form; switches to an asymptotic expansion when |C1 C2| is large.  Relative
// accuracy degrades roughly by a factor |C1 C2| per pole order, which keeps
// full working accuracy for the polynomial degrees used in practice (<= 3)
// and stays below 1e-6 up to the degree-8 cap.
void i0_kernel_powers(cplx c1, cplx c2, int count, cplx* out);

// \int_0^inf e^{-z t} / (t + w) dt for Re z > 0 and w off (-inf, 0].
// Evaluated as e^{zw} E1(zw) with the residue correction that keeps the
// value continuous when zw crosses the negative real axis.
cplx laplace_pole_integral(cplx z, cplx w);

// out[m-1] = \int_0^inf e^{-z t} / (t + w)^m dt for m = 1..count.
void laplace_pole_powers(cplx z, cplx w, int count, cplx* out);

}  // namespace raywave::sf
