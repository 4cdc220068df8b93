#include "raywave/field_assembler.hpp"

#include <cassert>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "raywave/parallel.hpp"
#include "raywave/quadrature.hpp"
#include "raywave/special_functions.hpp"

namespace raywave {

namespace {

const cplx I{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
void get(std::istream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof v);
}

// shifted polynomial coefficients: G0 = e^{-t} sum_m d_m(t) (1+i xi)^{-(m+1)},
// d_m(t) = sum_{k >= max(m,1)} P_k t^{k-m} / (k-m)!
std::vector<double> poly_shift_coeffs(const TemporalSource& src, double t) {
  const std::size_t n = src.coeffs.size();
  std::vector<double> d(n + 1, 0.0);
  for (std::size_t m = 0; m <= n; ++m) {
    double power = 1.0, fact = 1.0;
    for (std::size_t k = std::max<std::size_t>(m, 1); k <= n; ++k) {
      if (k > m) {
        power *= t;
        fact *= static_cast<double>(k - m);
      }
      d[m] += src.coeffs[k - 1] * power / fact;
    }
  }
  return d;
}

// \int_0^inf sigma e^{-sigma z} / (sigma + w) dsigma = 1/z - w L(z, w)
cplx weighted_pole(cplx z, cplx w) {
  return 1.0 / z - w * sf::laplace_pole_integral(z, w);
}

// inner radial integral of the transient representation after the sigma
// substitution: \int_0^inf sigma Re G0(sigma, T) e^{-sigma z} dsigma
cplx transient_inner_closed(const TemporalSource& temporal, double T, cplx z) {
  if (temporal.kind == TemporalSource::Kind::sine) {
    const double a = temporal.sine_norm();
    const double chi = temporal.alpha * T + temporal.phi0;
    const double s0 = std::sin(temporal.phi0);
    const cplx em = std::exp(-I * chi), ep = std::exp(I * chi);
    // 2 Re G0(sigma,T)/(a e^{-T}) written over simple poles in sigma:
    // terms coef/(c + i sigma) map to -i/(sigma - ic), terms coef/(c - i
    // sigma) to +i/(sigma + ic)
    cplx sum{0.0, 0.0};
    sum += (0.5 * I * em) * (-I) * weighted_pole(z, cplx{temporal.alpha, -1.0});
    sum += (-0.5 * I * ep) * (-I) *
           weighted_pole(z, cplx{-temporal.alpha, -1.0});
    sum += cplx{-s0, 0.0} * (-I) * weighted_pole(z, cplx{0.0, -1.0});
    sum += (-0.5 * I * ep) * I * weighted_pole(z, cplx{temporal.alpha, 1.0});
    sum += (0.5 * I * em) * I * weighted_pole(z, cplx{-temporal.alpha, 1.0});
    sum += cplx{-s0, 0.0} * I * weighted_pole(z, cplx{0.0, 1.0});
    return 0.5 * a * std::exp(-T) * sum;
  }
  // polynomial: 2 Re G0 = e^{-T} sum_m d_m [(1+is)^{-(m+1)} + (1-is)^{-(m+1)}]
  const auto d = poly_shift_coeffs(temporal, T);
  const int n = static_cast<int>(temporal.coeffs.size());
  cplx jm[12], jp[12];
  sf::laplace_pole_powers(z, cplx{0.0, -1.0}, n + 1, jm);
  sf::laplace_pole_powers(z, cplx{0.0, 1.0}, n + 1, jp);
  auto J = [&](const cplx* arr, int j) { return j == 0 ? 1.0 / z : arr[j - 1]; };
  cplx sum{0.0, 0.0};
  cplx mi_pow = -I;  // (-i)^{m+1} = i^{-(m+1)}
  cplx pi_pow = I;   // i^{m+1}    = (-i)^{-(m+1)}
  for (int m = 0; m <= n; ++m) {
    const cplx minus = J(jm, m) - cplx{0.0, -1.0} * J(jm, m + 1);
    const cplx plus = J(jp, m) - cplx{0.0, 1.0} * J(jp, m + 1);
    sum += d[m] * (mi_pow * minus + pi_pow * plus);
    mi_pow *= -I;
    pi_pow *= I;
  }
  return 0.5 * std::exp(-T) * sum;
}

cplx transient_inner_quadrature(const SpatialSource& spatial,
                                const TemporalSource& temporal, double omega,
                                double T, double psi, double phase_rate) {
  // defining rho-integral: rho Re G0(omega rho, T) V~(rho n(psi))
  // e^{i rho phase_rate}, envelope e^{-rho beta(psi - theta)}
  const Vec2 n = unit_dir(psi);
  const double beta = spatial.beta(psi - spatial.theta);
  auto f = [&](double rho) -> cplx {
    const double g = eval_G0(temporal, omega * rho, T).real();
    return rho * g * eval_spatial_fourier(spatial, rho * n) *
           std::exp(I * (rho * phase_rate));
  };
  return quad::adaptive_gk_decaying<cplx>(f, 0.0, 50.0 / beta, 1e-15, 1e-11);
}

int auto_psi_nodes(double r, double mu, double b_min) {
  // resolve the angular oscillation e^{i sigma r cos(psi-phi)/(mu omega)} up
  // to the sigma where the radial envelope has decayed away
  const double freq = 32.0 * r / (mu * b_min);
  int n = 128;
  while (n < freq && n < 4096) n *= 2;
  return n;
}

bool transient_closed_available(const SpatialSource& spatial,
                                const TemporalSource& temporal) {
  return spatial.deriv_free() &&
         temporal.kind != TemporalSource::Kind::tabulated;
}

}  // namespace

void write_field(const FieldGrid& grid, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  os.write("RWV1", 4);
  put(os, std::int32_t(grid.nx));
  put(os, std::int32_t(grid.ny));
  put(os, grid.origin.x);
  put(os, grid.origin.y);
  put(os, grid.spacing.x);
  put(os, grid.spacing.y);
  put(os, grid.t);
  put(os, static_cast<std::uint32_t>(grid.component));
  os.write(reinterpret_cast<const char*>(grid.values.data()),
           std::streamsize(grid.values.size() * sizeof(double)));
  const std::size_t ncell = grid.values.size();
  std::vector<std::uint8_t> bits((ncell + 7) / 8, 0);
  for (std::size_t i = 0; i < ncell; ++i)
    if (grid.mask[i]) bits[i / 8] |= std::uint8_t(1u << (i % 8));
  os.write(reinterpret_cast<const char*>(bits.data()),
           std::streamsize(bits.size()));
  if (!os) throw std::runtime_error("write_field: write failed for " + path);
}

FieldGrid read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "RWV1", 4) != 0)
    throw std::runtime_error("read_field: bad magic in " + path);
  FieldGrid g;
  std::int32_t nx, ny;
  std::uint32_t comp;
  get(is, nx);
  get(is, ny);
  get(is, g.origin.x);
  get(is, g.origin.y);
  get(is, g.spacing.x);
  get(is, g.spacing.y);
  get(is, g.t);
  get(is, comp);
  if (!is || nx <= 0 || ny <= 0 || comp > 5)
    throw std::runtime_error("read_field: corrupt header in " + path);
  g.nx = nx;
  g.ny = ny;
  g.component = static_cast<FieldComponent>(comp);
  const std::size_t ncell = std::size_t(nx) * ny;
  g.values.resize(ncell);
  is.read(reinterpret_cast<char*>(g.values.data()),
          std::streamsize(ncell * sizeof(double)));
  std::vector<std::uint8_t> bits((ncell + 7) / 8);
  is.read(reinterpret_cast<char*>(bits.data()), std::streamsize(bits.size()));
  if (!is) throw std::runtime_error("read_field: truncated file " + path);
  g.mask.resize(ncell);
  for (std::size_t i = 0; i < ncell; ++i)
    g.mask[i] = (bits[i / 8] >> (i % 8)) & 1u;
  return g;
}

void write_field_text(const FieldGrid& grid, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_field_text: cannot open " + path);
  os << "# t " << grid.t << " component "
     << static_cast<std::uint32_t>(grid.component) << " origin "
     << grid.origin.x << ' ' << grid.origin.y << " spacing " << grid.spacing.x
     << ' ' << grid.spacing.y << " nx " << grid.nx << " ny " << grid.ny
     << '\n';
  os.precision(17);
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      if (ix) os << ' ';
      if (grid.masked(ix, iy))
        os << "nan";
      else
        os << grid.at(ix, iy);
    }
    os << '\n';
  }
  if (!os) throw std::runtime_error("write_field_text: write failed");
}

std::pair<cplx, cplx> equivalent_sources(const ScaleParams& scales,
                                         const SpatialSource& spatial,
                                         const TemporalSource& temporal,
                                         Vec2 p) {
  scales.validate();
  const double omega = scales.omega();
  const double pn = norm(p);
  const double xi = omega * pn;
  const cplx v = eval_spatial_fourier(spatial, p);
  const Symbols sym = eval_symbols(temporal, xi * xi, 0.0);
  return {sym.f1 * v, sym.f2 / scales.lambda * v};
}

cplx wave_profile(const ProfileFn& pf, double z, double psi) {
  const SpatialSource& sp = *pf.spatial;
  const TemporalSource& tm = *pf.temporal;
  const double omega = pf.omega;
  if (!(omega > 0.0))
    throw std::invalid_argument("wave_profile: omega must be positive");
  const cplx phase = std::exp(-I * (kPi / 4.0));

  if (pf.mode == ProfileFn::Mode::quadrature) {
    const Vec2 n = unit_dir(psi);
    const double beta = sp.beta(psi - sp.theta);
    auto f = [&](double rho) -> cplx {
      const cplx g = std::conj(eval_G0(tm, omega * rho, 0.0));
      return std::sqrt(rho) * g * eval_spatial_fourier(sp, rho * n) *
             std::exp(I * (z * rho));
    };
    const cplx integral =
        quad::adaptive_gk_decaying<cplx>(f, 0.0, 50.0 / beta, 1e-15, 1e-11);
    return phase / std::sqrt(kTwoPi) * integral;
  }

  if (!sp.deriv_free() || tm.kind == TemporalSource::Kind::tabulated)
    throw std::invalid_argument(
        "wave_profile: closed form needs a derivative-free spatial source and "
        "a sine or polynomial temporal source");

  const double beta = sp.beta(psi - sp.theta);
  const cplx c1 = cplx{beta, -z} / omega;
  const cplx pref = phase * sp.A * sp.b1 * sp.b2 /
                    (std::sqrt(kTwoPi) * omega * std::sqrt(omega));
  if (tm.kind == TemporalSource::Kind::sine) {
    const double a = tm.sine_norm();
    const cplx em = std::exp(-I * tm.phi0), ep = std::exp(I * tm.phi0);
    const cplx sum =
        0.5 * I * em * sf::i0_kernel(c1, cplx{1.0, tm.alpha}) -
        0.5 * I * ep * sf::i0_kernel(c1, cplx{1.0, -tm.alpha}) -
        std::sin(tm.phi0) * sf::i0_kernel(c1, cplx{1.0, 0.0});
    return pref * a * sum;
  }
  const int n = static_cast<int>(tm.coeffs.size());
  cplx powers[12];
  sf::i0_kernel_powers(c1, cplx{1.0, 0.0}, n + 1, powers);
  cplx sum{0.0, 0.0};
  for (int m = 1; m <= n; ++m) sum += tm.coeffs[m - 1] * powers[m];
  return pref * sum;
}

FieldGrid transient_field(const ScaleParams& scales,
                          const SpatialSource& spatial,
                          const TemporalSource& temporal, const GridSpec& grid,
                          double t, int n_psi, bool force_quadrature) {
  scales.validate();
  spatial.validate();
  temporal.validate();
  if (t < 0.0)
    throw std::invalid_argument("transient_field: t must be nonnegative");
  if (grid.nx <= 0 || grid.ny <= 0)
    throw std::invalid_argument("transient_field: empty grid");
  const double omega = scales.omega();
  const double T = scales.lambda * t;
  const bool closed =
      !force_quadrature && transient_closed_available(spatial, temporal);
  const double vol = spatial.A * spatial.b1 * spatial.b2;

  FieldGrid out;
  out.origin = grid.origin;
  out.spacing = grid.spacing;
  out.nx = grid.nx;
  out.ny = grid.ny;
  out.t = t;
  out.component = FieldComponent::transient;
  out.allocate();

  parallel_for(std::size_t(grid.nx) * grid.ny, [&](std::size_t idx) {
    const int ix = int(idx % grid.nx), iy = int(idx / grid.nx);
    const Vec2 x = out.cell(ix, iy);
    const double r = norm(x);
    const double phi = std::atan2(x.y, x.x);
    const int n =
        n_psi > 0 ? n_psi : auto_psi_nodes(r, scales.mu, spatial.b_min());
    cplx acc{0.0, 0.0};
    double mag = 0.0;
    for (int k = 0; k < n; ++k) {
      const double psi = kTwoPi * k / n;
      cplx inner;
      if (closed) {
        const cplx z = cplx{spatial.beta(psi - spatial.theta),
                            -(r / scales.mu) * std::cos(psi - phi)} /
                       omega;
        assert(z.real() > 0.0);
        inner = vol / (omega * omega) * transient_inner_closed(temporal, T, z);
      } else {
        inner = transient_inner_quadrature(
            spatial, temporal, omega, T, psi,
            (r / scales.mu) * std::cos(psi - phi));
      }
      acc += inner;
      mag += std::abs(inner);
    }
    // the trapezoid pairs psi and psi+pi into conjugates, so the imaginary
    // part must cancel to rounding
    assert(std::abs(acc.imag()) <= 1e-12 * mag + 1e-280);
    (void)mag;
    out.values[idx] = -acc.real() / n;
  });
  return out;
}

FieldGrid propagating_field(const FrontSet& front, const ProfileFn& pf,
                            const ScaleParams& scales, const GridSpec& grid,
                            double t, double band, double focal_threshold) {
  scales.validate();
  if (!(t > 0.0))
    throw std::invalid_argument("propagating_field: t must be positive");
  if (grid.nx <= 0 || grid.ny <= 0)
    throw std::invalid_argument("propagating_field: empty grid");
  const double mu = scales.mu;
  if (band <= 0.0)
    band = 12.0 * mu * scales.omega() * pf.spatial->b_max();

  FieldGrid out;
  out.origin = grid.origin;
  out.spacing = grid.spacing;
  out.nx = grid.nx;
  out.ny = grid.ny;
  out.t = t;
  out.component = FieldComponent::propagating;
  out.allocate();

  parallel_for(std::size_t(grid.nx) * grid.ny, [&](std::size_t idx) {
    const int ix = int(idx % grid.nx), iy = int(idx / grid.nx);
    const Vec2 x = out.cell(ix, iy);
    const ChartPoint cp = locate_branches(front, x, t, band, focal_threshold);
    if (cp.branches.empty()) {
      if (cp.dropped_focal > 0) {
        out.values[idx] = kMaskedSentinel;
        out.mask[idx] = 1;
      }
      return;
    }
    cplx sum{0.0, 0.0};
    for (const Branch& br : cp.branches) {
      cplx phase{1.0, 0.0};
      for (int j = 0; j < br.morse % 4; ++j) phase *= -I;  // e^{-i pi m/2}
      sum += phase / std::sqrt(br.xpsi_norm) *
             std::sqrt(front.c0 / br.c_at) *
             wave_profile(pf, br.S / mu, br.psi);
    }
    out.values[idx] = std::sqrt(mu) * sum.real();
  });
  return out;
}

FieldGrid total_field(const FieldGrid& transient,
                      const FieldGrid& propagating) {
  const bool match = transient.nx == propagating.nx &&
                     transient.ny == propagating.ny &&
                     transient.origin.x == propagating.origin.x &&
                     transient.origin.y == propagating.origin.y &&
                     transient.spacing.x == propagating.spacing.x &&
                     transient.spacing.y == propagating.spacing.y &&
                     transient.t == propagating.t;
  if (!match)
    throw std::invalid_argument("total_field: component grids do not match");
  FieldGrid out = transient;
  out.component = FieldComponent::total;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.mask[i] = transient.mask[i] || propagating.mask[i];
    out.values[i] = out.mask[i] ? kMaskedSentinel
                                : transient.values[i] + propagating.values[i];
  }
  return out;
}

}  // namespace raywave
