// oracles.hpp — Reference values computed independently of the library's
// closed forms: direct quadrature, brute-force scans, dense linear algebra.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// Rotating-frame amplitude u(t) by composite Simpson on the
// variation-of-constants integral u(t) = -A int_0^t e^{-G(t-s)/2} e^{-(D/2+i d)s} ds.
inline cplx amplitude_by_quadrature(double gamma, double dlw, double det, double t,
                                    int intervals = 20000) {
    const double amp = std::sqrt(0.5 * gamma * dlw);
    const double h = t / intervals;
    cplx acc = 0.0;
    for (int k = 0; k <= intervals; ++k) {
        const double s = k * h;
        const double w = (k == 0 || k == intervals) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        acc += w * std::exp(-0.5 * gamma * (t - s)) * std::exp(-cplx(0.5 * dlw, det) * s);
    }
    return -amp * acc * h / 3.0;
}

// Textbook two-exponential form, valid away from gamma == dlw at zero detuning.
inline cplx amplitude_naive(double gamma, double dlw, double det, double t) {
    const double amp = std::sqrt(0.5 * gamma * dlw);
    const cplx kappa(0.5 * (gamma - dlw), -det);
    return -amp * std::exp(-0.5 * gamma * t) * (std::exp(kappa * t) - 1.0) / kappa;
}

inline cplx amplitude_naive_rate(double gamma, double dlw, double det, double t) {
    const double amp = std::sqrt(0.5 * gamma * dlw);
    return -0.5 * gamma * amplitude_naive(gamma, dlw, det, t) -
           amp * std::exp(-cplx(0.5 * dlw, det) * t);
}

// Net work by parts, W = -int omega_s dP_e/dt dt (boundary terms vanish over a
// full cycle), with omega_s - omega0 = -Im(u'/u) from the naive amplitude and
// the trapezoid rule on n uniform points. Only valid where u has no zeros,
// i.e. dlw != gamma.
inline double net_work_trapezoid(double gamma, double dlw, double det, double t_max,
                                 std::size_t n = 1000000) {
    const double h = t_max / double(n - 1);
    auto integrand = [&](double t) {
        const cplx u = amplitude_naive(gamma, dlw, det, t);
        const cplx du = amplitude_naive_rate(gamma, dlw, det, t);
        const double shift = -(du / u).imag();
        const double dpe = 2.0 * (std::conj(u) * du).real();
        return -shift * dpe;
    };
    double acc = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double t = h * double(k);
        acc += (k == n - 1 ? 0.5 : 1.0) * integrand(t);
    }
    return acc * h;  // integrand(0) = 0
}

// Maximum of |u|^2 on a dense uniform grid.
inline double max_population_scan(double gamma, double dlw, double det, double t_max,
                                  std::size_t n = 2000000) {
    double best = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = t_max * double(k) / double(n - 1);
        best = std::max(best, std::norm(amplitude_naive(gamma, dlw, det, t)));
    }
    return best;
}

// Excited-state decay through a flat band [-B, B] (continuum limit): pole of
// z = Sigma(z) on the second sheet, Sigma(z) = (G/2pi) ln((z+B)/(z-B)) - i G
// for Im z < 0 (principal log), and its residue, so
// that P(t) ~ |Z|^2 e^{2 Im(z) t} once branch-cut transients have died out.
struct FiniteBandPole {
    cplx z;
    cplx residue;
};

inline FiniteBandPole finite_band_pole(double gamma, double band) {
    const double c = gamma / (2.0 * 3.14159265358979323846);
    auto sigma = [&](cplx z) { return c * std::log((z + band) / (z - band)) - cplx(0.0, gamma); };
    auto dsigma = [&](cplx z) { return c * (1.0 / (z + band) - 1.0 / (z - band)); };
    cplx z(0.0, -0.5 * gamma);
    for (int i = 0; i < 50; ++i) z -= (z - sigma(z)) / (1.0 - dsigma(z));
    return {z, 1.0 / (1.0 - dsigma(z))};
}

} // namespace oracle
