// dynamics.cpp — Closed-form excited amplitude and master-equation coefficients

#include "wqt/dynamics.hpp"

#include <cmath>
#include <limits>

#include "wqt/errors.hpp"

namespace wqt {

namespace {

constexpr double kDegenerateKappa = 1e-9;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

} // namespace

cplx cexpm1(cplx z) {
    const double x = z.real();
    const double y = z.imag();
    const double sh = std::sin(0.5 * y);
    // e^x cos y - 1 = expm1(x) cos y + (cos y - 1)
    const double re = std::expm1(x) * std::cos(y) - 2.0 * sh * sh;
    const double im = std::exp(x) * std::sin(y);
    return {re, im};
}

const char* to_string(AmplitudeSource s) {
    switch (s) {
    case AmplitudeSource::closed_form: return "closed_form";
    case AmplitudeSource::ode_oracle: return "ode_oracle";
    case AmplitudeSource::lattice_oracle: return "lattice_oracle";
    }
    return "unknown";
}

namespace {

const SimParams& validated(const SimParams& p) {
    p.validate();
    return p;
}

} // namespace

ScatteringSolution::ScatteringSolution(const SimParams& p)
    : p_(validated(p)),
      amp_(std::sqrt(0.5 * p.gamma1d * p.delta_lw)),
      kappa_(0.5 * (p.gamma1d - p.delta_lw), -p.detuning),
      drive_rate_(0.5 * p.delta_lw, p.detuning),
      degenerate_(std::abs(kappa_) < kDegenerateKappa) {}

RotatingAmplitude ScatteringSolution::rotating(double t) const {
    const double half_gamma = 0.5 * p_.gamma1d;
    const cplx f = amp_ * std::exp(-drive_rate_ * t);
    cplx u;
    if (degenerate_) {
        const cplx kt = kappa_ * t;
        u = -amp_ * std::exp(-half_gamma * t) * t * (1.0 + kt * (0.5 + kt / 6.0));
    } else if (kappa_.real() >= 0.0) {
        u = f * cexpm1(-kappa_ * t) / kappa_;
    } else {
        u = -amp_ * std::exp(-half_gamma * t) * cexpm1(kappa_ * t) / kappa_;
    }
    const cplx du = -half_gamma * u - f;
    const cplx ddu = -half_gamma * du + drive_rate_ * f;
    return {u, du, ddu};
}

cplx ScatteringSolution::psi(double t) const {
    return std::polar(1.0, -p_.omega0 * t) * rotating(t).u;
}

cplx ScatteringSolution::psi_dot(double t) const {
    const auto r = rotating(t);
    return std::polar(1.0, -p_.omega0 * t) * (r.du - cplx(0.0, p_.omega0) * r.u);
}

double ScatteringSolution::population(double t) const { return std::norm(rotating(t).u); }

double ScatteringSolution::population_rate(double t) const {
    const auto r = rotating(t);
    return 2.0 * (std::conj(r.u) * r.du).real();
}

bool ScatteringSolution::is_pole(double t) const {
    if (t <= 0.0) return true;
    if (degenerate_) return false;
    const double k = std::abs(kappa_);
    const cplx ell = kappa_.real() >= 0.0 ? cexpm1(-kappa_ * t) : cexpm1(kappa_ * t);
    return std::abs(ell) / k < 1e-12 * std::min(t, 1.0 / k);
}

cplx ScatteringSolution::ratio(double t) const {
    if (degenerate_) return 1.0 / t + kappa_ * (0.5 + kappa_ * t / 12.0);
    if (kappa_.real() >= 0.0) return -kappa_ / cexpm1(-kappa_ * t);
    return kappa_ * std::exp(kappa_ * t) / cexpm1(kappa_ * t);
}

cplx ScatteringSolution::ratio_rate(double t) const {
    if (degenerate_) return -1.0 / (t * t) + kappa_ * kappa_ / 12.0;
    const cplx sgn_kt = kappa_.real() >= 0.0 ? -kappa_ * t : kappa_ * t;
    const cplx m = cexpm1(sgn_kt);
    return -kappa_ * kappa_ * (m + 1.0) / (m * m);
}

cplx ScatteringSolution::log_derivative(double t) const {
    if (is_pole(t)) throw PoleCondition(t);
    return cplx(-0.5 * p_.gamma1d, -p_.omega0) + ratio(t);
}

double ScatteringSolution::frequency(double t) const { return -log_derivative(t).imag(); }

double ScatteringSolution::frequency_rate(double t) const {
    if (is_pole(t)) throw PoleCondition(t);
    return -ratio_rate(t).imag();
}

double ScatteringSolution::decay_rate(double t) const { return -2.0 * log_derivative(t).real(); }

cplx ScatteringSolution::unit_phase_ratio(const RotatingAmplitude& r) const {
    // conj(u)/u; at an exact zero of u the limit is conj(u')/u'.
    const cplx z = std::abs(r.u) > 0.0 ? r.u : r.du;
    const double n = std::abs(z);
    if (n == 0.0) return 1.0;
    const cplx w = z / n;
    return std::conj(w) * std::conj(w);
}

double ScatteringSolution::work_flux(double t) const {
    const auto r = rotating(t);
    const cplx ph = unit_phase_ratio(r);
    return -(r.ddu * std::conj(r.u)).imag() + (r.du * r.du * ph).imag();
}

double ScatteringSolution::heat_flux(double t) const {
    const auto r = rotating(t);
    const cplx ph = unit_phase_ratio(r);
    return p_.omega0 * 2.0 * (std::conj(r.u) * r.du).real() - (r.du * r.du * ph).imag();
}

double ScatteringSolution::energy(double t) const {
    const auto r = rotating(t);
    return p_.omega0 * std::norm(r.u) - (r.du * std::conj(r.u)).imag();
}

cplx excited_amplitude_closed(const SimParams& p, double t) {
    if (t < 0.0) throw ValidationError("excited_amplitude_closed: t must be >= 0");
    return ScatteringSolution(p).psi(t);
}

AmplitudeTrace closed_form_trace(const SimParams& p, const std::vector<double>& grid) {
    const ScatteringSolution sol(p);
    AmplitudeTrace tr;
    tr.times = grid;
    tr.psi.reserve(grid.size());
    for (double t : grid) tr.psi.push_back(sol.psi(t));
    tr.source = AmplitudeSource::closed_form;
    return tr;
}

cplx spontaneous_emission_amplitude(double gamma1d, double omega_L, double t) {
    if (t < 0.0) throw ValidationError("spontaneous_emission_amplitude: t must be >= 0");
    return std::exp(-cplx(0.5 * gamma1d, omega_L) * t);
}

double spontaneous_emission_frequency(double /*gamma1d*/, double omega_L, double /*t*/) {
    return omega_L;
}

double spontaneous_emission_decay_rate(double gamma1d, double /*omega_L*/, double /*t*/) {
    return gamma1d;
}

double instantaneous_frequency(const SimParams& p, double t) {
    if (!(t > 0.0)) throw PoleCondition(t);
    const double d = p.detuning;
    const double g = 0.5 * (p.delta_lw - p.gamma1d);
    if (std::hypot(g, d) < kDegenerateKappa) return p.omega0 + 0.5 * d;

    // u = s / (c - E); d/dt atan(u) = (s'(c - E) - s(c' - E')) / ((c - E)^2 + s^2).
    // For E > 1 numerator and denominator are divided by E^2.
    const double x = g * t;
    const double s = std::sin(d * t);
    const double sh = std::sin(0.5 * d * t);
    const double one_minus_c = 2.0 * sh * sh;
    double num, den;
    if (x <= 0.0) {
        const double e = std::exp(x);
        const double em1 = std::expm1(x);
        num = d * (-em1 + e * one_minus_c) + g * s * e;
        den = em1 * em1 + 4.0 * e * sh * sh;
    } else {
        const double ei = std::exp(-x);
        const double em1 = std::expm1(-x);
        num = d * ei * (em1 + one_minus_c) + g * s * ei;
        den = em1 * em1 + 4.0 * ei * sh * sh;
    }
    const double kt = std::hypot(g, d) * t;
    if (den < 1e-24 * std::min(1.0, kt * kt)) throw PoleCondition(t);
    return p.omega0 + num / den;
}

double instantaneous_decay_rate(const SimParams& p, double t) {
    return ScatteringSolution(p).decay_rate(t);
}

CoefficientTrace coefficient_trace(const SimParams& p, const std::vector<double>& grid) {
    const ScatteringSolution sol(p);
    CoefficientTrace tr;
    const auto n = grid.size();
    tr.times = grid;
    tr.omega_s.resize(n);
    tr.gamma_t.resize(n);
    tr.pe.resize(n);
    tr.w_flux.resize(n);
    tr.q_flux.resize(n);
    tr.pole.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = grid[k];
        tr.pe[k] = sol.population(t);
        tr.w_flux[k] = sol.work_flux(t);
        tr.q_flux[k] = sol.heat_flux(t);
        if (sol.is_pole(t)) {
            tr.pole[k] = 1;
            tr.omega_s[k] = kNaN;
            tr.gamma_t[k] = kNaN;
        } else {
            tr.omega_s[k] = sol.frequency(t);
            tr.gamma_t[k] = sol.decay_rate(t);
        }
    }
    return tr;
}

CoefficientTrace spontaneous_emission_trace(double gamma1d, double omega_L,
                                            const std::vector<double>& grid) {
    CoefficientTrace tr;
    const auto n = grid.size();
    tr.times = grid;
    tr.omega_s.assign(n, omega_L);
    tr.gamma_t.assign(n, gamma1d);
    tr.pe.resize(n);
    tr.w_flux.assign(n, 0.0);
    tr.q_flux.resize(n);
    tr.pole.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const double pe = std::exp(-gamma1d * grid[k]);
        tr.pe[k] = pe;
        tr.q_flux[k] = -gamma1d * omega_L * pe;
    }
    return tr;
}

} // namespace wqt
