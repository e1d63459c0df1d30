// dynamics.hpp — Exact one-excitation dynamics of a TLS driven by an
// exponential single-photon packet, and the master-equation coefficients
// derived from it.
//
// With u(t) = psi(t) e^{i omega0 t} the excited amplitude obeys
//
//     u' = -(gamma1d/2) u - A exp[-(delta_lw/2 + i detuning) t],   u(0) = 0,
//
// with drive strength A = sqrt(gamma1d * delta_lw / 2), so that
//
//     u(t) = -A e^{-gamma1d t/2} expm1(kappa t) / kappa,
//     kappa = (gamma1d - delta_lw)/2 - i detuning.
//
// All ratios psi'/psi are evaluated from this form, never by differencing
// sampled amplitudes.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "wqt/params.hpp"

namespace wqt {

using cplx = std::complex<double>;

// e^z - 1 without cancellation for small |z|.
cplx cexpm1(cplx z);

enum class AmplitudeSource { closed_form, ode_oracle, lattice_oracle };

const char* to_string(AmplitudeSource s);

struct AmplitudeTrace {
    std::vector<double> times;
    std::vector<cplx> psi;
    AmplitudeSource source{AmplitudeSource::closed_form};
};

struct CoefficientTrace {
    std::vector<double> times;
    std::vector<double> omega_s;
    std::vector<double> gamma_t;
    std::vector<double> pe;
    std::vector<double> w_flux;
    std::vector<double> q_flux;
    // 1 where psi vanishes and omega_s / gamma_t are undefined (set to NaN).
    std::vector<std::uint8_t> pole;

    std::size_t size() const { return times.size(); }
};

// Rotating-frame amplitude and its first two time derivatives.
struct RotatingAmplitude {
    cplx u;
    cplx du;
    cplx ddu;
};

class ScatteringSolution {
public:
    explicit ScatteringSolution(const SimParams& p);

    const SimParams& params() const { return p_; }
    double drive_amplitude() const { return amp_; }
    cplx kappa() const { return kappa_; }
    // |kappa| below 1e-9: mode-matched resonance, handled by the t e^{-gamma t/2} limit.
    bool degenerate() const { return degenerate_; }

    cplx psi(double t) const;
    cplx psi_dot(double t) const;
    RotatingAmplitude rotating(double t) const;

    double population(double t) const;
    double population_rate(double t) const;

    // psi'/psi = -i omega0 - gamma1d/2 + R(t); throws PoleCondition at zeros of psi.
    cplx log_derivative(double t) const;
    double frequency(double t) const;
    double frequency_rate(double t) const;
    double decay_rate(double t) const;
    bool is_pole(double t) const;

    // Work and heat fluxes in a form that stays finite through zeros of psi:
    //   W' = -Im(u'' conj u) + Im(u'^2 conj(u)/u)
    //   Q' = omega0 dP/dt     - Im(u'^2 conj(u)/u)
    double work_flux(double t) const;
    double heat_flux(double t) const;
    // E(t) = omega_s P_e = omega0 P_e - Im(u' conj u)
    double energy(double t) const;

private:
    cplx unit_phase_ratio(const RotatingAmplitude& r) const;
    // R(t) and dR/dt of psi'/psi, stable for either sign of Re kappa.
    cplx ratio(double t) const;
    cplx ratio_rate(double t) const;

    SimParams p_;
    double amp_;
    cplx kappa_;
    cplx drive_rate_;  // delta_lw/2 + i detuning
    bool degenerate_;
};

cplx excited_amplitude_closed(const SimParams& p, double t);
AmplitudeTrace closed_form_trace(const SimParams& p, const std::vector<double>& grid);

// Independent oracle: adaptive Runge-Kutta-Fehlberg 7(8) integration of the
// rotating-frame amplitude equation (local error control 1e-13).
AmplitudeTrace excited_amplitude_ode(const SimParams& p, const std::vector<double>& grid);

cplx spontaneous_emission_amplitude(double gamma1d, double omega_L, double t);
// psi_SE'/psi_SE = -(gamma1d/2 + i omega_L), so both are time independent.
double spontaneous_emission_frequency(double gamma1d, double omega_L, double t);
double spontaneous_emission_decay_rate(double gamma1d, double omega_L, double t);

// omega_s from the closed arctan expression
//   omega_s = omega0 + d/dt atan( sin(dt) / [cos(dt) - e^{(Delta - Gamma) t/2}] )
// differentiated analytically (u'/(1+u^2) with the poles of u cleared).
double instantaneous_frequency(const SimParams& p, double t);
double instantaneous_decay_rate(const SimParams& p, double t);

CoefficientTrace coefficient_trace(const SimParams& p, const std::vector<double>& grid);
CoefficientTrace spontaneous_emission_trace(double gamma1d, double omega_L,
                                            const std::vector<double>& grid);

} // namespace wqt
