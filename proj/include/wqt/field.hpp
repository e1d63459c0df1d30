// field.hpp — Outgoing-field observables: detector amplitude, effective color,
// interaction energy and the channel energy partition.
//
// The reflected field at x_d < 0 is phi_b(x_d, t) = sqrt(gamma1d/2) psi(t - |x_d|),
// normalized so that integrating |phi_b|^2 over time gives the reflected
// photon number.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wqt/dynamics.hpp"
#include "wqt/lattice.hpp"
#include "wqt/params.hpp"

namespace wqt {

// Lab-frame TLS amplitude and its derivative, for either a driven or a freely
// decaying emitter.
struct AmplitudeModel {
    std::function<cplx(double)> psi;
    std::function<cplx(double)> psi_dot;
    double gamma1d{1.0};
    double carrier{0.0};    // central optical frequency
    double fastest{1.0};    // fastest envelope rate

    static AmplitudeModel scattering(const SimParams& p);
    static AmplitudeModel spontaneous(double gamma1d, double omega_L);
};

struct DetectorTrace {
    double x_d{-1.0};
    std::vector<double> times;
    std::vector<cplx> amp_b;
    std::vector<double> intensity;
    std::vector<double> eff_color;  // NaN where invalid
    // 0 where the phase derivative is unreliable: before the retarded light
    // cone or too close to a zero of psi.
    std::vector<std::uint8_t> valid;

    std::size_t size() const { return times.size(); }
};

DetectorTrace detector_trace(const AmplitudeModel& m, double x_d, const std::vector<double>& grid);
DetectorTrace detector_trace(const SimParams& p, double x_d, const std::vector<double>& grid);

// g phi_a(0, t) with the mean of the left and right limits at the TLS:
// A exp[-(delta_lw/2 + i omega_L) t] + (gamma1d/4) psi(t).
cplx coupled_onsite_field(const SimParams& p, double t);

// <H_int>(t) = 2 Im[g phi_a(0, t) conj(psi(t))]
double interaction_energy(const SimParams& p, double t);

// (1/2) d/dt (<H_int>/P_e) by Richardson-extrapolated central differences;
// throws ValidationError where P_e < 1e-8 in the stencil.
double interaction_frequency_rate(const SimParams& p, double t);

struct EnergyPartition {
    double e_a{0.0};
    double e_b{0.0};
    double norm_a{0.0};
    double norm_b{0.0};
};

// Mode-sum energies of the final field. Requires P_e < 1e-8 (ValidationError)
// and less than 1e-6 probability near the cell edges (NumericalError).
EnergyPartition energy_partition(const FieldState& final_field);

} // namespace wqt
