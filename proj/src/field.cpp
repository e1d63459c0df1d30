// field.cpp — Detector trace, effective color, interaction energy, partition

#include "wqt/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "wqt/errors.hpp"

namespace wqt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMinAmplitude = 1e-6;  // |psi| below this: phase not tracked
constexpr double kMinPopulation = 1e-8;

double fastest_rate(const SimParams& p) {
    return std::max({p.gamma1d, p.delta_lw, std::abs(p.detuning)});
}

// -d/dt arg psi by central differences, one Richardson step.
double phase_rate(const AmplitudeModel& m, double t, double h) {
    auto d = [&](double hh) {
        return std::arg(m.psi(t + hh) * std::conj(m.psi(t - hh))) / (2.0 * hh);
    };
    return -(4.0 * d(0.5 * h) - d(h)) / 3.0;
}

} // namespace

AmplitudeModel AmplitudeModel::scattering(const SimParams& p) {
    p.validate();
    auto sol = std::make_shared<ScatteringSolution>(p);
    AmplitudeModel m;
    m.psi = [sol](double t) { return sol->psi(t); };
    m.psi_dot = [sol](double t) { return sol->psi_dot(t); };
    m.gamma1d = p.gamma1d;
    m.carrier = std::max(p.omega0, p.omega_L());
    m.fastest = fastest_rate(p);
    return m;
}

AmplitudeModel AmplitudeModel::spontaneous(double gamma1d, double omega_L) {
    if (!(gamma1d > 0.0)) throw ValidationError("spontaneous emission: gamma1d must be > 0");
    AmplitudeModel m;
    m.psi = [=](double t) { return spontaneous_emission_amplitude(gamma1d, omega_L, t); };
    m.psi_dot = [=](double t) {
        return -cplx(0.5 * gamma1d, omega_L) * spontaneous_emission_amplitude(gamma1d, omega_L, t);
    };
    m.gamma1d = gamma1d;
    m.carrier = omega_L;
    m.fastest = gamma1d;
    return m;
}

DetectorTrace detector_trace(const AmplitudeModel& m, double x_d, const std::vector<double>& grid) {
    if (!(x_d < 0.0) || !std::isfinite(x_d))
        throw ValidationError("detector_trace: x_d must be finite and < 0");
    const double delay = -x_d;
    const double scale = std::sqrt(0.5 * m.gamma1d);
    const double h_max = 0.1 / (std::abs(m.carrier) + m.fastest);

    DetectorTrace det;
    det.x_d = x_d;
    det.times = grid;
    const std::size_t n = grid.size();
    det.amp_b.resize(n);
    det.intensity.resize(n);
    det.eff_color.assign(n, kNaN);
    det.valid.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = grid[i];
        if (!std::isfinite(t) || t < 0.0)
            throw ValidationError("detector_trace: times must be finite and >= 0");
        const double tr = t - delay;
        if (tr < 0.0) continue;  // amp_b stays 0 before the light cone
        const cplx psi = m.psi(tr);
        det.amp_b[i] = scale * psi;
        det.intensity[i] = std::norm(det.amp_b[i]);
        const double mag = std::abs(psi);
        if (mag < kMinAmplitude) continue;
        const double speed = std::abs(m.psi_dot(tr));
        double h = std::min(h_max, 0.25 * tr);
        if (speed > 0.0) h = std::min(h, 0.1 * mag / speed);
        if (h < 1e-12 * std::max(1.0, tr)) continue;
        const double w = phase_rate(m, tr, h);
        if (!std::isfinite(w)) continue;
        det.eff_color[i] = w;
        det.valid[i] = 1;
    }
    return det;
}

DetectorTrace detector_trace(const SimParams& p, double x_d, const std::vector<double>& grid) {
    return detector_trace(AmplitudeModel::scattering(p), x_d, grid);
}

cplx coupled_onsite_field(const SimParams& p, double t) {
    const double amp = std::sqrt(0.5 * p.gamma1d * p.delta_lw);
    const cplx drive = amp * std::exp(-cplx(0.5 * p.delta_lw, p.omega_L()) * t);
    return drive + 0.25 * p.gamma1d * excited_amplitude_closed(p, t);
}

double interaction_energy(const SimParams& p, double t) {
    if (!(t >= 0.0)) throw ValidationError("interaction_energy: t must be >= 0");
    // Rotating frame: the common e^{-i omega0 t} cancels, so the result is
    // exactly zero when u is real (zero detuning).
    const ScatteringSolution sol(p);
    const cplx u = sol.rotating(t).u;
    const cplx drive = sol.drive_amplitude() * std::exp(-cplx(0.5 * p.delta_lw, p.detuning) * t);
    return 2.0 * ((drive + 0.25 * p.gamma1d * u) * std::conj(u)).imag();
}

double interaction_frequency_rate(const SimParams& p, double t) {
    if (!(t > 0.0)) throw ValidationError("interaction_frequency_rate: t must be > 0");
    const ScatteringSolution sol(p);
    const double h = std::min(0.01 / fastest_rate(p), 0.25 * t);
    auto half_ratio = [&](double s) {
        const double pe = sol.population(s);
        if (pe < kMinPopulation)
            throw ValidationError("interaction_frequency_rate: P_e below 1e-8 near t = " +
                                  std::to_string(s));
        return 0.5 * interaction_energy(p, s) / pe;
    };
    auto d = [&](double hh) { return (half_ratio(t + hh) - half_ratio(t - hh)) / (2.0 * hh); };
    return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

EnergyPartition energy_partition(const FieldState& s) {
    if (std::norm(s.psi) >= kMinPopulation)
        throw ValidationError("energy_partition: TLS still excited (P_e = " +
                              std::to_string(std::norm(s.psi)) + ")");
    const double edge = edge_probability(s);
    if (edge > 1e-6)
        throw NumericalError("energy_partition: field reached the cell boundary (edge probability " +
                             std::to_string(edge) + ")");
    EnergyPartition out;
    for (std::size_t j = 0; j < s.grid.n; ++j) {
        const double w = s.grid.frequency(j);
        const double pa = std::norm(s.phi_a[j]);
        const double pb = std::norm(s.phi_b[j]);
        out.e_a += w * pa;
        out.e_b += w * pb;
        out.norm_a += pa;
        out.norm_b += pb;
    }
    const double total = out.norm_a + out.norm_b;
    if (!(total > 0.0)) throw NumericalError("energy_partition: empty field");
    out.norm_a /= total;
    out.norm_b /= total;
    return out;
}

} // namespace wqt
