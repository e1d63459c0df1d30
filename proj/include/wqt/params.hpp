// params.hpp — Physical parameters of one single-photon scattering scenario
//
// Natural units throughout: hbar = 1, c = 1, rates and frequencies in units of
// gamma1d (default 1), times in units of 1/gamma1d.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace wqt {

struct SimParams {
    double gamma1d{1.0};   // vacuum decay rate into the waveguide
    double delta_lw{1.0};  // packet linewidth
    double detuning{0.0};  // omega_L - omega0, any sign
    double omega0{100.0};  // bare TLS frequency
    double t_max{0.0};     // cycle horizon
    double t_min{0.0};     // first time at which psi_dot/psi is evaluated
    std::size_t grid_points{4096};

    double omega_L() const { return omega0 + detuning; }

    // Throws ValidationError on a violated hard invariant.
    void validate() const;
    // Soft checks (rotating-wave guard); empty when everything is in regime.
    std::vector<std::string> warnings() const;

    // Fills omega0 = 100 gamma1d, t_max and t_min with their defaults.
    static SimParams make(double gamma1d, double delta_lw, double detuning);
};

// Smallest horizon for which exp(-gamma1d t) and exp(-delta_lw t) are below
// 1e-12 and the population envelope is below 1e-13.
double default_t_max(double gamma1d, double delta_lw);
double default_t_min(double gamma1d, double delta_lw);

// n points, uniform, both ends included.
std::vector<double> uniform_grid(double t0, double t1, std::size_t n);
std::vector<double> default_grid(const SimParams& p);

} // namespace wqt
