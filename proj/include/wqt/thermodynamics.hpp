// thermodynamics.hpp — Work and heat exchanged by the TLS over one scattering
// cycle |g> -> |g>, and the net-work-versus-detuning sweep.
//
// Sign convention: w_net < 0 means the TLS delivers work to the field; q_net is
// the heat absorbed by the TLS.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wqt/dynamics.hpp"
#include "wqt/params.hpp"

namespace wqt {

struct CycleResult {
    double w_net{0.0};
    double q_net{0.0};
    double residual_energy{0.0};  // E(t_max) - E(0), E = omega_s P_e
    double max_pe{0.0};
    double t_at_max_pe{0.0};
    bool had_negative_rate{false};
    double min_gamma{0.0};        // smallest sampled Gamma(t)
    double quad_error{0.0};       // quadrature estimate plus tail bounds beyond t_max
    double tail_bound{0.0};
    bool converged{true};         // quad_error <= requested tolerance
};

inline constexpr double kDefaultCycleTolerance = 1e-10;

CycleResult run_cycle(const SimParams& p, double tol = kDefaultCycleTolerance);

struct SweepRow {
    double delta_lw{0.0};
    double detuning{0.0};
    CycleResult cycle;
    bool ok{true};
    std::string error;  // non-empty when ok == false
};

struct SweepTable {
    std::vector<SweepRow> rows;

    // Rows for one linewidth, in ascending detuning.
    std::vector<const SweepRow*> rows_for(double delta_lw) const;
};

// One run_cycle per (delta_lw, detuning). gamma1d and omega0 come from base;
// t_max/t_min are reset to their per-row defaults. jobs > 1 spreads rows over
// worker threads; output order does not depend on jobs.
SweepTable detuning_sweep(const SimParams& base, const std::vector<double>& delta_lw_list,
                          const std::vector<double>& detuning_grid,
                          double tol = kDefaultCycleTolerance, unsigned jobs = 1);

// Cycle results along a strictly decreasing linewidth sequence.
std::vector<CycleResult> monochromatic_limit_check(const SimParams& base, double detuning,
                                                   const std::vector<double>& delta_lw_sequence,
                                                   double tol = kDefaultCycleTolerance);

// Work for an emitter starting in a thermal state with excited population pe_T,
// relative to the fully inverted emitter.
double thermal_emitter_scaling(double w_net_inverted, double pe_T);

struct PassivityReport {
    double max_pe{0.0};
    bool passive{true};  // max_pe < 1/2; coherences vanish identically for c0 = 0
};

PassivityReport passivity_monitor(const CoefficientTrace& trace);

// Standard Fig.-2-style detuning grid: n points, symmetric, spanning [-span, span].
std::vector<double> symmetric_grid(double span, std::size_t n);

} // namespace wqt
