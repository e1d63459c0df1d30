// thermodynamics.cpp — Cycle integrals of work and heat, sweeps and limits

#include "wqt/thermodynamics.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "wqt/errors.hpp"

namespace wqt {

namespace {

using boost::math::quadrature::gauss_kronrod;

struct Integral {
    double value{0.0};
    double error{0.0};
};

// Absolute-tolerance wrapper around Boost's relative-tolerance adaptive
// Gauss-Kronrod: one coarse pass for the L1 norm, then refinement if needed.
template <class F>
Integral integrate_panel(F&& f, double a, double b, double abs_tol) {
    double err = 0.0, l1 = 0.0;
    double v = gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err, &l1);
    if (err > abs_tol && l1 > 0.0) {
        const double rel = std::max(abs_tol / l1, 1e-15);
        v = gauss_kronrod<double, 31>::integrate(f, a, b, 18, rel, &err, &l1);
    }
    return {v, err};
}

// Panel boundaries: geometric near t = 0 (the Gamma(t) ~ -2/t region), then
// uniform with width tied to the fastest rate while the transient still beats
// against the driven response. The beat's relative size decays as
// e^{-|gamma1d - delta_lw| t/2}; once it is below 1e-16 the fluxes are sums of
// smooth exponentials and panels double in width.
std::vector<double> panel_edges(const SimParams& p) {
    const double fast = std::max({p.gamma1d, p.delta_lw, std::abs(p.detuning)});
    const double width = 4.0 / fast;
    std::vector<double> edges{0.0};
    double t = 1e-3 / fast;
    while (t < std::min(width, p.t_max)) {
        edges.push_back(t);
        t *= 4.0;
    }
    const double beat = 0.5 * std::abs(p.gamma1d - p.delta_lw);
    const double t_beat = beat > 0.0 ? std::min(p.t_max, 74.0 / beat) : p.t_max;
    const double start = edges.back();
    if (t_beat > start) {
        const auto n = static_cast<std::size_t>(std::ceil((t_beat - start) / width));
        for (std::size_t k = 1; k <= n; ++k)
            edges.push_back(k == n ? t_beat : start + (t_beat - start) * double(k) / double(n));
    }
    double w = width;
    while (edges.back() < p.t_max) {
        w *= 2.0;
        edges.push_back(std::min(p.t_max, edges.back() + w));
    }
    return edges;
}

// |u(t)| <= A * envelope(t) for every detuning.
double envelope(const SimParams& p, double t) {
    const double a = 0.5 * (p.gamma1d - p.delta_lw);
    if (std::abs(a) * t < 1e-8) return t * std::exp(-0.5 * p.gamma1d * t);
    return (std::exp(-0.5 * p.delta_lw * t) - std::exp(-0.5 * p.gamma1d * t)) / a;
}

// Bounds on the work and heat still to flow after t_max. |W'| is bounded from
// |u| <= A env, |u'| <= G/2 |u| + A e^{-Dt/2}, |u''| <= G/2 |u'| + A |D/2 + i d| e^{-Dt/2},
// integrated over 60 slow decay times. Since E(infinity) = 0 the heat tail is
// exactly -E(t_max) - W_tail, so |Q_tail| <= |E(t_max)| + |W_tail|.
std::pair<double, double> tail_bounds(const SimParams& p, double residual_energy) {
    const double amp = std::sqrt(0.5 * p.gamma1d * p.delta_lw);
    const double hg = 0.5 * p.gamma1d;
    const double rate = std::hypot(0.5 * p.delta_lw, p.detuning);
    auto w_bound = [&](double t) {
        const double u = amp * envelope(p, t);
        const double drive = amp * std::exp(-0.5 * p.delta_lw * t);
        const double du = hg * u + drive;
        const double ddu = hg * du + rate * drive;
        return ddu * u + du * du;
    };
    const double slow = std::min(p.gamma1d, p.delta_lw);
    const double end = p.t_max + 60.0 / slow;
    double err = 0.0;
    const double tw = gauss_kronrod<double, 61>::integrate(w_bound, p.t_max, end, 12, 1e-8, &err);
    // Factor 2 covers the truncation at `end` and the bound's own quadrature.
    return {2.0 * tw, std::abs(residual_energy) + 2.0 * tw};
}

struct PopulationScan {
    double max_pe{0.0};
    double t_at_max{0.0};
    double min_gamma{std::numeric_limits<double>::infinity()};
};

// Samples P_e and Gamma(t) 16 times per quadrature panel (dense where the
// dynamics oscillate, sparse on the smooth tail), then polishes the maximum.
PopulationScan scan_population(const ScatteringSolution& sol, const std::vector<double>& edges) {
    const auto& p = sol.params();
    constexpr int kPerPanel = 16;
    PopulationScan s;
    double best_lo = p.t_min, best_hi = p.t_max;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double a = std::max(edges[k], p.t_min), b = edges[k + 1];
        if (b <= a) continue;
        const double h = (b - a) / kPerPanel;
        for (int i = 0; i <= kPerPanel; ++i) {
            const double t = i == kPerPanel ? b : a + h * i;
            const double pe = sol.population(t);
            if (pe > s.max_pe) {
                s.max_pe = pe;
                s.t_at_max = t;
                best_lo = std::max(p.t_min, t - h);
                best_hi = std::min(p.t_max, t + h);
            }
            if (!sol.is_pole(t)) s.min_gamma = std::min(s.min_gamma, sol.decay_rate(t));
        }
    }
    const auto [t_opt, neg_pe] = boost::math::tools::brent_find_minima(
        [&](double t) { return -sol.population(t); }, best_lo, best_hi, 52);
    if (-neg_pe >= s.max_pe) {
        s.max_pe = -neg_pe;
        s.t_at_max = t_opt;
    }
    return s;
}

} // namespace

CycleResult run_cycle(const SimParams& p, double tol) {
    p.validate();
    if (!(tol > 0.0)) throw ValidationError("run_cycle: tol must be > 0");
    const ScatteringSolution sol(p);

    const auto edges = panel_edges(p);
    const double panel_tol = 0.25 * tol / double(edges.size() - 1);
    // Both fluxes vanish as t -> 0 (P_e ~ t^2); Gauss-Kronrod never samples the endpoint.
    auto wf = [&](double t) { return sol.work_flux(t); };
    auto qf = [&](double t) { return sol.heat_flux(t); };

    CycleResult r;
    double err_w = 0.0, err_q = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const auto iw = integrate_panel(wf, edges[k], edges[k + 1], panel_tol);
        const auto iq = integrate_panel(qf, edges[k], edges[k + 1], panel_tol);
        r.w_net += iw.value;
        r.q_net += iq.value;
        err_w += iw.error;
        err_q += iq.error;
    }
    r.residual_energy = sol.energy(p.t_max);
    const auto [tail_w, tail_q] = tail_bounds(p, r.residual_energy);
    r.tail_bound = tail_w + tail_q;
    r.quad_error = err_w + err_q + r.tail_bound;
    r.converged = r.quad_error <= tol;

    const auto scan = scan_population(sol, edges);
    r.max_pe = scan.max_pe;
    r.t_at_max_pe = scan.t_at_max;
    r.min_gamma = scan.min_gamma;
    r.had_negative_rate = scan.min_gamma < 0.0;
    return r;
}

std::vector<const SweepRow*> SweepTable::rows_for(double delta_lw) const {
    std::vector<const SweepRow*> out;
    for (const auto& row : rows)
        if (row.delta_lw == delta_lw) out.push_back(&row);
    return out;
}

SweepTable detuning_sweep(const SimParams& base, const std::vector<double>& delta_lw_list,
                          const std::vector<double>& detuning_grid, double tol, unsigned jobs) {
    if (delta_lw_list.empty()) throw ValidationError("detuning_sweep: empty linewidth list");
    if (detuning_grid.empty()) throw ValidationError("detuning_sweep: empty detuning grid");
    std::vector<double> grid = detuning_grid;
    std::sort(grid.begin(), grid.end());

    SweepTable table;
    for (double dlw : delta_lw_list)
        for (double d : grid) {
            SweepRow row;
            row.delta_lw = dlw;
            row.detuning = d;
            table.rows.push_back(row);
        }

    auto work = [&](SweepRow& row) {
        try {
            SimParams p = SimParams::make(base.gamma1d, row.delta_lw, row.detuning);
            p.omega0 = base.omega0;
            row.cycle = run_cycle(p, tol);
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.cycle.w_net = row.cycle.q_net = row.cycle.max_pe = row.cycle.quad_error = nan;
        }
    };

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(table.rows.size())));
    if (jobs == 1) {
        for (auto& row : table.rows) work(row);
        return table;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j)
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < table.rows.size(); k = next++) work(table.rows[k]);
            });
    }
    return table;
}

std::vector<CycleResult> monochromatic_limit_check(const SimParams& base, double detuning,
                                                   const std::vector<double>& delta_lw_sequence,
                                                   double tol) {
    if (delta_lw_sequence.empty())
        throw ValidationError("monochromatic_limit_check: empty linewidth sequence");
    for (std::size_t k = 0; k < delta_lw_sequence.size(); ++k) {
        if (!(delta_lw_sequence[k] > 0.0) ||
            (k > 0 && !(delta_lw_sequence[k] < delta_lw_sequence[k - 1])))
            throw ValidationError("monochromatic_limit_check: linewidths must be positive and "
                                  "strictly decreasing");
    }
    std::vector<CycleResult> out;
    for (double dlw : delta_lw_sequence) {
        SimParams p = SimParams::make(base.gamma1d, dlw, detuning);
        p.omega0 = base.omega0;
        out.push_back(run_cycle(p, tol));
    }
    return out;
}

double thermal_emitter_scaling(double w_net_inverted, double pe_T) {
    if (!(pe_T >= 0.0 && pe_T <= 0.5))
        throw ValidationError("thermal_emitter_scaling: pe_T must lie in [0, 1/2]");
    return pe_T * w_net_inverted;
}

PassivityReport passivity_monitor(const CoefficientTrace& trace) {
    PassivityReport r;
    for (double pe : trace.pe) r.max_pe = std::max(r.max_pe, pe);
    r.passive = r.max_pe < 0.5;
    return r;
}

std::vector<double> symmetric_grid(double span, std::size_t n) {
    if (n < 2) throw ValidationError("symmetric_grid: need at least two points");
    std::vector<double> g(n);
    const double m = double(n - 1);
    for (std::size_t k = 0; k < n; ++k) g[k] = span * (2.0 * double(k) - m) / m;
    return g;
}

} // namespace wqt
