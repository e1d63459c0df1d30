// wqt_main.cpp — Command-line front end
//
// Exit codes: 0 success, 1 invalid input, 2 numerical or acceptance failure,
// 3 file system error.

#include <algorithm>
#include <cmath>
#include <complex>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "wqt/config.hpp"
#include "wqt/dynamics.hpp"
#include "wqt/errors.hpp"
#include "wqt/field.hpp"
#include "wqt/io.hpp"
#include "wqt/lattice.hpp"
#include "wqt/spectrum.hpp"
#include "wqt/thermodynamics.hpp"
#include "wqt/verify.hpp"

namespace {

using namespace wqt;

enum Exit { kOk = 0, kValidation = 1, kNumerical = 2, kIo = 3 };

// Command-line values; unset ones leave the config file (or default) alone.
struct Overrides {
    std::optional<std::string> config_path;
    std::optional<std::string> out;
    std::optional<unsigned> jobs;
    std::optional<double> tol;
    bool print_config{false};

    std::optional<double> gamma1d, delta_lw, detuning, omega0, t_max, x_d;
    std::optional<std::size_t> grid_points;
    std::optional<std::string> source;

    std::optional<std::vector<double>> delta_lw_list;
    std::optional<double> span;
    std::optional<std::size_t> points;
    bool check{false};

    std::optional<double> window, hop;

    bool skip_lattice{false};
    double tol_scale{1.0};

    std::optional<std::size_t> n_modes;
    std::optional<double> bandwidth, t_final;
    std::optional<std::string> checkpoint;
};

ScenarioConfig resolve(const Overrides& o) {
    ScenarioConfig c = o.config_path ? ScenarioConfig::load(*o.config_path) : ScenarioConfig{};
    if (o.out) c.out = *o.out;
    if (o.jobs) c.jobs = *o.jobs;
    if (o.tol) c.tol = *o.tol;
    if (o.gamma1d) c.gamma1d = *o.gamma1d;
    if (o.delta_lw) c.delta_lw = *o.delta_lw;
    if (o.detuning) c.detuning = *o.detuning;
    if (o.omega0) c.omega0 = *o.omega0;
    if (o.t_max) c.t_max = *o.t_max;
    if (o.x_d) c.x_d = *o.x_d;
    if (o.grid_points) c.grid_points = *o.grid_points;
    if (o.source) {
        if (*o.source == "scattering") c.source = EmitterSource::scattering;
        else if (*o.source == "spontaneous_emission") c.source = EmitterSource::spontaneous_emission;
        else throw ValidationError("--source must be scattering or spontaneous_emission");
    }
    if (o.delta_lw_list) c.delta_lw_list = *o.delta_lw_list;
    if (o.span) c.detuning_span = *o.span;
    if (o.points) c.detuning_points = *o.points;
    if (o.window) c.window_width = *o.window;
    if (o.hop) c.hop = *o.hop;
    if (o.n_modes) c.lattice_n_modes = *o.n_modes;
    if (o.bandwidth) c.lattice_bandwidth = *o.bandwidth;
    if (o.t_final) c.lattice_t_final = *o.t_final;
    c.validate();
    return c;
}

void report_warnings(const SimParams& p) {
    for (const auto& w : p.warnings()) std::cerr << "warning: " << w << '\n';
}

std::string out_path(const ScenarioConfig& c, const std::string& name) {
    return c.out + "/" + name;
}

// Time horizon for a freely decaying emitter: e^{-gamma1d t} below 1e-12.
double emission_horizon(const ScenarioConfig& c) {
    return c.t_max ? *c.t_max : 28.0 / c.gamma1d;
}

AmplitudeModel amplitude_model(const ScenarioConfig& c) {
    const SimParams p = c.sim_params();
    if (c.source == EmitterSource::scattering) return AmplitudeModel::scattering(p);
    return AmplitudeModel::spontaneous(c.gamma1d, p.omega_L());
}

int cmd_trace(const ScenarioConfig& c) {
    const SimParams p = c.sim_params();
    report_warnings(p);
    ensure_directory(c.out);
    CoefficientTrace tr;
    std::vector<double> grid;
    if (c.source == EmitterSource::scattering) {
        grid = default_grid(p);
        tr = coefficient_trace(p, grid);
    } else {
        grid = uniform_grid(p.t_min, emission_horizon(c), c.grid_points);
        tr = spontaneous_emission_trace(c.gamma1d, p.omega_L(), grid);
    }
    write_file(out_path(c, "trace.csv"), [&](std::ostream& os) { write_trace_csv(os, tr); });

    std::vector<double> det_grid = grid;
    for (auto& t : det_grid) t -= c.x_d;
    const auto det = detector_trace(amplitude_model(c), c.x_d, det_grid);
    write_file(out_path(c, "detector.csv"), [&](std::ostream& os) { write_detector_csv(os, det); });

    std::size_t poles = 0;
    for (auto f : tr.pole) poles += f;
    std::cerr << "trace: " << tr.size() << " samples (" << poles << " at zeros of psi) -> "
              << out_path(c, "trace.csv") << ", " << out_path(c, "detector.csv") << '\n';
    return kOk;
}

int cmd_sweep(const ScenarioConfig& c, bool check) {
    if (c.delta_lw_list.empty()) throw ValidationError("sweep: delta_lw_list is empty");
    if (c.detuning_points == 0) throw ValidationError("sweep: detuning grid is empty");
    const SimParams base = c.sim_params();
    report_warnings(base);
    ensure_directory(c.out);
    const auto grid = symmetric_grid(c.detuning_span, c.detuning_points);
    const auto table = detuning_sweep(base, c.delta_lw_list, grid, c.tol, c.jobs);
    write_file(out_path(c, "sweep.csv"), [&](std::ostream& os) { write_sweep_csv(os, table); });
    write_file(out_path(c, "sweep.json"), [&](std::ostream& os) { write_sweep_json(os, table); });

    int code = kOk;
    for (const auto& r : table.rows)
        if (!r.ok) {
            std::cerr << "row delta_lw=" << r.delta_lw << " detuning=" << r.detuning
                      << " failed: " << r.error << '\n';
            code = kNumerical;
        }
    std::cerr << "sweep: " << table.rows.size() << " rows -> " << out_path(c, "sweep.csv") << '\n';

    if (check) {
        double zero_w = 0.0, anti = 0.0;
        bool has_zero = false;
        for (double dlw : c.delta_lw_list) {
            const auto rows = table.rows_for(dlw);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i]->detuning == 0.0) {
                    has_zero = true;
                    zero_w = std::max(zero_w, std::abs(rows[i]->cycle.w_net));
                }
                anti = std::max(anti, std::abs(rows[i]->cycle.w_net +
                                               rows[rows.size() - 1 - i]->cycle.w_net));
            }
        }
        const bool ok = anti <= 2e-9 && (!has_zero || zero_w <= 1e-9);
        std::cerr << "check: max |W(0)| = " << zero_w << ", max |W(d)+W(-d)| = " << anti
                  << (ok ? "  ok" : "  VIOLATED") << '\n';
        if (!ok) code = kNumerical;
    }
    return code;
}

int cmd_spectrum(const ScenarioConfig& c) {
    const SimParams p = c.sim_params();
    report_warnings(p);
    ensure_directory(c.out);
    const bool emission = c.source == EmitterSource::spontaneous_emission;
    const double horizon = emission ? emission_horizon(c) : p.t_max;
    const auto grid = uniform_grid(0.0, horizon - c.x_d, std::max<std::size_t>(c.grid_points, 4096));
    const auto det = detector_trace(amplitude_model(c), c.x_d, grid);

    const double fast = emission ? c.gamma1d
                                 : std::max({c.gamma1d, c.delta_lw, std::abs(c.detuning)});
    SpectrumOptions so{c.resolved_window(), c.resolved_hop(), p.omega0, 10.0 * fast};
    const auto sg = time_windowed_spectrum(det, so);
    write_file(out_path(c, "spectrogram.csv"), [&](std::ostream& os) { write_spectrogram_csv(os, sg); });
    write_file(out_path(c, "spectrogram.json"), [&](std::ostream& os) { write_spectrogram_json(os, sg); });
    write_file(out_path(c, "peak_track.csv"), [&](std::ostream& os) { write_peak_track_csv(os, sg); });
    std::cerr << "spectrum: " << sg.centers.size() << " windows (" << sg.skipped
              << " below the power floor), resolution " << sg.resolution << '\n';
    return kOk;
}

int cmd_verify(const ScenarioConfig& c, bool skip_lattice, double tol_scale) {
    VerifyOptions opt;
    opt.skip_lattice = skip_lattice;
    opt.tol_scale = tol_scale;
    opt.jobs = c.jobs;
    opt.on_result = [](const CriterionResult& r) { std::cout << format_result(r) << std::endl; };
    const auto results = run_acceptance(opt);
    std::size_t failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
              << '\n';
    return failed == 0 ? kOk : kNumerical;
}

int cmd_lattice(const ScenarioConfig& c, const std::optional<std::string>& checkpoint) {
    const bool emission = c.source == EmitterSource::spontaneous_emission;
    SimParams p = c.sim_params();
    if (emission) {
        // The emitter sits at omega_L, matching the analytic emission model.
        // No packet: the only rate is gamma1d.
        p.omega0 = p.omega_L();
        p.detuning = 0.0;
        p.delta_lw = p.gamma1d;
    }
    report_warnings(p);
    ensure_directory(c.out);
    const double t_final = c.lattice_t_final ? *c.lattice_t_final
                           : emission        ? 18.5 / c.gamma1d
                                             : settle_time(p, 1e-8);
    LatticeConfig cfg = LatticeConfig::defaults_for(p, t_final);
    if (emission) {
        // No packet to capture: a 50 gamma1d band at the same spatial period.
        const double band = 50.0 * c.gamma1d;
        const double modes = std::ceil(double(cfg.n_modes) * band / cfg.bandwidth / 2.0) * 2.0;
        cfg.n_modes = std::max<std::size_t>(4096, std::size_t(modes));
        cfg.bandwidth = band;
    }
    if (c.lattice_n_modes) cfg.n_modes = *c.lattice_n_modes;
    if (c.lattice_bandwidth) cfg.bandwidth = *c.lattice_bandwidth;
    cfg.validate();
    if (cfg.low_fidelity(p)) std::cerr << "warning: lattice band is narrow; results are low fidelity\n";

    FieldState start = emission ? init_excited_tls(cfg, p) : init_exponential_packet(cfg, p);
    const LatticePropagator prop(cfg, p);
    std::cerr << "lattice: " << cfg.n_modes << " modes per channel, bandwidth " << cfg.bandwidth
              << ", evolving to t = " << t_final << '\n';

    const auto times = uniform_grid(0.0, t_final, 401);
    const auto psi = prop.psi_trace(start, times);
    write_file(out_path(c, "lattice_psi.csv"), [&](std::ostream& os) {
        os << "t,re_psi,im_psi,re_closed,im_closed\n";
        for (std::size_t i = 0; i < times.size(); ++i) {
            const cplx ref = emission ? spontaneous_emission_amplitude(c.gamma1d, p.omega0, times[i])
                                      : excited_amplitude_closed(p, times[i]);
            os << format_double(times[i]) << ',' << format_double(psi[i].real()) << ','
               << format_double(psi[i].imag()) << ',' << format_double(ref.real()) << ','
               << format_double(ref.imag()) << '\n';
        }
    });

    const FieldState end = prop.evolve(start, t_final);
    const auto xs = uniform_grid(-cfg.x_extent, cfg.x_extent, 1201);
    write_file(out_path(c, "snapshot.csv"),
               [&](std::ostream& os) { write_snapshot_csv(os, realspace_snapshot(end, xs)); });
    save_checkpoint(checkpoint ? *checkpoint : out_path(c, "checkpoint.bin"), end, p.gamma1d);

    std::cout << "norm_drift " << format_double(end.norm() - start.norm()) << '\n'
              << "pe_final " << format_double(std::norm(end.psi)) << '\n';
    try {
        const auto part = energy_partition(end);
        std::cout << "e_a " << format_double(part.e_a) << "\ne_b " << format_double(part.e_b)
                  << "\nnorm_a " << format_double(part.norm_a) << "\nnorm_b "
                  << format_double(part.norm_b) << '\n';
    } catch (const ValidationError& e) {
        std::cerr << "partition unavailable: " << e.what() << '\n';
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wqt: single-photon scattering on a two-level emitter in a waveguide"};
    app.require_subcommand(0, 1);
    app.fallthrough();
    Overrides o;

    app.add_option("--config", o.config_path, "flat JSON scenario file (unknown keys are errors)");
    app.add_option("--out", o.out, "output directory (default .)");
    app.add_option("--jobs", o.jobs, "worker threads for sweeps (default 1)")->check(CLI::PositiveNumber);
    app.add_option("--tol", o.tol, "absolute cycle-integral tolerance (default 1e-10)");
    app.add_flag("--print-config", o.print_config, "print the resolved configuration and exit");
    app.add_option("--gamma1d", o.gamma1d, "decay rate into the waveguide (default 1)");
    app.add_option("--delta-lw", o.delta_lw, "packet linewidth (default 10)");
    app.add_option("--detuning", o.detuning, "omega_L - omega0 (default 1)");
    app.add_option("--omega0", o.omega0, "TLS frequency (default 100 gamma1d)");
    app.add_option("--t-max", o.t_max, "time horizon (default: populations below 1e-13)");
    app.add_option("--grid-points", o.grid_points, "samples per trace (default 4096)");
    app.add_option("--source", o.source, "scattering | spontaneous_emission (default scattering)");
    app.add_option("--x-d", o.x_d, "detector position, < 0 (default -1)");

    auto* trace = app.add_subcommand("trace", "coefficient trace (trace.csv) and detector trace (detector.csv)");
    auto* sweep = app.add_subcommand("sweep", "net work over a detuning grid (sweep.csv, sweep.json)");
    sweep->add_option("--delta-lw-list", o.delta_lw_list, "linewidths (default 0.01 0.1 2 10)");
    sweep->add_option("--span", o.span, "detuning half-range (default 20)");
    sweep->add_option("--points", o.points, "detuning points (default 161)");
    sweep->add_flag("--check", o.check, "fail unless W(0) = 0 and W(d) = -W(-d)");
    auto* spectrum = app.add_subcommand("spectrum", "time-windowed spectrum and peak track");
    spectrum->add_option("--window", o.window, "window width (default 8/delta_lw, 8/gamma1d for emission)");
    spectrum->add_option("--hop", o.hop, "window hop (default width/4)");
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_flag("--skip-lattice", o.skip_lattice, "skip the lattice-oracle runs");
    verify->add_option("--tol-scale", o.tol_scale, "multiply every acceptance tolerance (default 1)");
    auto* lattice = app.add_subcommand("lattice", "discretized-continuum oracle run and dumps");
    lattice->add_option("--n-modes", o.n_modes, "modes per channel (default from the horizon, >= 4096)");
    lattice->add_option("--bandwidth", o.bandwidth, "band half-width (default: 99.9% packet capture)");
    lattice->add_option("--t-final", o.t_final, "final time (default: P_e < 1e-8)");
    lattice->add_option("--checkpoint", o.checkpoint, "checkpoint path (default OUT/checkpoint.bin)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        const ScenarioConfig c = resolve(o);
        if (o.print_config) {
            std::cout << c.to_json() << '\n';
            return kOk;
        }
        if (app.get_subcommands().empty()) throw ValidationError("a subcommand is required (see --help)");
        if (*trace) return cmd_trace(c);
        if (*sweep) return cmd_sweep(c, o.check);
        if (*spectrum) return cmd_spectrum(c);
        if (*verify) return cmd_verify(c, o.skip_lattice, o.tol_scale);
        if (*lattice) return cmd_lattice(c, o.checkpoint);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
    return kOk;
}
