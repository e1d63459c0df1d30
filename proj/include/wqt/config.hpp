// config.hpp — Flat JSON scenario configuration shared by all subcommands

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wqt/lattice.hpp"
#include "wqt/params.hpp"

namespace wqt {

enum class EmitterSource { scattering, spontaneous_emission };

struct ScenarioConfig {
    double gamma1d{1.0};
    double delta_lw{10.0};
    double detuning{1.0};
    std::optional<double> omega0;  // default 100 gamma1d
    std::optional<double> t_max;
    std::optional<double> t_min;
    std::size_t grid_points{4096};
    EmitterSource source{EmitterSource::scattering};

    double x_d{-1.0};
    std::vector<double> delta_lw_list{0.01, 0.1, 2.0, 10.0};
    double detuning_span{20.0};
    std::size_t detuning_points{161};
    double tol{1e-10};
    unsigned jobs{1};

    std::optional<double> window_width;  // default 8 / delta_lw (8 / gamma1d for emission)
    std::optional<double> hop;           // default window_width / 4

    std::optional<std::size_t> lattice_n_modes;
    std::optional<double> lattice_bandwidth;
    std::optional<double> lattice_t_final;  // default: P_e < 1e-8

    std::string out{"."};

    // Throws ValidationError on unknown keys or mistyped values.
    static ScenarioConfig from_json_text(const std::string& text);
    static ScenarioConfig load(const std::string& path);
    std::string to_json() const;

    SimParams sim_params() const;
    double resolved_window() const;
    double resolved_hop() const;
    void validate() const;
};

const char* to_string(EmitterSource s);

} // namespace wqt
