// config.cpp — JSON parsing and resolution of scenario configs

#include "wqt/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wqt/errors.hpp"

namespace wqt {

using nlohmann::json;

const char* to_string(EmitterSource s) {
    return s == EmitterSource::scattering ? "scattering" : "spontaneous_emission";
}

namespace {

template <class T>
T get_as(const json& j, const std::string& key) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ValidationError("config: key '" + key + "' has the wrong type");
    }
}

double get_number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ValidationError("config: key '" + key + "' must be a number");
    return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& key) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw ValidationError("config: key '" + key + "' must be a non-negative integer");
    return j.get<std::size_t>();
}

} // namespace

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("config: top level must be an object");

    ScenarioConfig c;
    for (const auto& [key, v] : doc.items()) {
        if (key == "gamma1d") c.gamma1d = get_number(v, key);
        else if (key == "delta_lw") c.delta_lw = get_number(v, key);
        else if (key == "detuning") c.detuning = get_number(v, key);
        else if (key == "omega0") c.omega0 = get_number(v, key);
        else if (key == "t_max") c.t_max = get_number(v, key);
        else if (key == "t_min") c.t_min = get_number(v, key);
        else if (key == "grid_points") c.grid_points = get_count(v, key);
        else if (key == "source") {
            const auto s = get_as<std::string>(v, key);
            if (s == "scattering") c.source = EmitterSource::scattering;
            else if (s == "spontaneous_emission") c.source = EmitterSource::spontaneous_emission;
            else throw ValidationError("config: source must be 'scattering' or 'spontaneous_emission'");
        }
        else if (key == "x_d") c.x_d = get_number(v, key);
        else if (key == "delta_lw_list") {
            if (!v.is_array()) throw ValidationError("config: delta_lw_list must be an array");
            c.delta_lw_list.clear();
            for (const auto& e : v) c.delta_lw_list.push_back(get_number(e, key));
        }
        else if (key == "detuning_span") c.detuning_span = get_number(v, key);
        else if (key == "detuning_points") c.detuning_points = get_count(v, key);
        else if (key == "tol") c.tol = get_number(v, key);
        else if (key == "jobs") c.jobs = unsigned(get_count(v, key));
        else if (key == "window_width") c.window_width = get_number(v, key);
        else if (key == "hop") c.hop = get_number(v, key);
        else if (key == "lattice_n_modes") c.lattice_n_modes = get_count(v, key);
        else if (key == "lattice_bandwidth") c.lattice_bandwidth = get_number(v, key);
        else if (key == "lattice_t_final") c.lattice_t_final = get_number(v, key);
        else if (key == "out") c.out = get_as<std::string>(v, key);
        else throw ValidationError("config: unknown key '" + key + "'");
    }
    return c;
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read config: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return from_json_text(ss.str());
}

std::string ScenarioConfig::to_json() const {
    const SimParams p = sim_params();
    json j;
    j["gamma1d"] = gamma1d;
    j["delta_lw"] = delta_lw;
    j["detuning"] = detuning;
    j["omega0"] = p.omega0;
    j["t_max"] = p.t_max;
    j["t_min"] = p.t_min;
    j["grid_points"] = grid_points;
    j["source"] = to_string(source);
    j["x_d"] = x_d;
    j["delta_lw_list"] = delta_lw_list;
    j["detuning_span"] = detuning_span;
    j["detuning_points"] = detuning_points;
    j["tol"] = tol;
    j["jobs"] = jobs;
    j["window_width"] = resolved_window();
    j["hop"] = resolved_hop();
    if (lattice_n_modes) j["lattice_n_modes"] = *lattice_n_modes;
    if (lattice_bandwidth) j["lattice_bandwidth"] = *lattice_bandwidth;
    if (lattice_t_final) j["lattice_t_final"] = *lattice_t_final;
    j["out"] = out;
    return j.dump(2);
}

SimParams ScenarioConfig::sim_params() const {
    SimParams p = SimParams::make(gamma1d, delta_lw, detuning);
    if (omega0) p.omega0 = *omega0;
    if (t_max) p.t_max = *t_max;
    if (t_min) p.t_min = *t_min;
    p.grid_points = grid_points;
    return p;
}

double ScenarioConfig::resolved_window() const {
    if (window_width) return *window_width;
    return 8.0 / (source == EmitterSource::scattering ? delta_lw : gamma1d);
}

double ScenarioConfig::resolved_hop() const { return hop ? *hop : 0.25 * resolved_window(); }

void ScenarioConfig::validate() const {
    sim_params().validate();
    if (!(x_d < 0.0)) throw ValidationError("config: x_d must be < 0");
    if (!(tol > 0.0)) throw ValidationError("config: tol must be > 0");
    if (jobs == 0) throw ValidationError("config: jobs must be >= 1");
    if (!(resolved_window() > 0.0)) throw ValidationError("config: window_width must be > 0");
    if (!(resolved_hop() > 0.0)) throw ValidationError("config: hop must be > 0");
}

} // namespace wqt
