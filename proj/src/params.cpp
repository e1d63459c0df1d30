// params.cpp — SimParams defaults and validation

#include "wqt/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wqt/errors.hpp"

namespace wqt {

namespace {

// Upper bound on |u(t)| / A for the driven amplitude at zero detuning; the
// detuned amplitude is never larger.
double population_envelope(double gamma, double delta_lw, double t) {
    const double a = 0.5 * (gamma - delta_lw);
    if (std::abs(a) * t < 1e-8) return t * std::exp(-0.5 * gamma * t);
    return (std::exp(-0.5 * delta_lw * t) - std::exp(-0.5 * gamma * t)) / a;
}

} // namespace

void SimParams::validate() const {
    auto fail = [](const std::string& msg) { throw ValidationError(msg); };
    if (!(gamma1d > 0.0) || !std::isfinite(gamma1d)) fail("gamma1d must be > 0");
    if (!(delta_lw > 0.0) || !std::isfinite(delta_lw)) fail("delta_lw must be > 0");
    if (!std::isfinite(detuning)) fail("detuning must be finite");
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) fail("omega0 must be > 0");
    if (!(t_min > 0.0)) fail("t_min must be > 0");
    if (!(t_max > t_min) || !std::isfinite(t_max)) fail("t_max must exceed t_min");
    if (grid_points < 2) fail("grid_points must be >= 2");
}

std::vector<std::string> SimParams::warnings() const {
    std::vector<std::string> out;
    const double scale = std::max({gamma1d, delta_lw, std::abs(detuning)});
    if (omega0 < 10.0 * scale) {
        std::ostringstream os;
        os << "omega0 = " << omega0 << " is below 10 x max(gamma1d, delta_lw, |detuning|) = "
           << 10.0 * scale << "; rotating-wave approximation is questionable";
        out.push_back(os.str());
    }
    return out;
}

SimParams SimParams::make(double gamma1d, double delta_lw, double detuning) {
    SimParams p;
    p.gamma1d = gamma1d;
    p.delta_lw = delta_lw;
    p.detuning = detuning;
    p.omega0 = 100.0 * gamma1d;
    p.t_max = default_t_max(gamma1d, delta_lw);
    p.t_min = default_t_min(gamma1d, delta_lw);
    return p;
}

double default_t_max(double gamma1d, double delta_lw) {
    const double slow = std::min(gamma1d, delta_lw);
    const double amp2 = 0.5 * gamma1d * delta_lw;
    double t = 28.0 / slow;  // e^-28 < 1e-12
    for (int i = 0; i < 400; ++i) {
        const double env = population_envelope(gamma1d, delta_lw, t);
        if (amp2 * env * env <= 1e-13) break;
        t *= 1.05;
    }
    return t;
}

double default_t_min(double gamma1d, double delta_lw) {
    return 1e-6 / std::max(gamma1d, delta_lw);
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
    if (n < 2) throw ValidationError("grid needs at least two points");
    std::vector<double> g(n);
    const double h = (t1 - t0) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) g[k] = t0 + h * static_cast<double>(k);
    g.back() = t1;
    return g;
}

std::vector<double> default_grid(const SimParams& p) {
    return uniform_grid(p.t_min, p.t_max, p.grid_points);
}

} // namespace wqt
