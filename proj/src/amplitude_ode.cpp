// amplitude_ode.cpp — Runge-Kutta oracle for the driven excited amplitude

#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "wqt/dynamics.hpp"
#include "wqt/errors.hpp"

namespace wqt {

namespace odeint = boost::numeric::odeint;

AmplitudeTrace excited_amplitude_ode(const SimParams& p, const std::vector<double>& grid) {
    using State = std::array<double, 2>;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k] < 0.0 || (k > 0 && grid[k] < grid[k - 1]))
            throw ValidationError("excited_amplitude_ode: grid must be non-decreasing and >= 0");
    }

    const double half_gamma = 0.5 * p.gamma1d;
    const double amp = std::sqrt(0.5 * p.gamma1d * p.delta_lw);
    const cplx rate(0.5 * p.delta_lw, p.detuning);
    auto rhs = [&](const State& x, State& dxdt, double t) {
        const cplx u(x[0], x[1]);
        const cplx du = -half_gamma * u - amp * std::exp(-rate * t);
        dxdt[0] = du.real();
        dxdt[1] = du.imag();
    };

    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(1e-13, 1e-13);
    State x{0.0, 0.0};
    double t = 0.0;
    double dt = 1e-3 / std::max({p.gamma1d, p.delta_lw, std::abs(p.detuning), 1e-3});

    AmplitudeTrace tr;
    tr.source = AmplitudeSource::ode_oracle;
    tr.times = grid;
    tr.psi.reserve(grid.size());
    for (double target : grid) {
        while (t < target) {
            double step = std::min(dt, target - t);
            const bool clipped = step < dt;
            const double saved_dt = dt;
            int rejections = 0;
            while (stepper.try_step(rhs, x, t, step) == odeint::fail) {
                if (step < 1e-15 * std::max(1.0, t) || ++rejections > 200)
                    throw IntegrationFailure("ODE oracle step-size underflow", t);
            }
            dt = clipped ? std::max(saved_dt, step) : step;
        }
        tr.psi.push_back(std::polar(1.0, -p.omega0 * target) * cplx(x[0], x[1]));
    }
    return tr;
}

} // namespace wqt
