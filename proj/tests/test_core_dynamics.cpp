// test_core_dynamics.cpp — Closed-form amplitude, ODE oracle and coefficients

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "oracles.hpp"
#include "wqt/dynamics.hpp"
#include "wqt/errors.hpp"
#include "wqt/thermodynamics.hpp"

using namespace wqt;

namespace {

cplx rotating(const SimParams& p, double t) {
    return excited_amplitude_closed(p, t) * std::polar(1.0, p.omega0 * t);
}

} // namespace

TEST_CASE("closed form matches direct quadrature of the amplitude integral") {
    for (double dlw : {0.1, 1.0, 2.0, 10.0})
        for (double det : {-5.0, 0.0, 1.0, 20.0})
            for (double t : {0.05, 0.7, 3.0, 12.0}) {
                const auto p = SimParams::make(1.0, dlw, det);
                const cplx ref = oracle::amplitude_by_quadrature(1.0, dlw, det, t);
                CHECK(std::abs(rotating(p, t) - ref) < 1e-10);
            }
}

TEST_CASE("amplitude starts at zero") {
    for (double dlw : {0.01, 1.0, 10.0}) {
        const auto p = SimParams::make(1.0, dlw, 3.0);
        CHECK(excited_amplitude_closed(p, 0.0) == cplx(0.0, 0.0));
    }
}

TEST_CASE("mode-matched resonance follows A t e^{-t/2}") {
    const auto p = SimParams::make(1.0, 1.0, 0.0);
    const double amp = std::sqrt(0.5);
    const auto grid = uniform_grid(1e-6, 30.0, 301);
    const auto ode = excited_amplitude_ode(p, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const double env = amp * t * std::exp(-0.5 * t);
        CHECK(std::abs(std::abs(excited_amplitude_closed(p, t)) - env) < 1e-12);
        CHECK(std::abs(std::abs(ode.psi[i]) - env) < 1e-8);
    }
    CHECK(ode.source == AmplitudeSource::ode_oracle);
}

TEST_CASE("closed form and ODE oracle agree at (1, 10, 1), t = 0.5") {
    const auto p = SimParams::make(1.0, 10.0, 1.0);
    const auto ode = excited_amplitude_ode(p, {0.0, 0.25, 0.5});
    CHECK(std::abs(ode.psi[2] - excited_amplitude_closed(p, 0.5)) < 1e-8);
    CHECK(std::abs(ode.psi[0]) == 0.0);
}

TEST_CASE("ODE oracle respects the norm bound") {
    for (double dlw : {0.1, 1.0, 10.0})
        for (double det : {-1.0, 0.0, 5.0}) {
            const auto p = SimParams::make(1.0, dlw, det);
            for (const auto& z : excited_amplitude_ode(p, default_grid(p)).psi) CHECK(std::abs(z) <= 1.0);
        }
}

TEST_CASE("amplitude has decayed by the default horizon") {
    for (double dlw : {0.01, 0.1, 2.0, 10.0}) {
        const auto p = SimParams::make(1.0, dlw, 1.0);
        CHECK(std::abs(excited_amplitude_closed(p, p.t_max)) < 1e-6);
        CHECK(std::norm(excited_amplitude_closed(p, p.t_max)) < 1e-10);
    }
}

TEST_CASE("maximum population at (1, 10, 0) matches a brute-force scan") {
    // The drive strength sqrt(gamma1d delta_lw / 2) gives 0.1199 here; a drive of
    // sqrt(gamma1d delta_lw) would double it to about 0.24.
    const auto p = SimParams::make(1.0, 10.0, 0.0);
    const double scan = oracle::max_population_scan(1.0, 10.0, 0.0, 5.0);
    const double mine = run_cycle(p).max_pe;
    CHECK(mine == doctest::Approx(scan).epsilon(1e-8));
    CHECK(mine == doctest::Approx(0.1199).epsilon(1e-3));
}

TEST_CASE("spontaneous emission") {
    const double omega_L = 100.0;
    CHECK(spontaneous_emission_amplitude(1.0, omega_L, 0.0) == cplx(1.0, 0.0));
    for (double t : {0.0, 0.3, 2.0, 9.0}) {
        CHECK(std::abs(spontaneous_emission_amplitude(1.0, omega_L, t)) ==
              doctest::Approx(std::exp(-0.5 * t)).epsilon(1e-14));
        CHECK(spontaneous_emission_frequency(1.0, omega_L, t) == omega_L);
        CHECK(spontaneous_emission_decay_rate(1.0, omega_L, t) == 1.0);
    }
}

TEST_CASE("arctan frequency is omega0 at zero detuning") {
    for (double dlw : {0.1, 2.0, 10.0}) {
        const auto p = SimParams::make(1.0, dlw, 0.0);
        for (double t : {1e-4, 0.5, 3.0, 20.0}) CHECK(instantaneous_frequency(p, t) == p.omega0);
    }
}

TEST_CASE("narrow packet: frequency settles at omega0 + detuning") {
    const auto p = SimParams::make(1.0, 0.01, 1.0);
    CHECK(instantaneous_frequency(p, 100.0) == doctest::Approx(p.omega0 + 1.0).epsilon(1e-12));
}

TEST_CASE("arctan frequency matches the phase derivative of the ODE oracle") {
    const auto p = SimParams::make(1.0, 10.0, 1.0);
    const double t = 1.0, h = 1e-4;
    const auto ode = excited_amplitude_ode(p, {0.0, t - 2 * h, t - h, t + h, t + 2 * h});
    auto phase_step = [&](std::size_t a, std::size_t b) {
        return std::arg(ode.psi[b] * std::conj(ode.psi[a]));
    };
    const double d1 = phase_step(2, 3) / (2 * h), d2 = phase_step(1, 4) / (4 * h);
    const double fd = -(4.0 * d1 - d2) / 3.0;
    CHECK(instantaneous_frequency(p, t) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(instantaneous_frequency(p, t) == doctest::Approx(ScatteringSolution(p).frequency(t)).epsilon(1e-13));
}

TEST_CASE("arctan and log-derivative forms agree across parameters") {
    for (double dlw : {0.01, 0.1, 0.5, 2.0, 10.0})
        for (double det : {-7.0, -1.0, 0.5, 3.0}) {
            const auto p = SimParams::make(1.0, dlw, det);
            const ScatteringSolution sol(p);
            for (double t : uniform_grid(p.t_min, p.t_max, 97)) {
                CHECK(instantaneous_frequency(p, t) == doctest::Approx(sol.frequency(t)).epsilon(1e-11));
                CHECK(instantaneous_decay_rate(p, t) ==
                      doctest::Approx(sol.decay_rate(t)).epsilon(1e-9).scale(1.0));
            }
        }
}

TEST_CASE("frequency shift is odd in the detuning") {
    for (double dlw : {0.1, 10.0})
        for (double t : {0.2, 1.0, 4.0}) {
            const auto a = SimParams::make(1.0, dlw, 2.5), b = SimParams::make(1.0, dlw, -2.5);
            const double sa = instantaneous_frequency(a, t) - a.omega0;
            const double sb = instantaneous_frequency(b, t) - b.omega0;
            CHECK(sa == doctest::Approx(-sb).epsilon(1e-12));
        }
}

TEST_CASE("decay rate diverges as -2/t at early times") {
    for (double dlw : {0.1, 1.0, 10.0}) {
        const auto p = SimParams::make(1.0, dlw, 2.0);
        CHECK(instantaneous_decay_rate(p, p.t_min) * p.t_min == doctest::Approx(-2.0).epsilon(0.01));
        // Cross-check the decay rate against finite differences of P_e.
        const ScatteringSolution sol(p);
        const double t = 50.0 * p.t_min, h = 1e-3 * t;
        const double dp = (sol.population(t + h) - sol.population(t - h)) / (2 * h);
        CHECK(-dp / sol.population(t) == doctest::Approx(sol.decay_rate(t)).epsilon(1e-4));
    }
}

TEST_CASE("work extraction comes with a negative decay rate at (1, 10, 2)") {
    const auto r = run_cycle(SimParams::make(1.0, 10.0, 2.0));
    CHECK(r.w_net < -r.quad_error);
    CHECK(r.had_negative_rate);
    CHECK(r.min_gamma < 0.0);
}

TEST_CASE("zeros of psi at mode matching raise PoleCondition") {
    // Delta = gamma1d: u ~ e^{-t/2} (1 - e^{-i d t}) / d vanishes at t = 2 pi k / d.
    const auto p = SimParams::make(1.0, 1.0, 1.0);
    const ScatteringSolution sol(p);
    const double t_zero = 2.0 * std::numbers::pi;
    CHECK(sol.is_pole(t_zero));
    CHECK_THROWS_AS(sol.log_derivative(t_zero), PoleCondition);
    CHECK_THROWS_AS(instantaneous_frequency(p, t_zero), PoleCondition);
    CHECK_FALSE(sol.is_pole(t_zero + 0.1));
    // Fluxes stay finite through the zero.
    CHECK(std::isfinite(sol.work_flux(t_zero)));
    CHECK(std::isfinite(sol.heat_flux(t_zero)));

    const auto tr = coefficient_trace(p, {1.0, t_zero, 7.0});
    CHECK(tr.pole[1] == 1);
    CHECK(std::isnan(tr.omega_s[1]));
    CHECK(tr.pole[0] == 0);
}

TEST_CASE("coefficient trace: no work flux at zero detuning") {
    const auto p = SimParams::make(1.0, 10.0, 0.0);
    const auto tr = coefficient_trace(p, default_grid(p));
    for (double w : tr.w_flux) CHECK(w == 0.0);
    for (double w : tr.omega_s) CHECK(w == p.omega0);
}

TEST_CASE("emission trace: heat flux -gamma1d omega_L e^{-gamma1d t} integrates to -omega_L") {
    const double omega_L = 100.0;
    const auto grid = uniform_grid(1e-6, 10.0, 101);
    const auto tr = spontaneous_emission_trace(1.0, omega_L, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(tr.q_flux[i] == doctest::Approx(-omega_L * std::exp(-grid[i])).epsilon(1e-13));
        CHECK(tr.w_flux[i] == 0.0);
        CHECK(tr.gamma_t[i] == 1.0);
    }
    const double total = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double t) { return spontaneous_emission_trace(1.0, omega_L, {t}).q_flux[0]; }, 0.0,
        std::numeric_limits<double>::infinity(), 15, 1e-13);
    CHECK(total == doctest::Approx(-omega_L).epsilon(1e-10));
}

TEST_CASE("fluxes integrate to the change in E = omega_s P_e") {
    const auto p = SimParams::make(1.0, 10.0, 1.0);
    const ScatteringSolution sol(p);
    const auto grid = uniform_grid(0.0, 8.0, 33);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = grid[i], b = grid[i + 1];
        const double flux = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double t) { return sol.work_flux(t) + sol.heat_flux(t); }, a, b, 10, 1e-14);
        CHECK(std::abs(flux - (sol.energy(b) - sol.energy(a))) < 1e-8);
    }
}

TEST_CASE("heat flux equals omega_s dP_e/dt; frequency stays positive") {
    for (double dlw : {0.1, 2.0, 10.0})
        for (double det : {-20.0, 1.0, 20.0}) {
            const auto p = SimParams::make(1.0, dlw, det);
            const ScatteringSolution sol(p);
            const auto tr = coefficient_trace(p, default_grid(p));
            for (std::size_t i = 0; i < tr.size(); i += 37) {
                if (tr.pole[i]) continue;
                const double ref = tr.omega_s[i] * sol.population_rate(tr.times[i]);
                CHECK(tr.q_flux[i] == doctest::Approx(ref).epsilon(1e-9).scale(1e-12));
                CHECK(tr.omega_s[i] > 0.0);
                CHECK(tr.pe[i] <= 1.0);
            }
        }
}

TEST_CASE("cexpm1 keeps full relative accuracy near zero") {
    const cplx z(1e-12, -3e-12);
    const cplx ref = z + 0.5 * z * z;
    CHECK(std::abs(cexpm1(z) - ref) / std::abs(ref) < 1e-15);
    CHECK(std::abs(cexpm1(cplx(2.0, 1.0)) - (std::exp(cplx(2.0, 1.0)) - 1.0)) < 1e-14);
}

TEST_CASE("parameter validation") {
    auto p = SimParams::make(1.0, 1.0, 0.0);
    p.delta_lw = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = SimParams::make(1.0, 1.0, 0.0);
    p.t_min = 2.0 * p.t_max;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    CHECK_THROWS_AS(ScatteringSolution{p}, ValidationError);
    p = SimParams::make(1.0, 1.0, 0.0);
    p.omega0 = 5.0;
    CHECK_NOTHROW(p.validate());
    CHECK_FALSE(p.warnings().empty());
    CHECK(SimParams::make(1.0, 1.0, 0.0).warnings().empty());
}
