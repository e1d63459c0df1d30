// test_lattice_oracle.cpp — Secular-equation propagator against dense linear
// algebra, continuum theory and the closed-form amplitude.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "wqt/dynamics.hpp"
#include "wqt/errors.hpp"
#include "wqt/lattice.hpp"

using namespace wqt;

namespace {

LatticeConfig small_lattice(std::size_t n, double band) {
    LatticeConfig c;
    c.n_modes = n;
    c.bandwidth = band;
    return c;
}

// Full lab-frame Hamiltonian on (e, a_0..a_{n-1}, b_0..b_{n-1}) with
// H_{e, mode} = -i g.
Eigen::MatrixXcd full_hamiltonian(const ModeGrid& grid, double g) {
    const auto n = static_cast<Eigen::Index>(grid.n);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n + 1, 2 * n + 1);
    h(0, 0) = grid.omega0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double w = grid.frequency(std::size_t(j));
        h(1 + j, 1 + j) = w;
        h(1 + n + j, 1 + n + j) = w;
        for (Eigen::Index col : {1 + j, 1 + n + j}) {
            h(0, col) = cplx(0.0, -g);
            h(col, 0) = cplx(0.0, g);
        }
    }
    return h;
}

} // namespace

TEST_CASE("secular roots and eigenvectors match a dense eigensolver") {
    for (std::size_t n : {16u, 63u, 64u}) {
        const auto p = SimParams::make(1.0, 1.0, 0.0);
        const LatticePropagator prop(small_lattice(n, 20.0), p);
        const double big_g = std::sqrt(2.0) * prop.coupling();
        const auto m = static_cast<Eigen::Index>(n);
        Eigen::MatrixXd arrow = Eigen::MatrixXd::Zero(m + 1, m + 1);
        for (Eigen::Index j = 0; j < m; ++j) {
            arrow(0, j + 1) = arrow(j + 1, 0) = big_g;
            arrow(j + 1, j + 1) = prop.grid().offset(std::size_t(j));
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(arrow);
        REQUIRE(prop.size() == n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            CHECK(prop.eigenvalues()[k] == doctest::Approx(es.eigenvalues()(Eigen::Index(k))).epsilon(1e-12).scale(1.0));
            const auto v = prop.eigenvector(k);
            double dot = 0.0;
            for (std::size_t i = 0; i <= n; ++i) dot += v[i] * es.eigenvectors()(Eigen::Index(i), Eigen::Index(k));
            CHECK(std::abs(dot) == doctest::Approx(1.0).epsilon(1e-11));
        }
    }
}

TEST_CASE("propagation matches dense exponentiation of the full Hamiltonian") {
    const auto p = SimParams::make(1.0, 2.0, 0.5);
    const auto cfg = small_lattice(48, 12.0);
    const LatticePropagator prop(cfg, p);

    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    FieldState s = init_excited_tls(cfg, p);
    s.psi = cplx(gauss(rng), gauss(rng));
    for (auto& z : s.phi_a) z = cplx(gauss(rng), gauss(rng));
    for (auto& z : s.phi_b) z = cplx(gauss(rng), gauss(rng));
    s.time = 0.3;
    const double scale = 1.0 / std::sqrt(s.norm());
    s.psi *= scale;
    for (auto& z : s.phi_a) z *= scale;
    for (auto& z : s.phi_b) z *= scale;

    const auto n = static_cast<Eigen::Index>(cfg.n_modes);
    Eigen::VectorXcd x(2 * n + 1);
    x(0) = s.psi;
    for (Eigen::Index j = 0; j < n; ++j) {
        x(1 + j) = s.phi_a[std::size_t(j)];
        x(1 + n + j) = s.phi_b[std::size_t(j)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(full_hamiltonian(prop.grid(), prop.coupling()));
    const double dt = 2.7;
    const Eigen::VectorXcd phases =
        es.eigenvalues().unaryExpr([&](double l) { return std::polar(1.0, -l * dt); }).cast<cplx>();
    const Eigen::VectorXcd y = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * x;

    const auto out = prop.evolve(s, s.time + dt);
    CHECK(out.time == doctest::Approx(s.time + dt));
    CHECK(std::abs(out.psi - y(0)) < 1e-10);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        worst = std::max(worst, std::abs(out.phi_a[std::size_t(j)] - y(1 + j)));
        worst = std::max(worst, std::abs(out.phi_b[std::size_t(j)] - y(1 + n + j)));
    }
    CHECK(worst < 1e-10);
    const auto trace = prop.psi_trace(s, {s.time, s.time + dt});
    CHECK(std::abs(trace[0] - s.psi) < 1e-12);
    CHECK(std::abs(trace[1] - y(0)) < 1e-10);
}

TEST_CASE("exponential packet initialization") {
    const auto p = SimParams::make(1.0, 2.0, 1.5);
    const auto cfg = LatticeConfig::defaults_for(p, 10.0);
    CHECK(cfg.n_modes >= 4096);
    CHECK(lorentzian_capture(cfg.bandwidth, p.delta_lw, p.detuning) >= 0.999);
    const auto s = init_exponential_packet(cfg, p);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.psi == cplx(0.0, 0.0));
    for (const auto& z : s.phi_b) CHECK(z == cplx(0.0, 0.0));

    // Lorentzian spectral density: peak at omega_L, FWHM = delta_lw.
    std::size_t top = 0;
    for (std::size_t j = 0; j < s.grid.n; ++j)
        if (std::norm(s.phi_a[j]) > std::norm(s.phi_a[top])) top = j;
    CHECK(std::abs(s.grid.frequency(top) - p.omega_L()) <= s.grid.spacing);
    const double half = 0.5 * std::norm(s.phi_a[top]);
    std::size_t lo = top, hi = top;
    while (std::norm(s.phi_a[lo]) > half) --lo;
    while (std::norm(s.phi_a[hi]) > half) ++hi;
    CHECK(std::abs((s.grid.offset(hi) - s.grid.offset(lo)) - p.delta_lw) <= 2.0 * s.grid.spacing);

    CHECK_THROWS_AS(init_exponential_packet(small_lattice(4096, 100.0), p), ValidationError);
}

TEST_CASE("initial packet in real space: truncated exponential") {
    const auto p = SimParams::make(1.0, 2.0, 1.0);
    const auto cfg = LatticeConfig::defaults_for(p, 10.0);
    const auto s = init_exponential_packet(cfg, p);
    const auto prof = realspace_snapshot(s, {-6.0, -3.0, -1.0, -0.5, 0.5, 1.0, 3.0});
    for (std::size_t i = 0; i < prof.x.size(); ++i) {
        const double x = prof.x[i];
        const double expect = x < 0.0 ? std::sqrt(p.delta_lw) * std::exp(0.5 * p.delta_lw * x) : 0.0;
        CHECK(std::abs(std::abs(prof.a[i]) - expect) < 2e-2);
        CHECK(std::abs(prof.b[i]) == 0.0);
        if (x < 0.0) {
            // Carrier phase e^{i omega_L x}.
            CHECK(std::abs(std::arg(prof.a[i] * std::polar(1.0, -p.omega_L() * x))) < 2e-2);
        }
    }
}

TEST_CASE("periodic reconstruction agrees with the direct sum") {
    const auto p = SimParams::make(1.0, 2.0, 1.0);
    const auto cfg = small_lattice(4096, 1000.0);
    const auto s = LatticePropagator(cfg, p).evolve(init_exponential_packet(cfg, p), 3.0);
    const auto per = realspace_periodic(s);
    REQUIRE(per.x.size() == cfg.n_modes);
    std::vector<double> xs;
    for (std::size_t m : {0u, 700u, 2048u, 2100u, 4000u}) xs.push_back(per.x[m]);
    const auto direct = realspace_snapshot(s, xs);
    std::size_t k = 0;
    for (std::size_t m : {0u, 700u, 2048u, 2100u, 4000u}) {
        CHECK(std::abs(per.a[m] - direct.a[k]) < 1e-10);
        CHECK(std::abs(per.b[m] - direct.b[k]) < 1e-10);
        ++k;
    }
    double total = 0.0;
    const double dx = cfg.period() / double(cfg.n_modes);
    for (std::size_t m = 0; m < per.x.size(); ++m) total += (std::norm(per.a[m]) + std::norm(per.b[m])) * dx;
    CHECK(total + std::norm(s.psi) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("excited TLS: decay through a finite band") {
    const auto p = SimParams::make(1.0, 1.0, 0.0);
    const auto cfg = small_lattice(4096, 50.0);
    const auto start = init_excited_tls(cfg, p);
    CHECK(start.norm() == 1.0);
    const LatticePropagator prop(cfg, p);
    const auto times = uniform_grid(0.0, 5.0, 51);
    const auto psi = prop.psi_trace(start, times);
    const auto pole = oracle::finite_band_pole(1.0, cfg.bandwidth);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        // |psi| within 1% of e^{-t/2}.
        CHECK(std::abs(std::abs(psi[i]) - std::exp(-0.5 * t)) <= 0.01 * std::exp(-0.5 * t));
        // The residual deviation is the finite-band pole shift and residue.
        if (t >= 1.0) {
            const double band_pe = std::norm(pole.residue) * std::exp(2.0 * pole.z.imag() * t);
            CHECK(std::norm(psi[i]) == doctest::Approx(band_pe).epsilon(1e-3));
        }
    }
    // Population decay converges to e^{-t} as the band widens.
    const auto wide = LatticePropagator(small_lattice(8192, 800.0), p)
                          .psi_trace(init_excited_tls(small_lattice(8192, 800.0), p), {1.0, 5.0});
    CHECK(std::norm(wide[0]) == doctest::Approx(std::exp(-1.0)).epsilon(0.01));
    CHECK(std::norm(wide[1]) == doctest::Approx(std::exp(-5.0)).epsilon(0.01));

    // Emission splits evenly between the channels.
    const auto end = prop.evolve(start, 20.0);
    double na = 0.0, nb = 0.0;
    for (std::size_t j = 0; j < cfg.n_modes; ++j) {
        na += std::norm(end.phi_a[j]);
        nb += std::norm(end.phi_b[j]);
    }
    CHECK(na == doctest::Approx(nb).epsilon(1e-10));
}

TEST_CASE("scattering: lattice reproduces the closed-form amplitude") {
    const auto p = SimParams::make(1.0, 10.0, 1.0);
    const double t_final = settle_time(p, 1e-8);
    const auto cfg = LatticeConfig::defaults_for(p, t_final);
    const auto start = init_exponential_packet(cfg, p);
    const LatticePropagator prop(cfg, p);
    const auto times = uniform_grid(0.0, t_final, 121);
    const auto psi = prop.psi_trace(start, times);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        worst = std::max(worst, std::abs(psi[i] - excited_amplitude_closed(p, times[i])));
    CHECK(worst < 1e-3);

    const auto end = prop.evolve(start, t_final);
    CHECK(std::abs(end.norm() - 1.0) < 1e-6);
    CHECK(std::norm(end.psi) < 1e-8);

    // Reflected field at x_d < 0 is sqrt(gamma1d/2) psi(t - |x_d|); nothing
    // beyond the light cone.
    const auto prof = realspace_snapshot(end, {-2.0, -5.0, -9.0, -(t_final + 0.8), 0.7});
    for (std::size_t i = 0; i < 3; ++i) {
        const cplx ref = std::sqrt(0.5 * p.gamma1d) * excited_amplitude_closed(p, t_final + prof.x[i]);
        CHECK(std::abs(prof.b[i] - ref) < 1e-3);
    }
    CHECK(std::abs(prof.b[3]) < 1e-3);
    CHECK(std::abs(prof.b[4]) < 1e-3);
}

TEST_CASE("convergence in band and mode count") {
    const auto p = SimParams::make(1.0, 2.0, 1.0);
    auto cfg = LatticeConfig::defaults_for(p, 12.0);
    auto fine = cfg;
    fine.n_modes *= 2;
    fine.bandwidth *= 2;
    const auto times = uniform_grid(0.5, 8.0, 16);
    const auto a = LatticePropagator(cfg, p).psi_trace(init_exponential_packet(cfg, p), times);
    const auto b = LatticePropagator(fine, p).psi_trace(init_exponential_packet(fine, p), times);
    for (std::size_t i = 0; i < times.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 3e-3);
}

TEST_CASE("checkpoint round trip") {
    const auto p = SimParams::make(1.0, 2.0, 1.0);
    const auto cfg = small_lattice(4096, 800.0);
    const auto s = LatticePropagator(cfg, p).evolve(init_exponential_packet(cfg, p), 1.5);
    const auto path = (std::filesystem::temp_directory_path() / "wqt_checkpoint_test.bin").string();
    save_checkpoint(path, s, p.gamma1d);
    double gamma = 0.0;
    const auto back = load_checkpoint(path, &gamma);
    CHECK(gamma == p.gamma1d);
    CHECK(back.time == s.time);
    CHECK(back.grid.n == s.grid.n);
    CHECK(back.grid.spacing == s.grid.spacing);
    CHECK(back.grid.omega0 == s.grid.omega0);
    CHECK(std::abs(back.psi - s.psi) < 1e-7);
    for (std::size_t j = 0; j < s.grid.n; j += 97) {
        CHECK(std::abs(back.phi_a[j] - s.phi_a[j]) < 1e-7);
        CHECK(std::abs(back.phi_b[j] - s.phi_b[j]) < 1e-7);
    }
    // Header line is JSON, payload is (1 + 2n) complex64 values.
    const auto size = std::filesystem::file_size(path);
    std::ifstream is(path, std::ios::binary);
    std::string header;
    std::getline(is, header);
    CHECK(size == header.size() + 1 + 8 * (1 + 2 * s.grid.n));
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_checkpoint("/nonexistent/wqt.bin"), IoError);
    const auto junk = (std::filesystem::temp_directory_path() / "wqt_junk.bin").string();
    std::ofstream(junk) << "not json\n";
    CHECK_THROWS_AS(load_checkpoint(junk), IoError);
    std::filesystem::remove(junk);
}

TEST_CASE("configuration checks") {
    const auto p = SimParams::make(1.0, 1.0, 0.0);
    CHECK_THROWS_AS(small_lattice(1, 10.0).validate(), ValidationError);
    CHECK_THROWS_AS(small_lattice(64, 0.0).validate(), ValidationError);
    CHECK(small_lattice(64, 10.0).low_fidelity(p));
    CHECK_FALSE(small_lattice(64, 50.0).low_fidelity(p));
    const LatticePropagator prop(small_lattice(64, 10.0), p);
    auto s = init_excited_tls(small_lattice(64, 10.0), p);
    s.time = 2.0;
    CHECK_THROWS_AS(prop.evolve(s, 1.0), ValidationError);
    CHECK_THROWS_AS(prop.evolve(init_excited_tls(small_lattice(32, 10.0), p), 1.0), ValidationError);
}
