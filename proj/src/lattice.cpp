// lattice.cpp — Exact spectral propagation of the discretized waveguide

#include "wqt/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <ostream>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/math/tools/roots.hpp>
#include <fftw3.h>
#include <json.hpp>

#include "wqt/errors.hpp"
#include "wqt/io.hpp"

namespace wqt {

namespace {

constexpr double kPi = std::numbers::pi;

cplx rotate(double phase) { return std::polar(1.0, phase); }

} // namespace

double LatticeConfig::period() const { return 2.0 * kPi / mode_spacing(); }

double lorentzian_capture(double bandwidth, double delta_lw, double detuning) {
    const double hw = 0.5 * delta_lw;
    return (std::atan((bandwidth - detuning) / hw) + std::atan((bandwidth + detuning) / hw)) / kPi;
}

LatticeConfig LatticeConfig::defaults_for(const SimParams& p, double t_horizon) {
    LatticeConfig c;
    const double fast = std::max({p.gamma1d, p.delta_lw, std::abs(p.detuning)});
    c.bandwidth = 50.0 * fast;
    while (lorentzian_capture(c.bandwidth, p.delta_lw, p.detuning) < 0.99905) c.bandwidth *= 1.05;
    // Initial packet tail e^{-delta_lw L/2} below 1e-12, emission clear of the edges.
    const double period = std::max(2.2 * t_horizon, 56.0 / p.delta_lw);
    const double spacing = 2.0 * kPi / period;
    auto n = static_cast<std::size_t>(std::ceil(2.0 * c.bandwidth / spacing));
    n = std::max<std::size_t>(n + (n % 2), 4096);
    c.n_modes = n;
    c.x_extent = 1.2 * t_horizon;
    return c;
}

void LatticeConfig::validate() const {
    if (n_modes < 2) throw ValidationError("lattice: n_modes must be >= 2");
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        throw ValidationError("lattice: bandwidth must be > 0");
}

bool LatticeConfig::low_fidelity(const SimParams& p) const {
    const double fast = std::max({p.gamma1d, p.delta_lw, std::abs(p.detuning)});
    return bandwidth < 20.0 * fast;
}

double FieldState::norm() const {
    double s = std::norm(psi);
    for (const auto& z : phi_a) s += std::norm(z);
    for (const auto& z : phi_b) s += std::norm(z);
    return s;
}

namespace {

FieldState empty_state(const LatticeConfig& cfg, const SimParams& p) {
    cfg.validate();
    p.validate();
    FieldState s;
    s.grid = ModeGrid{p.omega0, cfg.mode_spacing(), cfg.n_modes};
    s.phi_a.assign(cfg.n_modes, cplx{});
    s.phi_b.assign(cfg.n_modes, cplx{});
    return s;
}

} // namespace

FieldState init_exponential_packet(const LatticeConfig& cfg, const SimParams& p) {
    const double captured = lorentzian_capture(cfg.bandwidth, p.delta_lw, p.detuning);
    if (captured < 0.999)
        throw ValidationError("lattice: band captures only " + std::to_string(100.0 * captured) +
                              "% of the packet spectrum (need 99.9%)");
    FieldState s = empty_state(cfg, p);
    double total = 0.0;
    for (std::size_t j = 0; j < s.grid.n; ++j) {
        s.phi_a[j] = 1.0 / cplx(0.5 * p.delta_lw, -(s.grid.offset(j) - p.detuning));
        total += std::norm(s.phi_a[j]);
    }
    const double scale = 1.0 / std::sqrt(total);
    for (auto& z : s.phi_a) z *= scale;
    return s;
}

FieldState init_excited_tls(const LatticeConfig& cfg, const SimParams& p) {
    FieldState s = empty_state(cfg, p);
    s.psi = 1.0;
    return s;
}

double settle_time(const SimParams& p, double pe_threshold) {
    p.validate();
    const double amp2 = 0.5 * p.gamma1d * p.delta_lw;
    const double a = 0.5 * (p.gamma1d - p.delta_lw);
    // |u| <= A (e^{-delta_lw t/2} - e^{-gamma1d t/2}) / a, decreasing past 2/slow.
    auto bound = [&](double t) {
        const double env = std::abs(a) * t < 1e-8
                               ? t * std::exp(-0.5 * p.gamma1d * t)
                               : (std::exp(-0.5 * p.delta_lw * t) - std::exp(-0.5 * p.gamma1d * t)) / a;
        return amp2 * env * env;
    };
    double t = 2.0 / std::min(p.gamma1d, p.delta_lw);
    while (bound(t) >= pe_threshold) t *= 1.01;
    return t;
}

LatticePropagator::LatticePropagator(const LatticeConfig& cfg, const SimParams& p)
    : grid_{p.omega0, cfg.mode_spacing(), cfg.n_modes}, gamma1d_(p.gamma1d) {
    cfg.validate();
    p.validate();
    using boost::math::digamma;
    using boost::math::trigamma;

    const std::size_t n = grid_.n;
    const double d = grid_.spacing;
    g_ = std::sqrt(gamma1d_ * d / (4.0 * kPi));
    big_g_ = std::sqrt(2.0) * g_;
    const double c2 = big_g_ * big_g_ / d;  // G^2 / spacing
    const double nd = double(n);

    // Sum_j 1/(eps + pole - j) and Sum_j 1/(eps + pole - j)^2.
    auto sums_direct = [&](long pole, double eps) {
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double inv = 1.0 / (eps + double(pole) - double(j));
            s1 += inv;
            s2 += inv * inv;
        }
        return std::pair{s1, s2};
    };
    // Interior roots: |eps| <= 1/2, digamma closed forms of the same sums.
    auto sum1 = [&](long pole, double eps) {
        const double pl = double(pole);
        return 1.0 / eps + digamma(pl + 1.0 + eps) - digamma(1.0 + eps) - digamma(nd - pl - eps) +
               digamma(1.0 - eps);
    };
    auto sum2 = [&](long pole, double eps) {
        const double pl = double(pole);
        return 1.0 / (eps * eps) + trigamma(1.0 + eps) - trigamma(pl + 1.0 + eps) +
               trigamma(1.0 - eps) - trigamma(nd - pl - eps);
    };
    // eps * f(lambda) with f = lambda - G^2 sum 1/(lambda - nu): smooth at eps = 0.
    auto scaled_secular = [&](long pole, double eps, double s1) {
        const double lam = grid_.offset(std::size_t(pole)) + eps * d;
        return eps * lam - c2 * eps * s1;
    };

    boost::math::tools::eps_tolerance<double> tol(50);
    auto solve = [&](auto&& h, double a, double b) {
        std::uintmax_t iters = 200;
        const double fa = h(a), fb = h(b);
        if (fa == 0.0) return a;
        if (fb == 0.0) return b;
        const auto [lo, hi] = boost::math::tools::toms748_solve(h, a, b, fa, fb, tol, iters);
        return 0.5 * (lo + hi);
    };

    roots_.reserve(n + 1);
    // Below the band.
    {
        auto h = [&](double eps) {
            if (eps == 0.0) return -c2;
            return scaled_secular(0, eps, sums_direct(0, eps).first);
        };
        double y = 1.0;
        while (h(-y) <= 0.0) y *= 2.0;
        const double eps = solve(h, -y, 0.0);
        roots_.push_back({0, eps, 1.0 / std::sqrt(1.0 + c2 / d * sums_direct(0, eps).second)});
    }
    for (std::size_t k = 1; k < n; ++k) {
        const long left = long(k) - 1;
        const double f_mid = grid_.offset(k - 1) + 0.5 * d - c2 * sum1(left, 0.5);
        const long pole = f_mid > 0.0 ? left : long(k);
        auto h = [&](double eps) {
            if (eps == 0.0) return -c2;
            return scaled_secular(pole, eps, sum1(pole, eps));
        };
        const double eps = f_mid > 0.0 ? solve(h, 0.0, 0.5) : solve(h, -0.5, 0.0);
        roots_.push_back({pole, eps, 1.0 / std::sqrt(1.0 + c2 / d * sum2(pole, eps))});
    }
    // Above the band.
    {
        const long top = long(n) - 1;
        auto h = [&](double eps) {
            if (eps == 0.0) return -c2;
            return scaled_secular(top, eps, sums_direct(top, eps).first);
        };
        double y = 1.0;
        while (h(y) <= 0.0) y *= 2.0;
        const double eps = solve(h, 0.0, y);
        roots_.push_back({top, eps, 1.0 / std::sqrt(1.0 + c2 / d * sums_direct(top, eps).second)});
    }

    lambda_.resize(roots_.size());
    for (std::size_t k = 0; k < roots_.size(); ++k)
        lambda_[k] = grid_.offset(std::size_t(roots_[k].pole)) + roots_[k].eps * d;
}

double LatticePropagator::component(const Root& r, std::size_t j) const {
    return big_g_ / ((r.eps + double(r.pole) - double(j)) * grid_.spacing);
}

std::vector<double> LatticePropagator::eigenvector(std::size_t k) const {
    const Root& r = roots_.at(k);
    std::vector<double> v(grid_.n + 1);
    v[0] = r.inv_norm;
    for (std::size_t j = 0; j < grid_.n; ++j) v[j + 1] = r.inv_norm * component(r, j);
    return v;
}

std::vector<cplx> LatticePropagator::project(const FieldState& s) const {
    if (s.phi_a.size() != grid_.n || s.phi_b.size() != grid_.n)
        throw ValidationError("lattice: state does not match the propagator's mode grid");
    const cplx to_rot = rotate(grid_.omega0 * s.time);
    const double r2 = 1.0 / std::sqrt(2.0);
    // x = (psi, -i s) in the rotating frame.
    std::vector<cplx> xs(grid_.n);
    for (std::size_t j = 0; j < grid_.n; ++j)
        xs[j] = cplx(0.0, -1.0) * (s.phi_a[j] + s.phi_b[j]) * r2 * to_rot;
    const cplx x0 = s.psi * to_rot;

    const double scale = big_g_ / grid_.spacing;
    std::vector<cplx> c(roots_.size());
    for (std::size_t k = 0; k < roots_.size(); ++k) {
        const Root& r = roots_[k];
        const double base = r.eps + double(r.pole);
        double re = 0.0, im = 0.0;
        for (std::size_t j = 0; j < grid_.n; ++j) {
            const double inv = 1.0 / (base - double(j));
            re += xs[j].real() * inv;
            im += xs[j].imag() * inv;
        }
        c[k] = r.inv_norm * (x0 + scale * cplx(re, im));
    }
    return c;
}

FieldState LatticePropagator::evolve(const FieldState& s, double t_target) const {
    if (t_target < s.time) throw ValidationError("lattice evolve: t_target precedes state time");
    const double dt = t_target - s.time;
    const double norm0 = s.norm();
    auto c = project(s);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= rotate(-lambda_[k] * dt);

    const std::size_t n = grid_.n;
    const double scale = big_g_ / grid_.spacing;
    cplx x0{};
    std::vector<cplx> xs(n);
    for (std::size_t k = 0; k < c.size(); ++k) x0 += c[k] * roots_[k].inv_norm;
    std::vector<double> weights_re(c.size()), weights_im(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        weights_re[k] = c[k].real() * roots_[k].inv_norm * scale;
        weights_im[k] = c[k].imag() * roots_[k].inv_norm * scale;
    }
    for (std::size_t j = 0; j < n; ++j) {
        double re = 0.0, im = 0.0;
        const double jd = double(j);
        for (std::size_t k = 0; k < c.size(); ++k) {
            const double inv = 1.0 / (roots_[k].eps + double(roots_[k].pole) - jd);
            re += weights_re[k] * inv;
            im += weights_im[k] * inv;
        }
        xs[j] = cplx(re, im);
    }

    const cplx to_lab = rotate(-grid_.omega0 * t_target);
    const cplx from_rot = rotate(grid_.omega0 * s.time);
    const double r2 = 1.0 / std::sqrt(2.0);
    FieldState out;
    out.grid = grid_;
    out.time = t_target;
    out.psi = x0 * to_lab;
    out.phi_a.resize(n);
    out.phi_b.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const cplx even = cplx(0.0, 1.0) * xs[j];
        const cplx odd = (s.phi_a[j] - s.phi_b[j]) * r2 * from_rot * rotate(-grid_.offset(j) * dt);
        out.phi_a[j] = (even + odd) * r2 * to_lab;
        out.phi_b[j] = (even - odd) * r2 * to_lab;
    }
    const double drift = std::abs(out.norm() - norm0);
    if (drift > 1e-6 * std::max(1.0, gamma1d_ * dt))
        throw UnitarityViolation("lattice evolve: norm drift " + std::to_string(drift));
    return out;
}

std::vector<cplx> LatticePropagator::psi_trace(const FieldState& s,
                                               const std::vector<double>& times) const {
    const auto c = project(s);
    std::vector<cplx> out;
    out.reserve(times.size());
    for (double t : times) {
        if (t < s.time) throw ValidationError("lattice psi_trace: time precedes state time");
        const double dt = t - s.time;
        cplx acc{};
        for (std::size_t k = 0; k < c.size(); ++k)
            acc += c[k] * roots_[k].inv_norm * rotate(-lambda_[k] * dt);
        out.push_back(acc * rotate(-grid_.omega0 * t));
    }
    return out;
}

FieldState evolve(const FieldState& s, const LatticeConfig& cfg, const SimParams& p,
                  double t_target) {
    return LatticePropagator(cfg, p).evolve(s, t_target);
}

ChannelProfile realspace_snapshot(const FieldState& s, const std::vector<double>& x_grid) {
    const auto& gr = s.grid;
    const double inv_sqrt_l = 1.0 / std::sqrt(2.0 * kPi / gr.spacing);
    ChannelProfile prof;
    prof.x = x_grid;
    prof.a.reserve(x_grid.size());
    prof.b.reserve(x_grid.size());
    for (double x : x_grid) {
        cplx sa{}, sb{};
        for (std::size_t j = 0; j < gr.n; ++j) {
            const cplx e = rotate(gr.offset(j) * x);
            sa += s.phi_a[j] * e;
            sb += s.phi_b[j] * std::conj(e);
        }
        const cplx carrier = rotate(gr.omega0 * x);
        prof.a.push_back(sa * carrier * inv_sqrt_l);
        prof.b.push_back(sb * std::conj(carrier) * inv_sqrt_l);
    }
    return prof;
}

ChannelProfile realspace_periodic(const FieldState& s) {
    const auto& gr = s.grid;
    const std::size_t n = gr.n;
    const double period = 2.0 * kPi / gr.spacing;
    const double inv_sqrt_l = 1.0 / std::sqrt(period);

    std::vector<cplx> in_a(n), in_b(n), out_a(n), out_b(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        in_a[j] = sign * s.phi_a[j];
        in_b[j] = sign * s.phi_b[j];
    }
    auto run = [n](std::vector<cplx>& in, std::vector<cplx>& out, int dir) {
        fftw_plan plan = fftw_plan_dft_1d(int(n), reinterpret_cast<fftw_complex*>(in.data()),
                                          reinterpret_cast<fftw_complex*>(out.data()), dir,
                                          FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    };
    run(in_a, out_a, FFTW_BACKWARD);
    run(in_b, out_b, FFTW_FORWARD);

    ChannelProfile prof;
    prof.x.resize(n);
    prof.a.resize(n);
    prof.b.resize(n);
    const double half = 0.5 * double(n - 1);
    for (std::size_t m = 0; m < n; ++m) {
        const double x = -0.5 * period + period * double(m) / double(n);
        // e^{i nu_j x_m} = (-1)^j e^{i pi (n-1)/2} e^{2 pi i j m / n} e^{-i pi (n-1) m / n}
        const double ph = kPi * half - 2.0 * kPi * half * double(m) / double(n);
        prof.x[m] = x;
        prof.a[m] = out_a[m] * rotate(ph + gr.omega0 * x) * inv_sqrt_l;
        prof.b[m] = out_b[m] * rotate(-ph - gr.omega0 * x) * inv_sqrt_l;
    }
    return prof;
}

double edge_probability(const FieldState& s, double margin) {
    const auto prof = realspace_periodic(s);
    const double period = 2.0 * kPi / s.grid.spacing;
    const double dx = period / double(s.grid.n);
    const double cut = (1.0 - margin) * 0.5 * period;
    double p = 0.0;
    for (std::size_t m = 0; m < prof.x.size(); ++m)
        if (std::abs(prof.x[m]) > cut) p += (std::norm(prof.a[m]) + std::norm(prof.b[m])) * dx;
    return p;
}

double lattice_interaction_energy(const FieldState& s, double gamma1d) {
    const double g = std::sqrt(gamma1d * s.grid.spacing / (4.0 * kPi));
    cplx sum{};
    for (std::size_t j = 0; j < s.grid.n; ++j) sum += s.phi_a[j] + s.phi_b[j];
    return 2.0 * g * (std::conj(s.psi) * sum).imag();
}

void write_snapshot_csv(std::ostream& os, const ChannelProfile& prof) {
    os << "x,channel,re,im\n";
    for (std::size_t m = 0; m < prof.x.size(); ++m)
        os << format_double(prof.x[m]) << ",a," << format_double(prof.a[m].real()) << ','
           << format_double(prof.a[m].imag()) << '\n';
    for (std::size_t m = 0; m < prof.x.size(); ++m)
        os << format_double(prof.x[m]) << ",b," << format_double(prof.b[m].real()) << ','
           << format_double(prof.b[m].imag()) << '\n';
}

namespace {

void put_f32(std::ostream& os, float v) {
    auto bits = std::bit_cast<std::uint32_t>(v);
    if constexpr (std::endian::native == std::endian::big)
        bits = ((bits & 0xffu) << 24) | ((bits & 0xff00u) << 8) | ((bits >> 8) & 0xff00u) | (bits >> 24);
    char buf[4];
    std::memcpy(buf, &bits, 4);
    os.write(buf, 4);
}

float get_f32(std::istream& is) {
    char buf[4];
    if (!is.read(buf, 4)) throw IoError("checkpoint: truncated payload");
    std::uint32_t bits;
    std::memcpy(&bits, buf, 4);
    if constexpr (std::endian::native == std::endian::big)
        bits = ((bits & 0xffu) << 24) | ((bits & 0xff00u) << 8) | ((bits >> 8) & 0xff00u) | (bits >> 24);
    return std::bit_cast<float>(bits);
}

} // namespace

void save_checkpoint(const std::string& path, const FieldState& s, double gamma1d) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open checkpoint for writing: " + path);
    nlohmann::json header = {
        {"format", "wqt-lattice-checkpoint"}, {"version", 1},
        {"n_modes", s.grid.n},                {"omega0", s.grid.omega0},
        {"spacing", s.grid.spacing},          {"bandwidth", 0.5 * s.grid.spacing * double(s.grid.n)},
        {"time", s.time},                     {"gamma1d", gamma1d},
        {"dtype", "complex64-le"},            {"layout", {"psi", "phi_a", "phi_b"}},
    };
    os << header.dump() << '\n';
    auto put = [&](cplx z) {
        put_f32(os, float(z.real()));
        put_f32(os, float(z.imag()));
    };
    put(s.psi);
    for (const auto& z : s.phi_a) put(z);
    for (const auto& z : s.phi_b) put(z);
    if (!os) throw IoError("failed writing checkpoint: " + path);
}

FieldState load_checkpoint(const std::string& path, double* gamma1d) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open checkpoint: " + path);
    std::string line;
    std::getline(is, line);
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
        throw IoError(std::string("checkpoint header is not JSON: ") + e.what());
    }
    if (header.value("format", "") != "wqt-lattice-checkpoint")
        throw IoError("not a wqt lattice checkpoint: " + path);
    FieldState s;
    s.grid.n = header.at("n_modes").get<std::size_t>();
    s.grid.omega0 = header.at("omega0").get<double>();
    s.grid.spacing = header.at("spacing").get<double>();
    s.time = header.at("time").get<double>();
    if (gamma1d) *gamma1d = header.at("gamma1d").get<double>();
    auto get = [&] {
        const float re = get_f32(is);
        const float im = get_f32(is);
        return cplx(re, im);
    };
    s.psi = get();
    s.phi_a.resize(s.grid.n);
    s.phi_b.resize(s.grid.n);
    for (auto& z : s.phi_a) z = get();
    for (auto& z : s.phi_b) z = get();
    return s;
}

} // namespace wqt
