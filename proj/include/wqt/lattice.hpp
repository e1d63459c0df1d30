// lattice.hpp — Brute-force oracle: the TLS coupled to a discretized,
// band-limited bidirectional continuum, propagated exactly in the
// one-excitation sector.
//
// Modes sit on a uniform grid omega_j = omega0 + nu_j, nu_j = (j - (n-1)/2) d,
// d = 2 bandwidth / n, with flat coupling g = sqrt(gamma1d d / 4 pi). The field
// is periodic in space with period L = 2 pi / d (c = 1), so radiation returns to
// the TLS after the recurrence time L.
//
// Only the even combination s_j = (a_j + b_j)/sqrt2 couples to the TLS. In the
// frame rotating at omega0, (psi, -i s) evolves under the real symmetric arrow
// matrix [[0, G 1^T], [G 1, diag(nu)]] with G = sqrt2 g, whose eigenpairs follow
// from the secular equation lambda = G^2 sum_j 1 / (lambda - nu_j); the odd
// combination evolves freely.

#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "wqt/params.hpp"

namespace wqt {

using cplx = std::complex<double>;

struct LatticeConfig {
    std::size_t n_modes{4096};  // per direction
    double bandwidth{0.0};      // half-width of the retained band around omega0
    double x_extent{0.0};       // half-length used for real-space dumps

    double mode_spacing() const { return 2.0 * bandwidth / double(n_modes); }
    double period() const;  // spatial period = recurrence time

    // Band wide enough for 50 x the fastest rate and for 99.9% of the packet's
    // Lorentzian norm; spacing fine enough that radiation emitted up to
    // t_horizon stays clear of the cell edges. n_modes is at least 4096.
    static LatticeConfig defaults_for(const SimParams& p, double t_horizon);

    void validate() const;
    // Band narrower than 20x any rate: results are low fidelity.
    bool low_fidelity(const SimParams& p) const;
};

struct ModeGrid {
    double omega0{0.0};
    double spacing{0.0};
    std::size_t n{0};

    double offset(std::size_t j) const { return (double(j) - 0.5 * double(n - 1)) * spacing; }
    double frequency(std::size_t j) const { return omega0 + offset(j); }
};

// Lab-frame amplitudes of |xi(t)> = psi |e,0> + sum_j (phi_a_j a_j^+ + phi_b_j b_j^+) |g,0>.
struct FieldState {
    cplx psi{0.0, 0.0};
    std::vector<cplx> phi_a;
    std::vector<cplx> phi_b;
    double time{0.0};
    ModeGrid grid;

    double norm() const;
};

// Fraction of the packet's continuum Lorentzian norm inside [-bandwidth, bandwidth].
double lorentzian_capture(double bandwidth, double delta_lw, double detuning);

// Exponential packet phi_a(x, 0) ~ Theta(-x) exp[(delta_lw/2 + i omega_L) x]; its
// mode amplitudes are 1 / (delta_lw/2 - i (nu_j - detuning)), renormalized.
FieldState init_exponential_packet(const LatticeConfig& cfg, const SimParams& p);
FieldState init_excited_tls(const LatticeConfig& cfg, const SimParams& p);

// First time after which the scattering P_e provably stays below pe_threshold.
double settle_time(const SimParams& p, double pe_threshold);

class LatticePropagator {
public:
    LatticePropagator(const LatticeConfig& cfg, const SimParams& p);

    const ModeGrid& grid() const { return grid_; }
    double coupling() const { return g_; }
    std::size_t size() const { return lambda_.size(); }
    const std::vector<double>& eigenvalues() const { return lambda_; }

    // Exact propagation; throws UnitarityViolation if the norm drifts by more
    // than 1e-6 per unit time.
    FieldState evolve(const FieldState& s, double t_target) const;
    // TLS amplitude at each time (>= s.time) without building the field.
    std::vector<cplx> psi_trace(const FieldState& s, const std::vector<double>& times) const;

    // Eigenvector k of the even-sector arrow matrix (component 0 is the TLS).
    std::vector<double> eigenvector(std::size_t k) const;

private:
    struct Root {
        long pole;     // index of the mode the eigenvalue is measured from
        double eps;    // (lambda - nu_pole) / spacing
        double inv_norm;
    };
    std::vector<cplx> project(const FieldState& s) const;
    double component(const Root& r, std::size_t j) const;  // v_k[j+1] * norm

    ModeGrid grid_;
    double gamma1d_;
    double g_;
    double big_g_;
    std::vector<Root> roots_;
    std::vector<double> lambda_;
};

FieldState evolve(const FieldState& s, const LatticeConfig& cfg, const SimParams& p,
                  double t_target);

struct ChannelProfile {
    std::vector<double> x;
    std::vector<cplx> a;
    std::vector<cplx> b;
};

// phi_a(x) = sum_j phi_a_j e^{i k_j x} / sqrt(L), phi_b(x) = sum_j phi_b_j e^{-i k_j x} / sqrt(L),
// k_j = omega_j. Normalized so that the integral of |phi|^2 over one period is the channel norm.
ChannelProfile realspace_snapshot(const FieldState& s, const std::vector<double>& x_grid);
// Same on the n-point periodic grid x_m = -L/2 + m L/n, via FFT.
ChannelProfile realspace_periodic(const FieldState& s);

// Probability within `margin` x L/2 of the cell edges, both channels.
double edge_probability(const FieldState& s, double margin = 0.05);

// <H_int> = 2 g Im[conj(psi) sum_j phi_a_j] + (same for b) on the lattice.
double lattice_interaction_energy(const FieldState& s, double gamma1d);

// Snapshot CSV: x,channel,re,im
void write_snapshot_csv(std::ostream& os, const ChannelProfile& prof);

// Binary checkpoint: one line of JSON (grid, time, gamma1d) followed by
// little-endian complex64 arrays psi[1], phi_a[n], phi_b[n].
void save_checkpoint(const std::string& path, const FieldState& s, double gamma1d);
FieldState load_checkpoint(const std::string& path, double* gamma1d = nullptr);

} // namespace wqt
