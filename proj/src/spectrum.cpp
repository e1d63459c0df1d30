// spectrum.cpp — Gaussian-windowed short-time Fourier transform

#include "wqt/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <fftw3.h>

#include "wqt/errors.hpp"

namespace wqt {

namespace {

constexpr double kMinWindowPower = 1e-10;

// Vertex of the parabola through (-1, a), (0, b), (1, c).
double parabola_vertex(double a, double b, double c) {
    const double den = a - 2.0 * b + c;
    if (den >= 0.0) return 0.0;
    return std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
}

class Fft {
public:
    explicit Fft(std::size_t n)
        : n_(n), buf_(fftw_alloc_complex(n)),
          plan_(fftw_plan_dft_1d(int(n), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE)) {}
    ~Fft() {
        fftw_destroy_plan(plan_);
        fftw_free(buf_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    cplx* data() { return reinterpret_cast<cplx*>(buf_); }
    void run() { fftw_execute(plan_); }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    fftw_complex* buf_;
    fftw_plan plan_;
};

} // namespace

Spectrogram time_windowed_spectrum(const DetectorTrace& det, const SpectrumOptions& opt) {
    const auto& t = det.times;
    if (t.size() < 8) throw ValidationError("spectrum: detector trace too short");
    const double dt = (t.back() - t.front()) / double(t.size() - 1);
    if (!(dt > 0.0)) throw ValidationError("spectrum: time grid must be increasing");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * dt * double(t.size()))
            throw ValidationError("spectrum: time grid must be uniform");
    if (!(opt.window_width >= 4.0 * dt))
        throw ValidationError("spectrum: window must span at least 4 samples");
    if (!(opt.hop > 0.0) || opt.hop > opt.window_width)
        throw ValidationError("spectrum: hop must lie in (0, window_width]");

    const double pi = std::numbers::pi;
    const double nyquist = pi / dt;
    const double half_band = opt.half_band > 0.0 ? std::min(opt.half_band, nyquist) : nyquist;
    const auto half_len = static_cast<std::size_t>(std::floor(0.5 * opt.window_width / dt));
    const std::size_t len = 2 * half_len + 1;
    const std::size_t nfft = std::bit_ceil(4 * len);
    const double dw = 2.0 * pi / (double(nfft) * dt);
    const double sigma = opt.window_width / 6.0;

    Spectrogram sg;
    sg.window_width = opt.window_width;
    sg.hop = opt.hop;
    sg.resolution = 2.0 * pi / opt.window_width;

    // Band bins in ascending frequency: offsets k = -kmax..kmax.
    const auto kmax = static_cast<long>(std::min<double>(std::floor(half_band / dw),
                                                         double(nfft / 2 - 1)));
    for (long k = -kmax; k <= kmax; ++k) sg.frequencies.push_back(opt.reference + double(k) * dw);

    Fft fft(nfft);
    const auto hop_samples = std::max<std::size_t>(1, std::size_t(std::llround(opt.hop / dt)));
    for (std::size_t mid = half_len; mid + half_len < t.size(); mid += hop_samples) {
        const double center = t[mid];
        cplx* x = fft.data();
        std::fill(x, x + nfft, cplx{});
        double energy = 0.0;
        for (std::size_t m = 0; m < len; ++m) {
            const double tm = t[mid - half_len + m];
            const double u = (tm - center) / sigma;
            const cplx v = det.amp_b[mid - half_len + m] * std::exp(-0.5 * u * u) *
                           std::polar(1.0, opt.reference * tm);
            energy += std::norm(v) * dt;
            x[m] = v;
        }
        if (energy < kMinWindowPower) {
            ++sg.skipped;
            continue;
        }
        fft.run();
        std::vector<double> row(sg.frequencies.size());
        for (long k = -kmax; k <= kmax; ++k) {
            const std::size_t bin = k >= 0 ? std::size_t(k) : nfft - std::size_t(-k);
            row[std::size_t(k + kmax)] = std::norm(x[bin]) * dt * dt;
        }
        const auto top = std::size_t(std::max_element(row.begin(), row.end()) - row.begin());
        double shift = 0.0;
        if (top > 0 && top + 1 < row.size() && row[top - 1] > 0.0 && row[top + 1] > 0.0)
            shift = parabola_vertex(std::log(row[top - 1]), std::log(row[top]),
                                    std::log(row[top + 1]));
        sg.centers.push_back(center);
        sg.peak_freq.push_back(sg.frequencies[top] + shift * dw);
        sg.power.push_back(std::move(row));
    }
    return sg;
}

} // namespace wqt
