// spectrum.hpp — Time-windowed fluorescence spectrum of the detected field
//
// Each window multiplies the detector amplitude by a Gaussian taper
// (sigma = width/6), demodulates at a reference frequency and takes a
// zero-padded FFT. The peak of every window is located by a parabola through
// the log power of the three highest bins.

#pragma once

#include <cstddef>
#include <vector>

#include "wqt/field.hpp"

namespace wqt {

struct SpectrumOptions {
    double window_width{0.0};
    double hop{0.0};
    double reference{0.0};  // demodulation frequency, typically omega0
    double half_band{0.0};  // reported band around reference; 0 = Nyquist
};

struct Spectrogram {
    double window_width{0.0};
    double hop{0.0};
    double resolution{0.0};             // 2 pi / window_width
    std::vector<double> centers;        // retained windows only
    std::vector<double> frequencies;    // ascending, shared by all windows
    std::vector<std::vector<double>> power;
    std::vector<double> peak_freq;
    std::size_t skipped{0};             // windows with total power < 1e-10
};

// Requires a uniform time grid, width >= 4 samples and 0 < hop <= width.
Spectrogram time_windowed_spectrum(const DetectorTrace& det, const SpectrumOptions& opt);

} // namespace wqt
