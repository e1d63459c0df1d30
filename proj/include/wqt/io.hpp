// io.hpp — Lossless CSV/JSON serialization of traces, sweeps and spectra
//
// Every double is written in scientific notation with 17 significant digits,
// so parsing a file back reproduces the in-memory values bit for bit.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "wqt/dynamics.hpp"
#include "wqt/thermodynamics.hpp"

namespace wqt {

struct DetectorTrace;
struct Spectrogram;

std::string format_double(double v);
// Throws ValidationError on anything that is not a complete number.
double parse_double(std::string_view s);

void write_trace_csv(std::ostream& os, const CoefficientTrace& tr);
CoefficientTrace read_trace_csv(std::istream& is);

void write_detector_csv(std::ostream& os, const DetectorTrace& det);

void write_sweep_csv(std::ostream& os, const SweepTable& table);
void write_sweep_json(std::ostream& os, const SweepTable& table);

void write_spectrogram_csv(std::ostream& os, const Spectrogram& sg);
void write_spectrogram_json(std::ostream& os, const Spectrogram& sg);
void write_peak_track_csv(std::ostream& os, const Spectrogram& sg);

// Opens `path` for writing, runs `fill`, and converts stream failures to IoError.
template <class Fill>
void write_file(const std::string& path, Fill&& fill);

void ensure_directory(const std::string& dir);

} // namespace wqt

#include <fstream>

#include "wqt/errors.hpp"

template <class Fill>
void wqt::write_file(const std::string& path, Fill&& fill) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    fill(os);
    os.flush();
    if (!os) throw IoError("write failed: " + path);
}
