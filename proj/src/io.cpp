// io.cpp — CSV/JSON writers and the trace reader

#include "wqt/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <istream>
#include <ostream>
#include <sstream>

#include "wqt/errors.hpp"
#include "wqt/field.hpp"
#include "wqt/spectrum.hpp"

namespace wqt {

std::string format_double(double v) {
    std::array<char, 40> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::scientific, 16);
    return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ValidationError("not a number: '" + std::string(s) + "'");
    return v;
}

namespace {

// JSON has no NaN/Inf literals.
std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (static_cast<unsigned char>(c) < 0x20) {
            out += ' ';
            continue;
        }
        out += c;
    }
    return out + '"';
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

constexpr const char* kTraceHeader = "t,pe,omega_s,gamma_t,w_flux,q_flux";

} // namespace

void write_trace_csv(std::ostream& os, const CoefficientTrace& tr) {
    os << kTraceHeader << '\n';
    for (std::size_t i = 0; i < tr.size(); ++i)
        os << format_double(tr.times[i]) << ',' << format_double(tr.pe[i]) << ','
           << format_double(tr.omega_s[i]) << ',' << format_double(tr.gamma_t[i]) << ','
           << format_double(tr.w_flux[i]) << ',' << format_double(tr.q_flux[i]) << '\n';
}

CoefficientTrace read_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kTraceHeader)
        throw IoError("trace CSV: missing or unexpected header");
    CoefficientTrace tr;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 6) throw IoError("trace CSV: line " + std::to_string(lineno) +
                                            " has " + std::to_string(cols.size()) + " columns");
        try {
            tr.times.push_back(parse_double(cols[0]));
            tr.pe.push_back(parse_double(cols[1]));
            tr.omega_s.push_back(parse_double(cols[2]));
            tr.gamma_t.push_back(parse_double(cols[3]));
            tr.w_flux.push_back(parse_double(cols[4]));
            tr.q_flux.push_back(parse_double(cols[5]));
        } catch (const ValidationError& e) {
            throw IoError("trace CSV: line " + std::to_string(lineno) + ": " + e.what());
        }
        tr.pole.push_back(std::isnan(tr.omega_s.back()) ? 1 : 0);
    }
    return tr;
}

void write_detector_csv(std::ostream& os, const DetectorTrace& det) {
    os << "t,re_amp,im_amp,intensity,eff_color\n";
    for (std::size_t i = 0; i < det.size(); ++i)
        os << format_double(det.times[i]) << ',' << format_double(det.amp_b[i].real()) << ','
           << format_double(det.amp_b[i].imag()) << ',' << format_double(det.intensity[i]) << ','
           << format_double(det.eff_color[i]) << '\n';
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
    os << "delta_lw,detuning,w_net,q_net,max_pe,quad_error\n";
    for (const auto& r : table.rows)
        os << format_double(r.delta_lw) << ',' << format_double(r.detuning) << ','
           << format_double(r.cycle.w_net) << ',' << format_double(r.cycle.q_net) << ','
           << format_double(r.cycle.max_pe) << ',' << format_double(r.cycle.quad_error) << '\n';
}

void write_sweep_json(std::ostream& os, const SweepTable& table) {
    os << "[\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        os << "  {\"delta_lw\": " << json_number(r.delta_lw)
           << ", \"detuning\": " << json_number(r.detuning)
           << ", \"w_net\": " << json_number(r.cycle.w_net)
           << ", \"q_net\": " << json_number(r.cycle.q_net)
           << ", \"max_pe\": " << json_number(r.cycle.max_pe)
           << ", \"quad_error\": " << json_number(r.cycle.quad_error)
           << ", \"min_gamma\": " << json_number(r.cycle.min_gamma)
           << ", \"converged\": " << (r.cycle.converged ? "true" : "false")
           << ", \"ok\": " << (r.ok ? "true" : "false");
        if (!r.ok) os << ", \"error\": " << json_string(r.error);
        os << '}' << (i + 1 < table.rows.size() ? "," : "") << '\n';
    }
    os << "]\n";
}

void write_spectrogram_csv(std::ostream& os, const Spectrogram& sg) {
    os << "window_center_time,frequency,power\n";
    for (std::size_t w = 0; w < sg.centers.size(); ++w)
        for (std::size_t k = 0; k < sg.frequencies.size(); ++k)
            os << format_double(sg.centers[w]) << ',' << format_double(sg.frequencies[k]) << ','
               << format_double(sg.power[w][k]) << '\n';
}

void write_spectrogram_json(std::ostream& os, const Spectrogram& sg) {
    os << "{\n  \"window_width\": " << json_number(sg.window_width)
       << ",\n  \"hop\": " << json_number(sg.hop)
       << ",\n  \"resolution\": " << json_number(sg.resolution)
       << ",\n  \"skipped_windows\": " << sg.skipped << ",\n  \"frequencies\": [";
    for (std::size_t k = 0; k < sg.frequencies.size(); ++k)
        os << (k ? ", " : "") << json_number(sg.frequencies[k]);
    os << "],\n  \"windows\": [\n";
    for (std::size_t w = 0; w < sg.centers.size(); ++w) {
        os << "    {\"center\": " << json_number(sg.centers[w])
           << ", \"peak_freq\": " << json_number(sg.peak_freq[w]) << ", \"power\": [";
        for (std::size_t k = 0; k < sg.power[w].size(); ++k)
            os << (k ? ", " : "") << json_number(sg.power[w][k]);
        os << "]}" << (w + 1 < sg.centers.size() ? "," : "") << '\n';
    }
    os << "  ]\n}\n";
}

void write_peak_track_csv(std::ostream& os, const Spectrogram& sg) {
    os << "t_center,peak_freq\n";
    for (std::size_t w = 0; w < sg.centers.size(); ++w)
        os << format_double(sg.centers[w]) << ',' << format_double(sg.peak_freq[w]) << '\n';
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw IoError("cannot create output directory: " + dir);
}

} // namespace wqt
