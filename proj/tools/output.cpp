#include "output.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace vircli {

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
}

std::string format_real(double x) { return fmt::format("{:.16e}", x); }

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
    text_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& row) {
    if (row.size() != columns_) throw std::logic_error("csv row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) text_ += ',';
        text_ += format_real(row[i]);
    }
    text_ += '\n';
}

void CsvTable::add_footer(const std::vector<std::string>& header, const std::vector<double>& row) {
    if (header.size() != row.size()) throw std::logic_error("csv footer width mismatch");
    text_ += '\n';
    for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
    text_ += '\n';
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) text_ += ',';
        text_ += format_real(row[i]);
    }
    text_ += '\n';
}

std::string CsvTable::str() const { return text_; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string waterfall_svg(const std::vector<double>& times, const std::vector<std::vector<double>>& frames) {
    constexpr double width = 800, height = 600, margin = 40;
    if (frames.empty()) throw std::invalid_argument("waterfall_svg: no frames");
    double amp = 0;
    for (const auto& f : frames) {
        for (double v : f) amp = std::max(amp, std::abs(v));
    }
    if (amp == 0) amp = 1;
    const double t0 = times.front();
    const double span = times.back() > t0 ? times.back() - t0 : 1.0;
    // Frames climb upward with time; each is drawn at 30% of the panel height.
    const double plot_h = height - 2 * margin;
    const double wave_h = 0.15 * plot_h;
    const double shift_h = plot_h - 2 * wave_h;

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        width, height, width, height);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const auto& f = frames[i];
        const double base = height - margin - wave_h - shift_h * (times[i] - t0) / span;
        svg += "<polyline fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1\" points=\"";
        const std::size_t n = f.size();
        for (std::size_t j = 0; j <= n; ++j) {
            const double x = margin + (width - 2 * margin) * static_cast<double>(j) / static_cast<double>(n);
            const double y = base - wave_h * f[j % n] / amp;
            svg += fmt::format("{}{:.2f},{:.2f}", j ? " " : "", x, y);
        }
        svg += "\"/>\n";
    }
    svg += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">x in [0, 2pi), t from {:.4g} to {:.4g}, "
        "max|v| = {:.4g}</text>\n</svg>\n",
        margin, margin / 2, t0, times.back(), amp);
    return svg;
}

}  // namespace vircli
