#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace vircli {

using json = nlohmann::ordered_json;

/// Writes to "<path>.tmp" and renames over path.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

/// 17 significant digits, scientific.
std::string format_real(double x);

/// Comma-separated table with a header row and LF line endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(const std::vector<double>& row);
    /// Appends a blank line and a second header/rows block (fit summaries).
    void add_footer(const std::vector<std::string>& header, const std::vector<double>& row);

    std::string str() const;

private:
    std::size_t columns_;
    std::string text_;
};

std::string dump(const json& j);

/// Waterfall of snapshots v(x, t_i), one polyline per snapshot offset by its
/// time.
std::string waterfall_svg(const std::vector<double>& times, const std::vector<std::vector<double>>& frames);

}  // namespace vircli
