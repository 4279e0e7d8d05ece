#include "ibcsim_cli/output.hpp"

#include <cmath>
#include <filesystem>
#include <system_error>

#include "ibc/errors.hpp"
#include "ibc/params.hpp"
#include "ibcsim_cli/config.hpp"

namespace ibccli {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return ibc::format_double(v);
}

CsvWriter::CsvWriter(const std::string& path, const Metadata& meta, const std::vector<std::string>& columns)
    : path_(path), out_(path, std::ios::binary), width_(columns.size()) {
    if (!out_) throw ConfigError("cannot write '" + path + "'");
    for (const auto& [k, v] : meta) out_ << "# " << k << '=' << v << '\n';
    row(columns);
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(fmt(v));
    row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw ibc::Error("CSV row width mismatch in " + path_);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw ConfigError("output directory '" + dir + "' is not usable");
}

}  // namespace ibccli
