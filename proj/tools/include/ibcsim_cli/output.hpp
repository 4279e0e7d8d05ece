#pragma once

#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace ibccli {

using Metadata = std::vector<std::pair<std::string, std::string>>;

// 17 significant digits; nan/inf spelled as such.
std::string fmt(double v);

// Comma-separated, '.' decimal, LF line ends. Metadata goes first as "# key=value"
// lines, followed by one header row.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const Metadata& meta, const std::vector<std::string>& columns);

    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& cells);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ofstream out_;
    std::size_t width_;
};

std::string join_path(const std::string& dir, const std::string& name);
void ensure_directory(const std::string& dir);

}  // namespace ibccli
