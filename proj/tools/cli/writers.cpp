// writers.cpp: number formatting and file output

#include "cli/writers.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "cli/run_config.hpp"

namespace dualseries::cli {

std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) return "nan";
    return std::string(buf.data(), end);
}

bool parse_double(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

std::string matrix_path_csv(const std::string& hash, const TimeGrid& grid, const std::vector<CMat>& path,
                            const std::string& prefix) {
    const std::size_t n = path.empty() ? 0 : path.front().dim();
    std::string out = "# config-hash: " + hash + "\n";
    out += "t";
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const std::string name = prefix + std::to_string(r) + std::to_string(c);
            out += "," + name + "_re," + name + "_im";
        }
    }
    out += "\n";
    for (std::size_t k = 0; k < path.size(); ++k) {
        out += format_double(grid.at(k));
        for (const cplx& z : path[k].entries()) {
            out += ",";
            out += format_double(z.real());
            out += ",";
            out += format_double(z.imag());
        }
        out += "\n";
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw IoError("failed writing " + path.string());
}

}  // namespace dualseries::cli
