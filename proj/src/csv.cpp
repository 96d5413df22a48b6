#include "vsarm/csv.hpp"

#include <charconv>
#include <fstream>
#include <string_view>

namespace vsarm {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view field, std::size_t line) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw CsvError(line, "not a number: '" + std::string(field) + "'");
    }
    return v;
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return in;
}

}  // namespace

std::vector<Point2> read_two_column_csv(std::istream& in, const std::string& col0,
                                        const std::string& col1) {
    std::vector<Point2> out;
    std::string raw;
    std::size_t line = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line;
        const auto text = trim(raw);
        if (text.empty() || text.front() == '#') continue;
        const auto comma = text.find(',');
        if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
            throw CsvError(line, "expected exactly two comma-separated fields");
        }
        const auto a = trim(text.substr(0, comma));
        const auto b = trim(text.substr(comma + 1));
        if (!header_seen) {
            if (a != col0 || b != col1) {
                throw CsvError(line, "expected header '" + col0 + "," + col1 + "'");
            }
            header_seen = true;
            continue;
        }
        out.push_back({parse_number(a, line), parse_number(b, line)});
    }
    if (!header_seen) throw CsvError(line, "missing header '" + col0 + "," + col1 + "'");
    return out;
}

std::vector<Point2> read_calibration_csv(std::istream& in) {
    return read_two_column_csv(in, "x_m", "theta_deg");
}

std::vector<Point2> read_calibration_csv(const std::filesystem::path& path) {
    auto in = open(path);
    return read_calibration_csv(in);
}

StiffnessTable read_stiffness_csv(std::istream& in, std::string label) {
    StiffnessTable table;
    table.label = std::move(label);
    for (const auto& p : read_two_column_csv(in, "pressure_psi", "capacity_N")) {
        table.rows.push_back({p.x, p.y});
    }
    validate(table);
    return table;
}

StiffnessTable read_stiffness_csv(const std::filesystem::path& path) {
    auto in = open(path);
    return read_stiffness_csv(in, path.filename().string());
}

}  // namespace vsarm
