#pragma once

#include "vsarm/characterization.hpp"

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vsarm {

class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Two-column numeric CSV with a mandatory header. Blank lines and lines
// starting with '#' are skipped.
std::vector<Point2> read_two_column_csv(std::istream& in, const std::string& col0,
                                        const std::string& col1);

/// Calibration data, header `x_m,theta_deg`.
std::vector<Point2> read_calibration_csv(std::istream& in);
std::vector<Point2> read_calibration_csv(const std::filesystem::path& path);

/// Stiffness table, header `pressure_psi,capacity_N`.
StiffnessTable read_stiffness_csv(std::istream& in, std::string label = {});
StiffnessTable read_stiffness_csv(const std::filesystem::path& path);

}  // namespace vsarm
