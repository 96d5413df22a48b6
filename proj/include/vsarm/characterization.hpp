#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vsarm {

struct StiffnessRow {
    double pressure_psi;
    double capacity_N;
};

// Load capacity at the reference deflection as a function of vacuum pressure.
struct StiffnessTable {
    std::vector<StiffnessRow> rows;
    double reference_deflection_m = 0.020;
    std::string label;
};

void validate(const StiffnessTable& table);

/// Whole two-segment arm loaded at the tip: 0.2 N at 0 psi, 2.7 N at 12.5 psi.
StiffnessTable two_segment_table();
/// Segment 1 alone loaded at the connector: 1 N at 0 psi, 10 N at 12.5 psi.
StiffnessTable segment1_table();

struct Interval {
    double lo;
    double hi;
};

struct RegressionFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::optional<Interval> slope_ci95;      // present when n >= 3
    std::optional<Interval> intercept_ci95;
    double r_squared = 0.0;
    std::size_t n = 0;
};

struct Point2 {
    double x;
    double y;
};

struct MarkerPair {
    Point2 a;
    Point2 b;
};

/// Angle of line AB in degrees, folded into (-90, 90]; vertical lines give 90.
double bend_angle_from_markers(const MarkerPair& m);

/// Ordinary least squares with t-based 95% intervals (n - 2 dof).
RegressionFit fit_linear(std::span<const Point2> points);

/// Piecewise-linear capacity lookup. Throws std::out_of_range outside the table.
double capacity_at(const StiffnessTable& table, double pressure_psi);

double stiffness_ratio(const StiffnessTable& table, double pressure_psi);

/// Linear spring through the capacity at the reference deflection (N/m).
double spring_constant(const StiffnessTable& table, double pressure_psi);

struct Deflection {
    double meters;
    bool exceeds_rating;  // beyond the reference deflection
};

Deflection deflection_under_load(const StiffnessTable& table, double pressure_psi, double force_N);

}  // namespace vsarm
