#include "vsarm/characterization.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vsarm {

void validate(const StiffnessTable& table) {
    if (table.rows.empty()) throw std::invalid_argument("stiffness table has no rows");
    if (!(table.reference_deflection_m > 0.0)) {
        throw std::invalid_argument("reference deflection must be positive");
    }
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        if (!(r.pressure_psi >= 0.0) || !std::isfinite(r.pressure_psi)) {
            throw std::invalid_argument("stiffness table pressures must be >= 0");
        }
        if (!(r.capacity_N > 0.0) || !std::isfinite(r.capacity_N)) {
            throw std::invalid_argument("stiffness table capacities must be > 0");
        }
        if (i > 0) {
            const auto& prev = table.rows[i - 1];
            if (!(r.pressure_psi > prev.pressure_psi)) {
                throw std::invalid_argument("stiffness table pressures must be strictly increasing");
            }
            if (r.capacity_N < prev.capacity_N) {
                throw std::invalid_argument("stiffness table capacities must not decrease with pressure");
            }
        }
    }
}

StiffnessTable two_segment_table() {
    return {{{0.0, 0.2}, {12.5, 2.7}}, 0.020, "two-segment arm, tip load"};
}

StiffnessTable segment1_table() {
    return {{{0.0, 1.0}, {12.5, 10.0}}, 0.020, "segment 1, connector load"};
}

double bend_angle_from_markers(const MarkerPair& m) {
    const double dx = m.a.x - m.b.x;
    const double dy = m.a.y - m.b.y;
    if (dx == 0.0 && dy == 0.0) throw std::invalid_argument("marker points coincide");
    double deg = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
    if (deg > 90.0) deg -= 180.0;
    if (deg <= -90.0) deg += 180.0;
    return deg;
}

RegressionFit fit_linear(std::span<const Point2> points) {
    const std::size_t n = points.size();
    if (n < 2) throw std::invalid_argument("fit_linear: need at least 2 points");

    double mx = 0.0;
    double my = 0.0;
    for (const auto& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& p : points) {
        const double dx = p.x - mx;
        const double dy = p.y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_linear: x values are all equal");

    RegressionFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double sse = 0.0;
    for (const auto& p : points) {
        const double r = p.y - (fit.intercept + fit.slope * p.x);
        sse += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;

    if (n >= 3) {
        const double dof = static_cast<double>(n - 2);
        const double s2 = sse / dof;
        const double se_slope = std::sqrt(s2 / sxx);
        const double se_icpt = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));
        const boost::math::students_t dist(dof);
        const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
        fit.slope_ci95 = Interval{fit.slope - t * se_slope, fit.slope + t * se_slope};
        fit.intercept_ci95 = Interval{fit.intercept - t * se_icpt, fit.intercept + t * se_icpt};
    }
    return fit;
}

double capacity_at(const StiffnessTable& table, double pressure_psi) {
    validate(table);
    const auto& rows = table.rows;
    if (!(pressure_psi >= rows.front().pressure_psi && pressure_psi <= rows.back().pressure_psi)) {
        throw std::out_of_range("pressure " + std::to_string(pressure_psi) +
                                " psi is outside the stiffness table range");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].pressure_psi == pressure_psi) return rows[i].capacity_N;
    }
    std::size_t hi = 1;
    while (rows[hi].pressure_psi < pressure_psi) ++hi;
    const auto& a = rows[hi - 1];
    const auto& b = rows[hi];
    const double t = (pressure_psi - a.pressure_psi) / (b.pressure_psi - a.pressure_psi);
    return a.capacity_N + t * (b.capacity_N - a.capacity_N);
}

double stiffness_ratio(const StiffnessTable& table, double pressure_psi) {
    return capacity_at(table, pressure_psi) / capacity_at(table, 0.0);
}

double spring_constant(const StiffnessTable& table, double pressure_psi) {
    return capacity_at(table, pressure_psi) / table.reference_deflection_m;
}

Deflection deflection_under_load(const StiffnessTable& table, double pressure_psi, double force_N) {
    if (!(force_N >= 0.0)) throw std::invalid_argument("load must be non-negative");
    const double x = force_N / spring_constant(table, pressure_psi);
    return {x, x > table.reference_deflection_m};
}

}  // namespace vsarm
