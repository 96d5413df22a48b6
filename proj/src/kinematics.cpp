#include "vsarm/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vsarm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSeriesThreshold = 1e-7;

void require_separation(double d) {
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw std::domain_error("tendon separation must be positive and finite");
    }
}

Eigen::Matrix3d rot_z(double a) {
    return Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

// Arc of length `length` bending by `theta` in the plane at azimuth `phi`.
// No validation: used with length == 0 for shape sampling.
Frame arc_frame(double length, double theta, double phi) {
    // (1 - cos t) / t and sin t / t, with series below the threshold.
    double one_minus_cos_over_t;
    double sin_over_t;
    if (std::abs(theta) < kSeriesThreshold) {
        const double t2 = theta * theta;
        one_minus_cos_over_t = theta * (0.5 - t2 / 24.0);
        sin_over_t = 1.0 - t2 / 6.0;
    } else {
        const double h = std::sin(0.5 * theta);
        one_minus_cos_over_t = 2.0 * h * h / theta;
        sin_over_t = std::sin(theta) / theta;
    }

    const Eigen::Matrix3d rz = rot_z(phi);
    Frame f;
    f.position = rz * Eigen::Vector3d(length * one_minus_cos_over_t, 0.0, length * sin_over_t);
    f.rotation = rz * Eigen::AngleAxisd(theta, Eigen::Vector3d::UnitY()).toRotationMatrix() *
                 rz.transpose();
    return f;
}

}  // namespace

SegmentParams make_segment(double arc_length, double tendon_separation, double x_pair_azimuth,
                           std::string label) {
    SegmentParams p;
    p.arc_length = arc_length;
    p.tendon_separation = tendon_separation;
    double a = std::fmod(x_pair_azimuth, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    p.x_pair_azimuth = a;
    p.label = std::move(label);
    validate(p);
    return p;
}

void validate(const SegmentParams& params) {
    if (!(params.arc_length > 0.0) || !std::isfinite(params.arc_length)) {
        throw std::invalid_argument("segment arc length must be positive");
    }
    if (!(params.tendon_separation > 0.0) || !std::isfinite(params.tendon_separation)) {
        throw std::invalid_argument("segment tendon separation must be positive");
    }
    if (!(params.x_pair_azimuth >= 0.0 && params.x_pair_azimuth < kTwoPi)) {
        throw std::invalid_argument("segment azimuth must lie in [0, 2pi)");
    }
}

double BendState::total() const { return std::hypot(theta_x, theta_y); }

double BendState::plane() const { return std::atan2(theta_y, theta_x); }

Frame Frame::operator*(const Frame& rhs) const {
    Frame out;
    out.rotation = rotation * rhs.rotation;
    out.position = rotation * rhs.position + position;
    return out;
}

double bend_from_tendon(double dx, double d) {
    require_separation(d);
    return 2.0 * dx / d;
}

double tendon_from_bend(double theta, double d) {
    require_separation(d);
    return theta * d / 2.0;
}

double tendon_length_delta(const BendState& bend, double pair_azimuth, double d) {
    require_separation(d);
    // theta cos(psi - phi) expanded so the straight case needs no atan2.
    return 0.5 * d * (bend.theta_x * std::cos(pair_azimuth) + bend.theta_y * std::sin(pair_azimuth));
}

Frame segment_fk(const SegmentParams& params, const BendState& bend) {
    return arc_frame(params.arc_length, bend.total(), bend.plane() + params.x_pair_azimuth);
}

std::vector<Frame> arm_fk(std::span<const SegmentParams> segments,
                          std::span<const BendState> states) {
    if (segments.empty() || segments.size() != states.size()) {
        throw std::invalid_argument("arm_fk: segment and state lists must be nonempty and equal length");
    }
    std::vector<Frame> frames;
    frames.reserve(segments.size());
    Frame acc;
    for (std::size_t k = 0; k < segments.size(); ++k) {
        acc = acc * segment_fk(segments[k], states[k]);
        frames.push_back(acc);
    }
    return frames;
}

std::vector<Eigen::Vector3d> segment_shape_samples(const SegmentParams& params,
                                                   const BendState& bend, std::size_t n) {
    if (n < 2) throw std::invalid_argument("segment_shape_samples: need at least 2 samples");
    const double theta = bend.total();
    const double phi = bend.plane() + params.x_pair_azimuth;
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(n - 1);
        pts.push_back(arc_frame(params.arc_length * frac, theta * frac, phi).position);
    }
    return pts;
}

std::vector<Eigen::Vector3d> arm_shape_samples(std::span<const SegmentParams> segments,
                                               std::span<const BendState> states,
                                               std::size_t n_per_segment) {
    const auto frames = arm_fk(segments, states);
    std::vector<Eigen::Vector3d> pts;
    Frame base;
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const auto local = segment_shape_samples(segments[k], states[k], n_per_segment);
        for (std::size_t i = (k == 0 ? 0 : 1); i < local.size(); ++i) {
            pts.push_back(base.apply(local[i]));
        }
        base = frames[k];
    }
    return pts;
}

}  // namespace vsarm
