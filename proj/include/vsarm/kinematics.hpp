#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vsarm {

// Geometry of one constant-curvature segment.
struct SegmentParams {
    double arc_length = 0.1;          // m
    double tendon_separation = 0.02;  // m, distance between the two tendons of a pair
    double x_pair_azimuth = 0.0;      // rad, X-pair bending axis in the segment frame, [0, 2pi)
    std::string label;
};

// Validates lengths and normalizes the azimuth into [0, 2pi).
SegmentParams make_segment(double arc_length, double tendon_separation,
                           double x_pair_azimuth, std::string label = {});
void validate(const SegmentParams& params);

// Bend of one segment as two orthogonal planar components (ZX and ZY planes).
struct BendState {
    double theta_x = 0.0;  // rad
    double theta_y = 0.0;  // rad

    double total() const;  // hypot(theta_x, theta_y)
    double plane() const;  // atan2(theta_y, theta_x); 0 for a straight segment
};

struct Frame {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();

    Frame operator*(const Frame& rhs) const;
    Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + position; }
};

/// Planar bend produced by a tendon pair displacement: theta = 2 dx / d.
/// Throws std::domain_error when d <= 0.
double bend_from_tendon(double dx, double d);

/// Inverse of bend_from_tendon: dx = theta d / 2.
double tendon_from_bend(double theta, double d);

/// Shortening (positive = shorter) of the tendon sitting at azimuth `pair_azimuth`
/// for a segment with the given bend.
double tendon_length_delta(const BendState& bend, double pair_azimuth, double d);

/// Tip frame of a circular-arc segment relative to its base. The segment's
/// x_pair_azimuth rotates the bend plane. Straight-limit safe.
Frame segment_fk(const SegmentParams& params, const BendState& bend);

/// Cumulative frames base-to-tip; frames[k] is the tip of segment k.
std::vector<Frame> arm_fk(std::span<const SegmentParams> segments,
                          std::span<const BendState> states);

/// n points along the arc at evenly spaced arc length, in the segment base frame.
std::vector<Eigen::Vector3d> segment_shape_samples(const SegmentParams& params,
                                                   const BendState& bend, std::size_t n);

/// Backbone polyline for the whole arm in the base frame, n samples per segment
/// (shared joint points are emitted once).
std::vector<Eigen::Vector3d> arm_shape_samples(std::span<const SegmentParams> segments,
                                               std::span<const BendState> states,
                                               std::size_t n_per_segment);

}  // namespace vsarm
