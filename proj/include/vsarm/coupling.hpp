#pragma once

#include <Eigen/Dense>

#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vsarm {

// Desired tendon-pair displacements per segment, segment-local (m).
struct TendonCommand {
    double x1i = 0.0;
    double y1i = 0.0;
    double x2i = 0.0;
    double y2i = 0.0;
};

// Displacements actually applied at the spools (m).
struct TendonActuation {
    double x1o = 0.0;
    double y1o = 0.0;
    double x2o = 0.0;
    double y2o = 0.0;
};

struct CouplingConfig {
    double alpha = 1.00765;                   // segment-1 compensation factor
    double beta = 1.0;                        // extra factor on the cross compensation term
    double seg2_offset = std::numbers::pi / 6;  // rad, segment-2 tendon pairs vs segment 1
};

void validate(const CouplingConfig& cfg);

// Projection cosines derived from the segment-2 offset. For the default
// 30 degree layout these are cos30, cos60 and cos120.
struct OffsetCosines {
    double c30;
    double c60;
    double c120;
};
OffsetCosines offset_cosines(double seg2_offset);

/// Desired (segment-local) displacements -> spool displacements. Segment-2 tendons
/// also carry segment 1's share; segment-1 tendons pre-compensate for the
/// load segment 2 puts on segment 1.
TendonActuation decouple(const TendonCommand& cmd, const CouplingConfig& cfg);

/// Matrix form of decouple in (x1, y1, x2, y2) order.
Eigen::Matrix4d coupling_matrix(const CouplingConfig& cfg);

class SingularCouplingError : public std::runtime_error {
public:
    SingularCouplingError(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    double condition() const { return condition_; }

private:
    double condition_;
};

/// Inverse of decouple. Throws SingularCouplingError when the map is not invertible.
TendonCommand recouple(const TendonActuation& act, const CouplingConfig& cfg);

struct PairDisplacement {
    double x = 0.0;
    double y = 0.0;
};

/// Removes segment 1's realized share from the segment-2 tendons, leaving the
/// displacement that bends segment 2 itself.
PairDisplacement seg2_local_displacements(const TendonActuation& act,
                                          const PairDisplacement& seg1_equiv,
                                          const CouplingConfig& cfg);

Eigen::Vector4d to_vector(const TendonCommand& c);
Eigen::Vector4d to_vector(const TendonActuation& a);
TendonCommand command_from_vector(const Eigen::Vector4d& v);
TendonActuation actuation_from_vector(const Eigen::Vector4d& v);

/// Lower-triangular feedforward plus upper compensation for a chain of N
/// segments whose tendon pairs sit at the given azimuths. Downstream tendons
/// pick up the projection of every upstream segment's desired displacement;
/// upstream tendons are compensated by -alpha/2 times the projection of every
/// downstream segment. With two segments at (0, offset) this reproduces decouple().
std::vector<PairDisplacement> decouple_chain(std::span<const PairDisplacement> desired,
                                             std::span<const double> azimuths,
                                             double alpha, double beta);

}  // namespace vsarm
