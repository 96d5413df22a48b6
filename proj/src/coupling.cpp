#include "vsarm/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vsarm {

void validate(const CouplingConfig& cfg) {
    if (!(cfg.alpha > 0.0) || !std::isfinite(cfg.alpha)) {
        throw std::invalid_argument("coupling alpha must be positive");
    }
    if (!(cfg.beta > 0.0) || !std::isfinite(cfg.beta)) {
        throw std::invalid_argument("coupling beta must be positive");
    }
    if (!std::isfinite(cfg.seg2_offset)) {
        throw std::invalid_argument("coupling seg2_offset must be finite");
    }
}

OffsetCosines offset_cosines(double seg2_offset) {
    constexpr double half_pi = std::numbers::pi / 2;
    return {std::cos(seg2_offset), std::cos(half_pi - seg2_offset), std::cos(half_pi + seg2_offset)};
}

TendonActuation decouple(const TendonCommand& cmd, const CouplingConfig& cfg) {
    const auto [c30, c60, c120] = offset_cosines(cfg.seg2_offset);
    const double a = cfg.alpha;
    const double ab = cfg.alpha * cfg.beta;
    TendonActuation out;
    out.x1o = cmd.x1i - 0.5 * a * cmd.x2i * c30 - 0.5 * ab * cmd.y2i * c120;
    out.y1o = cmd.y1i - 0.5 * a * cmd.y2i * c30 - 0.5 * ab * cmd.x2i * c60;
    out.x2o = cmd.x2i + cmd.x1i * c30 + cmd.y1i * c60;
    out.y2o = cmd.y2i + cmd.y1i * c30 + cmd.x1i * c120;
    return out;
}

Eigen::Matrix4d coupling_matrix(const CouplingConfig& cfg) {
    Eigen::Matrix4d m;
    for (int col = 0; col < 4; ++col) {
        Eigen::Vector4d e = Eigen::Vector4d::Zero();
        e[col] = 1.0;
        m.col(col) = to_vector(decouple(command_from_vector(e), cfg));
    }
    return m;
}

TendonCommand recouple(const TendonActuation& act, const CouplingConfig& cfg) {
    const Eigen::Matrix4d m = coupling_matrix(cfg);
    const Eigen::JacobiSVD<Eigen::Matrix4d> svd(m);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    const double cond = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    if (!(cond < 1e12)) {
        std::ostringstream os;
        os << "coupling matrix is singular (condition number " << cond << ")";
        throw SingularCouplingError(os.str(), cond);
    }
    return command_from_vector(m.partialPivLu().solve(to_vector(act)));
}

PairDisplacement seg2_local_displacements(const TendonActuation& act,
                                          const PairDisplacement& seg1_equiv,
                                          const CouplingConfig& cfg) {
    const auto [c30, c60, c120] = offset_cosines(cfg.seg2_offset);
    return {act.x2o - seg1_equiv.x * c30 - seg1_equiv.y * c60,
            act.y2o - seg1_equiv.y * c30 - seg1_equiv.x * c120};
}

Eigen::Vector4d to_vector(const TendonCommand& c) { return {c.x1i, c.y1i, c.x2i, c.y2i}; }

Eigen::Vector4d to_vector(const TendonActuation& a) { return {a.x1o, a.y1o, a.x2o, a.y2o}; }

TendonCommand command_from_vector(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }

TendonActuation actuation_from_vector(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }

std::vector<PairDisplacement> decouple_chain(std::span<const PairDisplacement> desired,
                                             std::span<const double> azimuths, double alpha,
                                             double beta) {
    if (desired.size() != azimuths.size()) {
        throw std::invalid_argument("decouple_chain: one azimuth per segment required");
    }
    const std::size_t n = desired.size();
    std::vector<PairDisplacement> out(desired.begin(), desired.end());
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            // Axes of the distal segment seen from the proximal one: X = (c, s), Y = (-s, c).
            const double delta = azimuths[std::max(j, k)] - azimuths[std::min(j, k)];
            const double c = std::cos(delta);
            const double s = std::sin(delta);
            if (j < k) {
                // Downstream tendons k carry upstream segment j's motion.
                const auto& d = desired[j];
                out[k].x += d.x * c + d.y * s;
                out[k].y += -d.x * s + d.y * c;
            } else {
                // Upstream segment k compensates for downstream segment j.
                const auto& d = desired[j];
                out[k].x -= 0.5 * (alpha * d.x * c - alpha * beta * d.y * s);
                out[k].y -= 0.5 * (alpha * d.y * c + alpha * beta * d.x * s);
            }
        }
    }
    return out;
}

}  // namespace vsarm
