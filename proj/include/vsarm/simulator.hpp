#pragma once

#include "vsarm/actuation.hpp"
#include "vsarm/characterization.hpp"
#include "vsarm/coupling.hpp"
#include "vsarm/kinematics.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace vsarm {

inline constexpr double kMaxPressurePsi = 14.7;  // one atmosphere of vacuum

enum class LoadPoint { tip, connector };

std::string_view to_string(LoadPoint p);
std::optional<LoadPoint> load_point_from_string(std::string_view s);

/// Segment 1 at azimuth 0 and segment 2 at 30 degrees, 0.1 m long, 20 mm pair separation.
std::vector<SegmentParams> default_segments();

struct PlantConfig {
    std::vector<SegmentParams> segments = default_segments();
    double coupling_coeff = 1.00765;  // how strongly segment-2 tendons drag segment 1
    double jam_threshold_psi = 6.0;
    StiffnessTable tip_table = two_segment_table();
    StiffnessTable connector_table = segment1_table();
};

struct SimConfig {
    ActuatorConfig actuator;
    CouplingConfig coupling;
    PlantConfig plant;
};

void validate(const SimConfig& cfg);

struct KnobTurn {
    int id;
    int dir;
};
struct ButtonPress {
    int id;
};
struct PressureSet {
    int segment;  // 1-based
    double psi;
};
struct LoadSet {
    LoadPoint point;
    double newtons;
};
struct ResetSession {};

using Event = std::variant<KnobTurn, ButtonPress, PressureSet, LoadSet, ResetSession>;

struct ArmState {
    std::vector<BendState> bends;
    std::vector<double> pressures_psi;
    std::vector<bool> jammed;
};

struct AppliedLoad {
    LoadPoint point;
    double newtons;
};

struct SessionState {
    std::uint64_t seq = 0;
    MotorState motor;
    KnobCounters knobs;
    ArmState arm;
    // Realized segment-local tendon displacements (x1, y1, x2, y2), m.
    std::array<double, 4> realized_m{};
    // Tendon motion absorbed while a segment was jammed, m.
    std::array<double, 4> slip_m{};
    std::optional<AppliedLoad> load;
    std::optional<std::string> warning;
};

SessionState initial_state(const SimConfig& cfg);

struct StepResult {
    SessionState state;
    std::optional<std::string> error;  // set when the event was rejected; state is then unchanged
};

StepResult step(const SessionState& state, const Event& ev, const SimConfig& cfg);

/// Tendon pair separation that makes bend_from_tendon reproduce the measured bend gain.
double effective_separation(const ActuatorConfig& cfg);

/// Linear map from realized segment-local displacements to spool displacements.
Eigen::Matrix4d plant_matrix(const PlantConfig& plant);

// Quantities derived from a state; never cached in SessionState.
struct Readout {
    TendonActuation tendons;
    std::vector<Frame> frames;
    Eigen::Vector3d tip = Eigen::Vector3d::Zero();
    std::vector<Eigen::Vector3d> shape;
    std::optional<double> capacity_N;
    std::optional<double> deflection_m;
    bool exceeds_rating = false;
};

Readout readout(const SessionState& state, const SimConfig& cfg, std::size_t samples_per_segment = 16);

struct ScriptLine {
    std::size_t line;
    Event event;
};

struct StepError {
    std::size_t line;
    std::string reason;
};

struct Trajectory {
    std::vector<SessionState> snapshots;  // initial state first, then one per processed event
    std::vector<StepError> errors;
};

Trajectory run_script(std::span<const ScriptLine> script, const SimConfig& cfg);

}  // namespace vsarm
