#pragma once

#include "vsarm/coupling.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace vsarm {

enum class QuantizationMode { exact, round_per_call, residual_carry };

std::string_view to_string(QuantizationMode mode);
QuantizationMode quantization_mode_from_string(std::string_view name);

// Controller outputs in the order the stepper loop drives them.
enum class Output : int { ry2 = 0, rx2 = 1, ry1 = 2, rx1 = 3 };

inline constexpr int kKnobCount = 4;
inline constexpr int kMotorCount = 4;

struct ActuatorConfig {
    double spool_radius_m = 0.010;
    int steps_per_rev = 200;
    int microstep = 16;
    double detent_deg = 18.0;              // knob travel per detent (360 / pulses per rev)
    double per_detent_motor_deg = 6.1875;  // motor rotation commanded per detent
    int substeps_j = 6;
    double bend_gain_deg_per_m = 3361.1;   // measured segment bend per tendon displacement
    QuantizationMode quantization_mode = QuantizationMode::exact;
    std::array<int, 4> motor_map{1, 2, 3, 4};  // 1-based motor index for Ry2, Rx2, Ry1, Rx1

    double microstep_deg() const { return 360.0 / (static_cast<double>(steps_per_rev) * microstep); }
    int motor_for(Output out) const { return motor_map[static_cast<int>(out)]; }
};

void validate(const ActuatorConfig& cfg);

// Knob k drives command component k: x1, y1, x2, y2.
Output own_output(int knob_id);

struct KnobEvent {
    int knob_id = 1;     // 1..4
    int direction = +1;  // +1 clockwise, -1 counter-clockwise
    bool button = false;
};

// Encoder counters as the controller sees them; button presses zero them.
struct KnobCounters {
    std::array<std::int64_t, 4> position{};
};

struct MotorState {
    std::array<double, 4> cumulative_deg{};  // by motor index - 1
    std::array<double, 4> residual_deg{};    // residual_carry remainder
    std::array<std::int64_t, 4> microsteps{};  // quantized modes
    // Exact-mode ledger: net detents per knob (never reset) and, per motor,
    // the ledger value at its last reset. Cumulative angles are derived from
    // these so that opposite detents cancel bit-exactly.
    std::array<std::int64_t, 4> net_detents{};
    std::array<std::array<std::int64_t, 4>, 4> reset_baseline{};
};

struct SubStep {
    int motor;   // 1-based
    double deg;
};

struct EventPlan {
    int knob_id = 0;
    int direction = 0;
    bool reset = false;
    std::array<double, 4> output_deg{};  // Ry2, Rx2, Ry1, Rx1
    std::array<double, 4> motor_deg{};   // by motor index - 1
    std::vector<SubStep> schedule;       // j rounds, motors in output order each round
};

double detents_to_motor_deg(std::int64_t n, const ActuatorConfig& cfg);

double motor_deg_to_tendon(double deg, const ActuatorConfig& cfg);

/// Segment bend per knob rotation (deg/deg).
double sensitivity(const ActuatorConfig& cfg);

struct TorqueCheck {
    double required_Nmm;
    double margin_ratio;  // holding / required; +inf for zero load
    bool ok;
};

TorqueCheck torque_margin(double max_tendon_force_N, const ActuatorConfig& cfg,
                          double holding_torque_Nmm);

/// Rotation the driver actually performs for a requested `deg` on `motor`
/// (1-based). Updates the motor's microstep count and residual in the
/// quantized modes; exact mode returns `deg` and leaves `state` alone.
double quantize(double deg, MotorState& state, int motor, const ActuatorConfig& cfg);

/// Per-motor rotation produced by one detent of `knob_id` in the + direction.
std::array<double, 4> detent_motor_deg(int knob_id, const ActuatorConfig& cfg,
                                       const CouplingConfig& coupling);

/// Turns one encoder event into motor commands. Updates the knob counters.
/// Throws std::invalid_argument for an unknown knob.
EventPlan process_event(const KnobEvent& ev, KnobCounters& knobs, const MotorState& motors,
                        const ActuatorConfig& cfg, const CouplingConfig& coupling);

/// Executes a plan on the motors.
void apply_plan(const EventPlan& plan, MotorState& motors, const ActuatorConfig& cfg,
                const CouplingConfig& coupling);

/// Spool displacements implied by the cumulative motor angles.
TendonActuation tendon_actuation(const MotorState& motors, const ActuatorConfig& cfg);

}  // namespace vsarm
