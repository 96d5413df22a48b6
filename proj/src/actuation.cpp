#include "vsarm/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vsarm {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void require_knob(int knob_id) {
    if (knob_id < 1 || knob_id > kKnobCount) {
        throw std::invalid_argument("unknown knob id " + std::to_string(knob_id));
    }
}

std::array<double, 4> outputs_from(const TendonActuation& a) {
    // Ry2, Rx2, Ry1, Rx1
    return {a.y2o, a.x2o, a.y1o, a.x1o};
}

std::array<double, 4> to_motor_order(const std::array<double, 4>& outputs,
                                     const ActuatorConfig& cfg) {
    std::array<double, 4> motors{};
    for (int o = 0; o < 4; ++o) motors[cfg.motor_map[o] - 1] = outputs[o];
    return motors;
}

void refresh_exact(MotorState& m, const ActuatorConfig& cfg, const CouplingConfig& coupling) {
    std::array<std::array<double, 4>, 4> unit{};
    for (int k = 0; k < kKnobCount; ++k) unit[k] = detent_motor_deg(k + 1, cfg, coupling);
    for (int motor = 0; motor < kMotorCount; ++motor) {
        double sum = 0.0;
        for (int k = 0; k < kKnobCount; ++k) {
            const auto n = m.net_detents[k] - m.reset_baseline[motor][k];
            sum += static_cast<double>(n) * unit[k][motor];
        }
        m.cumulative_deg[motor] = sum;
    }
}

}  // namespace

std::string_view to_string(QuantizationMode mode) {
    switch (mode) {
        case QuantizationMode::exact: return "exact";
        case QuantizationMode::round_per_call: return "round_per_call";
        case QuantizationMode::residual_carry: return "residual_carry";
    }
    return "exact";
}

QuantizationMode quantization_mode_from_string(std::string_view name) {
    if (name == "exact") return QuantizationMode::exact;
    if (name == "round_per_call") return QuantizationMode::round_per_call;
    if (name == "residual_carry") return QuantizationMode::residual_carry;
    throw std::invalid_argument("unknown quantization_mode '" + std::string(name) + "'");
}

void validate(const ActuatorConfig& cfg) {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(cfg.spool_radius_m)) throw std::invalid_argument("spool_radius_m must be positive");
    if (cfg.steps_per_rev <= 0) throw std::invalid_argument("steps_per_rev must be positive");
    if (cfg.microstep <= 0) throw std::invalid_argument("microstep must be positive");
    if (!positive(cfg.detent_deg)) throw std::invalid_argument("detent_deg must be positive");
    const double pulses = 360.0 / cfg.detent_deg;
    if (std::abs(pulses - std::round(pulses)) > 1e-9) {
        throw std::invalid_argument("detent_deg must divide 360 into whole pulses");
    }
    if (!positive(cfg.per_detent_motor_deg)) {
        throw std::invalid_argument("per_detent_motor_deg must be positive");
    }
    if (cfg.substeps_j <= 0) throw std::invalid_argument("substeps_j must be positive");
    if (!positive(cfg.bend_gain_deg_per_m)) {
        throw std::invalid_argument("bend_gain_deg_per_m must be positive");
    }
    std::array<int, 4> sorted = cfg.motor_map;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::array<int, 4>{1, 2, 3, 4}) {
        throw std::invalid_argument("motor_map must be a permutation of 1..4");
    }
}

Output own_output(int knob_id) {
    require_knob(knob_id);
    static constexpr std::array<Output, 4> table{Output::rx1, Output::ry1, Output::rx2, Output::ry2};
    return table[knob_id - 1];
}

double detents_to_motor_deg(std::int64_t n, const ActuatorConfig& cfg) {
    return static_cast<double>(n) * cfg.per_detent_motor_deg;
}

double motor_deg_to_tendon(double deg, const ActuatorConfig& cfg) {
    return cfg.spool_radius_m * deg * kDegToRad;
}

double sensitivity(const ActuatorConfig& cfg) {
    return cfg.bend_gain_deg_per_m * cfg.spool_radius_m * (cfg.per_detent_motor_deg * kDegToRad) /
           cfg.detent_deg;
}

TorqueCheck torque_margin(double max_tendon_force_N, const ActuatorConfig& cfg,
                          double holding_torque_Nmm) {
    if (max_tendon_force_N < 0.0 || !(holding_torque_Nmm > 0.0)) {
        throw std::invalid_argument("torque_margin: force must be >= 0 and holding torque > 0");
    }
    const double radius_mm = cfg.spool_radius_m * 1000.0;
    const double required = max_tendon_force_N * radius_mm;
    if (required == 0.0) {
        return {0.0, std::numeric_limits<double>::infinity(), true};
    }
    const double ratio = holding_torque_Nmm / required;
    return {required, ratio, ratio >= 1.0};
}

double quantize(double deg, MotorState& state, int motor, const ActuatorConfig& cfg) {
    if (motor < 1 || motor > kMotorCount) throw std::invalid_argument("motor index out of range");
    const int m = motor - 1;
    const double step = cfg.microstep_deg();
    switch (cfg.quantization_mode) {
        case QuantizationMode::exact:
            return deg;
        case QuantizationMode::round_per_call: {
            const auto n = std::llround(deg / step);
            state.microsteps[m] += n;
            state.cumulative_deg[m] = static_cast<double>(state.microsteps[m]) * step;
            return static_cast<double>(n) * step;
        }
        case QuantizationMode::residual_carry: {
            const double wanted = deg + state.residual_deg[m];
            const auto n = std::llround(wanted / step);
            const double applied = static_cast<double>(n) * step;
            state.residual_deg[m] = wanted - applied;
            state.microsteps[m] += n;
            state.cumulative_deg[m] = static_cast<double>(state.microsteps[m]) * step;
            return applied;
        }
    }
    return deg;
}

std::array<double, 4> detent_motor_deg(int knob_id, const ActuatorConfig& cfg,
                                       const CouplingConfig& coupling) {
    require_knob(knob_id);
    Eigen::Vector4d cmd = Eigen::Vector4d::Zero();
    cmd[knob_id - 1] = cfg.per_detent_motor_deg;
    const auto act = decouple(command_from_vector(cmd), coupling);
    return to_motor_order(outputs_from(act), cfg);
}

EventPlan process_event(const KnobEvent& ev, KnobCounters& knobs, const MotorState& motors,
                        const ActuatorConfig& cfg, const CouplingConfig& coupling) {
    require_knob(ev.knob_id);
    EventPlan plan;
    plan.knob_id = ev.knob_id;

    if (ev.button) {
        plan.reset = true;
        const int motor = cfg.motor_for(own_output(ev.knob_id));
        const double undo = -motors.cumulative_deg[motor - 1];
        plan.output_deg[static_cast<int>(own_output(ev.knob_id))] = undo;
        plan.motor_deg[motor - 1] = undo;
        plan.schedule.push_back({motor, undo});
        knobs.position[ev.knob_id - 1] = 0;
        return plan;
    }

    if (ev.direction != 1 && ev.direction != -1) {
        throw std::invalid_argument("knob direction must be +1 or -1");
    }
    plan.direction = ev.direction;
    knobs.position[ev.knob_id - 1] += ev.direction;

    Eigen::Vector4d cmd = Eigen::Vector4d::Zero();
    cmd[ev.knob_id - 1] = ev.direction * cfg.per_detent_motor_deg;
    plan.output_deg = outputs_from(decouple(command_from_vector(cmd), coupling));
    plan.motor_deg = to_motor_order(plan.output_deg, cfg);

    const int j = cfg.substeps_j;
    plan.schedule.reserve(static_cast<std::size_t>(j) * 4);
    for (int round = 0; round < j; ++round) {
        for (int o = 0; o < 4; ++o) {
            plan.schedule.push_back({cfg.motor_map[o], plan.output_deg[o] / j});
        }
    }
    return plan;
}

void apply_plan(const EventPlan& plan, MotorState& motors, const ActuatorConfig& cfg,
                const CouplingConfig& coupling) {
    if (cfg.quantization_mode == QuantizationMode::exact) {
        if (plan.reset) {
            const int motor = cfg.motor_for(own_output(plan.knob_id));
            motors.reset_baseline[motor - 1] = motors.net_detents;
        } else {
            motors.net_detents[plan.knob_id - 1] += plan.direction;
        }
        refresh_exact(motors, cfg, coupling);
        return;
    }
    if (plan.reset) {
        const int m = cfg.motor_for(own_output(plan.knob_id)) - 1;
        motors.microsteps[m] = 0;
        motors.residual_deg[m] = 0.0;
        motors.cumulative_deg[m] = 0.0;
        return;
    }
    motors.net_detents[plan.knob_id - 1] += plan.direction;
    for (const auto& s : plan.schedule) quantize(s.deg, motors, s.motor, cfg);
}

TendonActuation tendon_actuation(const MotorState& motors, const ActuatorConfig& cfg) {
    auto tendon = [&](Output o) {
        return motor_deg_to_tendon(motors.cumulative_deg[cfg.motor_for(o) - 1], cfg);
    };
    return {tendon(Output::rx1), tendon(Output::ry1), tendon(Output::rx2), tendon(Output::ry2)};
}

}  // namespace vsarm
