#include "vsarm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vsarm {
namespace {

constexpr int kSegments = 2;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Recomputes the realized displacements after the spool positions changed.
// Jammed segments keep their displacement; the mismatch on their tendons
// becomes slip.
void settle(SessionState& s, const SimConfig& cfg) {
    const Eigen::Vector4d a = to_vector(tendon_actuation(s.motor, cfg.actuator));
    const Eigen::Matrix4d g = plant_matrix(cfg.plant);
    Eigen::Vector4d u(s.realized_m.data());
    Eigen::Vector4d slip(s.slip_m.data());

    std::vector<int> free_idx;
    std::vector<int> held_idx;
    for (int seg = 0; seg < kSegments; ++seg) {
        auto& bucket = s.arm.jammed[seg] ? held_idx : free_idx;
        bucket.push_back(2 * seg);
        bucket.push_back(2 * seg + 1);
    }

    if (held_idx.empty()) {
        u = g.partialPivLu().solve(a - slip);
    } else if (!free_idx.empty()) {
        const auto nf = static_cast<Eigen::Index>(free_idx.size());
        Eigen::MatrixXd gff(nf, nf);
        Eigen::VectorXd rhs(nf);
        for (Eigen::Index r = 0; r < nf; ++r) {
            const int i = free_idx[r];
            rhs[r] = a[i] - slip[i];
            for (int j : held_idx) rhs[r] -= g(i, j) * u[j];
            for (Eigen::Index c = 0; c < nf; ++c) gff(r, c) = g(i, free_idx[c]);
        }
        const Eigen::VectorXd uf = gff.partialPivLu().solve(rhs);
        for (Eigen::Index r = 0; r < nf; ++r) u[free_idx[r]] = uf[r];
    }
    for (int i : held_idx) slip[i] = a[i] - g.row(i).dot(u);

    const double d_eff = effective_separation(cfg.actuator);
    for (int seg = 0; seg < kSegments; ++seg) {
        if (s.arm.jammed[seg]) continue;
        s.arm.bends[seg] = BendState{bend_from_tendon(u[2 * seg], d_eff),
                                     bend_from_tendon(u[2 * seg + 1], d_eff)};
    }
    for (int i = 0; i < 4; ++i) {
        s.realized_m[i] = u[i];
        s.slip_m[i] = slip[i];
    }
}

int segment_of_knob(int knob_id) { return knob_id <= 2 ? 0 : 1; }

std::optional<std::string> apply_knob(SessionState& s, const KnobEvent& ev, const SimConfig& cfg) {
    if (ev.knob_id < 1 || ev.knob_id > kKnobCount) {
        return "knob id must be in 1..4";
    }
    if (!ev.button && ev.direction != 1 && ev.direction != -1) {
        return "knob direction must be +1 or -1";
    }
    const auto plan = process_event(ev, s.knobs, s.motor, cfg.actuator, cfg.coupling);
    apply_plan(plan, s.motor, cfg.actuator, cfg.coupling);
    settle(s, cfg);
    const int seg = segment_of_knob(ev.knob_id);
    if (s.arm.jammed[seg]) {
        s.warning = "segment " + std::to_string(seg + 1) + " is jammed; knob " +
                    std::to_string(ev.knob_id) + " motion did not bend it";
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(LoadPoint p) { return p == LoadPoint::tip ? "tip" : "connector"; }

std::optional<LoadPoint> load_point_from_string(std::string_view s) {
    if (s == "tip") return LoadPoint::tip;
    if (s == "connector") return LoadPoint::connector;
    return std::nullopt;
}

std::vector<SegmentParams> default_segments() {
    return {make_segment(0.1, 0.02, 0.0, "segment 1"),
            make_segment(0.1, 0.02, std::numbers::pi / 6, "segment 2")};
}

void validate(const SimConfig& cfg) {
    validate(cfg.actuator);
    validate(cfg.coupling);
    if (cfg.plant.segments.size() != kSegments) {
        throw std::invalid_argument("the simulator drives exactly 2 segments");
    }
    for (const auto& seg : cfg.plant.segments) validate(seg);
    if (!(cfg.plant.coupling_coeff >= 0.0) || !std::isfinite(cfg.plant.coupling_coeff)) {
        throw std::invalid_argument("plant coupling_coeff must be >= 0");
    }
    if (!(cfg.plant.jam_threshold_psi >= 0.0)) {
        throw std::invalid_argument("jam_threshold_psi must be >= 0");
    }
    validate(cfg.plant.tip_table);
    validate(cfg.plant.connector_table);
}

double effective_separation(const ActuatorConfig& cfg) {
    return 2.0 / (cfg.bend_gain_deg_per_m * std::numbers::pi / 180.0);
}

Eigen::Matrix4d plant_matrix(const PlantConfig& plant) {
    const double offset = plant.segments[1].x_pair_azimuth - plant.segments[0].x_pair_azimuth;
    const auto [c30, c60, c120] = offset_cosines(offset);
    const double h = 0.5 * plant.coupling_coeff;
    Eigen::Matrix4d g;
    // Rows: spool displacement x1o, y1o, x2o, y2o. Columns: realized x1, y1, x2, y2.
    g << 1.0, 0.0, -h * c30, -h * c120,
         0.0, 1.0, -h * c60, -h * c30,
         c30, c60, 1.0, 0.0,
         c120, c30, 0.0, 1.0;
    return g;
}

SessionState initial_state(const SimConfig& cfg) {
    validate(cfg);
    SessionState s;
    const auto n = cfg.plant.segments.size();
    s.arm.bends.assign(n, BendState{});
    s.arm.pressures_psi.assign(n, 0.0);
    s.arm.jammed.assign(n, 0.0 >= cfg.plant.jam_threshold_psi);
    return s;
}

StepResult step(const SessionState& state, const Event& ev, const SimConfig& cfg) {
    SessionState next = state;
    next.warning.reset();

    const auto error = std::visit(
        overloaded{
            [&](const KnobTurn& k) -> std::optional<std::string> {
                return apply_knob(next, KnobEvent{k.id, k.dir, false}, cfg);
            },
            [&](const ButtonPress& b) -> std::optional<std::string> {
                return apply_knob(next, KnobEvent{b.id, 0, true}, cfg);
            },
            [&](const PressureSet& p) -> std::optional<std::string> {
                const auto n = static_cast<int>(next.arm.pressures_psi.size());
                if (p.segment < 1 || p.segment > n) {
                    return "pressure segment must be in 1.." + std::to_string(n);
                }
                if (!(p.psi >= 0.0 && p.psi <= kMaxPressurePsi)) {
                    return "pressure must be within [0, 14.7] psi";
                }
                next.arm.pressures_psi[p.segment - 1] = p.psi;
                next.arm.jammed[p.segment - 1] = p.psi >= cfg.plant.jam_threshold_psi;
                return std::nullopt;
            },
            [&](const LoadSet& l) -> std::optional<std::string> {
                if (!(l.newtons >= 0.0) || !std::isfinite(l.newtons)) {
                    return "load must be a non-negative number of newtons";
                }
                next.load = AppliedLoad{l.point, l.newtons};
                return std::nullopt;
            },
            [&](const ResetSession&) -> std::optional<std::string> {
                next = initial_state(cfg);
                return std::nullopt;
            },
        },
        ev);

    if (error) return {state, error};
    next.seq = state.seq + 1;
    return {std::move(next), std::nullopt};
}

Readout readout(const SessionState& state, const SimConfig& cfg, std::size_t samples_per_segment) {
    Readout r;
    r.tendons = tendon_actuation(state.motor, cfg.actuator);
    r.frames = arm_fk(cfg.plant.segments, state.arm.bends);
    r.tip = r.frames.back().position;
    r.shape = arm_shape_samples(cfg.plant.segments, state.arm.bends, samples_per_segment);

    const LoadPoint point = state.load ? state.load->point : LoadPoint::tip;
    const auto& p = state.arm.pressures_psi;
    const double pressure = point == LoadPoint::tip ? *std::min_element(p.begin(), p.end()) : p[0];
    const auto& table = point == LoadPoint::tip ? cfg.plant.tip_table : cfg.plant.connector_table;
    try {
        r.capacity_N = capacity_at(table, pressure);
        if (state.load) {
            const auto d = deflection_under_load(table, pressure, state.load->newtons);
            r.deflection_m = d.meters;
            r.exceeds_rating = d.exceeds_rating;
        }
    } catch (const std::out_of_range&) {
        // No extrapolation beyond the measured pressures.
    }
    return r;
}

Trajectory run_script(std::span<const ScriptLine> script, const SimConfig& cfg) {
    Trajectory t;
    t.snapshots.push_back(initial_state(cfg));
    for (const auto& line : script) {
        auto res = step(t.snapshots.back(), line.event, cfg);
        if (res.error) {
            t.errors.push_back({line.line, *res.error});
            continue;
        }
        t.snapshots.push_back(std::move(res.state));
    }
    return t;
}

}  // namespace vsarm
