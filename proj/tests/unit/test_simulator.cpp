#include "vsarm/script.hpp"
#include "vsarm/simulator.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>

using namespace vsarm;

namespace {

constexpr double kDetentBendRad = 0.063350694596790950658;  // 3.62972742961835 deg

SessionState apply(SessionState s, const Event& ev, const SimConfig& cfg) {
    auto r = step(s, ev, cfg);
    EXPECT_FALSE(r.error) << *r.error;
    return r.state;
}

std::vector<ScriptLine> random_knob_script(std::uint64_t seed, int n, int lo_knob, int hi_knob,
                                           bool buttons = true) {
    oracle::Gen g(seed);
    std::vector<ScriptLine> out;
    for (int i = 0; i < n; ++i) {
        const int k = g.integer(lo_knob, hi_knob);
        if (buttons && g.integer(0, 19) == 0) {
            out.push_back({static_cast<std::size_t>(i + 1), ButtonPress{k}});
        } else {
            out.push_back({static_cast<std::size_t>(i + 1), KnobTurn{k, g.integer(0, 1) ? 1 : -1}});
        }
    }
    return out;
}

bool bitwise_equal(const BendState& a, const BendState& b) {
    return std::memcmp(&a.theta_x, &b.theta_x, sizeof(double)) == 0 &&
           std::memcmp(&a.theta_y, &b.theta_y, sizeof(double)) == 0;
}

}  // namespace

TEST(Step, KnobOneBendsOnlySegmentOne) {
    const SimConfig cfg;
    const auto s = apply(initial_state(cfg), KnobTurn{1, 1}, cfg);
    EXPECT_NEAR(s.arm.bends[0].theta_x, kDetentBendRad, 1e-12);
    EXPECT_NEAR(s.arm.bends[0].theta_y, 0.0, 1e-15);
    EXPECT_LT(s.arm.bends[1].total(), 1e-9);
    EXPECT_EQ(s.seq, 1u);
    EXPECT_FALSE(s.warning);
}

TEST(Step, KnobThreeBendsOnlySegmentTwo) {
    const SimConfig cfg;
    const auto s = apply(initial_state(cfg), KnobTurn{3, 1}, cfg);
    EXPECT_NEAR(s.arm.bends[1].theta_x, kDetentBendRad, 1e-12);
    EXPECT_NEAR(s.arm.bends[1].theta_y, 0.0, 1e-15);
    EXPECT_NEAR(s.arm.bends[1].total() * 180.0 / std::numbers::pi, 3.6297, 1e-3);
    EXPECT_LT(s.arm.bends[0].total(), 1e-9);
}

TEST(Step, JammedSegmentHoldsAndWarns) {
    const SimConfig cfg;
    auto s = apply(initial_state(cfg), PressureSet{1, 12.5}, cfg);
    EXPECT_TRUE(s.arm.jammed[0]);
    EXPECT_FALSE(s.arm.jammed[1]);
    const auto before = s.arm.bends[0];
    s = apply(s, KnobTurn{1, 1}, cfg);
    EXPECT_TRUE(bitwise_equal(s.arm.bends[0], before));
    ASSERT_TRUE(s.warning);
    EXPECT_NE(s.warning->find("jammed"), std::string::npos);
    EXPECT_EQ(s.seq, 2u);

    // The warning is per event.
    s = apply(s, KnobTurn{3, 1}, cfg);
    EXPECT_FALSE(s.warning);
    EXPECT_TRUE(bitwise_equal(s.arm.bends[0], before));
}

TEST(Step, ThresholdIsInclusive) {
    SimConfig cfg;
    auto s = apply(initial_state(cfg), PressureSet{2, 6.0}, cfg);
    EXPECT_TRUE(s.arm.jammed[1]);
    s = apply(s, PressureSet{2, 5.999}, cfg);
    EXPECT_FALSE(s.arm.jammed[1]);
}

TEST(Step, RejectedEventsLeaveStateAlone) {
    const SimConfig cfg;
    const auto s0 = apply(initial_state(cfg), KnobTurn{2, 1}, cfg);
    for (const Event& bad : {Event{KnobTurn{5, 1}}, Event{KnobTurn{1, 0}}, Event{ButtonPress{0}},
                             Event{PressureSet{3, 1.0}}, Event{PressureSet{1, -0.5}},
                             Event{PressureSet{1, 14.8}}, Event{PressureSet{1, NAN}},
                             Event{LoadSet{LoadPoint::tip, -1.0}}}) {
        const auto r = step(s0, bad, cfg);
        ASSERT_TRUE(r.error);
        EXPECT_EQ(r.state.seq, s0.seq);
        EXPECT_EQ(r.state.motor.cumulative_deg, s0.motor.cumulative_deg);
        EXPECT_EQ(r.state.arm.pressures_psi, s0.arm.pressures_psi);
        EXPECT_FALSE(r.state.load);
    }
}

TEST(Step, ResetReturnsToRestButCountsTheEvent) {
    const SimConfig cfg;
    auto s = initial_state(cfg);
    s = apply(s, KnobTurn{1, 1}, cfg);
    s = apply(s, PressureSet{1, 10}, cfg);
    s = apply(s, LoadSet{LoadPoint::tip, 1.0}, cfg);
    s = apply(s, ResetSession{}, cfg);
    EXPECT_EQ(s.seq, 4u);
    EXPECT_EQ(s.arm.bends[0].total(), 0.0);
    EXPECT_FALSE(s.arm.jammed[0]);
    EXPECT_FALSE(s.load);
}

TEST(Step, ButtonUnwindsSegmentOneX) {
    const SimConfig cfg;
    auto s = initial_state(cfg);
    for (int i = 0; i < 3; ++i) s = apply(s, KnobTurn{1, 1}, cfg);
    EXPECT_NEAR(s.arm.bends[0].theta_x, 3 * kDetentBendRad, 1e-12);
    s = apply(s, ButtonPress{1}, cfg);
    EXPECT_EQ(s.knobs.position[0], 0);
    EXPECT_NEAR(s.motor.cumulative_deg[3], 0.0, 1e-15);
}

TEST(Readout, LoadsAndCapacity) {
    const SimConfig cfg;
    auto s = initial_state(cfg);
    auto r = readout(s, cfg);
    ASSERT_TRUE(r.capacity_N);
    EXPECT_EQ(*r.capacity_N, 0.2);
    EXPECT_FALSE(r.deflection_m);

    s = apply(s, PressureSet{1, 12.5}, cfg);
    s = apply(s, PressureSet{2, 12.5}, cfg);
    s = apply(s, LoadSet{LoadPoint::tip, 0.2 * 9.81}, cfg);
    r = readout(s, cfg);
    EXPECT_EQ(*r.capacity_N, 2.7);
    EXPECT_NEAR(*r.deflection_m, 1.962 / 135.0, 1e-15);
    EXPECT_FALSE(r.exceeds_rating);

    s = apply(s, LoadSet{LoadPoint::tip, 0.3 * 9.81}, cfg);
    EXPECT_TRUE(readout(s, cfg).exceeds_rating);

    s = apply(s, LoadSet{LoadPoint::connector, 0.8 * 9.81}, cfg);
    r = readout(s, cfg);
    EXPECT_EQ(*r.capacity_N, 10.0);
    EXPECT_NEAR(*r.deflection_m, 0.015696, 1e-12);

    // Past the table: no extrapolation.
    s = apply(s, PressureSet{1, 14.0}, cfg);
    r = readout(s, cfg);
    EXPECT_FALSE(r.capacity_N);
    EXPECT_FALSE(r.deflection_m);
}

TEST(Readout, StraightArmTip) {
    const SimConfig cfg;
    const auto r = readout(initial_state(cfg), cfg);
    EXPECT_NEAR(r.tip.x(), 0.0, 1e-15);
    EXPECT_NEAR(r.tip.y(), 0.0, 1e-15);
    EXPECT_NEAR(r.tip.z(), 0.2, 1e-15);
    EXPECT_EQ(r.shape.size(), 31u);
}

TEST(RunScript, EmptyScript) {
    const SimConfig cfg;
    const auto t = run_script({}, cfg);
    ASSERT_EQ(t.snapshots.size(), 1u);
    EXPECT_EQ(t.snapshots[0].seq, 0u);
    EXPECT_TRUE(t.errors.empty());
    EXPECT_NEAR(readout(t.snapshots[0], cfg).tip.z(), 0.2, 1e-15);
}

TEST(RunScript, ForwardBackIsExact) {
    const SimConfig cfg;
    std::vector<ScriptLine> script;
    for (int i = 0; i < 10; ++i) script.push_back({script.size() + 1, KnobTurn{1, 1}});
    for (int i = 0; i < 10; ++i) script.push_back({script.size() + 1, KnobTurn{1, -1}});
    const auto t = run_script(script, cfg);
    EXPECT_TRUE(bitwise_equal(t.snapshots.back().arm.bends[0], t.snapshots.front().arm.bends[0]));
    EXPECT_TRUE(bitwise_equal(t.snapshots.back().arm.bends[1], t.snapshots.front().arm.bends[1]));
}

TEST(RunScript, SShape) {
    const SimConfig cfg;
    const auto script = parse_script("# S-shape\n" + [] {
        std::string s;
        for (int i = 0; i < 8; ++i) s += "knob 1 +1\n";
        for (int i = 0; i < 8; ++i) s += "knob 3 -1\n";
        return s;
    }());
    const auto t = run_script(script, cfg);
    const auto& end = t.snapshots.back().arm.bends;
    EXPECT_NEAR(end[0].theta_x, 8 * kDetentBendRad, 1e-12);
    EXPECT_NEAR(end[1].theta_x, -8 * kDetentBendRad, 1e-12);
    EXPECT_LT(end[0].theta_x * end[1].theta_x, 0.0);
}

TEST(RunScript, ErrorsAreRecordedAndSkipped) {
    const SimConfig cfg;
    const std::vector<ScriptLine> script{{1, KnobTurn{1, 1}}, {2, PressureSet{7, 1.0}}, {3, KnobTurn{2, 1}}};
    const auto t = run_script(script, cfg);
    ASSERT_EQ(t.errors.size(), 1u);
    EXPECT_EQ(t.errors[0].line, 2u);
    EXPECT_EQ(t.snapshots.size(), 3u);
    EXPECT_EQ(t.snapshots.back().seq, 2u);
}

TEST(Invariants, DecouplingKnobsThreeFour) {
    const SimConfig cfg;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto t = run_script(random_knob_script(seed, 500, 3, 4, false), cfg);
        double worst = 0.0;
        for (const auto& s : t.snapshots) worst = std::max(worst, s.arm.bends[0].total());
        EXPECT_LT(worst, 1e-9);
    }
}

TEST(Invariants, FeedforwardKnobsOneTwo) {
    const SimConfig cfg;
    for (std::uint64_t seed = 11; seed <= 15; ++seed) {
        const auto t = run_script(random_knob_script(seed, 500, 1, 2, false), cfg);
        double worst = 0.0;
        for (const auto& s : t.snapshots) worst = std::max(worst, s.arm.bends[1].total());
        EXPECT_LT(worst, 1e-9);
    }
}

TEST(Invariants, ButtonResetIsASingleMotorCommand) {
    // Zeroing one spool leaves the other spools' compensation in place.
    const SimConfig cfg;
    auto s = initial_state(cfg);
    for (int i = 0; i < 4; ++i) s = apply(s, KnobTurn{3, 1}, cfg);
    const auto before = s.motor.cumulative_deg;
    s = apply(s, ButtonPress{3}, cfg);
    EXPECT_EQ(s.motor.cumulative_deg[1], 0.0);
    EXPECT_EQ(s.motor.cumulative_deg[3], before[3]);
    EXPECT_EQ(s.motor.cumulative_deg[2], before[2]);
    EXPECT_GT(s.arm.bends[0].total(), 1e-3);
}

TEST(Invariants, MismatchedCompensationDisturbsSegmentOne) {
    SimConfig cfg;
    cfg.plant.coupling_coeff = 2.0;
    const auto s = apply(initial_state(cfg), KnobTurn{3, 1}, cfg);
    EXPECT_GT(s.arm.bends[0].total(), 1e-4);
}

TEST(Invariants, JamConservation) {
    const SimConfig cfg;
    oracle::Gen g(99);
    for (int seg = 1; seg <= 2; ++seg) {
        auto s = initial_state(cfg);
        for (int i = 0; i < 20; ++i) s = apply(s, KnobTurn{g.integer(1, 4), 1}, cfg);
        s = apply(s, PressureSet{seg, g.uniform(6.0, 14.7)}, cfg);
        const auto held = s.arm.bends[seg - 1];
        for (int i = 0; i < 300; ++i) {
            const int pick = g.integer(0, 9);
            if (pick == 0) {
                s = apply(s, ButtonPress{g.integer(1, 4)}, cfg);
            } else if (pick == 1) {
                s = apply(s, LoadSet{LoadPoint::tip, g.uniform(0, 3)}, cfg);
            } else if (pick == 2) {
                s = apply(s, PressureSet{3 - seg, g.uniform(0, 14.7)}, cfg);
            } else {
                s = apply(s, KnobTurn{g.integer(1, 4), g.integer(0, 1) ? 1 : -1}, cfg);
            }
            ASSERT_TRUE(bitwise_equal(s.arm.bends[seg - 1], held));
        }
    }
}

TEST(Invariants, ReleasedJamResumesWithoutJump) {
    const SimConfig cfg;
    auto s = initial_state(cfg);
    s = apply(s, KnobTurn{1, 1}, cfg);
    s = apply(s, PressureSet{1, 10}, cfg);
    for (int i = 0; i < 5; ++i) s = apply(s, KnobTurn{1, 1}, cfg);
    s = apply(s, PressureSet{1, 0}, cfg);
    EXPECT_NEAR(s.arm.bends[0].theta_x, kDetentBendRad, 1e-12);
    s = apply(s, KnobTurn{1, 1}, cfg);
    EXPECT_NEAR(s.arm.bends[0].theta_x, 2 * kDetentBendRad, 1e-12);
}

TEST(Invariants, SeqCountsProcessedEvents) {
    const SimConfig cfg;
    const auto script = random_knob_script(5, 200, 1, 4);
    const auto t = run_script(script, cfg);
    ASSERT_EQ(t.snapshots.size(), script.size() + 1);
    for (std::size_t i = 0; i < t.snapshots.size(); ++i) EXPECT_EQ(t.snapshots[i].seq, i);
}

TEST(Invariants, TipMatchesForwardKinematics) {
    const SimConfig cfg;
    const auto t = run_script(random_knob_script(6, 200, 1, 4), cfg);
    for (const auto& s : t.snapshots) {
        const auto r = readout(s, cfg);
        const auto frames = arm_fk(cfg.plant.segments, s.arm.bends);
        EXPECT_LT((r.tip - frames.back().position).norm(), 1e-12);
        EXPECT_LT((r.shape.back() - r.tip).norm(), 1e-12);
    }
}

TEST(Invariants, SubstepCountDoesNotChangeTheArm) {
    const auto script = random_knob_script(8, 300, 1, 4);
    SimConfig a;
    a.actuator.substeps_j = 1;
    SimConfig b;
    b.actuator.substeps_j = 60;
    const auto ta = run_script(script, a);
    const auto tb = run_script(script, b);
    for (int m = 0; m < 4; ++m) {
        EXPECT_NEAR(ta.snapshots.back().motor.cumulative_deg[m], tb.snapshots.back().motor.cumulative_deg[m], 1e-12);
    }
}

TEST(Invariants, QuantizedModesStayNearExact) {
    const auto script = random_knob_script(9, 200, 1, 4);
    const SimConfig exact;
    SimConfig carry;
    carry.actuator.quantization_mode = QuantizationMode::residual_carry;
    const auto te = run_script(script, exact);
    const auto tc = run_script(script, carry);
    const double half_step = 0.5 * carry.actuator.microstep_deg();
    for (int m = 0; m < 4; ++m) {
        EXPECT_LE(std::abs(te.snapshots.back().motor.cumulative_deg[m] - tc.snapshots.back().motor.cumulative_deg[m]),
                  half_step + 1e-9);
    }
}

TEST(Config, SimulatorRequiresTwoSegments) {
    SimConfig cfg;
    cfg.plant.segments.pop_back();
    EXPECT_THROW(initial_state(cfg), std::invalid_argument);
    SimConfig neg;
    neg.plant.coupling_coeff = -1;
    EXPECT_THROW(validate(neg), std::invalid_argument);
}

TEST(Script, ParsesAllCommands) {
    const auto s = parse_script(
        "# demo\n"
        "knob 1 +1\n"
        "knob 4 -1\n"
        "\n"
        "button 2\n"
        "pressure 1 12.5\n"
        "load connector 7.848\n"
        "load tip 0\n");
    ASSERT_EQ(s.size(), 6u);
    EXPECT_EQ(s[0].line, 2u);
    EXPECT_EQ(std::get<KnobTurn>(s[1].event).dir, -1);
    EXPECT_EQ(s[2].line, 5u);
    EXPECT_EQ(std::get<ButtonPress>(s[2].event).id, 2);
    EXPECT_EQ(std::get<PressureSet>(s[3].event).psi, 12.5);
    EXPECT_EQ(std::get<LoadSet>(s[4].event).point, LoadPoint::connector);
}

TEST(Script, ErrorsCarryLineNumbers) {
    auto line_of = [](std::string_view text) -> std::size_t {
        try {
            parse_script(text);
        } catch (const ScriptError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("knob 1 +1\nknob 1 +2\n"), 2u);
    EXPECT_EQ(line_of("knob 5 +1\n"), 1u);
    EXPECT_EQ(line_of("# x\n\nspin 1\n"), 3u);
    EXPECT_EQ(line_of("button\n"), 1u);
    EXPECT_EQ(line_of("pressure 1\n"), 1u);
    EXPECT_EQ(line_of("pressure 1 lots\n"), 1u);
    EXPECT_EQ(line_of("load elbow 1\n"), 1u);
    EXPECT_EQ(line_of("knob 1 +1 extra\n"), 1u);
    EXPECT_EQ(line_of("knob 1 +1\n"), 0u);
}
