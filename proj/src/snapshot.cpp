#include "vsarm/snapshot.hpp"

#include "vsarm/canonical_json.hpp"

#include <nlohmann/json.hpp>

namespace vsarm {
namespace {

using nlohmann::json;

template <class Range>
void write_array(CanonicalWriter& w, const Range& r) {
    w.begin_array();
    for (const auto& v : r) w.value(v);
    w.end_array();
}

void write_bools(CanonicalWriter& w, const std::vector<bool>& r) {
    w.begin_array();
    for (bool b : r) w.value(b);
    w.end_array();
}

const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) {
        throw SnapshotError(std::string("snapshot is missing '") + name + "'");
    }
    return j.at(name);
}

template <class T, std::size_t N>
std::array<T, N> read_fixed(const json& j, const char* name) {
    const auto& a = field(j, name);
    if (!a.is_array() || a.size() != N) {
        throw SnapshotError(std::string("snapshot field '") + name + "' has the wrong length");
    }
    std::array<T, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = a[i].get<T>();
    return out;
}

}  // namespace

std::string snapshot_serialize(const SessionState& s, const SimConfig& cfg) {
    const Readout r = readout(s, cfg, 2);
    CanonicalWriter w;
    w.begin_object();
    w.key("seq").value(s.seq);
    w.key("knobs");
    write_array(w, s.knobs.position);
    w.key("motors_deg");
    write_array(w, s.motor.cumulative_deg);
    w.key("motor_residual_deg");
    write_array(w, s.motor.residual_deg);
    w.key("motor_microsteps");
    write_array(w, s.motor.microsteps);
    w.key("net_detents");
    write_array(w, s.motor.net_detents);
    w.key("reset_baseline").begin_array();
    for (const auto& row : s.motor.reset_baseline) write_array(w, row);
    w.end_array();
    w.key("bend_rad").begin_array();
    for (const auto& b : s.arm.bends) {
        w.begin_array().value(b.theta_x).value(b.theta_y).end_array();
    }
    w.end_array();
    w.key("pressures_psi");
    write_array(w, s.arm.pressures_psi);
    w.key("jammed");
    write_bools(w, s.arm.jammed);
    w.key("realized_m");
    write_array(w, s.realized_m);
    w.key("slip_m");
    write_array(w, s.slip_m);
    w.key("load");
    if (s.load) {
        w.begin_object();
        w.key("point").value(to_string(s.load->point));
        w.key("newtons").value(s.load->newtons);
        w.end_object();
    } else {
        w.null();
    }
    w.key("warning");
    if (s.warning) w.value(*s.warning); else w.null();

    w.key("derived").begin_object();
    w.key("tendons_m").begin_object();
    w.key("x1o").value(r.tendons.x1o);
    w.key("y1o").value(r.tendons.y1o);
    w.key("x2o").value(r.tendons.x2o);
    w.key("y2o").value(r.tendons.y2o);
    w.end_object();
    w.key("tip_m").begin_array().value(r.tip.x()).value(r.tip.y()).value(r.tip.z()).end_array();
    w.key("capacity_N");
    if (r.capacity_N) w.value(*r.capacity_N); else w.null();
    w.key("deflection_m");
    if (r.deflection_m) w.value(*r.deflection_m); else w.null();
    w.end_object();

    w.end_object();
    return w.str();
}

SessionState snapshot_parse(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SnapshotError(std::string("snapshot is not valid JSON: ") + e.what());
    }
    try {
        SessionState s;
        s.seq = field(j, "seq").get<std::uint64_t>();
        s.knobs.position = read_fixed<std::int64_t, 4>(j, "knobs");
        s.motor.cumulative_deg = read_fixed<double, 4>(j, "motors_deg");
        s.motor.residual_deg = read_fixed<double, 4>(j, "motor_residual_deg");
        s.motor.microsteps = read_fixed<std::int64_t, 4>(j, "motor_microsteps");
        s.motor.net_detents = read_fixed<std::int64_t, 4>(j, "net_detents");
        const auto& base = field(j, "reset_baseline");
        if (!base.is_array() || base.size() != 4) throw SnapshotError("reset_baseline must be 4x4");
        for (std::size_t m = 0; m < 4; ++m) {
            if (!base[m].is_array() || base[m].size() != 4) throw SnapshotError("reset_baseline must be 4x4");
            for (std::size_t k = 0; k < 4; ++k) s.motor.reset_baseline[m][k] = base[m][k].get<std::int64_t>();
        }
        for (const auto& b : field(j, "bend_rad")) {
            if (!b.is_array() || b.size() != 2) throw SnapshotError("bend_rad entries must be pairs");
            s.arm.bends.push_back({b[0].get<double>(), b[1].get<double>()});
        }
        for (const auto& p : field(j, "pressures_psi")) s.arm.pressures_psi.push_back(p.get<double>());
        for (const auto& f : field(j, "jammed")) s.arm.jammed.push_back(f.get<bool>());
        if (s.arm.pressures_psi.size() != s.arm.bends.size() || s.arm.jammed.size() != s.arm.bends.size()) {
            throw SnapshotError("per-segment lists differ in length");
        }
        s.realized_m = read_fixed<double, 4>(j, "realized_m");
        s.slip_m = read_fixed<double, 4>(j, "slip_m");
        const auto& load = field(j, "load");
        if (!load.is_null()) {
            const auto point = load_point_from_string(field(load, "point").get<std::string>());
            if (!point) throw SnapshotError("unknown load point");
            s.load = AppliedLoad{*point, field(load, "newtons").get<double>()};
        }
        const auto& warning = field(j, "warning");
        if (!warning.is_null()) s.warning = warning.get<std::string>();
        return s;
    } catch (const json::exception& e) {
        throw SnapshotError(std::string("malformed snapshot: ") + e.what());
    }
}

std::string trajectory_serialize(const Trajectory& t, const SimConfig& cfg) {
    std::string out = "{\"snapshots\":[\n";
    for (std::size_t i = 0; i < t.snapshots.size(); ++i) {
        out += snapshot_serialize(t.snapshots[i], cfg);
        out += i + 1 < t.snapshots.size() ? ",\n" : "\n";
    }
    CanonicalWriter errors;
    errors.begin_array();
    for (const auto& e : t.errors) {
        errors.begin_object().key("line").value(e.line).key("reason").value(e.reason).end_object();
    }
    errors.end_array();
    out += "],\"errors\":" + errors.str() + "}\n";
    return out;
}

}  // namespace vsarm
