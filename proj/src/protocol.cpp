#include "vsarm/protocol.hpp"

#include "vsarm/canonical_json.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <set>

namespace vsarm {
namespace {

using nlohmann::json;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

bool exact_keys(const json& j, std::set<std::string> allowed) {
    for (const auto& [k, v] : j.items()) {
        if (!allowed.count(k)) return false;
    }
    return true;
}

std::optional<long long> integer_field(const json& j, const char* name) {
    if (!j.contains(name)) return std::nullopt;
    const auto& v = j.at(name);
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 1e15) return static_cast<long long>(d);
    }
    return std::nullopt;
}

std::optional<double> number_field(const json& j, const char* name) {
    if (!j.contains(name) || !j.at(name).is_number()) return std::nullopt;
    const double d = j.at(name).get<double>();
    if (!std::isfinite(d)) return std::nullopt;
    return d;
}

}  // namespace

std::variant<Event, ProtocolError> parse_client_message(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error&) {
        return ProtocolError{"message is not valid JSON"};
    }
    if (!j.is_object()) return ProtocolError{"message must be a JSON object"};
    if (!j.contains("type") || !j.at("type").is_string()) {
        return ProtocolError{"message needs a string 'type'"};
    }
    const auto type = j.at("type").get<std::string>();

    if (type == "knob") {
        if (!exact_keys(j, {"type", "id", "dir"})) return ProtocolError{"knob: unexpected field"};
        const auto id = integer_field(j, "id");
        const auto dir = integer_field(j, "dir");
        if (!id || *id < 1 || *id > 4) return ProtocolError{"knob: 'id' must be an integer 1..4"};
        if (!dir || (*dir != 1 && *dir != -1)) return ProtocolError{"knob: 'dir' must be 1 or -1"};
        return Event{KnobTurn{static_cast<int>(*id), static_cast<int>(*dir)}};
    }
    if (type == "button") {
        if (!exact_keys(j, {"type", "id"})) return ProtocolError{"button: unexpected field"};
        const auto id = integer_field(j, "id");
        if (!id || *id < 1 || *id > 4) return ProtocolError{"button: 'id' must be an integer 1..4"};
        return Event{ButtonPress{static_cast<int>(*id)}};
    }
    if (type == "pressure") {
        if (!exact_keys(j, {"type", "segment", "psi"})) return ProtocolError{"pressure: unexpected field"};
        const auto seg = integer_field(j, "segment");
        const auto psi = number_field(j, "psi");
        if (!seg || *seg < 1 || *seg > 1000) return ProtocolError{"pressure: 'segment' must be a positive integer"};
        if (!psi) return ProtocolError{"pressure: 'psi' must be a number"};
        return Event{PressureSet{static_cast<int>(*seg), *psi}};
    }
    if (type == "load") {
        if (!exact_keys(j, {"type", "point", "newtons"})) return ProtocolError{"load: unexpected field"};
        if (!j.contains("point") || !j.at("point").is_string()) {
            return ProtocolError{"load: 'point' must be \"tip\" or \"connector\""};
        }
        const auto point = load_point_from_string(j.at("point").get<std::string>());
        if (!point) return ProtocolError{"load: 'point' must be \"tip\" or \"connector\""};
        const auto n = number_field(j, "newtons");
        if (!n) return ProtocolError{"load: 'newtons' must be a number"};
        return Event{LoadSet{*point, *n}};
    }
    if (type == "reset") {
        if (!exact_keys(j, {"type"})) return ProtocolError{"reset: unexpected field"};
        return Event{ResetSession{}};
    }
    return ProtocolError{"unknown message type '" + type + "'"};
}

std::string state_message(const SessionState& s, const SimConfig& cfg) {
    const Readout r = readout(s, cfg);
    CanonicalWriter w;
    w.begin_object();
    w.key("type").value("state");
    w.key("seq").value(s.seq);
    w.key("motors_deg").begin_array();
    for (double d : s.motor.cumulative_deg) w.value(d);
    w.end_array();
    w.key("tendons_m").begin_object();
    w.key("x1o").value(r.tendons.x1o);
    w.key("y1o").value(r.tendons.y1o);
    w.key("x2o").value(r.tendons.x2o);
    w.key("y2o").value(r.tendons.y2o);
    w.end_object();
    w.key("bend_deg").begin_array();
    for (const auto& b : s.arm.bends) {
        w.begin_array().value(b.theta_x * kRadToDeg).value(b.theta_y * kRadToDeg).end_array();
    }
    w.end_array();
    w.key("tip_m").begin_array().value(r.tip.x()).value(r.tip.y()).value(r.tip.z()).end_array();
    w.key("shape_m").begin_array();
    for (const auto& p : r.shape) w.begin_array().value(p.x()).value(p.y()).value(p.z()).end_array();
    w.end_array();
    w.key("pressures_psi").begin_array();
    for (double p : s.arm.pressures_psi) w.value(p);
    w.end_array();
    w.key("jammed").begin_array();
    for (bool b : s.arm.jammed) w.value(b);
    w.end_array();
    w.key("capacity_N");
    if (r.capacity_N) w.value(*r.capacity_N); else w.null();
    w.key("deflection_m");
    if (r.deflection_m) w.value(*r.deflection_m); else w.null();
    w.key("warning");
    if (s.warning) w.value(*s.warning); else w.null();
    w.end_object();
    return w.str();
}

std::string error_message(std::string_view reason) {
    CanonicalWriter w;
    w.begin_object().key("type").value("error").key("reason").value(reason).end_object();
    return w.str();
}

std::string client_message(const Event& ev) {
    CanonicalWriter w;
    w.begin_object();
    if (const auto* k = std::get_if<KnobTurn>(&ev)) {
        w.key("type").value("knob").key("id").value(k->id).key("dir").value(k->dir);
    } else if (const auto* b = std::get_if<ButtonPress>(&ev)) {
        w.key("type").value("button").key("id").value(b->id);
    } else if (const auto* p = std::get_if<PressureSet>(&ev)) {
        w.key("type").value("pressure").key("segment").value(p->segment).key("psi").value(p->psi);
    } else if (const auto* l = std::get_if<LoadSet>(&ev)) {
        w.key("type").value("load").key("point").value(to_string(l->point)).key("newtons").value(l->newtons);
    } else {
        w.key("type").value("reset");
    }
    w.end_object();
    return w.str();
}

TeleopSession::TeleopSession(SimConfig cfg) : cfg_(std::move(cfg)), state_(initial_state(cfg_)) {}

std::string TeleopSession::greeting() const { return state_message(state_, cfg_); }

std::string TeleopSession::handle(std::string_view message) {
    auto parsed = parse_client_message(message);
    if (auto* err = std::get_if<ProtocolError>(&parsed)) return error_message(err->reason);
    auto result = step(state_, std::get<Event>(parsed), cfg_);
    if (result.error) return error_message(*result.error);
    state_ = std::move(result.state);
    return state_message(state_, cfg_);
}

}  // namespace vsarm
