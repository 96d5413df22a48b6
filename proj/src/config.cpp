#include "vsarm/config.hpp"

#include <fstream>
#include <initializer_list>
#include <string>

namespace vsarm {
namespace {

using nlohmann::json;

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw ConfigError(std::string(where) + ": unknown field '" + k + "'");
    }
}

template <class T>
void read(const json& j, const char* name, T& out) {
    if (!j.contains(name)) return;
    try {
        out = j.at(name).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("field '") + name + "' has the wrong type");
    }
}

StiffnessTable table_from_json(const json& j, StiffnessTable table) {
    check_keys(j, "stiffness table", {"rows", "reference_deflection_m", "label"});
    if (j.contains("rows")) {
        table.rows.clear();
        for (const auto& row : j.at("rows")) {
            if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
                throw ConfigError("table rows must be [psi, N] number pairs");
            }
            table.rows.push_back({row[0].get<double>(), row[1].get<double>()});
        }
    }
    read(j, "reference_deflection_m", table.reference_deflection_m);
    read(j, "label", table.label);
    return table;
}

json table_to_json(const StiffnessTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows) rows.push_back({r.pressure_psi, r.capacity_N});
    return {{"rows", rows}, {"reference_deflection_m", t.reference_deflection_m}, {"label", t.label}};
}

}  // namespace

ActuatorConfig actuator_from_json(const json& j) {
    check_keys(j, "actuator",
               {"spool_radius_m", "steps_per_rev", "microstep", "detent_deg", "per_detent_motor_deg",
                "substeps_j", "bend_gain_deg_per_m", "quantization_mode", "motor_map"});
    ActuatorConfig a;
    read(j, "spool_radius_m", a.spool_radius_m);
    read(j, "steps_per_rev", a.steps_per_rev);
    read(j, "microstep", a.microstep);
    read(j, "detent_deg", a.detent_deg);
    read(j, "per_detent_motor_deg", a.per_detent_motor_deg);
    read(j, "substeps_j", a.substeps_j);
    read(j, "bend_gain_deg_per_m", a.bend_gain_deg_per_m);
    if (j.contains("quantization_mode")) {
        std::string mode;
        read(j, "quantization_mode", mode);
        try {
            a.quantization_mode = quantization_mode_from_string(mode);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    read(j, "motor_map", a.motor_map);
    return a;
}

json actuator_to_json(const ActuatorConfig& a) {
    return {{"spool_radius_m", a.spool_radius_m},
            {"steps_per_rev", a.steps_per_rev},
            {"microstep", a.microstep},
            {"detent_deg", a.detent_deg},
            {"per_detent_motor_deg", a.per_detent_motor_deg},
            {"substeps_j", a.substeps_j},
            {"bend_gain_deg_per_m", a.bend_gain_deg_per_m},
            {"quantization_mode", std::string(to_string(a.quantization_mode))},
            {"motor_map", a.motor_map}};
}

SimConfig config_from_json(const json& j) {
    check_keys(j, "config", {"actuator", "coupling", "plant"});
    SimConfig cfg;
    if (j.contains("actuator")) cfg.actuator = actuator_from_json(j.at("actuator"));
    if (j.contains("coupling")) {
        const auto& c = j.at("coupling");
        check_keys(c, "coupling", {"alpha", "beta", "seg2_offset"});
        read(c, "alpha", cfg.coupling.alpha);
        read(c, "beta", cfg.coupling.beta);
        read(c, "seg2_offset", cfg.coupling.seg2_offset);
    }
    if (j.contains("plant")) {
        const auto& p = j.at("plant");
        check_keys(p, "plant",
                   {"segments", "coupling_coeff", "jam_threshold_psi", "tip_table", "connector_table"});
        if (p.contains("segments")) {
            cfg.plant.segments.clear();
            for (const auto& s : p.at("segments")) {
                check_keys(s, "segment", {"arc_length", "tendon_separation", "x_pair_azimuth", "label"});
                SegmentParams def;
                double azimuth = 0.0;
                read(s, "arc_length", def.arc_length);
                read(s, "tendon_separation", def.tendon_separation);
                read(s, "x_pair_azimuth", azimuth);
                read(s, "label", def.label);
                try {
                    cfg.plant.segments.push_back(
                        make_segment(def.arc_length, def.tendon_separation, azimuth, def.label));
                } catch (const std::exception& e) {
                    throw ConfigError(e.what());
                }
            }
        }
        read(p, "coupling_coeff", cfg.plant.coupling_coeff);
        read(p, "jam_threshold_psi", cfg.plant.jam_threshold_psi);
        if (p.contains("tip_table")) cfg.plant.tip_table = table_from_json(p.at("tip_table"), cfg.plant.tip_table);
        if (p.contains("connector_table")) {
            cfg.plant.connector_table = table_from_json(p.at("connector_table"), cfg.plant.connector_table);
        }
    }
    try {
        validate(cfg);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

json config_to_json(const SimConfig& cfg) {
    json segments = json::array();
    for (const auto& s : cfg.plant.segments) {
        segments.push_back({{"arc_length", s.arc_length},
                            {"tendon_separation", s.tendon_separation},
                            {"x_pair_azimuth", s.x_pair_azimuth},
                            {"label", s.label}});
    }
    return {{"actuator", actuator_to_json(cfg.actuator)},
            {"coupling",
             {{"alpha", cfg.coupling.alpha}, {"beta", cfg.coupling.beta}, {"seg2_offset", cfg.coupling.seg2_offset}}},
            {"plant",
             {{"segments", segments},
              {"coupling_coeff", cfg.plant.coupling_coeff},
              {"jam_threshold_psi", cfg.plant.jam_threshold_psi},
              {"tip_table", table_to_json(cfg.plant.tip_table)},
              {"connector_table", table_to_json(cfg.plant.connector_table)}}}};
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

}  // namespace vsarm
