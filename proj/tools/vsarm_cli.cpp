// vsarm: command-line front end for the variable-stiffness arm library.

#include "vsarm/config.hpp"
#include "vsarm/csv.hpp"
#include "vsarm/script.hpp"
#include "vsarm/server.hpp"
#include "vsarm/snapshot.hpp"

#include "CLI11.hpp"

#include <nlohmann/json.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace {

using nlohmann::json;
using namespace vsarm;

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
            throw CLI::ValidationError(what, "'" + item + "' is not a number");
        }
        out.push_back(v);
    }
    if (out.size() != expected) {
        throw CLI::ValidationError(what, "expected " + std::to_string(expected) + " comma-separated values");
    }
    return out;
}

json vec3(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

json mat3(const Eigen::Matrix3d& m) {
    json rows = json::array();
    for (int r = 0; r < 3; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
    return rows;
}

SimConfig config_or_default(const std::string& path) {
    return path.empty() ? SimConfig{} : load_config(path);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
}

int cmd_fk(const std::string& config_path, const std::string& bend_text, const std::string& out) {
    const SimConfig cfg = config_or_default(config_path);
    const auto deg = parse_list(bend_text, 2 * cfg.plant.segments.size(), "--bend");
    std::vector<BendState> bends;
    for (std::size_t k = 0; k < cfg.plant.segments.size(); ++k) {
        bends.push_back({deg[2 * k] * kDegToRad, deg[2 * k + 1] * kDegToRad});
    }
    const auto frames = arm_fk(cfg.plant.segments, bends);
    json segs = json::array();
    for (std::size_t k = 0; k < frames.size(); ++k) {
        segs.push_back({{"label", cfg.plant.segments[k].label},
                        {"position_m", vec3(frames[k].position)},
                        {"rotation", mat3(frames[k].rotation)}});
    }
    json shape = json::array();
    for (const auto& p : arm_shape_samples(cfg.plant.segments, bends, 16)) shape.push_back(vec3(p));
    const json result{{"segments", segs}, {"tip_m", vec3(frames.back().position)}, {"shape_m", shape}};
    emit(result.dump(2) + "\n", out);
    return 0;
}

int cmd_decouple(const std::string& config_path, const std::string& cmd_text, const std::string& out) {
    const SimConfig cfg = config_or_default(config_path);
    const auto mm = parse_list(cmd_text, 4, "--cmd");
    const TendonCommand cmd{mm[0], mm[1], mm[2], mm[3]};
    const auto act = decouple(cmd, cfg.coupling);
    auto motor_deg = [&](double tendon_mm) {
        return tendon_mm / 1000.0 / cfg.actuator.spool_radius_m / kDegToRad;
    };
    const json result{
        {"command_mm", {{"x1i", cmd.x1i}, {"y1i", cmd.y1i}, {"x2i", cmd.x2i}, {"y2i", cmd.y2i}}},
        {"actuation_mm", {{"x1o", act.x1o}, {"y1o", act.y1o}, {"x2o", act.x2o}, {"y2o", act.y2o}}},
        {"spool_deg",
         {{"Rx1", motor_deg(act.x1o)}, {"Ry1", motor_deg(act.y1o)}, {"Rx2", motor_deg(act.x2o)}, {"Ry2", motor_deg(act.y2o)}}},
        {"alpha", cfg.coupling.alpha},
        {"beta", cfg.coupling.beta}};
    emit(result.dump(2) + "\n", out);
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& script_path, const std::string& out) {
    const SimConfig cfg = config_or_default(config_path);
    std::ifstream in(script_path);
    if (!in) throw std::runtime_error("cannot open script " + script_path);
    const auto script = parse_script(in);
    emit(trajectory_serialize(run_script(script, cfg), cfg), out);
    return 0;
}

int cmd_calibrate(const std::string& csv_path, const std::string& out) {
    const auto points = read_calibration_csv(std::filesystem::path(csv_path));
    const auto fit = fit_linear(points);
    auto interval = [](const std::optional<Interval>& i) -> json {
        if (!i) return nullptr;
        return json::array({i->lo, i->hi});
    };
    json residuals = json::array();
    for (const auto& p : points) {
        residuals.push_back({p.x, p.y - (fit.intercept + fit.slope * p.x)});
    }
    const json result{{"slope", fit.slope},
                      {"intercept", fit.intercept},
                      {"slope_ci95", interval(fit.slope_ci95)},
                      {"intercept_ci95", interval(fit.intercept_ci95)},
                      {"r_squared", fit.r_squared},
                      {"n", fit.n},
                      {"residuals", residuals}};
    emit(result.dump(2) + "\n", out);
    return 0;
}

int cmd_stiffness(const std::string& csv_path, double pressure, std::optional<double> load,
                  const std::string& out) {
    const auto table = read_stiffness_csv(std::filesystem::path(csv_path));
    json result{{"pressure_psi", pressure},
                {"capacity_N", capacity_at(table, pressure)},
                {"spring_constant_N_per_m", spring_constant(table, pressure)},
                {"reference_deflection_m", table.reference_deflection_m}};
    try {
        result["stiffness_ratio"] = stiffness_ratio(table, pressure);
    } catch (const std::out_of_range&) {
        result["stiffness_ratio"] = nullptr;  // table does not reach 0 psi
    }
    if (load) {
        const auto d = deflection_under_load(table, pressure, *load);
        result["load_N"] = *load;
        result["deflection_m"] = d.meters;
        result["exceeds_rating"] = d.exceeds_rating;
    }
    emit(result.dump(2) + "\n", out);
    return 0;
}

TeleopServer* g_server = nullptr;

extern "C" void on_signal(int) {
    if (g_server) g_server->stop();
}

int cmd_serve(const std::string& config_path, const std::string& address, unsigned short port) {
    TeleopServer server(config_or_default(config_path));
    const auto bound = server.listen(address, port);
    std::cout << json{{"listening", address + ":" + std::to_string(bound)}}.dump() << std::endl;
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.run();
    g_server = nullptr;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kinematics, control and stiffness tools for a tendon-driven layer-jamming arm"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;

    std::string bend_text;
    auto* fk = app.add_subcommand("fk", "Forward kinematics for per-segment bends (degrees)");
    fk->add_option("--config", config_path, "JSON config file");
    fk->add_option("--bend", bend_text, "thetax1,thetay1,thetax2,thetay2 in degrees")->required();
    fk->add_option("--out", out_path, "Write JSON here instead of stdout");

    std::string cmd_text;
    auto* dec = app.add_subcommand("decouple", "Desired tendon displacements (mm) to spool displacements");
    dec->add_option("--config", config_path, "JSON config file");
    dec->add_option("--cmd", cmd_text, "x1,y1,x2,y2 in mm")->required();
    dec->add_option("--out", out_path, "Write JSON here instead of stdout");

    std::string script_path;
    auto* sim = app.add_subcommand("simulate", "Replay a knob/pressure/load script");
    sim->add_option("--config", config_path, "JSON config file");
    sim->add_option("--script", script_path, "Script file")->required();
    sim->add_option("--out", out_path, "Write the trajectory here instead of stdout");

    std::string csv_path;
    auto* cal = app.add_subcommand("calibrate", "Linear fit of bend angle vs tendon displacement");
    cal->add_option("--csv", csv_path, "CSV with header x_m,theta_deg")->required();
    cal->add_option("--out", out_path, "Write JSON here instead of stdout");

    double pressure = 0.0;
    std::optional<double> load;
    auto* stiff = app.add_subcommand("stiffness", "Load capacity and deflection from a stiffness table");
    stiff->add_option("--csv", csv_path, "CSV with header pressure_psi,capacity_N")->required();
    stiff->add_option("--pressure", pressure, "Vacuum pressure (psi)")->required();
    stiff->add_option("--load", load, "Applied load (N)");
    stiff->add_option("--out", out_path, "Write JSON here instead of stdout");

    unsigned short port = 8765;
    std::string address = "127.0.0.1";
    auto* serve = app.add_subcommand("serve", "Run the WebSocket teleoperation server");
    serve->add_option("--config", config_path, "JSON config file");
    serve->add_option("--port", port, "TCP port (0 picks a free one)");
    serve->add_option("--address", address, "Bind address");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fk) return cmd_fk(config_path, bend_text, out_path);
        if (*dec) return cmd_decouple(config_path, cmd_text, out_path);
        if (*sim) return cmd_simulate(config_path, script_path, out_path);
        if (*cal) return cmd_calibrate(csv_path, out_path);
        if (*stiff) return cmd_stiffness(csv_path, pressure, load, out_path);
        if (*serve) return cmd_serve(config_path, address, port);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "vsarm: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
