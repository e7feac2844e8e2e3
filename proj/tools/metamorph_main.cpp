// Command-line front end: load a config and polar tables, run scenarios,
// write CSV telemetry and plot scripts.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metamorph/config.hpp"
#include "metamorph/polar.hpp"
#include "metamorph/scenario.hpp"
#include "metamorph/telemetry.hpp"

namespace fs = std::filesystem;
using namespace metamorph;

namespace {

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 ok, 1 usage or validation failure, 2 polar errors,
// 3 config errors, 4 simulation divergence.
constexpr int kExitPolarError = 2;
constexpr int kExitConfigError = 3;
constexpr int kExitSimDiverged = 4;

struct LoadedSetup {
    SimConfig cfg;
    Airframe airframe;
    PolarSet polars;
    fs::path polar_dir;
    std::map<std::string, std::string> polar_hashes;
};

LoadedSetup load_setup(const fs::path& config_path, int segments_override) {
    LoadedSetup s;
    s.cfg = load_sim_config(config_path);
    if (segments_override > 0) s.cfg.wing.segments_per_side = segments_override;
    s.airframe = s.cfg.build_airframe();
    s.polar_dir = resolve_polar_dir(s.cfg, config_path);
    s.polars.cruise = load_polar_dir(s.polar_dir / s.cfg.wing.airfoil_cruise);
    s.polars.hover = load_polar_dir(s.polar_dir / s.cfg.wing.airfoil_hover);
    for (const auto& name : {s.cfg.wing.airfoil_cruise, s.cfg.wing.airfoil_hover}) {
        for (const auto& entry : fs::directory_iterator(s.polar_dir / name)) {
            if (entry.is_regular_file() && entry.path().extension() == ".txt") {
                s.polar_hashes[name + "/" + entry.path().filename().string()] =
                    hash_file(entry.path());
            }
        }
    }
    return s;
}

Scenario resolve_scenario(const std::string& name, const LoadedSetup& s) {
    const auto builtins = builtin_scenario_names();
    if (std::find(builtins.begin(), builtins.end(), name) != builtins.end()) {
        return make_builtin_scenario(name, s.airframe, s.polars, s.cfg.env);
    }
    const fs::path p(name);
    if (fs::is_regular_file(p)) {
        return make_file_scenario(load_scenario_file(p), s.airframe, s.polars, s.cfg.env);
    }
    std::ostringstream os;
    os << "unknown scenario '" << name << "'; built-ins:";
    for (const auto& b : builtins) os << ' ' << b;
    throw SimError(os.str());
}

int run_one(const LoadedSetup& s, const fs::path& config_path, const std::string& scenario_name,
            const fs::path& out_dir, double dt_override) {
    const auto t0 = std::chrono::steady_clock::now();
    const Scenario scenario = resolve_scenario(scenario_name, s);

    fs::create_directories(out_dir);
    VehicleCsvWriter vehicle(out_dir / "vehicle.csv");
    SegmentsCsvWriter segments(out_dir / "segments.csv");

    RunParams params;
    params.dt = dt_override > 0.0 ? dt_override : s.cfg.sim.dt;
    params.output_every = s.cfg.sim.output_every;

    RunHooks hooks;
    hooks.on_vehicle = [&](const VehicleSample& vs) { vehicle.write(vs); };
    hooks.on_segment = [&](const SegmentSample& ss) { segments.write(ss); };

    const RunResult result = run(scenario, s.airframe, s.polars, s.cfg.env, params, hooks);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    RunManifest manifest;
    manifest.version = kVersion;
    manifest.scenario = scenario.name;
    manifest.config_path = config_path.string();
    manifest.config_hash = hash_file(config_path);
    manifest.polar_hashes = s.polar_hashes;
    manifest.dt = params.dt;
    manifest.duration = scenario.duration;
    manifest.segments_per_side = s.airframe.per_side();
    manifest.samples = result.samples;
    manifest.wall_time_s = wall;
    write_run_manifest(out_dir / "run_manifest.json", manifest);

    std::cout << scenario.name << ": " << result.steps << " steps, " << result.samples
              << " samples, final p = [" << result.final_state.p.transpose() << "] ("
              << wall << " s)\n";
    return 0;
}

int cmd_run(const fs::path& config_path, std::vector<std::string> scenario_names,
            const fs::path& out_root, double dt_override, int segments_override, int jobs) {
    const LoadedSetup setup = load_setup(config_path, segments_override);
    if (scenario_names.empty()) scenario_names.push_back(setup.cfg.sim.scenario);

    if (scenario_names.size() == 1) {
        return run_one(setup, config_path, scenario_names.front(), out_root, dt_override);
    }
    // Several scenarios share the immutable setup; each gets its own
    // subdirectory.
    std::vector<std::future<int>> futures;
    const int max_jobs = std::max(1, jobs);
    int rc = 0;
    std::size_t next = 0;
    while (next < scenario_names.size() || !futures.empty()) {
        while (next < scenario_names.size() && futures.size() < static_cast<std::size_t>(max_jobs)) {
            const std::string name = scenario_names[next++];
            const fs::path sub = out_root / fs::path(name).stem();
            futures.push_back(std::async(std::launch::async, [&, name, sub] {
                return run_one(setup, config_path, name, sub, dt_override);
            }));
        }
        for (auto& f : futures) rc = std::max(rc, f.get());
        futures.clear();
    }
    return rc;
}

int cmd_validate_polar(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        std::cerr << "error: not a directory: " << dir << "\n";
        return 1;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::cerr << "warning: empty polar directory (no *.txt files): " << dir << "\n";
        return 1;
    }
    int failures = 0;
    for (const auto& f : files) {
        try {
            const PolarCurve curve = parse_polar_file(f);
            std::cout << "OK    " << fs::relative(f, dir).string() << "  Re=" << curve.reynolds()
                      << "  alpha=[" << curve.alpha_min() * kRadToDeg << ", "
                      << curve.alpha_max() * kRadToDeg << "] deg  points="
                      << curve.points().size() << "\n";
        } catch (const PolarError& e) {
            std::cout << "ERROR " << fs::relative(f, dir).string() << "  " << e.what() << "\n";
            ++failures;
        }
    }
    std::cout << files.size() - failures << "/" << files.size() << " files parsed\n";
    return failures == 0 ? 0 : 1;
}

int cmd_plot(const fs::path& out_dir) {
    const fs::path vehicle_csv = out_dir / "vehicle.csv";
    const fs::path segments_csv = out_dir / "segments.csv";
    if (!fs::is_regular_file(vehicle_csv) || !fs::is_regular_file(segments_csv)) {
        std::cerr << "error: missing telemetry (vehicle.csv / segments.csv) in " << out_dir
                  << "\n";
        return 1;
    }
    // Infer the segment count from the telemetry itself.
    std::ifstream in(segments_csv);
    std::string line;
    std::getline(in, line);  // header
    int per_side = 0;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        std::istringstream iss(line);
        std::string t, side, index;
        std::getline(iss, t, ',');
        std::getline(iss, side, ',');
        std::getline(iss, index, ',');
        if (seen.insert(side + index).second) {
            per_side = std::max(per_side, std::stoi(index));
        } else {
            break;  // first repeated (side,index): one full output step seen
        }
    }
    if (per_side == 0) {
        std::cerr << "error: no segment rows in " << segments_csv << "\n";
        return 1;
    }
    write_vehicle_plot_script(out_dir);
    write_segments_plot_script(out_dir, per_side);
    std::cout << "wrote " << (out_dir / "vehicle.gp") << " and " << (out_dir / "segments.gp")
              << "\n";
    return 0;
}

int cmd_trim(const fs::path& config_path, int segments_override) {
    const LoadedSetup setup = load_setup(config_path, segments_override);
    const TrimResult trim = trim_glide(setup.airframe, setup.polars, setup.cfg.env);
    std::cout << "trim: V = " << trim.airspeed << " m/s, alpha = " << trim.alpha * kRadToDeg
              << " deg, pitch = " << trim.pitch * kRadToDeg
              << " deg, glide angle = " << trim.glide_angle * kRadToDeg
              << " deg, residual = " << trim.residual << " (" << trim.iterations
              << " iterations)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metamorph: segmented-wing morphing UAV flight dynamics simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> scenarios;
    std::string out_dir = "out";
    double dt_override = 0.0;
    int segments_override = 0;
    int jobs = 1;

    CLI::App* run_cmd = app.add_subcommand("run", "run one or more scenarios");
    run_cmd->add_option("config", config_path, "simulation config (TOML)")->required();
    run_cmd->add_option("--scenario", scenarios,
                        "built-in scenario name or scenario file path (repeatable)");
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_option("--dt", dt_override, "integration step override [s]");
    run_cmd->add_option("--segments", segments_override, "segments per side override");
    run_cmd->add_option("--jobs", jobs, "parallel scenario runs");

    std::string polar_dir;
    CLI::App* validate_cmd = app.add_subcommand("validate-polar", "parse and report polar files");
    validate_cmd->add_option("dir", polar_dir, "polar directory")->required();

    std::string plot_dir;
    CLI::App* plot_cmd = app.add_subcommand("plot", "emit gnuplot scripts for a finished run");
    plot_cmd->add_option("out_dir", plot_dir, "directory holding vehicle.csv and segments.csv")
        ->required();

    std::string trim_config;
    int trim_segments = 0;
    CLI::App* trim_cmd = app.add_subcommand("trim", "solve and print the steady glide trim");
    trim_cmd->add_option("config", trim_config, "simulation config (TOML)")->required();
    trim_cmd->add_option("--segments", trim_segments, "segments per side override");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            return cmd_run(config_path, scenarios, out_dir, dt_override, segments_override, jobs);
        }
        if (validate_cmd->parsed()) return cmd_validate_polar(polar_dir);
        if (plot_cmd->parsed()) return cmd_plot(plot_dir);
        if (trim_cmd->parsed()) return cmd_trim(trim_config, trim_segments);
    } catch (const PolarError& e) {
        std::cerr << "polar error: " << e.what() << "\n";
        return kExitPolarError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const SimError& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return kExitSimDiverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
