#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "metamorph/airframe.hpp"
#include "metamorph/environment.hpp"
#include "metamorph/scenario.hpp"

namespace metamorph {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg, int line_number = 0)
        : std::runtime_error(msg), line(line_number) {}
    int line;
};

// Minimal strict TOML dialect: [tables], [[arrays of tables]], key = value
// with numbers, booleans, quoted strings and flat numeric arrays, and #
// comments. Every key must be consumed by the loader; unknown keys are
// rejected so a typo in a physical constant cannot pass silently.
struct TomlValue {
    enum class Type { Number, Bool, String, NumberArray };
    Type type = Type::Number;
    double num = 0.0;
    bool boolean = false;
    std::string str;
    std::vector<double> array;
    int line = 0;
};

struct TomlTable {
    std::map<std::string, TomlValue> values;
    std::map<std::string, TomlTable> tables;
    std::map<std::string, std::vector<TomlTable>> table_arrays;
};

TomlTable parse_toml(std::istream& in);
TomlTable parse_toml_file(const std::filesystem::path& path);

struct SimParams {
    double dt = 1e-3;
    double duration = 10.0;
    int output_every = 10;
    std::string polar_dir;  // empty -> METAMORPH_POLAR_DIR, then "polars"
    std::string scenario = "hover_spinup";
};

struct SimConfig {
    WingSpec wing;
    double m_uav = 0.450;
    std::optional<Mat3> inertia;
    Vec3 cg_offset = Vec3::Zero();
    double wing_areal_density = 1.0;
    double inertia_fold_angle = kDefaultInertiaFoldAngle;
    std::vector<ThrusterSpec> thrusters;  // empty -> default tip mounts
    Environment env;
    SimParams sim;

    Airframe build_airframe() const {
        return Airframe::build(wing, m_uav, inertia, cg_offset, wing_areal_density, thrusters,
                               inertia_fold_angle);
    }
};

/// Parse and validate a simulation config. Rejects unknown keys.
SimConfig load_sim_config(const std::filesystem::path& path);

/// A scenario file shares the config dialect: a [scenario] table plus
/// [[schedule]] entries (t, eps_p_deg, eps_s_deg, thrust_p, thrust_s).
struct ScenarioFileSpec {
    std::string name;
    std::string base = "cruise";  // initial-condition recipe: "hover" or "cruise"
    double duration = 10.0;
    std::optional<bool> ground_contact;
    std::optional<double> initial_altitude;
    std::vector<Schedule::Entry> entries;
};

ScenarioFileSpec load_scenario_file(const std::filesystem::path& path);

/// Instantiate a scenario file against an airframe and polar set (the
/// cruise base runs the trim search for its initial state).
Scenario make_file_scenario(const ScenarioFileSpec& spec, const Airframe& airframe,
                            const PolarSet& polars, const Environment& env);

/// Polar directory resolution: explicit config value, else the
/// METAMORPH_POLAR_DIR environment variable, both relative to the config
/// file's directory when not absolute.
std::filesystem::path resolve_polar_dir(const SimConfig& cfg,
                                        const std::filesystem::path& config_path);

}  // namespace metamorph
