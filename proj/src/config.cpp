#include "metamorph/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace metamorph {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

bool parse_number(const std::string& tok, double& out) {
    const char* b = tok.data();
    const char* e = b + tok.size();
    auto res = std::from_chars(b, e, out);
    return res.ec == std::errc() && res.ptr == e;
}

TomlValue parse_value(const std::string& raw, int line) {
    TomlValue v;
    v.line = line;
    const std::string s = trim(raw);
    if (s.empty()) throw ConfigError("empty value", line);
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') throw ConfigError("unterminated string", line);
        v.type = TomlValue::Type::String;
        v.str = s.substr(1, s.size() - 2);
        return v;
    }
    if (s == "true" || s == "false") {
        v.type = TomlValue::Type::Bool;
        v.boolean = (s == "true");
        return v;
    }
    if (s.front() == '[') {
        if (s.back() != ']') throw ConfigError("unterminated array", line);
        v.type = TomlValue::Type::NumberArray;
        std::string inner = s.substr(1, s.size() - 2);
        std::istringstream iss(inner);
        std::string item;
        while (std::getline(iss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            double d;
            if (!parse_number(item, d)) throw ConfigError("bad array element '" + item + "'", line);
            v.array.push_back(d);
        }
        return v;
    }
    if (!parse_number(s, v.num)) throw ConfigError("bad value '" + s + "'", line);
    v.type = TomlValue::Type::Number;
    return v;
}

std::vector<std::string> split_path(const std::string& s, int line) {
    std::vector<std::string> parts;
    std::istringstream iss(s);
    std::string part;
    while (std::getline(iss, part, '.')) {
        part = trim(part);
        if (part.empty()) throw ConfigError("empty table name component", line);
        parts.push_back(part);
    }
    if (parts.empty()) throw ConfigError("empty table name", line);
    return parts;
}

}  // namespace

TomlTable parse_toml(std::istream& in) {
    TomlTable root;
    TomlTable* current = &root;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            const bool is_array = s.size() > 1 && s[1] == '[';
            const std::string close = is_array ? "]]" : "]";
            if (s.substr(s.size() - close.size()) != close) {
                throw ConfigError("malformed table header '" + s + "'", line_no);
            }
            const std::string inner =
                s.substr(is_array ? 2 : 1, s.size() - 2 * (is_array ? 2 : 1));
            const auto parts = split_path(inner, line_no);
            TomlTable* node = &root;
            for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &node->tables[parts[i]];
            if (is_array) {
                auto& arr = node->table_arrays[parts.back()];
                arr.emplace_back();
                current = &arr.back();
            } else {
                current = &node->tables[parts.back()];
            }
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value': '" + s + "'", line_no);
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw ConfigError("empty key", line_no);
        if (current->values.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
        current->values[key] = parse_value(s.substr(eq + 1), line_no);
    }
    return root;
}

TomlTable parse_toml_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    try {
        return parse_toml(in);
    } catch (ConfigError& e) {
        throw ConfigError(path.string() + ":" + std::to_string(e.line) + ": " + e.what(), e.line);
    }
}

namespace {

/// Strict table consumer: loaders take the keys they know and everything
/// left over is an error naming the offending key.
class Reader {
public:
    Reader(TomlTable table, std::string path) : t_(std::move(table)), path_(std::move(path)) {}

    std::optional<TomlValue> take(const std::string& key, TomlValue::Type want) {
        auto it = t_.values.find(key);
        if (it == t_.values.end()) return std::nullopt;
        TomlValue v = it->second;
        t_.values.erase(it);
        if (v.type != want) {
            throw ConfigError(path_ + "." + key + ": unexpected value type", v.line);
        }
        return v;
    }

    double number(const std::string& key, double fallback) {
        auto v = take(key, TomlValue::Type::Number);
        return v ? v->num : fallback;
    }
    bool boolean(const std::string& key, bool fallback) {
        auto v = take(key, TomlValue::Type::Bool);
        return v ? v->boolean : fallback;
    }
    std::string str(const std::string& key, const std::string& fallback) {
        auto v = take(key, TomlValue::Type::String);
        return v ? v->str : fallback;
    }
    std::optional<std::vector<double>> array(const std::string& key, std::size_t want_size) {
        auto v = take(key, TomlValue::Type::NumberArray);
        if (!v) return std::nullopt;
        if (v->array.size() != want_size) {
            throw ConfigError(path_ + "." + key + ": expected " + std::to_string(want_size) +
                                  " elements",
                              v->line);
        }
        return v->array;
    }

    Reader sub(const std::string& key) {
        auto it = t_.tables.find(key);
        if (it == t_.tables.end()) return Reader(TomlTable{}, path_ + "." + key);
        TomlTable sub = it->second;
        t_.tables.erase(it);
        return Reader(std::move(sub), path_ + "." + key);
    }

    std::vector<TomlTable> sub_array(const std::string& key) {
        auto it = t_.table_arrays.find(key);
        if (it == t_.table_arrays.end()) return {};
        auto arr = it->second;
        t_.table_arrays.erase(it);
        return arr;
    }

    void finish() const {
        if (!t_.values.empty()) {
            const auto& [key, v] = *t_.values.begin();
            throw ConfigError("unknown key '" + path_ + "." + key + "'", v.line);
        }
        if (!t_.tables.empty()) {
            throw ConfigError("unknown table '" + path_ + "." + t_.tables.begin()->first + "'");
        }
        if (!t_.table_arrays.empty()) {
            throw ConfigError("unknown table array '" + path_ + "." +
                              t_.table_arrays.begin()->first + "'");
        }
    }

private:
    TomlTable t_;
    std::string path_;
};

Side parse_side(const std::string& s, const std::string& where) {
    if (s == "P" || s == "port") return Side::Port;
    if (s == "S" || s == "starboard") return Side::Starboard;
    throw ConfigError(where + ": side must be P/port or S/starboard");
}

}  // namespace

SimConfig load_sim_config(const std::filesystem::path& path) {
    Reader root(parse_toml_file(path), "config");
    SimConfig cfg;

    {
        Reader air = root.sub("airframe");
        cfg.wing.wingspan = air.number("wingspan", cfg.wing.wingspan);
        cfg.wing.root_chord = air.number("root_chord", cfg.wing.root_chord);
        cfg.wing.taper_ratio = air.number("taper_ratio", cfg.wing.taper_ratio);
        cfg.wing.sweep = air.number("sweep_deg", 0.0) * kDegToRad;
        cfg.wing.dihedral = air.number("dihedral_deg", 0.0) * kDegToRad;
        cfg.wing.twist = air.number("twist_deg", 0.0) * kDegToRad;
        cfg.wing.segments_per_side =
            static_cast<int>(air.number("segments_per_side", cfg.wing.segments_per_side));
        cfg.wing.airfoil_cruise = air.str("airfoil_cruise", cfg.wing.airfoil_cruise);
        cfg.wing.airfoil_hover = air.str("airfoil_hover", cfg.wing.airfoil_hover);

        {
            Reader massr = air.sub("mass");
            cfg.m_uav = massr.number("m_uav", cfg.m_uav);
            cfg.wing_areal_density = massr.number("wing_areal_density", cfg.wing_areal_density);
            cfg.inertia_fold_angle =
                massr.number("inertia_fold_angle_deg", kDefaultInertiaFoldAngle * kRadToDeg) *
                kDegToRad;
            if (auto diag = massr.array("inertia_diag", 3)) {
                Mat3 inertia = Mat3::Zero();
                inertia(0, 0) = (*diag)[0];
                inertia(1, 1) = (*diag)[1];
                inertia(2, 2) = (*diag)[2];
                if (auto prod = massr.array("inertia_products", 3)) {
                    inertia(0, 1) = inertia(1, 0) = (*prod)[0];
                    inertia(0, 2) = inertia(2, 0) = (*prod)[1];
                    inertia(1, 2) = inertia(2, 1) = (*prod)[2];
                }
                cfg.inertia = inertia;
            }
            if (auto cg = massr.array("cg_offset", 3)) {
                cfg.cg_offset = Vec3((*cg)[0], (*cg)[1], (*cg)[2]);
            }
            massr.finish();
        }

        for (TomlTable& tt : air.sub_array("thruster")) {
            Reader tr(std::move(tt), "config.airframe.thruster");
            ThrusterSpec spec;
            spec.id = tr.str("id", "");
            if (spec.id.empty()) throw ConfigError("thruster id must be set");
            spec.side = parse_side(tr.str("side", ""), "config.airframe.thruster");
            if (auto pos = tr.array("position", 3)) {
                spec.r_thrust = Vec3((*pos)[0], (*pos)[1], (*pos)[2]);
            }
            spec.max_thrust = tr.number("max_thrust", spec.max_thrust);
            tr.finish();
            cfg.thrusters.push_back(std::move(spec));
        }
        air.finish();
    }

    {
        Reader envr = root.sub("environment");
        cfg.env.rho = envr.number("rho", cfg.env.rho);
        cfg.env.gravity = envr.number("gravity", cfg.env.gravity);
        cfg.env.mu = envr.number("mu", cfg.env.mu);
        if (auto w = envr.array("wind", 3)) cfg.env.wind = Vec3((*w)[0], (*w)[1], (*w)[2]);
        {
            Reader gr = envr.sub("ground");
            cfg.env.ground.rest_height = gr.number("rest_height", cfg.env.ground.rest_height);
            cfg.env.ground.stiffness = gr.number("stiffness", cfg.env.ground.stiffness);
            cfg.env.ground.damping = gr.number("damping", cfg.env.ground.damping);
            cfg.env.ground.horizontal_damping =
                gr.number("horizontal_damping", cfg.env.ground.horizontal_damping);
            gr.finish();
        }
        envr.finish();
    }

    {
        Reader simr = root.sub("sim");
        cfg.sim.dt = simr.number("dt", cfg.sim.dt);
        cfg.sim.duration = simr.number("duration", cfg.sim.duration);
        cfg.sim.output_every = static_cast<int>(simr.number("output_every", cfg.sim.output_every));
        cfg.sim.polar_dir = simr.str("polar_dir", cfg.sim.polar_dir);
        cfg.sim.scenario = simr.str("scenario", cfg.sim.scenario);
        simr.finish();
    }

    root.finish();

    // Physical sanity before anything downstream touches the numbers.
    cfg.wing.validate();
    if (!(cfg.m_uav > 0.0)) throw ConfigError("m_uav must be positive");
    if (!(cfg.env.rho > 0.0) || !(cfg.env.gravity > 0.0) || !(cfg.env.mu > 0.0)) {
        throw ConfigError("rho, gravity and mu must be positive");
    }
    if (!(cfg.sim.dt > 0.0 && cfg.sim.dt <= 0.01)) {
        throw ConfigError("sim.dt must be in (0, 0.01]");
    }
    if (!(cfg.sim.duration > 0.0)) throw ConfigError("sim.duration must be positive");
    if (cfg.sim.output_every < 1) throw ConfigError("sim.output_every must be >= 1");
    return cfg;
}

ScenarioFileSpec load_scenario_file(const std::filesystem::path& path) {
    Reader root(parse_toml_file(path), "scenario_file");
    ScenarioFileSpec spec;
    {
        Reader sc = root.sub("scenario");
        spec.name = sc.str("name", path.stem().string());
        spec.base = sc.str("base", spec.base);
        spec.duration = sc.number("duration", spec.duration);
        if (auto gc = sc.take("ground_contact", TomlValue::Type::Bool)) {
            spec.ground_contact = gc->boolean;
        }
        if (auto alt = sc.take("initial_altitude", TomlValue::Type::Number)) {
            spec.initial_altitude = alt->num;
        }
        sc.finish();
    }
    for (TomlTable& tt : root.sub_array("schedule")) {
        Reader er(std::move(tt), "schedule");
        Schedule::Entry entry;
        entry.t_start = er.number("t", 0.0);
        entry.input.epsilon_p = er.number("eps_p_deg", 0.0) * kDegToRad;
        entry.input.epsilon_s = er.number("eps_s_deg", 0.0) * kDegToRad;
        entry.input.thrusts["port"] = er.number("thrust_p", 0.0);
        entry.input.thrusts["starboard"] = er.number("thrust_s", 0.0);
        er.finish();
        spec.entries.push_back(std::move(entry));
    }
    root.finish();
    if (spec.base != "hover" && spec.base != "cruise") {
        throw ConfigError("scenario base must be 'hover' or 'cruise'");
    }
    if (spec.entries.empty()) throw ConfigError("scenario file has no [[schedule]] entries");
    return spec;
}

Scenario make_file_scenario(const ScenarioFileSpec& spec, const Airframe& airframe,
                            const PolarSet& polars, const Environment& env) {
    Scenario s;
    s.name = spec.name;
    s.duration = spec.duration;
    s.schedule = Schedule(spec.entries);
    if (spec.base == "hover") {
        s.initial_state.p = Vec3(0.0, 0.0, spec.initial_altitude.value_or(env.ground.rest_height));
        s.initial_state.q_att = Quat(Eigen::AngleAxisd(-0.5 * kPi, Vec3::UnitY()));
        s.ground_contact_enabled = spec.ground_contact.value_or(true);
    } else {
        TrimGuess guess;
        guess.altitude = spec.initial_altitude.value_or(guess.altitude);
        s.initial_state = trim_glide(airframe, polars, env, guess).state;
        s.ground_contact_enabled = spec.ground_contact.value_or(false);
    }
    return s;
}

std::filesystem::path resolve_polar_dir(const SimConfig& cfg,
                                        const std::filesystem::path& config_path) {
    std::filesystem::path dir;
    if (!cfg.sim.polar_dir.empty()) {
        dir = cfg.sim.polar_dir;
    } else if (const char* env = std::getenv("METAMORPH_POLAR_DIR");
               env != nullptr && *env != '\0') {
        dir = env;
    } else {
        dir = "polars";
    }
    if (dir.is_relative()) {
        dir = config_path.parent_path() / dir;
    }
    return dir;
}

}  // namespace metamorph
