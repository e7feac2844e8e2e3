#include "metamorph/telemetry.hpp"

#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace metamorph {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_or_throw(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

void append(std::string& row, double v) {
    row += ',';
    row += format_double(v);
}

}  // namespace

VehicleCsvWriter::VehicleCsvWriter(const std::filesystem::path& path)
    : out_(open_or_throw(path)) {
    out_ << kVehicleCsvHeader << '\n';
}

void VehicleCsvWriter::write(const VehicleSample& s) {
    std::string row = format_double(s.t);
    for (int i = 0; i < 3; ++i) append(row, s.p(i));
    for (int i = 0; i < 3; ++i) append(row, s.euler(i));
    for (int i = 0; i < 3; ++i) append(row, s.v(i));
    for (int i = 0; i < 3; ++i) append(row, s.w(i));
    for (int i = 0; i < 3; ++i) append(row, s.total.force(i));
    for (int i = 0; i < 3; ++i) append(row, s.total.moment(i));
    out_ << row << '\n';
}

SegmentsCsvWriter::SegmentsCsvWriter(const std::filesystem::path& path)
    : out_(open_or_throw(path)) {
    out_ << kSegmentsCsvHeader << '\n';
}

void SegmentsCsvWriter::write(const SegmentSample& s) {
    std::string row = format_double(s.t);
    row += ',';
    row += to_string(s.side);
    row += ',';
    row += std::to_string(s.index);
    append(row, s.alpha_kin);
    append(row, s.alpha_eff);
    append(row, s.reynolds);
    for (int i = 0; i < 3; ++i) append(row, s.load.force(i));
    for (int i = 0; i < 3; ++i) append(row, s.load.moment(i));
    out_ << row << '\n';
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

void write_run_manifest(const std::filesystem::path& path, const RunManifest& m) {
    nlohmann::json j;
    j["version"] = m.version;
    j["scenario"] = m.scenario;
    j["config"] = m.config_path;
    j["config_hash"] = m.config_hash;
    j["polar_hashes"] = m.polar_hashes;
    j["dt"] = m.dt;
    j["duration"] = m.duration;
    j["segments_per_side"] = m.segments_per_side;
    j["samples"] = m.samples;
    j["wall_time_s"] = m.wall_time_s;
    auto out = open_or_throw(path);
    out << j.dump(2) << '\n';
}

namespace {

/// Blue-to-red gradient, root to tip.
std::string series_color(int index, int per_side) {
    const double f = per_side > 1 ? double(index - 1) / double(per_side - 1) : 0.0;
    const int r = static_cast<int>(40 + 200 * f);
    const int g = 60;
    const int b = static_cast<int>(240 - 200 * f);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

void write_vehicle_plot_script(const std::filesystem::path& out_dir) {
    auto out = open_or_throw(out_dir / "vehicle.gp");
    out << "# body rates, attitude and position from vehicle.csv\n";
    out << "set datafile separator \",\"\n";
    out << "set terminal pngcairo size 1200,1000\n";
    out << "set output \"vehicle.png\"\n";
    out << "set multiplot layout 3,1\n";
    out << "set key outside right\n";
    out << "set xlabel \"t [s]\"\n";
    out << "set ylabel \"rate [rad/s]\"\n";
    out << "plot \"vehicle.csv\" using 1:11 with lines title \"wx\", \\\n"
           "     \"vehicle.csv\" using 1:12 with lines title \"wy\", \\\n"
           "     \"vehicle.csv\" using 1:13 with lines title \"wz\"\n";
    out << "set ylabel \"attitude [rad]\"\n";
    out << "plot \"vehicle.csv\" using 1:5 with lines title \"phi\", \\\n"
           "     \"vehicle.csv\" using 1:6 with lines title \"theta\", \\\n"
           "     \"vehicle.csv\" using 1:7 with lines title \"psi\"\n";
    out << "set ylabel \"position [m]\"\n";
    out << "plot \"vehicle.csv\" using 1:2 with lines title \"px\", \\\n"
           "     \"vehicle.csv\" using 1:3 with lines title \"py\", \\\n"
           "     \"vehicle.csv\" using 1:4 with lines title \"pz\"\n";
    out << "unset multiplot\n";
}

void write_segments_plot_script(const std::filesystem::path& out_dir, int segments_per_side) {
    auto out = open_or_throw(out_dir / "segments.gp");
    out << "# per-segment Fx, Fz and effective alpha from segments.csv\n";
    out << "set datafile separator \",\"\n";
    out << "set terminal pngcairo size 1200,1000\n";
    out << "set output \"segments.png\"\n";
    out << "set multiplot layout 3,1\n";
    out << "set key outside right\n";
    out << "set xlabel \"t [s]\"\n";

    struct Panel {
        const char* ylabel;
        int column;
    };
    const Panel panels[] = {{"Fx [N]", 7}, {"Fz [N]", 9}, {"alpha_eff [rad]", 5}};
    for (const Panel& panel : panels) {
        out << "set ylabel \"" << panel.ylabel << "\"\n";
        out << "plot ";
        bool first = true;
        for (const char* side : {"P", "S"}) {
            for (int i = 1; i <= segments_per_side; ++i) {
                if (!first) out << ", \\\n     ";
                first = false;
                out << "\"segments.csv\" using (strcol(2) eq \"" << side << "\" && $3 == " << i
                    << " ? $1 : 1/0):" << panel.column << " with lines lc rgb \""
                    << series_color(i, segments_per_side) << "\" "
                    << (side[0] == 'S' ? "dt 2 " : "") << "title \"" << side << i << "\"";
            }
        }
        out << "\n";
    }
    out << "unset multiplot\n";
}

}  // namespace metamorph
