#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <string_view>

#include "metamorph/scenario.hpp"

namespace metamorph {

inline constexpr std::string_view kVehicleCsvHeader =
    "t,px,py,pz,phi,theta,psi,vx,vy,vz,wx,wy,wz,Fx,Fy,Fz,Mx,My,Mz";
inline constexpr std::string_view kSegmentsCsvHeader =
    "t,side,index,alpha_kin,alpha_eff,reynolds,Fx,Fy,Fz,Mx,My,Mz";

/// Shortest-round-trip decimal form of a double; stable across runs.
std::string format_double(double v);

class VehicleCsvWriter {
public:
    explicit VehicleCsvWriter(const std::filesystem::path& path);
    void write(const VehicleSample& s);

private:
    std::ofstream out_;
};

class SegmentsCsvWriter {
public:
    explicit SegmentsCsvWriter(const std::filesystem::path& path);
    void write(const SegmentSample& s);

private:
    std::ofstream out_;
};

/// FNV-1a 64-bit over a byte string; the manifest hash primitive.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_file(const std::filesystem::path& path);

struct RunManifest {
    std::string version;
    std::string scenario;
    std::string config_path;
    std::string config_hash;
    std::map<std::string, std::string> polar_hashes;  // file -> hash
    double dt = 0.0;
    double duration = 0.0;
    int segments_per_side = 0;
    long samples = 0;
    double wall_time_s = 0.0;
};

void write_run_manifest(const std::filesystem::path& path, const RunManifest& m);

/// Gnuplot scripts reproducing the usual vehicle-level and per-segment
/// figure layout from a run's CSV pair. Series are colored root to tip.
void write_vehicle_plot_script(const std::filesystem::path& out_dir);
void write_segments_plot_script(const std::filesystem::path& out_dir, int segments_per_side);

}  // namespace metamorph
