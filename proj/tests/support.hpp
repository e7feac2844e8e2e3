#pragma once

// Shared fixtures for the unit and acceptance suites.

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "metamorph/aero.hpp"
#include "metamorph/airframe.hpp"
#include "metamorph/polar.hpp"

namespace testsupport {

using namespace metamorph;

inline std::filesystem::path repo_dir() { return std::filesystem::path(METAMORPH_REPO_DIR); }

inline std::filesystem::path polar_dir() { return repo_dir() / "polars"; }

inline std::filesystem::path default_config() { return repo_dir() / "configs" / "metamorph.toml"; }

/// Fresh temp directory under the system temp root.
inline std::filesystem::path make_temp_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("metamorph_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

/// The paper-default airframe with the flat-plate inertia model.
inline Airframe default_airframe() { return Airframe::build(WingSpec{}, 0.450); }

/// Bundled polar tables.
inline PolarSet bundled_polars() {
    PolarSet set;
    set.cruise = load_polar_dir(polar_dir() / "E387");
    set.hover = load_polar_dir(polar_dir() / "NACA0010");
    return set;
}

/// Exactly symmetric synthetic surface: cl odd, cd even, cm odd, symmetric
/// alpha grid. Coefficients are simple closed forms so tests can verify
/// interpolation against an independent evaluation.
inline PolarSurface symmetric_surface(double re_lo = 5e4, double re_hi = 2e5) {
    auto build_curve = [](double re) {
        std::vector<PolarPoint> pts;
        for (int d = -15; d <= 15; ++d) {
            const double a_deg = static_cast<double>(d);
            PolarPoint p;
            p.alpha = a_deg * kDegToRad;
            p.cl = 0.1 * a_deg;
            p.cd = 0.01 + 1e-4 * a_deg * a_deg;
            p.cm = -0.002 * a_deg;
            pts.push_back(p);
        }
        return PolarCurve(re, std::move(pts));
    };
    return PolarSurface("SYM", {build_curve(re_lo), build_curve(re_hi)});
}

/// PolarSet whose cruise and hover members are the same symmetric surface.
inline PolarSet symmetric_polarset() {
    PolarSet set;
    set.cruise = symmetric_surface();
    set.hover = symmetric_surface();
    return set;
}

/// A small hand-written polar file in the XFLR5 export layout, with a CDp
/// column ahead of Cm.
inline std::string fixture_polar_text() {
    return "xflr5 v6.47\n"
           "\n"
           " Calculated polar for: FIXTURE\n"
           "\n"
           " xtrf =   1.000 (top)        1.000 (bottom)\n"
           " Mach =   0.000     Re =     0.100 e 6     Ncrit =   9.000\n"
           "\n"
           "  alpha     CL        CD       CDp       Cm    \n"
           "  ------- -------- --------- --------- --------\n"
           "  -2.000  -0.1500   0.01500   0.00800   0.0100\n"
           "   0.000   0.3921   0.01012   0.00600  -0.0821\n"
           "   2.000   0.6000   0.01300   0.00700  -0.0900\n"
           "   4.000   0.8000   0.01800   0.00900  -0.0950\n";
}

inline std::filesystem::path write_file(const std::filesystem::path& path,
                                        const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    return path;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace testsupport
