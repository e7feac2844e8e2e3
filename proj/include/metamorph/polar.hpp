#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "metamorph/types.hpp"

namespace metamorph {

/// Dimensionless section coefficients at one flow condition.
struct AeroCoeffs {
    double cl = 0.0;
    double cd = 0.0;
    double cm = 0.0;
};

struct PolarError : std::runtime_error {
    enum class Kind {
        MissingReynoldsHeader,
        MissingColumn,
        NonMonotonicAlpha,
        EmptyPolar,
        MalformedRow,
        EmptySurface,
        DuplicateReynolds,
        InvalidCurve,
    };

    PolarError(Kind k, const std::string& msg, int line_number = 0)
        : std::runtime_error(msg), kind(k), line(line_number) {}

    Kind kind;
    int line;  // 1-based source line where applicable, else 0
};

/// One tabulated point. Alpha is stored in radians; polar files carry
/// degrees and are converted exactly once when the curve is built.
struct PolarPoint {
    double alpha = 0.0;  // rad
    double cl = 0.0;
    double cd = 0.0;
    double cm = 0.0;
};

/// Coefficient curve for one airfoil at one Reynolds number.
/// Points are strictly increasing in alpha, cd > 0 everywhere,
/// at least 3 points. Immutable after construction.
class PolarCurve {
public:
    PolarCurve(double reynolds, std::vector<PolarPoint> points);

    double reynolds() const { return reynolds_; }
    const std::vector<PolarPoint>& points() const { return points_; }
    double alpha_min() const { return points_.front().alpha; }
    double alpha_max() const { return points_.back().alpha; }

    /// Piecewise-linear interpolation inside [alpha_min, alpha_max].
    /// Queries outside the range clamp to the nearest endpoint.
    AeroCoeffs eval_table(double alpha) const;

    /// Table lookup extended over the full [-pi, pi] range: inside the
    /// measured envelope the table value, beyond it the flat-plate model,
    /// with a linear C0 blend between the table-edge value and the
    /// flat-plate value over a 5 degree band at each edge.
    AeroCoeffs eval_extended(double alpha) const;

private:
    double reynolds_;
    std::vector<PolarPoint> points_;
};

/// Full-range flat-plate coefficients used beyond the measured envelope.
///   cl = 2 sin(a) cos(a)
///   cd = cd0 + 2 sin^2(a)
///   cm = -cn (xcp - 1/4), cn = 2 sin(a), xcp = 1/4 + 1/4 |sin(a)|
AeroCoeffs flat_plate_coeffs(double alpha, double cd0 = 0.02);

/// A family of polar curves for one airfoil, ascending in Reynolds number.
/// Lookup is linear in alpha within a curve and linear in log(Re) across
/// curves; Re outside the family range clamps to the nearest curve.
/// Immutable after construction; safe for concurrent reads.
class PolarSurface {
public:
    PolarSurface() = default;
    PolarSurface(std::string airfoil_name, std::vector<PolarCurve> curves);

    const std::string& airfoil_name() const { return airfoil_name_; }
    const std::vector<PolarCurve>& curves() const { return curves_; }
    bool empty() const { return curves_.empty(); }

    AeroCoeffs lookup(double reynolds, double alpha) const;

private:
    std::string airfoil_name_;
    std::vector<PolarCurve> curves_;
};

/// Parse one XFLR5-style text polar export. The header must contain a line
/// matching "Re = <mantissa> e <exponent>" and a column-header line whose
/// first column is "alpha"; coefficient columns are selected by name
/// (alpha, CL, CD, Cm), not by position. Rows with non-numeric or
/// non-finite values raise MalformedRow with the 1-based line number.
PolarCurve parse_polar_file(std::istream& in);
PolarCurve parse_polar_file(const std::filesystem::path& path);

/// Write a curve in the same text layout parse_polar_file accepts.
/// Coefficients are printed with enough digits to round-trip bit-exactly.
void write_polar_file(std::ostream& out, const PolarCurve& curve,
                      const std::string& airfoil_name);

/// Build one surface from every *.txt file directly under dir.
/// The surface name defaults to the directory name.
PolarSurface load_polar_dir(const std::filesystem::path& dir,
                            const std::string& airfoil_name = "");

}  // namespace metamorph
