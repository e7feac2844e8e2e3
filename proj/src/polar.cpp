#include "metamorph/polar.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

namespace metamorph {

namespace {

// Width of the C0 blend band between the table edge and the flat-plate
// model.
constexpr double kBlendBand = 5.0 * kDegToRad;

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

bool is_separator(const std::string& line) {
    bool any = false;
    for (unsigned char c : line) {
        if (c == '-') any = true;
        else if (!std::isspace(c)) return false;
    }
    return any;
}

bool parse_double(const std::string& tok, double& out) {
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end;
}

AeroCoeffs lerp(const AeroCoeffs& a, const AeroCoeffs& b, double t) {
    return {a.cl + t * (b.cl - a.cl),
            a.cd + t * (b.cd - a.cd),
            a.cm + t * (b.cm - a.cm)};
}

}  // namespace

PolarCurve::PolarCurve(double reynolds, std::vector<PolarPoint> points)
    : reynolds_(reynolds), points_(std::move(points)) {
    if (!(reynolds_ > 0.0)) {
        throw PolarError(PolarError::Kind::InvalidCurve, "Reynolds number must be positive");
    }
    if (points_.size() < 3) {
        throw PolarError(PolarError::Kind::EmptyPolar,
                         "polar needs at least 3 points, got " + std::to_string(points_.size()));
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const PolarPoint& p = points_[i];
        if (!std::isfinite(p.alpha) || !std::isfinite(p.cl) || !std::isfinite(p.cd) ||
            !std::isfinite(p.cm)) {
            throw PolarError(PolarError::Kind::InvalidCurve, "non-finite polar point");
        }
        if (!(p.cd > 0.0)) {
            throw PolarError(PolarError::Kind::InvalidCurve, "cd must be positive at every point");
        }
        if (i > 0 && !(points_[i - 1].alpha < p.alpha)) {
            throw PolarError(PolarError::Kind::NonMonotonicAlpha,
                             "alpha values must be strictly increasing");
        }
    }
}

AeroCoeffs PolarCurve::eval_table(double alpha) const {
    if (alpha <= points_.front().alpha) {
        const PolarPoint& p = points_.front();
        return {p.cl, p.cd, p.cm};
    }
    if (alpha >= points_.back().alpha) {
        const PolarPoint& p = points_.back();
        return {p.cl, p.cd, p.cm};
    }
    auto hi = std::upper_bound(points_.begin(), points_.end(), alpha,
                               [](double a, const PolarPoint& p) { return a < p.alpha; });
    const PolarPoint& b = *hi;
    const PolarPoint& a = *(hi - 1);
    const double t = (alpha - a.alpha) / (b.alpha - a.alpha);
    return lerp({a.cl, a.cd, a.cm}, {b.cl, b.cd, b.cm}, t);
}

AeroCoeffs PolarCurve::eval_extended(double alpha) const {
    const double lo = alpha_min();
    const double hi = alpha_max();
    if (alpha >= lo && alpha <= hi) return eval_table(alpha);
    if (alpha > hi) {
        const AeroCoeffs fp = flat_plate_coeffs(alpha);
        if (alpha >= hi + kBlendBand) return fp;
        const double w = (alpha - hi) / kBlendBand;
        return lerp(eval_table(hi), fp, w);
    }
    const AeroCoeffs fp = flat_plate_coeffs(alpha);
    if (alpha <= lo - kBlendBand) return fp;
    const double w = (lo - alpha) / kBlendBand;
    return lerp(eval_table(lo), fp, w);
}

AeroCoeffs flat_plate_coeffs(double alpha, double cd0) {
    const double s = std::sin(alpha);
    const double c = std::cos(alpha);
    const double cn = 2.0 * s;
    const double xcp = 0.25 + 0.25 * std::abs(s);
    AeroCoeffs out;
    out.cl = 2.0 * s * c;
    out.cd = cd0 + 2.0 * s * s;
    out.cm = -cn * (xcp - 0.25);
    return out;
}

PolarSurface::PolarSurface(std::string airfoil_name, std::vector<PolarCurve> curves)
    : airfoil_name_(std::move(airfoil_name)), curves_(std::move(curves)) {
    std::sort(curves_.begin(), curves_.end(),
              [](const PolarCurve& a, const PolarCurve& b) { return a.reynolds() < b.reynolds(); });
    for (std::size_t i = 1; i < curves_.size(); ++i) {
        if (curves_[i - 1].reynolds() == curves_[i].reynolds()) {
            throw PolarError(PolarError::Kind::DuplicateReynolds,
                             airfoil_name_ + ": duplicate Reynolds number " +
                                 std::to_string(curves_[i].reynolds()));
        }
    }
}

AeroCoeffs PolarSurface::lookup(double reynolds, double alpha) const {
    if (curves_.empty()) {
        throw PolarError(PolarError::Kind::EmptySurface,
                         "lookup on empty polar surface '" + airfoil_name_ + "'");
    }
    if (curves_.size() == 1) return curves_.front().eval_extended(alpha);

    // Clamp instead of extrapolating outside the tabulated Re family.
    if (reynolds <= curves_.front().reynolds()) return curves_.front().eval_extended(alpha);
    if (reynolds >= curves_.back().reynolds()) return curves_.back().eval_extended(alpha);

    auto hi = std::upper_bound(curves_.begin(), curves_.end(), reynolds,
                               [](double re, const PolarCurve& c) { return re < c.reynolds(); });
    const PolarCurve& b = *hi;
    const PolarCurve& a = *(hi - 1);
    const double w =
        (std::log(reynolds) - std::log(a.reynolds())) / (std::log(b.reynolds()) - std::log(a.reynolds()));
    return lerp(a.eval_extended(alpha), b.eval_extended(alpha), w);
}

PolarCurve parse_polar_file(std::istream& in) {
    static const std::regex re_line(R"(Re\s*=\s*([+-]?[0-9]*\.?[0-9]+)\s*e\s*([+-]?[0-9]+))");

    std::string line;
    int line_no = 0;

    bool have_re = false;
    double reynolds = 0.0;

    std::vector<std::string> header;
    int header_line = 0;

    // Header section: find the Reynolds line and the column-name line.
    while (std::getline(in, line)) {
        ++line_no;
        std::smatch m;
        if (!have_re && std::regex_search(line, m, re_line)) {
            const double mantissa = std::stod(m[1].str());
            const double exponent = std::stod(m[2].str());
            reynolds = mantissa * std::pow(10.0, exponent);
            have_re = true;
            continue;
        }
        auto toks = tokenize(line);
        if (!toks.empty() && lower(toks.front()) == "alpha") {
            header = std::move(toks);
            header_line = line_no;
            break;
        }
    }
    if (!have_re) {
        throw PolarError(PolarError::Kind::MissingReynoldsHeader,
                         "no 'Re = <mantissa> e <exponent>' header line found");
    }
    if (header.empty()) {
        throw PolarError(PolarError::Kind::MissingColumn, "missing column header line (alpha ...)",
                         line_no);
    }

    auto column = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (lower(header[i]) == lower(name)) return i;
        }
        throw PolarError(PolarError::Kind::MissingColumn, "missing column '" + name + "'",
                         header_line);
    };
    const std::size_t c_alpha = column("alpha");
    const std::size_t c_cl = column("CL");
    const std::size_t c_cd = column("CD");
    const std::size_t c_cm = column("Cm");
    const std::size_t need = std::max({c_alpha, c_cl, c_cd, c_cm}) + 1;

    std::vector<PolarPoint> pts_deg;
    bool first_data = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        if (first_data && is_separator(line)) {
            first_data = false;
            continue;
        }
        first_data = false;
        auto toks = tokenize(line);
        if (toks.size() < need) {
            throw PolarError(PolarError::Kind::MalformedRow,
                             "row has " + std::to_string(toks.size()) + " columns, need " +
                                 std::to_string(need),
                             line_no);
        }
        PolarPoint p;
        if (!parse_double(toks[c_alpha], p.alpha) || !parse_double(toks[c_cl], p.cl) ||
            !parse_double(toks[c_cd], p.cd) || !parse_double(toks[c_cm], p.cm)) {
            throw PolarError(PolarError::Kind::MalformedRow, "non-numeric value in data row",
                             line_no);
        }
        if (!std::isfinite(p.alpha) || !std::isfinite(p.cl) || !std::isfinite(p.cd) ||
            !std::isfinite(p.cm)) {
            throw PolarError(PolarError::Kind::MalformedRow, "non-finite value in data row",
                             line_no);
        }
        if (!(p.cd > 0.0)) {
            throw PolarError(PolarError::Kind::MalformedRow, "cd must be positive", line_no);
        }
        pts_deg.push_back(p);
    }
    if (pts_deg.empty()) {
        throw PolarError(PolarError::Kind::EmptyPolar, "no data rows");
    }

    std::sort(pts_deg.begin(), pts_deg.end(),
              [](const PolarPoint& a, const PolarPoint& b) { return a.alpha < b.alpha; });
    for (std::size_t i = 1; i < pts_deg.size(); ++i) {
        if (pts_deg[i - 1].alpha == pts_deg[i].alpha) {
            throw PolarError(PolarError::Kind::NonMonotonicAlpha,
                             "duplicate alpha value " + std::to_string(pts_deg[i].alpha));
        }
    }

    // Degrees-to-radians happens here, exactly once.
    for (PolarPoint& p : pts_deg) p.alpha *= kDegToRad;
    return PolarCurve(reynolds, std::move(pts_deg));
}

PolarCurve parse_polar_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw PolarError(PolarError::Kind::EmptyPolar, "cannot open polar file " + path.string());
    }
    try {
        return parse_polar_file(in);
    } catch (PolarError& e) {
        throw PolarError(e.kind, path.filename().string() + ": " + e.what(), e.line);
    }
}

void write_polar_file(std::ostream& out, const PolarCurve& curve,
                      const std::string& airfoil_name) {
    char buf[512];
    out << "metamorph polar export\n\n";
    out << " Calculated polar for: " << airfoil_name << "\n\n";
    // Exponent zero keeps mantissa * 10^e an exact round trip.
    std::snprintf(buf, sizeof(buf), " Mach =   0.000     Re = %.17g e 0     Ncrit =   9.000\n\n",
                  curve.reynolds());
    out << buf;
    out << "  alpha  CL  CD  Cm\n";
    out << "  -----  --  --  --\n";
    for (const PolarPoint& p : curve.points()) {
        std::snprintf(buf, sizeof(buf), "  %.17g  %.17g  %.17g  %.17g\n", p.alpha * kRadToDeg,
                      p.cl, p.cd, p.cm);
        out << buf;
    }
}

PolarSurface load_polar_dir(const std::filesystem::path& dir, const std::string& airfoil_name) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw PolarError(PolarError::Kind::EmptySurface,
                         "polar directory not found: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<PolarCurve> curves;
    curves.reserve(files.size());
    for (const auto& f : files) curves.push_back(parse_polar_file(f));
    if (curves.empty()) {
        throw PolarError(PolarError::Kind::EmptySurface,
                         "no *.txt polar files in " + dir.string());
    }
    const std::string name = airfoil_name.empty() ? dir.filename().string() : airfoil_name;
    return PolarSurface(name, std::move(curves));
}

}  // namespace metamorph
