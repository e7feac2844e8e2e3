#include <doctest.h>

#include <cmath>
#include <sstream>

#include "metamorph/polar.hpp"
#include "support.hpp"

using namespace metamorph;
using namespace testsupport;

TEST_CASE("reynolds header mantissa times ten to the exponent") {
    std::istringstream in(fixture_polar_text());
    const PolarCurve curve = parse_polar_file(in);
    CHECK(curve.reynolds() == doctest::Approx(100000.0).epsilon(1e-15));
}

TEST_CASE("rows are selected by column name, not position") {
    // The fixture has a CDp column between CD and Cm.
    std::istringstream in(fixture_polar_text());
    const PolarCurve curve = parse_polar_file(in);
    REQUIRE(curve.points().size() == 4);
    const PolarPoint& p = curve.points()[1];
    CHECK(p.alpha == 0.0);
    CHECK(p.cl == 0.3921);
    CHECK(p.cd == 0.01012);
    CHECK(p.cm == -0.0821);
}

TEST_CASE("parser sorts rows by alpha") {
    std::string text =
        " Re = 0.050 e 6\n"
        " alpha CL CD Cm\n"
        " 2.0  0.2  0.02  0.0\n"
        " 0.0  0.0  0.01  0.0\n"
        " 1.0  0.1  0.015 0.0\n";
    std::istringstream in(text);
    const PolarCurve curve = parse_polar_file(in);
    CHECK(curve.points()[0].alpha == 0.0);
    CHECK(curve.points()[2].alpha == doctest::Approx(2.0 * kDegToRad));
}

TEST_CASE("parse error taxonomy") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_polar_file(in);
    };

    SUBCASE("duplicate alpha") {
        try {
            parse(" Re = 0.1 e 6\n alpha CL CD Cm\n"
                  " 0 0.1 0.01 0\n 1 0.2 0.01 0\n 1 0.3 0.01 0\n");
            FAIL("expected PolarError");
        } catch (const PolarError& e) {
            CHECK(e.kind == PolarError::Kind::NonMonotonicAlpha);
        }
    }
    SUBCASE("missing reynolds header") {
        try {
            parse(" alpha CL CD Cm\n 0 0.1 0.01 0\n");
            FAIL("expected PolarError");
        } catch (const PolarError& e) {
            CHECK(e.kind == PolarError::Kind::MissingReynoldsHeader);
        }
    }
    SUBCASE("missing column") {
        try {
            parse(" Re = 0.1 e 6\n alpha CL CD\n 0 0.1 0.01\n");
            FAIL("expected PolarError");
        } catch (const PolarError& e) {
            CHECK(e.kind == PolarError::Kind::MissingColumn);
        }
    }
    SUBCASE("empty polar") {
        try {
            parse(" Re = 0.1 e 6\n alpha CL CD Cm\n");
            FAIL("expected PolarError");
        } catch (const PolarError& e) {
            CHECK(e.kind == PolarError::Kind::EmptyPolar);
        }
    }
    SUBCASE("malformed row carries its line number") {
        try {
            parse(" Re = 0.1 e 6\n alpha CL CD Cm\n 0 0.1 0.01 0\n 1 bogus 0.01 0\n");
            FAIL("expected PolarError");
        } catch (const PolarError& e) {
            CHECK(e.kind == PolarError::Kind::MalformedRow);
            CHECK(e.line == 4);
        }
    }
    SUBCASE("non-finite row rejected") {
        try {
            parse(" Re = 0.1 e 6\n alpha CL CD Cm\n 0 0.1 0.01 0\n 1 nan 0.01 0\n");
            FAIL("expected PolarError");
        } catch (const PolarError& e) {
            CHECK(e.kind == PolarError::Kind::MalformedRow);
        }
    }
    SUBCASE("non-positive drag rejected") {
        try {
            parse(" Re = 0.1 e 6\n alpha CL CD Cm\n 0 0.1 0.0 0\n 1 0.2 0.01 0\n 2 0.3 0.01 0\n");
            FAIL("expected PolarError");
        } catch (const PolarError& e) {
            CHECK(e.kind == PolarError::Kind::MalformedRow);
        }
    }
}

TEST_CASE("parse, serialize, parse round trip keeps coefficients bit-exact") {
    std::istringstream in(fixture_polar_text());
    const PolarCurve a = parse_polar_file(in);
    std::ostringstream out;
    write_polar_file(out, a, "FIXTURE");
    std::istringstream in2(out.str());
    const PolarCurve b = parse_polar_file(in2);

    REQUIRE(a.points().size() == b.points().size());
    CHECK(a.reynolds() == b.reynolds());
    for (std::size_t i = 0; i < a.points().size(); ++i) {
        CHECK(a.points()[i].cl == b.points()[i].cl);
        CHECK(a.points()[i].cd == b.points()[i].cd);
        CHECK(a.points()[i].cm == b.points()[i].cm);
        // Alpha goes through a radians/degrees round trip.
        CHECK(a.points()[i].alpha == doctest::Approx(b.points()[i].alpha).epsilon(1e-15));
    }
}

TEST_CASE("lookup reproduces stored values at the nodes") {
    const PolarSurface surf = symmetric_surface();
    for (const PolarCurve& curve : surf.curves()) {
        for (const PolarPoint& p : curve.points()) {
            const AeroCoeffs c = surf.lookup(curve.reynolds(), p.alpha);
            CHECK(c.cl == p.cl);
            CHECK(c.cd == p.cd);
            CHECK(c.cm == p.cm);
        }
    }
}

TEST_CASE("alpha midpoint gives the arithmetic mean of neighbors") {
    const PolarSurface surf = symmetric_surface();
    const PolarCurve& curve = surf.curves().front();
    for (std::size_t i = 0; i + 1 < curve.points().size(); ++i) {
        const PolarPoint& a = curve.points()[i];
        const PolarPoint& b = curve.points()[i + 1];
        const AeroCoeffs c = surf.lookup(curve.reynolds(), 0.5 * (a.alpha + b.alpha));
        CHECK(c.cl == doctest::Approx(0.5 * (a.cl + b.cl)).epsilon(1e-12));
        CHECK(c.cd == doctest::Approx(0.5 * (a.cd + b.cd)).epsilon(1e-12));
        CHECK(c.cm == doctest::Approx(0.5 * (a.cm + b.cm)).epsilon(1e-12));
    }
}

TEST_CASE("reynolds interpolation is linear in log(Re)") {
    // Two curves with distinct constant coefficients: the geometric-mean
    // Reynolds number must produce the arithmetic mean of the curves.
    auto flat_curve = [](double re, double cl) {
        std::vector<PolarPoint> pts;
        for (int d = -5; d <= 5; d += 5) {
            pts.push_back({d * kDegToRad, cl, 0.01, 0.0});
        }
        return PolarCurve(re, std::move(pts));
    };
    const PolarSurface surf("REINTERP", {flat_curve(1e5, 0.2), flat_curve(4e5, 0.6)});
    const double re_mid = std::sqrt(1e5 * 4e5);
    CHECK(surf.lookup(re_mid, 0.0).cl == doctest::Approx(0.4).epsilon(1e-12));
    // Clamping outside the family.
    CHECK(surf.lookup(1e4, 0.0).cl == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(surf.lookup(1e7, 0.0).cl == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("symmetric surface stays odd/even across the blended full range") {
    const PolarSurface surf = symmetric_surface();
    for (double re : {5e4, 1e5, 2e5}) {
        for (int i = 0; i <= 360; ++i) {
            const double alpha = -kPi + i * (2.0 * kPi / 360.0);
            const AeroCoeffs pos = surf.lookup(re, alpha);
            const AeroCoeffs neg = surf.lookup(re, -alpha);
            CHECK(neg.cl == doctest::Approx(-pos.cl).epsilon(1e-9).scale(1.0));
            CHECK(neg.cd == doctest::Approx(pos.cd).epsilon(1e-9).scale(1.0));
            CHECK(neg.cm == doctest::Approx(-pos.cm).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("lookup is continuous in alpha") {
    const PolarSet polars = bundled_polars();
    for (const PolarSurface* surf : {&polars.cruise, &polars.hover}) {
        for (double re : {1e4, 1e5, 1e6}) {
            for (int i = 0; i <= 2000; ++i) {
                const double alpha = -kPi + i * (2.0 * kPi / 2000.0);
                const AeroCoeffs a = surf->lookup(re, alpha - 1e-7);
                const AeroCoeffs b = surf->lookup(re, alpha + 1e-7);
                REQUIRE(std::abs(a.cl - b.cl) < 1e-4);
                REQUIRE(std::abs(a.cd - b.cd) < 1e-4);
                REQUIRE(std::abs(a.cm - b.cm) < 1e-4);
            }
        }
    }
}

TEST_CASE("flat plate reference points") {
    const AeroCoeffs zero = flat_plate_coeffs(0.0);
    CHECK(zero.cl == 0.0);
    CHECK(zero.cd == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(zero.cm == 0.0);

    const AeroCoeffs vertical = flat_plate_coeffs(0.5 * kPi);
    CHECK(vertical.cl == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(vertical.cd == doctest::Approx(2.02).epsilon(1e-12));
    CHECK(vertical.cm == doctest::Approx(-0.5).epsilon(1e-12));

    CHECK(flat_plate_coeffs(-0.25 * kPi).cl == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("flat plate parity on a one-degree grid") {
    for (int d = 0; d <= 180; ++d) {
        const double a = d * kDegToRad;
        const AeroCoeffs pos = flat_plate_coeffs(a);
        const AeroCoeffs neg = flat_plate_coeffs(-a);
        CHECK(neg.cl == doctest::Approx(-pos.cl).scale(1.0).epsilon(1e-14));
        CHECK(neg.cd == doctest::Approx(pos.cd).scale(1.0).epsilon(1e-14));
        CHECK(neg.cm == doctest::Approx(-pos.cm).scale(1.0).epsilon(1e-14));
    }
}

TEST_CASE("full range queries stay finite") {
    const PolarSet polars = bundled_polars();
    for (const PolarSurface* surf : {&polars.cruise, &polars.hover}) {
        for (double re : {1e4, 1e5, 1e6, 1e7}) {
            for (int d = -180; d <= 180; ++d) {
                const AeroCoeffs c = surf->lookup(re, d * kDegToRad);
                REQUIRE(std::isfinite(c.cl));
                REQUIRE(std::isfinite(c.cd));
                REQUIRE(std::isfinite(c.cm));
            }
        }
    }
}

TEST_CASE("directory ingest forms a surface sorted by reynolds") {
    const PolarSurface surf = load_polar_dir(polar_dir() / "E387");
    CHECK(surf.airfoil_name() == "E387");
    REQUIRE(surf.curves().size() == 4);
    for (std::size_t i = 1; i < surf.curves().size(); ++i) {
        CHECK(surf.curves()[i - 1].reynolds() < surf.curves()[i].reynolds());
    }

    SUBCASE("duplicate reynolds rejected") {
        auto dir = make_temp_dir("dup_re");
        write_file(dir / "a.txt", fixture_polar_text());
        write_file(dir / "b.txt", fixture_polar_text());
        CHECK_THROWS_AS(load_polar_dir(dir), PolarError);
    }
    SUBCASE("missing directory rejected") {
        CHECK_THROWS_AS(load_polar_dir(polar_dir() / "NOSUCH"), PolarError);
    }
}

TEST_CASE("empty surface lookup is an error") {
    PolarSurface surf;
    CHECK_THROWS_AS(surf.lookup(1e5, 0.0), PolarError);
}
