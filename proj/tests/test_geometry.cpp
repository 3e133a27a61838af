#include <catch2/catch_amalgamated.hpp>

#include "spectral_bounds/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace spb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

geom::Polygon unit_square() {
    return geom::Polygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
}

geom::Polygon l_shape() {
    return geom::Polygon{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}};
}

/// Star-shaped simple polygon with jittered radii (always simple).
geom::Polygon random_simple_polygon(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(0.6, 1.4);
    std::uniform_int_distribution<int> nv(5, 12);
    const int n = nv(rng);
    geom::Polygon p;
    for (int i = 0; i < n; ++i) {
        const double ang = 2 * kPi * i / n;
        const double r = radius(rng);
        p.vertices.emplace_back(r * std::cos(ang), r * std::sin(ang));
    }
    return p;
}

}  // namespace

TEST_CASE("summary closed forms for the built-in domains", "[geometry]") {
    SECTION("unit square box") {
        const auto g = geom::summarize(geom::Box{2, {1, 1}});
        CHECK(g.volume == 1.0);
        CHECK(g.boundary_measure == 4.0);
        CHECK(g.inradius == 0.5);
        CHECK(g.max_tube_radius == 0.5);
        REQUIRE(g.has_angle_sums);
        CHECK_THAT(g.angle_sum_convex, WithinAbs(4.0, 1e-12));
        CHECK(g.angle_sum_reflex == 0.0);
        CHECK(g.tags.convex);
        CHECK(g.tags.polygon);
    }
    SECTION("disk") {
        const auto g = geom::summarize(geom::Disk{1.0});
        CHECK_THAT(g.volume, WithinRel(kPi, 1e-15));
        CHECK_THAT(g.boundary_measure, WithinRel(2 * kPi, 1e-15));
        CHECK(g.inradius == 1.0);
        CHECK(g.max_tube_radius == 1.0);
        CHECK(g.boundary_components == 1);
        REQUIRE(g.curvature_integrals.size() == 1);
        // total curvature = 2 pi (2 - b)
        CHECK_THAT(g.curvature_integrals[0], WithinRel(2 * kPi * (2 - 1), 1e-15));
    }
    SECTION("annulus") {
        const auto g = geom::summarize(geom::Annulus{1.0, 2.0});
        CHECK_THAT(g.volume, WithinRel(3 * kPi, 1e-15));
        CHECK_THAT(g.boundary_measure, WithinRel(6 * kPi, 1e-15));
        CHECK(g.boundary_components == 2);
        CHECK_THAT(g.curvature_integrals[0], WithinAbs(0.0, 1e-15));
        CHECK(g.max_tube_radius == 0.5);
        CHECK_FALSE(g.tags.convex);
        CHECK_FALSE(g.tags.mean_convex);
        CHECK(g.tags.c2);
    }
    SECTION("square as polygon matches the box") {
        const auto g = geom::summarize(geom::Domain{unit_square()});
        CHECK_THAT(g.volume, WithinAbs(1.0, 1e-14));
        CHECK_THAT(g.boundary_measure, WithinAbs(4.0, 1e-14));
        CHECK_THAT(g.inradius, WithinAbs(0.5, 1e-9));
        CHECK_THAT(g.max_tube_radius, WithinAbs(0.5, 1e-9));
        CHECK_THAT(g.angle_sum_convex, WithinAbs(4.0, 1e-12));
    }
    SECTION("L-shape") {
        const auto g = geom::summarize(geom::Domain{l_shape()});
        CHECK_THAT(g.volume, WithinAbs(3.0, 1e-14));
        CHECK_THAT(g.boundary_measure, WithinAbs(8.0, 1e-14));
        CHECK_THAT(g.inradius, WithinAbs(0.5, 1e-9));
        CHECK_THAT(g.angle_sum_convex, WithinAbs(5.0, 1e-12));
        CHECK_THAT(g.angle_sum_reflex, WithinAbs(kPi / 4, 1e-12));
        CHECK_FALSE(g.tags.convex);
    }
    SECTION("3-4-5 right triangle: bisector radius equals the inradius") {
        const geom::Polygon tri{{{0, 0}, {4, 0}, {0, 3}}};
        const auto g = geom::summarize(geom::Domain{tri});
        CHECK_THAT(g.volume, WithinAbs(6.0, 1e-14));
        CHECK_THAT(g.boundary_measure, WithinAbs(12.0, 1e-14));
        CHECK_THAT(g.inradius, WithinAbs(1.0, 1e-9));
        CHECK_THAT(g.max_tube_radius, WithinAbs(1.0, 1e-9));
    }
    SECTION("ellipse by quadrature") {
        const auto g = geom::summarize(geom::Domain{geom::make_ellipse(2.0, 1.0)});
        CHECK_THAT(g.volume, WithinRel(2 * kPi, 1e-10));
        CHECK_THAT(g.boundary_measure, WithinRel(9.68844822054767620, 1e-10));
        CHECK_THAT(g.curvature_integrals[0], WithinRel(2 * kPi, 1e-10));
        CHECK_THAT(g.inradius, WithinAbs(1.0, 1e-6));
        CHECK_THAT(g.max_tube_radius, WithinAbs(0.5, 1e-6));  // 1/max curvature
        CHECK(g.tags.convex);
        CHECK(g.tags.c2);
    }
}

TEST_CASE("domain validation", "[geometry]") {
    CHECK_THROWS_AS(geom::validate(geom::Domain{geom::Disk{-1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(geom::validate(geom::Domain{geom::Annulus{2.0, 1.0}}), std::invalid_argument);
    // bowtie: self-intersecting
    geom::Polygon bowtie{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}};
    CHECK_THROWS_AS(geom::validate(geom::Domain{bowtie}), std::invalid_argument);
    // clockwise orientation
    geom::Polygon cw{{{0, 0}, {0, 1}, {1, 1}, {1, 0}}};
    CHECK_THROWS_AS(geom::validate(geom::Domain{cw}), std::invalid_argument);
    geom::Box bad{2, {1.0, -1.0}};
    CHECK_THROWS_AS(geom::validate(geom::Domain{bad}), std::invalid_argument);
}

TEST_CASE("tube volume closed forms", "[geometry]") {
    const geom::Domain square{geom::Box{2, {1, 1}}};
    // direct geometry oracle: 1 - (1-2h)^2
    CHECK_THAT(geom::tube_volume(square, 0.1).value, WithinAbs(1.0 - 0.8 * 0.8, 1e-15));
    CHECK_THAT(geom::tube_volume(square, 0.1).value, WithinAbs(0.36, 1e-15));
    CHECK(geom::tube_volume(square, 0.5).value == 1.0);
    CHECK(geom::tube_volume(square, 0.75).value == 1.0);

    const geom::Domain disk{geom::Disk{1.0}};
    // pi - pi (1-h)^2 oracle
    CHECK_THAT(geom::tube_volume(disk, 0.25).value, WithinAbs(kPi - kPi * 0.75 * 0.75, 1e-15));
    CHECK_THAT(geom::tube_volume(disk, 0.25).value,
               WithinAbs(2 * kPi * 0.25 - kPi * 0.0625, 1e-15));

    const geom::Domain square_poly{unit_square()};
    CHECK_THAT(geom::tube_volume(square_poly, 0.1).value, WithinAbs(0.36, 1e-9));

    const geom::Domain box3{geom::Box{3, {1, 1, 1}}};
    CHECK_THAT(geom::tube_volume(box3, 0.1).value, WithinAbs(1.0 - std::pow(0.8, 3), 1e-15));
}

TEST_CASE("planar C2 tube identity", "[geometry]") {
    // |omega_h| - h|dOmega| + pi(2-b) h^2 = 0 below the tubular radius.
    const geom::Domain disk{geom::Disk{1.0}};
    const geom::Domain annulus{geom::Annulus{1.0, 2.0}};
    const geom::Domain ellipse{geom::make_ellipse(2.0, 1.0, 4096)};
    for (double h : {0.05, 0.1, 0.2, 0.4}) {
        {
            const auto g = geom::summarize(disk);
            const double lhs = geom::tube_volume(disk, h).value - h * g.boundary_measure +
                               kPi * (2 - g.boundary_components) * h * h;
            CHECK_THAT(lhs, WithinAbs(0.0, 1e-14));
        }
        if (h < 0.5) {
            const auto g = geom::summarize(annulus);
            const double lhs = geom::tube_volume(annulus, h).value - h * g.boundary_measure +
                               kPi * (2 - g.boundary_components) * h * h;
            CHECK_THAT(lhs, WithinAbs(0.0, 1e-13));
        }
        if (h < 0.45) {
            const auto g = geom::summarize(ellipse);
            const double lhs = geom::tube_volume(ellipse, h).value - h * g.boundary_measure +
                               kPi * (2 - g.boundary_components) * h * h;
            CHECK_THAT(lhs, WithinAbs(0.0, 1e-8));
        }
    }
}

TEST_CASE("tube volume is monotone and bounded by the volume", "[geometry][property]") {
    const std::vector<geom::Domain> domains = {
        geom::Box{2, {1, 2}}, geom::Disk{1.5}, geom::Annulus{0.5, 2.0},
        geom::Domain{l_shape()}, geom::Domain{geom::make_ellipse(1.5, 0.7)}};
    for (const auto& dom : domains) {
        const auto g = geom::summarize(dom);
        double prev = 0;
        for (int i = 1; i <= 14; ++i) {
            const double h = g.inradius * 1.25 * i / 14.0;
            const auto est = geom::tube_volume(dom, h, 42);
            CHECK(est.value >= prev - 3 * est.std_error - 1e-12);
            CHECK(est.value <= g.volume + 3 * est.std_error + 1e-12);
            prev = est.value;
        }
        CHECK(geom::tube_volume(dom, g.inradius * 1.0001).value == g.volume);
    }
}

TEST_CASE("convex polygon tube bound h*perimeter", "[geometry][property]") {
    const geom::Polygon hexagon{{{1, 0}, {0.5, 0.9}, {-0.5, 0.9}, {-1, 0}, {-0.5, -0.9},
                                 {0.5, -0.9}}};
    const auto g = geom::summarize(geom::Domain{hexagon});
    for (double f : {0.15, 0.4, 0.7, 0.95}) {
        const double h = f * g.inradius;
        CHECK(geom::tube_volume(geom::Domain{hexagon}, h).value <=
              h * g.boundary_measure + 1e-10);
    }
}

TEST_CASE("polygon closed form is exact below the bisector radius", "[geometry][mc]") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto poly = random_simple_polygon(seed);
        const geom::Domain dom{poly};
        const auto g = geom::summarize(dom);
        if (g.tube_radius_fallback) continue;
        const double h = 0.5 * g.max_tube_radius;
        const double closed = h * g.boundary_measure - h * h * g.angle_sum_convex +
                              h * h * g.angle_sum_reflex;
        const auto est = geom::tube_volume(dom, h);
        REQUIRE(est.exact);
        CHECK_THAT(est.value, WithinAbs(closed, 1e-12));
    }
}

TEST_CASE("tube Monte-Carlo fallback is deterministic", "[geometry][mc]") {
    const geom::Domain dom{l_shape()};
    const auto g = geom::summarize(dom);
    // between the bisector radius and the inradius the numeric path is used
    const double h = 0.5 * (g.max_tube_radius + g.inradius);
    if (g.max_tube_radius < g.inradius * 0.999) {
        const auto a = geom::tube_volume(dom, h, 7);
        const auto b = geom::tube_volume(dom, h, 7);
        CHECK(a.value == b.value);
        CHECK_FALSE(a.exact);
        CHECK(a.std_error > 0);
    }
}

TEST_CASE("summaries are scale covariant", "[geometry][property]") {
    const double t = 2.75;
    {
        const auto g1 = geom::summarize(geom::Box{2, {1, 2}});
        const auto gt = geom::summarize(geom::Box{2, {t, 2 * t}});
        CHECK_THAT(gt.volume, WithinRel(g1.volume * t * t, 1e-13));
        CHECK_THAT(gt.boundary_measure, WithinRel(g1.boundary_measure * t, 1e-13));
        CHECK_THAT(gt.inradius, WithinRel(g1.inradius * t, 1e-13));
    }
    {
        const auto g1 = geom::summarize(geom::Disk{1.0});
        const auto gt = geom::summarize(geom::Disk{t});
        CHECK_THAT(gt.volume, WithinRel(g1.volume * t * t, 1e-13));
        CHECK_THAT(gt.boundary_measure, WithinRel(g1.boundary_measure * t, 1e-13));
        CHECK_THAT(gt.max_tube_radius, WithinRel(g1.max_tube_radius * t, 1e-13));
    }
    {
        auto poly = l_shape();
        auto scaled = poly;
        for (auto& v : scaled.vertices) v *= t;
        const auto g1 = geom::summarize(geom::Domain{poly});
        const auto gt = geom::summarize(geom::Domain{scaled});
        CHECK_THAT(gt.volume, WithinRel(g1.volume * t * t, 1e-12));
        CHECK_THAT(gt.boundary_measure, WithinRel(g1.boundary_measure * t, 1e-12));
        CHECK_THAT(gt.inradius, WithinRel(g1.inradius * t, 1e-7));
    }
}

TEST_CASE("convex inradius lower bound V/B", "[geometry][property]") {
    for (const auto& dom : {geom::Domain{geom::Box{2, {1, 3}}}, geom::Domain{geom::Disk{2.0}},
                            geom::Domain{unit_square()}}) {
        const auto g = geom::summarize(dom);
        REQUIRE(g.tags.convex);
        CHECK(g.inradius >= g.volume / g.boundary_measure - 1e-9);
    }
}

TEST_CASE("direction width", "[geometry]") {
    CHECK_THAT(geom::direction_width(geom::Box{2, {1, 1}}, {1, 0}), WithinAbs(1.0, 1e-15));
    CHECK_THAT(geom::direction_width(geom::Disk{1.0}, {0.6, 0.8}), WithinAbs(2.0, 1e-15));
    const geom::Polygon tri{{{0, 0}, {2, 0}, {0, 1}}};
    CHECK_THAT(geom::direction_width(geom::Domain{tri}, {0, 1}), WithinAbs(1.0, 1e-15));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK_THAT(geom::direction_width(geom::Box{2, {1, 1}}, {s, s}),
               WithinAbs(std::sqrt(2.0), 1e-12));
    CHECK_THROWS_AS(geom::direction_width(geom::Disk{1.0}, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("Minkowski content fit", "[geometry]") {
    const std::vector<double> grid{0.1, 0.05, 0.025};
    {
        const auto fit = geom::minkowski_content_fit(geom::Box{2, {1, 1}}, grid);
        CHECK_THAT(fit.slope, WithinAbs(4.0, 1e-10));  // quadratic model is exact
        CHECK_THAT(fit.curvature_coeff, WithinAbs(-4.0, 1e-8));
        CHECK(fit.max_residual < 1e-12);
    }
    {
        const auto fit = geom::minkowski_content_fit(geom::Disk{1.0}, grid);
        CHECK_THAT(fit.slope, WithinAbs(2 * kPi, 1e-10));
        CHECK_THAT(fit.curvature_coeff, WithinAbs(-kPi, 1e-8));
    }
    CHECK_THROWS_AS(geom::minkowski_content_fit(geom::Disk{1.0}, {0.1}), std::invalid_argument);
    CHECK_THROWS_AS(geom::minkowski_content_fit(geom::Disk{1.0}, {0.05, 0.1}),
                    std::invalid_argument);
}

TEST_CASE("Neumann z0 threshold", "[geometry]") {
    CHECK_THAT(geom::neumann_z0_threshold(geom::Disk{1.0}), WithinAbs(1.0, 1e-12));
    // kappa = 1/2, hbar = 2, max at h = 1: (1/2)/(1/2) = 1 -> 4/9
    CHECK_THAT(geom::neumann_z0_threshold(geom::Disk{2.0}), WithinAbs(4.0 / 9.0, 1e-12));
    // inner boundary dominates: hbar^{-2} = 4
    CHECK_THAT(geom::neumann_z0_threshold(geom::Annulus{1.0, 2.0}), WithinAbs(4.0, 1e-12));
    // brute-force sampling oracle for the annulus curvature ratio
    double oracle = 0;
    const double hbar = 0.5;
    for (int i = 0; i <= 20000; ++i) {
        const double h = 0.5 * hbar * i / 20000.0;
        for (double kappa : {0.5, -1.0})
            oracle = std::max(oracle, std::abs(h * kappa / (1 - h * kappa)));
    }
    CHECK_THAT(geom::curvature_ratio_max(geom::Annulus{1.0, 2.0}), WithinAbs(oracle, 1e-6));
    CHECK_THROWS_AS(geom::neumann_z0_threshold(geom::Domain{unit_square()}),
                    std::invalid_argument);
}
