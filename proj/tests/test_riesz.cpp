#include <catch2/catch_amalgamated.hpp>

#include "spectral_bounds/riesz.hpp"

#include <cmath>
#include <numbers>

using namespace spb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

spectra::Spectrum square_dirichlet(int count) {
    return spectra::analytic_spectrum(geom::Box{2, {1, 1}}, spectra::Bc::dirichlet, count);
}

}  // namespace

TEST_CASE("counting and averages", "[riesz]") {
    const auto s = square_dirichlet(50);
    // only 2 pi^2 <= 30
    CHECK(riesz::evaluate(s, riesz::Counting{30.0}).value == 1.0);
    CHECK(riesz::evaluate(s, riesz::Counting{5 * kPi * kPi + 1e-9}).value == 3.0);
    CHECK_THAT(riesz::evaluate(s, riesz::Average{3}).value,
               WithinRel(12 * kPi * kPi / 3.0, 1e-14));
    CHECK_THROWS_AS(riesz::evaluate(s, riesz::Average{51}), std::invalid_argument);
    CHECK_THROWS_AS(riesz::evaluate(s, riesz::Counting{1e9}), std::invalid_argument);
}

TEST_CASE("Riesz means", "[riesz]") {
    const auto s = square_dirichlet(50);
    CHECK(riesz::evaluate(s, riesz::RieszMean{0.0, 1.0}).value == 0.0);
    const double z = 60.0;
    double oracle = 0;  // direct sum
    for (double v : s.values)
        if (v < z) oracle += z - v;
    CHECK_THAT(riesz::evaluate(s, riesz::RieszMean{z, 1.0}).value, WithinRel(oracle, 1e-14));
    // sigma = 2
    double oracle2 = 0;
    for (double v : s.values)
        if (v < z) oracle2 += (z - v) * (z - v);
    CHECK_THAT(riesz::evaluate(s, riesz::RieszMean{z, 2.0}).value, WithinRel(oracle2, 1e-14));
    // incomplete spectrum for large z
    CHECK_THROWS_AS(riesz::evaluate(s, riesz::RieszMean{1e9, 1.0}), std::invalid_argument);
}

TEST_CASE("Riesz mean is convex piecewise linear with kinks at eigenvalues",
          "[riesz][property]") {
    const auto s = square_dirichlet(80);
    const double zmax = s.values.back();
    auto r1 = [&](double z) { return riesz::evaluate(s, riesz::RieszMean{z, 1.0}).value; };
    // convexity on a grid
    double prev_slope = -1;
    for (int i = 1; i + 1 < 60; ++i) {
        const double z0 = zmax * i / 60.0, z1 = zmax * (i + 1) / 60.0;
        const double slope = (r1(z1) - r1(z0)) / (z1 - z0);
        CHECK(slope >= prev_slope - 1e-9);
        prev_slope = slope;
    }
    // right derivative equals the counting function away from kinks
    for (double z : {10.0, 33.3, 77.7, 150.0}) {
        const double eps = 1e-6;
        const double deriv = (r1(z + eps) - r1(z)) / eps;
        const double count = riesz::evaluate(s, riesz::Counting{z}).value;
        CHECK_THAT(deriv, WithinAbs(count, 1e-5));
    }
}

TEST_CASE("partition function", "[riesz]") {
    const auto s = square_dirichlet(200);
    double prev = 1e300;
    for (double t : {0.05, 0.1, 0.2, 0.5, 1.0}) {
        const auto r = riesz::evaluate(s, riesz::Partition{t});
        CHECK(r.value < prev);  // strictly decreasing in t
        prev = r.value;
        CHECK(r.truncation_bound >= 0);
    }
    // the reported tail at moderate t is tiny compared to the value
    const auto r = riesz::evaluate(s, riesz::Partition{0.5});
    CHECK(r.truncation_bound < 1e-12 * r.value + 1e-300);
    // at small t the tail estimate is close to the truth: compare against the
    // exact theta-product trace
    const double t_small = 0.004;
    const auto rs = riesz::evaluate(s, riesz::Partition{t_small});
    const double exact =
        spectra::exact_heat_trace_box(geom::Box{2, {1, 1}}, spectra::Bc::dirichlet, t_small);
    CHECK(std::abs(exact - rs.value) <= 1.5 * rs.truncation_bound + 1e-9);
}

TEST_CASE("Legendre transform closed form", "[riesz]") {
    const auto s = square_dirichlet(60);
    // L(3) = lambda_1 + lambda_2 + lambda_3 = 12 pi^2
    CHECK_THAT(riesz::evaluate(s, riesz::Legendre{3.0}).value, WithinRel(12 * kPi * kPi, 1e-14));
    // integer w equals the partial sum exactly
    for (int k : {1, 2, 5, 17}) {
        double sum = 0;
        for (int j = 0; j < k; ++j) sum += s.values[j];
        CHECK_THAT(riesz::evaluate(s, riesz::Legendre{static_cast<double>(k)}).value,
                   WithinRel(sum, 1e-15));
    }
    // fractional w interpolates with slope lambda_{[w]+1}
    const double w = 2.25;
    CHECK_THAT(riesz::evaluate(s, riesz::Legendre{w}).value,
               WithinRel(2 * kPi * kPi + 5 * kPi * kPi + 0.25 * 5 * kPi * kPi, 1e-14));
}

TEST_CASE("Legendre identity check", "[riesz]") {
    const auto s = square_dirichlet(60);
    std::vector<double> w_grid{1.0, 2.5, 7.0};
    CHECK(riesz::legendre_identity_check(s, w_grid) <= 1e-10);

    // single-eigenvalue spectrum: conjugate of (z-c)_+ at w = 1 equals c
    spectra::Spectrum single;
    single.bc = spectra::Bc::dirichlet;
    single.values = {3.5};
    single.error_bounds = {0.0};
    CHECK_THAT(riesz::evaluate(single, riesz::Legendre{1.0}).value, WithinAbs(3.5, 1e-15));
    CHECK(riesz::legendre_identity_check(single, {1.0}) <= 1e-10);

    // Neumann: mu_1 = 0 so L(1) = 0
    const auto n = spectra::analytic_spectrum(geom::Box{2, {1, 1}}, spectra::Bc::neumann, 10);
    CHECK(riesz::evaluate(n, riesz::Legendre{1.0}).value == 0.0);
}
