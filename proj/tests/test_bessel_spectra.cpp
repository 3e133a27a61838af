#include <catch2/catch_amalgamated.hpp>

#include "spectral_bounds/bessel.hpp"
#include "spectral_bounds/spectra.hpp"

#include <cmath>
#include <numbers>

using namespace spb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

/// Independent oracle: J_0 by its power series, zero located by bisection.
double j0_series(double x) {
    double term = 1.0, sum = 1.0;
    const double q = x * x / 4.0;
    for (int m = 1; m < 60; ++m) {
        term *= -q / (m * m);
        sum += term;
        if (std::abs(term) < 1e-19 * std::abs(sum)) break;
    }
    return sum;
}

/// J_1' via the series of J_1 and the identity J_1' = J_0 - J_1/x.
double j1_series(double x) {
    double term = x / 2.0, sum = term;
    const double q = x * x / 4.0;
    for (int m = 1; m < 60; ++m) {
        term *= -q / (m * (m + 1.0));
        sum += term;
        if (std::abs(term) < 1e-19 * std::abs(sum)) break;
    }
    return sum;
}

double bisect(double (*f)(double), double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (flo * fm <= 0)
            hi = mid;
        else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("Bessel zeros against series oracles", "[bessel]") {
    // j_{0,1} from the power-series bisection oracle
    const double j01_oracle = bisect(j0_series, 2.0, 3.0);
    CHECK_THAT(bessel::zero(0, 1, bessel::ZeroKind::J), WithinAbs(j01_oracle, 1e-12));
    CHECK_THAT(bessel::zero(0, 1, bessel::ZeroKind::J),
               WithinAbs(2.404825557695773, 1e-12));

    // j'_{1,1}: J_1'(x) = J_0(x) - J_1(x)/x
    const double j11p_oracle = bisect(
        [](double x) { return j0_series(x) - j1_series(x) / x; }, 1.0, 3.0);
    CHECK_THAT(bessel::zero(1, 1, bessel::ZeroKind::JPrime), WithinAbs(j11p_oracle, 1e-12));
    CHECK_THAT(bessel::zero(1, 1, bessel::ZeroKind::JPrime),
               WithinAbs(1.8411837813406593, 1e-12));

    // half-integer closed form: J_{1/2} ~ sin(x)/sqrt(x), first zero at pi
    CHECK_THAT(bessel::zero(0.5, 1, bessel::ZeroKind::J), WithinAbs(kPi, 1e-12));

    CHECK_THROWS_AS(bessel::zero(-1.0, 1, bessel::ZeroKind::J), std::invalid_argument);
    CHECK_THROWS_AS(bessel::zero(0.0, 0, bessel::ZeroKind::J), std::invalid_argument);
}

TEST_CASE("Bessel zero interlacing", "[bessel][property]") {
    for (int nu = 0; nu <= 5; ++nu) {
        for (int k = 1; k <= 5; ++k) {
            const double a = bessel::zero(nu, k, bessel::ZeroKind::J);
            const double b = bessel::zero(nu + 1, k, bessel::ZeroKind::J);
            const double c = bessel::zero(nu, k + 1, bessel::ZeroKind::J);
            CHECK(a < b);
            CHECK(b < c);
        }
    }
}

TEST_CASE("lambda1_ball", "[bessel]") {
    const auto b2 = bessel::lambda1_ball(2);
    CHECK_THAT(b2.lambda1, WithinAbs(5.783185962946785, 1e-10));
    CHECK_THAT(b2.j_at_sqrt, WithinAbs(0.5191474972894669, 1e-10));
    // the zero itself: J_0(sqrt(lambda1)) = 0
    CHECK_THAT(bessel::cyl_j(0.0, std::sqrt(b2.lambda1)), WithinAbs(0.0, 1e-10));

    const auto b3 = bessel::lambda1_ball(3);
    CHECK_THAT(b3.lambda1, WithinAbs(kPi * kPi, 1e-10));  // j_{1/2,1} = pi
    // J_{3/2}(pi) = sqrt(2/(pi x)) (sin x / x - cos x) at x = pi
    const double closed_form = std::sqrt(2.0 / (kPi * kPi)) * (0.0 / kPi + 1.0);
    CHECK_THAT(b3.j_at_sqrt, WithinAbs(closed_form, 1e-10));
    CHECK_THAT(b3.j_at_sqrt, WithinAbs(0.4501581580785530, 1e-10));

    CHECK_THROWS_AS(bessel::lambda1_ball(1), std::invalid_argument);
}

TEST_CASE("box spectra by separation of variables", "[spectra]") {
    const geom::Box square{2, {1, 1}};
    const auto d = spectra::analytic_spectrum(square, spectra::Bc::dirichlet, 3);
    REQUIRE(d.count() == 3);
    CHECK_THAT(d.values[0], WithinRel(2 * kPi * kPi, 1e-14));
    CHECK_THAT(d.values[1], WithinRel(5 * kPi * kPi, 1e-14));
    CHECK_THAT(d.values[2], WithinRel(5 * kPi * kPi, 1e-14));

    const auto n = spectra::analytic_spectrum(square, spectra::Bc::neumann, 4);
    CHECK(n.values[0] == 0.0);
    CHECK_THAT(n.values[1], WithinRel(kPi * kPi, 1e-14));
    CHECK_THAT(n.values[2], WithinRel(kPi * kPi, 1e-14));
    CHECK_THAT(n.values[3], WithinRel(2 * kPi * kPi, 1e-14));

    // 1D interval: lambda_1 = pi^2 (used by the slab identity)
    const auto i1 = spectra::analytic_spectrum(geom::Box{1, {1}}, spectra::Bc::dirichlet, 2);
    CHECK_THAT(i1.values[0], WithinRel(kPi * kPi, 1e-14));
    CHECK_THAT(i1.values[1], WithinRel(4 * kPi * kPi, 1e-14));
}

TEST_CASE("box enumeration is complete", "[spectra][property]") {
    const geom::Box box{2, {1, 2}};
    const auto s1 = spectra::analytic_spectrum(box, spectra::Bc::dirichlet, 50);
    const auto s2 = spectra::analytic_spectrum(box, spectra::Bc::dirichlet, 100);
    for (int i = 0; i < 50; ++i) CHECK(s1.values[i] == s2.values[i]);
    const auto n1 = spectra::analytic_spectrum(box, spectra::Bc::neumann, 50);
    const auto n2 = spectra::analytic_spectrum(box, spectra::Bc::neumann, 100);
    for (int i = 0; i < 50; ++i) CHECK(n1.values[i] == n2.values[i]);
}

TEST_CASE("disk spectra from Bessel zeros", "[spectra]") {
    const geom::Disk disk{1.0};
    const auto d = spectra::analytic_spectrum(disk, spectra::Bc::dirichlet, 6);
    CHECK_THAT(d.values[0], WithinAbs(5.783185962946785, 1e-9));   // j_{0,1}^2
    CHECK_THAT(d.values[1], WithinAbs(14.681970642123728, 1e-9));  // j_{1,1}^2 x2
    CHECK_THAT(d.values[2], WithinAbs(14.681970642123728, 1e-9));
    CHECK_THAT(d.values[3], WithinAbs(26.374616427163247, 1e-8));  // j_{2,1}^2 x2
    CHECK_THAT(d.values[5], WithinAbs(30.471262343662087, 1e-8));  // j_{0,2}^2

    const auto n = spectra::analytic_spectrum(disk, spectra::Bc::neumann, 4);
    CHECK(n.values[0] == 0.0);
    const double mu2 = 1.8411837813406593 * 1.8411837813406593;
    CHECK_THAT(n.values[1], WithinAbs(mu2, 1e-10));
    CHECK_THAT(n.values[2], WithinAbs(mu2, 1e-10));
}

TEST_CASE("annulus spectra from cross-product zeros", "[spectra]") {
    const geom::Annulus ann{1.0, 2.0};
    const auto d = spectra::analytic_spectrum(ann, spectra::Bc::dirichlet, 8);
    // reference roots of J_nu(x) Y_nu(2x) - J_nu(2x) Y_nu(x)
    CHECK_THAT(d.values[0], WithinAbs(9.753322124750714, 1e-8));
    CHECK_THAT(d.values[1], WithinAbs(10.218113344665943, 1e-8));
    CHECK_THAT(d.values[2], WithinAbs(10.218113344665943, 1e-8));
    CHECK_THAT(d.values[3], WithinAbs(11.607113606804901, 1e-8));
    CHECK_THAT(d.values[7], WithinAbs(17.084708022727266, 1e-8));

    const auto n = spectra::analytic_spectrum(ann, spectra::Bc::neumann, 6);
    CHECK(n.values[0] == 0.0);
    CHECK_THAT(n.values[1], WithinAbs(0.458784063854387, 1e-9));
    CHECK_THAT(n.values[2], WithinAbs(0.458784063854387, 1e-9));
    CHECK_THAT(n.values[3], WithinAbs(1.797214106712842, 1e-9));
    CHECK_THAT(n.values[5], WithinAbs(3.915954552809551, 1e-9));
}

TEST_CASE("spectra scale like 1/t^2", "[spectra][property]") {
    const double t = 1.7;
    const auto s1 = spectra::analytic_spectrum(geom::Disk{1.0}, spectra::Bc::dirichlet, 30);
    const auto st = spectra::analytic_spectrum(geom::Disk{t}, spectra::Bc::dirichlet, 30);
    for (int i = 0; i < 30; ++i)
        CHECK_THAT(st.values[i], WithinRel(s1.values[i] / (t * t), 1e-9));

    const auto b1 = spectra::analytic_spectrum(geom::Box{2, {1, 2}}, spectra::Bc::neumann, 30);
    const auto bt =
        spectra::analytic_spectrum(geom::Box{2, {t, 2 * t}}, spectra::Bc::neumann, 30);
    for (int i = 0; i < 30; ++i) {
        if (b1.values[i] == 0.0)
            CHECK(bt.values[i] == 0.0);
        else
            CHECK_THAT(bt.values[i], WithinRel(b1.values[i] / (t * t), 1e-12));
    }
}

TEST_CASE("Weyl trend on analytic spectra", "[spectra][property]") {
    // lambda_j / j^{2/d} tends to C_d / |Omega|^{2/d}; check the trend on the
    // tail of a long spectrum.
    for (const auto& dom : {geom::Domain{geom::Box{2, {1, 1}}}, geom::Domain{geom::Disk{1.0}},
                            geom::Domain{geom::Annulus{1.0, 2.0}}}) {
        const auto g = geom::summarize(dom);
        const auto s = spectra::analytic_spectrum(dom, spectra::Bc::dirichlet, 600);
        const double target = 4 * kPi / g.volume;  // C_2 / |Omega|
        double tail_avg = 0;
        int m = 0;
        for (int j = 500; j < 600; ++j) {
            tail_avg += s.values[j] / (j + 1.0);
            ++m;
        }
        tail_avg /= m;
        CHECK_THAT(tail_avg, WithinRel(target, 0.08));
    }
}

TEST_CASE("exact box heat trace", "[spectra]") {
    const geom::Box square{2, {1, 1}};
    // direct sum oracle at moderate t
    const auto s = spectra::analytic_spectrum(square, spectra::Bc::dirichlet, 400);
    for (double t : {0.05, 0.1, 0.5}) {
        double direct = 0;
        for (double v : s.values) direct += std::exp(-v * t);
        CHECK_THAT(spectra::exact_heat_trace_box(square, spectra::Bc::dirichlet, t),
                   WithinRel(direct, 1e-12));
    }
    // small-t regime matches the Jacobi-transformed evaluation continuously
    const double a = spectra::exact_heat_trace_box(square, spectra::Bc::dirichlet, 0.0500001);
    const double b = spectra::exact_heat_trace_box(square, spectra::Bc::dirichlet, 0.0499999);
    CHECK_THAT(a, WithinRel(b, 1e-9));
    // Neumann trace = Dirichlet counterpart with the constant modes included
    const auto n = spectra::analytic_spectrum(square, spectra::Bc::neumann, 400);
    double direct_n = 0;
    for (double v : n.values) direct_n += std::exp(-v * 0.1);
    CHECK_THAT(spectra::exact_heat_trace_box(square, spectra::Bc::neumann, 0.1),
               WithinRel(direct_n, 1e-12));
}
