#include "spectral_bounds/bessel.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_bessel.h>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace spb::bessel {

namespace {

const bool g_handler_off = [] {
    gsl_set_error_handler_off();
    return true;
}();

double checked(int status, const gsl_sf_result& r) {
    if (status == GSL_SUCCESS || status == GSL_EUNDRFLW) return r.val;
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double cyl_j(double nu, double x) {
    (void)g_handler_off;
    gsl_sf_result r;
    return checked(gsl_sf_bessel_Jnu_e(nu, x, &r), r);
}

double cyl_y(double nu, double x) {
    gsl_sf_result r;
    return checked(gsl_sf_bessel_Ynu_e(nu, x, &r), r);
}

double cyl_j_prime(double nu, double x) {
    if (nu == 0.0) return -cyl_j(1.0, x);
    return 0.5 * (cyl_j(nu - 1.0, x) - cyl_j(nu + 1.0, x));
}

double cyl_y_prime(double nu, double x) {
    if (nu == 0.0) return -cyl_y(1.0, x);
    return 0.5 * (cyl_y(nu - 1.0, x) - cyl_y(nu + 1.0, x));
}

namespace {

double refine_zero(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a), fb = f(b);
    if (!(fa * fb <= 0)) throw std::runtime_error("bessel zero: lost bracket");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (b - a <= 1e-15 * std::max(1.0, std::abs(mid))) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (fa * fm < 0) {
            b = mid;
            fb = fm;
        } else {
            a = mid;
            fa = fm;
        }
    }
    // Secant polish inside the final bracket.
    double x0 = a, x1 = b, f0 = fa, f1 = fb;
    for (int it = 0; it < 4 && f1 != f0; ++it) {
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        if (!(x2 > a && x2 < b)) break;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1);
    }
    return x1;
}

}  // namespace

double zero(double nu, int k, ZeroKind kind) {
    if (nu < 0) throw std::invalid_argument("bessel::zero: nu must be >= 0");
    if (k < 1) throw std::invalid_argument("bessel::zero: k must be >= 1");
    std::function<double(double)> f;
    if (kind == ZeroKind::J) {
        f = [nu](double x) { return cyl_j(nu, x); };
    } else if (nu == 0.0) {
        // J_0' = -J_1: positive zeros coincide with those of J_1.
        f = [](double x) { return cyl_j(1.0, x); };
    } else {
        f = [nu](double x) { return cyl_j_prime(nu, x); };
    }
    // All positive zeros exceed nu; consecutive zeros are separated by more
    // than 1 in the scanned range, so a unit step cannot skip a sign change.
    double x = std::max(nu, 1e-3);
    const double step = 0.5;
    double prev = f(x);
    int found = 0;
    for (int guard = 0; guard < 2000000; ++guard) {
        const double xn = x + step;
        const double cur = f(xn);
        if (std::isfinite(prev) && std::isfinite(cur) && prev * cur <= 0 && cur != prev) {
            ++found;
            if (found == k) return refine_zero(f, x, xn);
        }
        x = xn;
        prev = cur;
    }
    throw std::runtime_error("bessel::zero: zero not found within iteration budget");
}

Lambda1Ball lambda1_ball(int d) {
    if (d < 2) throw std::invalid_argument("lambda1_ball: d must be >= 2");
    const double j = zero(d / 2.0 - 1.0, 1, ZeroKind::J);
    return {j * j, cyl_j(d / 2.0, j)};
}

}  // namespace spb::bessel
