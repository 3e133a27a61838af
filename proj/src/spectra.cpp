#include "spectral_bounds/spectra.hpp"

#include "spectral_bounds/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace spb::spectra {

namespace {

constexpr double kPi = std::numbers::pi;

void enumerate_box_levels(const std::vector<double>& lengths, bool dirichlet, double cutoff,
                          std::size_t index, double partial, std::vector<double>& out) {
    if (index == lengths.size()) {
        out.push_back(partial);
        return;
    }
    const double L = lengths[index];
    int m = dirichlet ? 1 : 0;
    for (;; ++m) {
        const double term = kPi * kPi * m * m / (L * L);
        if (partial + term > cutoff) break;
        enumerate_box_levels(lengths, dirichlet, cutoff, index + 1, partial + term, out);
    }
}

std::vector<double> box_spectrum(const geom::Box& box, Bc bc, int count) {
    const bool dirichlet = (bc == Bc::dirichlet);
    double min_l = *std::min_element(box.lengths.begin(), box.lengths.end());
    double cutoff = dirichlet ? kPi * kPi * box.dim / (min_l * min_l) : 1.0;
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<double> vals;
        enumerate_box_levels(box.lengths, dirichlet, cutoff, 0, 0.0, vals);
        const auto below =
            static_cast<int>(std::count_if(vals.begin(), vals.end(),
                                           [cutoff](double v) { return v < cutoff; }));
        if (below >= count + 1) {
            std::sort(vals.begin(), vals.end());
            vals.resize(static_cast<std::size_t>(count));
            return vals;
        }
        cutoff *= 1.6;
    }
    throw std::runtime_error("box spectrum: enumeration cutoff failed to grow");
}

std::vector<double> disk_spectrum(double radius, Bc bc, int count) {
    // Eigenvalues (x/R)^2 where x runs over zeros of J_nu (Dirichlet) or
    // J_nu' (Neumann); angular multiplicity 2 for nu >= 1.
    double xmax = std::max(4.0, radius * std::sqrt(4.0 * (count + 1) / (radius * radius)));
    xmax = std::max(4.0, 2.0 * std::sqrt(static_cast<double>(count + 1)));
    for (int attempt = 0; attempt < 60; ++attempt) {
        std::vector<double> vals;
        if (bc == Bc::neumann) vals.push_back(0.0);
        for (int nu = 0;; ++nu) {
            const double first = bessel::zero(static_cast<double>(nu), 1,
                                              bc == Bc::dirichlet ? bessel::ZeroKind::J
                                                                  : bessel::ZeroKind::JPrime);
            if (first > xmax) break;
            for (int k = 1;; ++k) {
                const double x = bessel::zero(static_cast<double>(nu), k,
                                              bc == Bc::dirichlet ? bessel::ZeroKind::J
                                                                  : bessel::ZeroKind::JPrime);
                if (x > xmax) break;
                const double ev = (x / radius) * (x / radius);
                vals.push_back(ev);
                if (nu >= 1) vals.push_back(ev);
            }
        }
        const double cutoff = (xmax / radius) * (xmax / radius);
        const auto below =
            static_cast<int>(std::count_if(vals.begin(), vals.end(),
                                           [cutoff](double v) { return v < cutoff; }));
        if (below >= count + 1) {
            std::sort(vals.begin(), vals.end());
            vals.resize(static_cast<std::size_t>(count));
            return vals;
        }
        xmax *= 1.3;
    }
    throw std::runtime_error("disk spectrum: enumeration cutoff failed to grow");
}

/// Scan for the zeros of the Bessel cross products that quantize an annulus.
std::vector<double> cross_product_zeros(double a, double b, int nu, double xmax, Bc bc) {
    const double n = static_cast<double>(nu);
    std::function<double(double)> f;
    if (bc == Bc::dirichlet) {
        f = [a, b, n](double x) {
            return bessel::cyl_j(n, x * a) * bessel::cyl_y(n, x * b) -
                   bessel::cyl_j(n, x * b) * bessel::cyl_y(n, x * a);
        };
    } else {
        f = [a, b, n](double x) {
            return bessel::cyl_j_prime(n, x * a) * bessel::cyl_y_prime(n, x * b) -
                   bessel::cyl_j_prime(n, x * b) * bessel::cyl_y_prime(n, x * a);
        };
    }
    // Radial zeros are spaced by roughly pi/(b-a); angular modes only appear
    // once x*b exceeds nu. Start safely below the first candidate.
    const double start = std::max(1e-3, 0.7 * n / b);
    const double step = std::min(0.5, 0.25 * kPi / (b - a));
    std::vector<double> zeros;
    double x = start;
    double prev = f(x);
    while (x < xmax) {
        const double xn = x + step;
        const double cur = f(xn);
        if (std::isfinite(prev) && std::isfinite(cur) && prev * cur < 0) {
            double lo = x, hi = xn, flo = prev;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (hi - lo <= 1e-15 * std::max(1.0, mid)) break;
                const double fm = f(mid);
                if (flo * fm <= 0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            zeros.push_back(0.5 * (lo + hi));
        }
        x = xn;
        prev = cur;
    }
    return zeros;
}

std::vector<double> annulus_spectrum(const geom::Annulus& ann, Bc bc, int count) {
    const double a = ann.r_in, b = ann.r_out;
    double xmax = std::max(2.0 * kPi / (b - a),
                           std::sqrt(4.0 * kPi * (count + 1) / (kPi * (b * b - a * a))));
    for (int attempt = 0; attempt < 60; ++attempt) {
        std::vector<double> vals;
        if (bc == Bc::neumann) vals.push_back(0.0);
        for (int nu = 0;; ++nu) {
            const auto zeros = cross_product_zeros(a, b, nu, xmax, bc);
            if (zeros.empty()) {
                // Whispering-gallery modes appear just above nu/b; once even
                // the scan window is empty the remaining nu contribute nothing.
                if (nu / b > xmax) break;
                continue;
            }
            for (double x : zeros) {
                vals.push_back(x * x);
                if (nu >= 1) vals.push_back(x * x);
            }
        }
        const double cutoff = xmax * xmax;
        const auto below =
            static_cast<int>(std::count_if(vals.begin(), vals.end(),
                                           [cutoff](double v) { return v < cutoff; }));
        if (below >= count + 1) {
            std::sort(vals.begin(), vals.end());
            vals.resize(static_cast<std::size_t>(count));
            return vals;
        }
        xmax *= 1.3;
    }
    throw std::runtime_error("annulus spectrum: enumeration cutoff failed to grow");
}

/// theta(tau) = sum_{m>=1} exp(-pi^2 m^2 tau), evaluated through the Jacobi
/// transformation for small tau.
double theta_dirichlet(double tau) {
    if (tau >= 0.05) {
        double s = 0;
        for (int m = 1;; ++m) {
            const double term = std::exp(-kPi * kPi * m * m * tau);
            s += term;
            if (term < 1e-18 * (1.0 + s)) break;
        }
        return s;
    }
    // sum_{m in Z} exp(-pi^2 m^2 tau) = (pi tau)^{-1/2} sum_{m in Z} exp(-m^2/tau)
    double full = 1.0;
    for (int m = 1;; ++m) {
        const double term = 2.0 * std::exp(-m * m / tau);
        full += term;
        if (term < 1e-18 * full) break;
    }
    full /= std::sqrt(kPi * tau);
    return 0.5 * (full - 1.0);
}

}  // namespace

std::string to_string(Bc bc) { return bc == Bc::dirichlet ? "dirichlet" : "neumann"; }

std::string to_string(Source s) {
    switch (s) {
        case Source::analytic: return "analytic";
        case Source::fem: return "fem";
        case Source::user: return "user";
    }
    return "?";
}

Spectrum analytic_spectrum(const geom::Domain& domain, Bc bc, int count) {
    if (count < 1) throw std::invalid_argument("analytic_spectrum: count must be >= 1");
    geom::validate(domain);
    Spectrum s;
    s.bc = bc;
    s.source = Source::analytic;
    if (const auto* box = std::get_if<geom::Box>(&domain)) {
        s.values = box_spectrum(*box, bc, count);
    } else if (const auto* disk = std::get_if<geom::Disk>(&domain)) {
        s.values = disk_spectrum(disk->radius, bc, count);
    } else if (const auto* ann = std::get_if<geom::Annulus>(&domain)) {
        s.values = annulus_spectrum(*ann, bc, count);
    } else {
        throw std::invalid_argument("analytic_spectrum: unsupported domain type");
    }
    s.error_bounds.assign(s.values.size(), 0.0);
    return s;
}

double exact_heat_trace_box(const geom::Box& box, Bc bc, double t) {
    if (!(t > 0)) throw std::invalid_argument("exact_heat_trace_box: t must be positive");
    double trace = 1.0;
    for (double L : box.lengths) {
        const double theta = theta_dirichlet(t / (L * L));
        trace *= (bc == Bc::dirichlet) ? theta : theta + 1.0;
    }
    return trace;
}

}  // namespace spb::spectra
