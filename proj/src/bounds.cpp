#include "spectral_bounds/bounds.hpp"

#include "spectral_bounds/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace spb::bounds {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

double positive_part(double x) { return x > 0 ? x : 0.0; }

void require_d(int d) {
    if (d < 2) throw std::invalid_argument("bounds: formulas require d >= 2");
}

}  // namespace

double unit_ball_volume(int d) {
    if (d < 1) throw std::invalid_argument("unit_ball_volume: d must be >= 1");
    return std::pow(kPi, d / 2.0) / std::tgamma(1.0 + d / 2.0);
}

double semiclassical_constant(int d) {
    require_d(d);
    return 4.0 * kPi * kPi * std::pow(unit_ball_volume(d), -2.0 / d);
}

double neumann_cd_constant(int d) {
    require_d(d);
    const double w = unit_ball_volume(d);
    const double t3 = std::pow(3.0, 1.0 / (d + 1));
    return 4.0 * w *
           (std::pow(2.0 * kPi, -d) +
            d * (d + 2.0) * t3 * std::pow(kPi, -1.0 - d) *
                std::pow(0.5 + t3 * (d + 2.0), d - 1.0) * (2.0 * (d + 2.0) * t3 + kPi));
}

TestFunctionNorms phi_family_norms(PhiProfile profile, double h, double volume,
                                   double tube_volume_at_h) {
    if (!(h > 0)) throw std::invalid_argument("phi_family_norms: h must be positive");
    TestFunctionNorms n;
    n.sup = 1.0;
    n.l2_sq = volume - tube_volume_at_h;  // conservative lower bound
    n.grad_l2_sq = (profile == PhiProfile::linear)
                       ? tube_volume_at_h / (h * h)
                       : (kPi * kPi / (4.0 * h * h)) * tube_volume_at_h;
    if (!(n.l2_sq > 0))
        throw std::invalid_argument("phi_family_norms: tube fills the domain (h too large)");
    return n;
}

GeomInputs from_summary(const geom::GeometricSummary& g) {
    GeomInputs in;
    in.d = g.dim;
    in.volume = g.volume;
    in.boundary = g.boundary_measure;
    in.inradius = g.inradius;
    in.tube_radius = g.max_tube_radius;
    in.boundary_components = g.boundary_components;
    in.has_angle_sums = g.has_angle_sums;
    in.angle_sum_convex = g.angle_sum_convex;
    in.angle_sum_reflex = g.angle_sum_reflex;
    in.curvature_integrals = g.curvature_integrals;
    in.tags = g.tags;
    return in;
}

Semiclassical semiclassical(int d, double volume, double boundary, double k) {
    require_d(d);
    Semiclassical s;
    s.constant = semiclassical_constant(d);
    const double kv = k / volume;
    s.one_term_average = d / (d + 2.0) * s.constant * std::pow(kv, 2.0 / d);
    const double cd1 = semiclassical_constant(std::max(d - 1, 2));
    const double cdm1 = (d == 2) ? kPi * kPi : cd1;  // C_1 = pi^2
    s.boundary_coefficient = std::pow(s.constant, (d + 1.0) / 2.0) /
                             (2.0 * (d + 1.0) * std::pow(cdm1, (d - 1.0) / 2.0));
    const double second = s.boundary_coefficient * (boundary / volume) * std::pow(kv, 1.0 / d);
    s.two_term_dirichlet = s.one_term_average + second;
    s.two_term_neumann = s.one_term_average - second;
    return s;
}

std::vector<BoundResult> dirichlet_avp(const TestFunctionNorms& phi, double volume, int d,
                                       const Query& query) {
    require_d(d);
    if (!(phi.l2_sq > 0) || !(phi.grad_l2_sq > 0) || !(phi.sup > 0))
        throw std::invalid_argument("dirichlet_avp: norms must be positive");
    const double wd = unit_ball_volume(d);
    const double Cd = semiclassical_constant(d);
    const double rayleigh = phi.grad_l2_sq / phi.l2_sq;
    const double rho = phi.rho(volume);

    std::vector<BoundResult> out;
    if (const auto* q = std::get_if<QRiesz>(&query)) {
        BoundResult r;
        r.theorem_id = "thm2.1";
        r.side = Side::lower;
        r.functional = Functional::riesz1;
        r.threshold = 0;
        r.threshold_desc = "z >= 0";
        r.value = 2.0 / (d + 2.0) * std::pow(2.0 * kPi, -d) * wd * phi.l2_sq *
                  std::pow(positive_part(q->z - rayleigh), d / 2.0 + 1.0) /
                  (phi.sup * phi.sup);
        out.push_back(r);
        return out;
    }
    if (const auto* q = std::get_if<QAverage>(&query)) {
        if (!(rho < 1.0)) throw std::invalid_argument("dirichlet_avp: rho(phi) must be < 1");
        BoundResult r;
        r.theorem_id = "thm2.1";
        r.side = Side::upper;
        r.functional = Functional::average;
        r.threshold = 1;
        r.threshold_desc = "all k >= 1";
        r.value = rayleigh + d / (d + 2.0) * Cd * std::pow(q->k / volume, 2.0 / d) *
                                 std::pow(rho, -2.0 / d);
        out.push_back(r);
        return out;
    }
    if (const auto* q = std::get_if<QPartition>(&query)) {
        if (!(q->t > 0)) throw std::invalid_argument("dirichlet_avp: t must be positive");
        BoundResult r;
        r.theorem_id = "cor2.2";
        r.side = Side::lower;
        r.functional = Functional::partition;
        r.threshold = 0;
        r.threshold_desc = "all t > 0";
        const double pref = std::pow(4.0 * kPi * q->t, -d / 2.0);
        r.value = pref * volume -
                  pref * (phi.grad_l2_sq * q->t + volume * phi.sup * phi.sup - phi.l2_sq) /
                      (phi.sup * phi.sup);
        out.push_back(r);
        return out;
    }
    const auto& q = std::get<QBracket>(query);
    if (!(rho < 1.0)) throw std::invalid_argument("dirichlet_avp: rho(phi) must be < 1");
    const double W = Cd * std::pow(q.k / volume, 2.0 / d) * std::pow(rho, -2.0 / d);
    BoundResult lo, hi;
    lo.theorem_id = hi.theorem_id = "cor2.3";
    lo.side = Side::lower;
    hi.side = Side::upper;
    lo.functional = hi.functional = Functional::single;
    lo.threshold = hi.threshold = rayleigh;
    lo.threshold_desc = hi.threshold_desc = "lambda_k >= |grad phi|^2/|phi|^2";
    const double disc = 1.0 - ((d + 2.0) / d * q.avg_k - rayleigh) / W;
    const bool hyp_ok = !q.lambda_k.has_value() || *q.lambda_k >= rayleigh;
    if (disc < 0 || !hyp_ok) {
        lo.applicable = hi.applicable = false;
        lo.note = hi.note = disc < 0 ? "bound not applicable at this k (negative discriminant)"
                                     : "hypothesis lambda_k >= Rayleigh quotient fails";
        lo.value = hi.value = std::numeric_limits<double>::quiet_NaN();
    } else {
        lo.value = W * (1.0 - std::sqrt(disc));
        hi.value = W * (1.0 + std::sqrt(disc));
    }
    lo.note += lo.note.empty() ? "lambda_k" : "";
    hi.note += hi.note.empty() ? "lambda_{k+1}" : "";
    out.push_back(lo);
    out.push_back(hi);
    return out;
}

std::vector<BoundResult> dirichlet_inradius(const Query& query, double lambda1, double inradius,
                                            double volume, int d, bool convex) {
    require_d(d);
    if (!(lambda1 > 0)) throw std::invalid_argument("dirichlet_inradius: lambda1 must be > 0");
    const auto ball = bessel::lambda1_ball(d);
    const double absJ = std::abs(ball.j_at_sqrt);
    std::vector<BoundResult> out;
    if (const auto* q = std::get_if<QRiesz>(&query)) {
        BoundResult r;
        r.theorem_id = "thm2.5";
        r.side = Side::lower;
        r.functional = Functional::riesz1;
        r.threshold = (d + 2.0) / (2.0 * inradius * inradius);
        r.threshold_desc = "z >= (d+2)/(2 r^2)";
        r.applicable = q->z >= r.threshold;
        r.value = absJ * std::pow(inradius, d) *
                  std::pow(positive_part(q->z - lambda1), d / 2.0 + 1.0) /
                  ((d + 2.0) * d * std::pow(ball.lambda1, (d - 1.0) / 2.0));
        out.push_back(r);
        return out;
    }
    if (const auto* q = std::get_if<QAverage>(&query)) {
        const double Cd = semiclassical_constant(d);
        BoundResult r;
        r.theorem_id = "thm2.5";
        r.side = Side::upper;
        r.functional = Functional::average;
        r.threshold = 1;
        r.threshold_desc = "all k >= 1";
        r.note = "excess-average";  // bounds (1/k) sum (lambda_j - lambda_1)
        r.value = d / (d + 2.0) * Cd * std::pow(q->k / volume, 2.0 / d) *
                  std::pow(2.0 * d * unit_ball_volume(d) * volume / absJ, 2.0 / d) *
                  std::pow(ball.lambda1, (d - 1.0) / d) /
                  (4.0 * kPi * kPi * inradius * inradius);
        out.push_back(r);

        BoundResult heat;
        heat.theorem_id = "rem2.2";
        heat.side = Side::upper;
        heat.functional = Functional::average;
        heat.threshold = 1;
        heat.threshold_desc = "all k >= 1";
        heat.note = "excess-average";
        heat.value = d / (d + 2.0) * Cd * std::pow(static_cast<double>(q->k), 2.0 / d) *
                     (kE * lambda1 / (2.0 * d * kPi));
        out.push_back(heat);
        return out;
    }
    (void)convex;
    throw std::invalid_argument("dirichlet_inradius: unsupported query type");
}

BoundResult lambda1_upper_inradius(double inradius, int d) {
    require_d(d);
    BoundResult r;
    r.theorem_id = "rem2.1";
    r.side = Side::upper;
    r.functional = Functional::lambda1;
    r.threshold_desc = "always";
    r.value = bessel::lambda1_ball(d).lambda1 / (inradius * inradius);
    return r;
}

BoundResult lambda1_lower_protter(double inradius, bool convex) {
    BoundResult r;
    r.theorem_id = "protter";
    r.side = Side::lower;
    r.functional = Functional::lambda1;
    r.threshold_desc = "convex domains";
    r.applicable = convex;
    r.assumptions = {"convex"};
    r.value = kPi * kPi / (4.0 * inradius * inradius);
    return r;
}

std::vector<BoundResult> dirichlet_convex(const Query& query, const GeomInputs& g) {
    require_d(g.d);
    if (!g.tags.convex) throw std::invalid_argument("dirichlet_convex: domain is not convex");
    const int d = g.d;
    const double wd = unit_ball_volume(d);
    const double Cd = semiclassical_constant(d);
    const double V = g.volume, B = g.boundary;
    std::vector<BoundResult> out;
    if (const auto* q = std::get_if<QRiesz>(&query)) {
        BoundResult r;
        r.theorem_id = "thm2.4";
        r.side = Side::lower;
        r.functional = Functional::riesz1;
        r.assumptions = {"convex"};
        r.threshold = (d + 2.0) / (2.0 * g.inradius * g.inradius);
        r.threshold_desc = "z >= (d+2)/(2 r^2)";
        r.applicable = q->z >= r.threshold;
        r.value = 2.0 / (d + 2.0) * std::pow(2 * kPi, -d) * wd * V * std::pow(q->z, d / 2.0 + 1.0) -
                  2.0 * std::sqrt(2.0 / (d + 2.0)) * std::pow(2 * kPi, -d) * wd * B *
                      std::pow(q->z, (d + 1.0) / 2.0);
        out.push_back(r);
        return out;
    }
    if (const auto* q = std::get_if<QAverage>(&query)) {
        BoundResult r;
        r.theorem_id = "thm2.4";
        r.side = Side::upper;
        r.functional = Functional::average;
        r.assumptions = {"convex"};
        r.threshold = 1;
        r.threshold_desc = "all k >= 1";
        r.value = d / (d + 2.0) * Cd * std::pow(q->k / V, 2.0 / d) +
                  2.0 * std::sqrt(2.0 / (d + 2.0) * Cd) * std::pow(q->k / V, 1.0 / d) * (B / V) +
                  4.0 * B * B / (V * V);
        out.push_back(r);
        return out;
    }
    throw std::invalid_argument("dirichlet_convex: unsupported query type");
}

BoundResult lambda1_upper_convex(const GeomInputs& g) {
    if (!g.tags.convex) throw std::invalid_argument("lambda1_upper_convex: not convex");
    BoundResult r;
    r.theorem_id = "thm2.4";
    r.side = Side::upper;
    r.functional = Functional::lambda1;
    r.assumptions = {"convex"};
    r.threshold_desc = "always";
    r.value = 4.0 * g.boundary * g.boundary / (g.volume * g.volume);
    return r;
}

BoundResult dirichlet_convex_riesz_alpha(double z, double alpha, const GeomInputs& g) {
    require_d(g.d);
    if (!g.tags.convex) throw std::invalid_argument("dirichlet_convex: domain is not convex");
    if (!(alpha > 0)) throw std::invalid_argument("dirichlet_convex: alpha must be positive");
    const int d = g.d;
    const double wd = unit_ball_volume(d);
    BoundResult r;
    r.theorem_id = "thm2.4.alpha";
    r.side = Side::lower;
    r.functional = Functional::riesz1;
    r.assumptions = {"convex"};
    r.threshold = alpha * d / (g.inradius * g.inradius);
    r.threshold_desc = "z >= alpha d / r^2";
    r.applicable = z >= r.threshold;
    const double s = std::sqrt(alpha * d);
    r.value = 2.0 / (d + 2.0) * std::pow(2 * kPi, -d) * wd * g.volume * std::pow(z, d / 2.0 + 1.0) -
              std::pow(2 * kPi, -d) * wd * g.boundary * std::pow(z, (d + 1.0) / 2.0) *
                  (1.0 / s + 2.0 * s);
    return r;
}

namespace {

/// Remainder of the class-S average bound at tube width h:
/// ((2/(d+2)) C_d (k/V)^{2/d} + 1/h^2) (h B w + V (w - h B)) / (V (V - w)),
/// with w the tube volume at h.
double class_s_remainder_at(double k, double h, double tube_at_h, const GeomInputs& g) {
    const double Cd = semiclassical_constant(g.d);
    const double pref =
        2.0 / (g.d + 2.0) * Cd * std::pow(k / g.volume, 2.0 / g.d) + 1.0 / (h * h);
    const double w = tube_at_h;
    return pref * (h * g.boundary * w + g.volume * (w - h * g.boundary)) /
           (g.volume * (g.volume - w));
}

double class_s_h(double k, const GeomInputs& g) {
    const double Cd = semiclassical_constant(g.d);
    return std::pow(2.0 / (g.d + 2.0) * Cd, -0.5) * std::pow(k / g.volume, -1.0 / g.d);
}

}  // namespace

std::vector<BoundResult> dirichlet_class_s(const Query& query, const GeomInputs& g,
                                           const TubeFn& tube) {
    require_d(g.d);
    if (!g.tags.class_s) throw std::invalid_argument("dirichlet_class_s: class-S tag required");
    const int d = g.d;
    const double Cd = semiclassical_constant(d);
    const double V = g.volume, B = g.boundary;
    std::vector<BoundResult> out;
    if (const auto* q = std::get_if<QAverage>(&query)) {
        BoundResult r;
        r.theorem_id = "thm2.7";
        r.side = Side::upper;
        r.functional = Functional::average;
        r.assumptions = {"classS"};
        r.threshold = V * std::pow(g.inradius, -d) * std::pow((d + 2.0) / (2.0 * Cd), d / 2.0);
        r.threshold_desc = "k >= V r^{-d} ((d+2)/(2 C_d))^{d/2}";
        r.applicable = q->k >= r.threshold;
        if (r.applicable) {
            const double h = class_s_h(q->k, g);
            r.value = d / (d + 2.0) * Cd * std::pow(q->k / V, 2.0 / d) +
                      2.0 * std::sqrt(2.0 * Cd / (d + 2.0)) * (B / V) * std::pow(q->k / V, 1.0 / d) +
                      class_s_remainder_at(q->k, h, tube(h), g);
        } else {
            r.value = std::numeric_limits<double>::quiet_NaN();
            r.note = "inapplicable: fall back to the inradius bound";
        }
        out.push_back(r);
        return out;
    }
    if (const auto* q = std::get_if<QPartition>(&query)) {
        BoundResult r;
        r.theorem_id = "cor2.8";
        r.side = Side::lower;
        r.functional = Functional::partition;
        r.assumptions = {"classS"};
        r.threshold = g.inradius * g.inradius;
        r.threshold_desc = "0 < t <= r^2";
        r.applicable = q->t > 0 && q->t <= r.threshold;
        const double pref = std::pow(4.0 * kPi * q->t, -d / 2.0);
        const double sqt = std::sqrt(q->t);
        const double rem = 2.0 * (sqt * B - tube(sqt)) * pref;
        // The proof derives the middle coefficient 2; the displayed statement
        // has 1, which fails numerically at moderate t.
        r.value = pref * V - 2.0 * B * sqt * pref + rem;
        out.push_back(r);
        return out;
    }
    throw std::invalid_argument("dirichlet_class_s: unsupported query type");
}

double c2_remainder(double k, const GeomInputs& g) {
    require_d(g.d);
    const int d = g.d;
    if (static_cast<int>(g.curvature_integrals.size()) < d - 1)
        throw std::invalid_argument("c2_remainder: missing curvature integrals");
    const double h = class_s_h(k, g);
    double series_num = 0, series_den = 0;
    double binom = 1.0;
    for (int j = 2; j <= d; ++j) {
        // binom(d, j) built incrementally from binom(d, 2).
        if (j == 2)
            binom = d * (d - 1) / 2.0;
        else
            binom *= static_cast<double>(d - j + 1) / j;
        const double sign = (j % 2 == 0) ? -1.0 : 1.0;  // (-1)^{j-1}
        const double I = g.curvature_integrals[static_cast<std::size_t>(j - 2)];
        series_num += binom * sign * std::pow(h, j - 2.0) * I;
        series_den += binom * sign * std::pow(h, static_cast<double>(j)) * I;
    }
    const double num =
        2.0 * g.boundary * g.boundary + 2.0 * (h * g.boundary + g.volume) * series_num / d;
    const double den = g.volume * g.volume - h * g.volume * g.boundary - g.volume * series_den / d;
    return num / den;
}

double c2_remainder_limit(const GeomInputs& g) {
    if (g.curvature_integrals.empty())
        throw std::invalid_argument("c2_remainder_limit: missing curvature integrals");
    return 2.0 * g.boundary * g.boundary / (g.volume * g.volume) -
           (g.d - 1.0) / g.volume * g.curvature_integrals[0];
}

std::vector<BoundResult> dirichlet_c2(const Query& query, const GeomInputs& g) {
    require_d(g.d);
    if (!g.tags.c2) throw std::invalid_argument("dirichlet_c2: C^2 tag required");
    const int d = g.d;
    const double Cd = semiclassical_constant(d);
    const auto* q = std::get_if<QAverage>(&query);
    if (!q) throw std::invalid_argument("dirichlet_c2: unsupported query type");
    BoundResult r;
    r.theorem_id = "thm2.9";
    r.side = Side::upper;
    r.functional = Functional::average;
    r.assumptions = {"C2"};
    r.threshold =
        g.volume * std::pow(g.tube_radius, -d) * std::pow((d + 2.0) / (2.0 * Cd), d / 2.0);
    r.threshold_desc = "k >= V hbar^{-d} ((d+2)/(2 C_d))^{d/2}";
    r.applicable = q->k >= r.threshold;
    if (r.applicable) {
        r.value = d / (d + 2.0) * Cd * std::pow(q->k / g.volume, 2.0 / d) +
                  2.0 * std::sqrt(2.0 * Cd / (d + 2.0)) * (g.boundary / g.volume) *
                      std::pow(q->k / g.volume, 1.0 / d) +
                  c2_remainder(q->k, g);
    } else {
        r.value = std::numeric_limits<double>::quiet_NaN();
    }
    return {r};
}

std::vector<BoundResult> dirichlet_mean_convex(const Query& query, const GeomInputs& g) {
    require_d(g.d);
    if (!g.tags.c2 || !g.tags.mean_convex)
        throw std::invalid_argument("dirichlet_mean_convex: mean-convex C^2 tag required");
    const int d = g.d;
    const double Cd = semiclassical_constant(d);
    const double V = g.volume, B = g.boundary, hbar = g.tube_radius;
    const auto* q = std::get_if<QAverage>(&query);
    if (!q) throw std::invalid_argument("dirichlet_mean_convex: unsupported query type");
    BoundResult r;
    r.theorem_id = "cor2.10";
    r.side = Side::upper;
    r.functional = Functional::average;
    r.assumptions = {"C2", "meanconvex"};
    const double radicand = (d + 2.0) / (2.0 * Cd) * (V - 2.0 * hbar * B) / (hbar * hbar * V);
    if (hbar >= V / (2.0 * B)) {
        r.threshold = 1;
        r.threshold_desc = "all k >= 1 (hbar >= V/(2B))";
    } else if (radicand <= 0) {
        r.threshold = 1;
        r.threshold_desc = "all k >= 1 (nonpositive radicand)";
        r.note = "threshold radicand V - 2 hbar B <= 0: treated as vacuous";
    } else {
        r.threshold = V * std::pow(radicand, d / 2.0);
        r.threshold_desc = "k >= V ((d+2)/(2C_d) (V-2 hbar B)/(hbar^2 V))^{d/2}";
    }
    r.applicable = q->k >= r.threshold;
    r.value = d / (d + 2.0) * Cd * std::pow(q->k / V, 2.0 / d) +
              2.0 * std::sqrt(2.0 / (d + 2.0) * Cd) * std::pow(q->k / V, 1.0 / d) * (B / V) +
              4.0 * B * B / (V * V);
    if (!r.applicable) r.value = std::numeric_limits<double>::quiet_NaN();
    return {r};
}

double planar_remainder(PlanarCase c, double k, const GeomInputs& g) {
    const double V = g.volume, B = g.boundary;
    const double h = std::sqrt(V / (2.0 * k * kPi));
    double coeff = 0;
    if (c == PlanarCase::polygon) {
        if (!g.has_angle_sums) throw std::invalid_argument("planar_remainder: no angle sums");
        coeff = g.angle_sum_convex - g.angle_sum_reflex;
    } else {
        coeff = (2.0 - g.boundary_components) * kPi;
    }
    return 2.0 * (B * B - coeff * V - coeff * B * h) / (V * (V - B * h + coeff * h * h));
}

double planar_remainder_limit(PlanarCase c, const GeomInputs& g) {
    const double coeff = (c == PlanarCase::polygon)
                             ? g.angle_sum_convex - g.angle_sum_reflex
                             : (2.0 - g.boundary_components) * kPi;
    return 2.0 * (g.boundary * g.boundary - coeff * g.volume) / (g.volume * g.volume);
}

std::vector<BoundResult> dirichlet_planar(PlanarCase c, const Query& query, const GeomInputs& g,
                                          double alpha) {
    if (g.d != 2) throw std::invalid_argument("dirichlet_planar: d must be 2");
    const double V = g.volume, B = g.boundary;
    const auto* q = std::get_if<QAverage>(&query);
    if (!q) throw std::invalid_argument("dirichlet_planar: unsupported query type");
    BoundResult r;
    r.side = Side::upper;
    r.functional = Functional::average;
    const double main_terms =
        2.0 * kPi * q->k / V + std::sqrt(8.0 * kPi) * (B / V) * std::sqrt(q->k / V);
    switch (c) {
        case PlanarCase::c2_general: {
            if (!g.tags.c2) throw std::invalid_argument("dirichlet_planar(i): C^2 tag required");
            r.theorem_id = "thm2.11i";
            r.assumptions = {"C2", "planar"};
            r.threshold = V / (2.0 * kPi * g.tube_radius * g.tube_radius);
            r.threshold_desc = "k >= V/(2 pi hbar^2)";
            r.applicable = q->k >= r.threshold;
            r.value = main_terms + planar_remainder(c, q->k, g);
            break;
        }
        case PlanarCase::c2_two_components: {
            if (!g.tags.c2 || g.boundary_components > 2)
                throw std::invalid_argument("dirichlet_planar(ii): C^2, at most 2 components");
            if (!(alpha > 0 && alpha < 1))
                throw std::invalid_argument("dirichlet_planar(ii): alpha must be in (0,1)");
            r.theorem_id = "thm2.11ii";
            r.assumptions = {"C2", "planar"};
            const double hbar = g.tube_radius;
            r.threshold = V / (2.0 * kPi) *
                          std::max(1.0 / (hbar * hbar), std::pow(B / (alpha * V), 2.0));
            r.threshold_desc = "k >= (V/2pi) max{hbar^{-2}, (B/(alpha V))^2}";
            r.applicable = q->k >= r.threshold;
            r.value = main_terms + 2.0 * B * B / ((1.0 - alpha) * V * V);
            break;
        }
        case PlanarCase::convex: {
            if (!g.tags.convex) throw std::invalid_argument("dirichlet_planar(iii): convex only");
            r.theorem_id = "thm2.11iii";
            r.assumptions = {"convex", "planar"};
            r.threshold = 1;
            r.threshold_desc = "all k >= 1";
            r.applicable = true;
            r.value = main_terms + 4.0 * B * B / (V * V);
            break;
        }
        case PlanarCase::polygon: {
            if (!g.tags.polygon) throw std::invalid_argument("dirichlet_planar(iv): polygon only");
            r.theorem_id = "thm2.11iv";
            r.assumptions = {"polygon", "planar"};
            r.threshold = V / (2.0 * kPi * g.tube_radius * g.tube_radius);
            r.threshold_desc = "k >= V/(2 pi htilde^2)";
            r.applicable = q->k >= r.threshold;
            r.value = main_terms + planar_remainder(c, q->k, g);
            break;
        }
    }
    if (!r.applicable) r.value = std::numeric_limits<double>::quiet_NaN();
    return {r};
}

std::vector<BoundResult> neumann_classical(const Query& query, double volume, int d,
                                           const NeumannExtras& extras) {
    require_d(d);
    const double Cd = semiclassical_constant(d);
    std::vector<BoundResult> out;
    if (const auto* q = std::get_if<QAverage>(&query)) {
        if (!extras.mu_next)
            throw std::invalid_argument("neumann_classical: average form needs mu_{k+1}");
        const double W = Cd * std::pow(q->k / volume, 2.0 / d);
        BoundResult r;
        r.theorem_id = "thm3.1";
        r.side = Side::upper;
        r.functional = Functional::average;
        r.threshold = 1;
        r.threshold_desc = "all k >= 1";
        const double dev = *extras.mu_next / W - 1.0;
        r.value = d / (d + 2.0) * W * (1.0 - dev * dev);
        r.note = "refined Kroger bound using mu_{k+1}";
        out.push_back(r);
        return out;
    }
    if (const auto* q = std::get_if<QBracket>(&query)) {
        if (!extras.avg_k)
            throw std::invalid_argument("neumann_classical: bracket needs the running average");
        const double W = Cd * std::pow(q->k / volume, 2.0 / d);
        const double disc = 1.0 - (d + 2.0) / d * (*extras.avg_k) / W;
        BoundResult lo, hi;
        lo.theorem_id = hi.theorem_id = "thm3.1";
        lo.side = Side::lower;
        hi.side = Side::upper;
        lo.functional = hi.functional = Functional::mu;
        lo.threshold_desc = hi.threshold_desc = "nonnegative discriminant";
        if (disc < 0) {
            lo.applicable = hi.applicable = false;
            lo.value = hi.value = std::numeric_limits<double>::quiet_NaN();
            lo.note = hi.note = "negative discriminant";
        } else {
            lo.value = W * (1.0 - std::sqrt(disc));
            hi.value = W * (1.0 + std::sqrt(disc));
            lo.note = "mu_k";
            hi.note = "mu_{k+1}";
        }
        out.push_back(lo);
        out.push_back(hi);
        return out;
    }
    if (const auto* q = std::get_if<QRiesz>(&query)) {
        BoundResult r;
        r.theorem_id = "thm3.1";
        r.side = Side::lower;
        r.functional = Functional::riesz1;
        r.threshold_desc = "all z > 0";
        r.value = 2.0 / (d + 2.0) * std::pow(Cd, -d / 2.0) * volume *
                  std::pow(q->z, 1.0 + d / 2.0);
        out.push_back(r);
        return out;
    }
    const auto& q = std::get<QPartition>(query);
    BoundResult r;
    r.theorem_id = "thm3.1";
    r.side = Side::lower;
    r.functional = Functional::partition;
    r.threshold_desc = "all t > 0";
    r.value = volume * std::pow(4.0 * kPi * q.t, -d / 2.0);
    out.push_back(r);
    return out;
}

BoundResult neumann_two_term_riesz(double z, double volume, double width, int d) {
    require_d(d);
    if (!(width > 0)) throw std::invalid_argument("neumann_two_term_riesz: width must be > 0");
    const double Cd = semiclassical_constant(d);
    const double Cd1 = (d == 2) ? kPi * kPi : semiclassical_constant(d - 1);
    BoundResult r;
    r.theorem_id = "thm3.2";
    r.side = Side::lower;
    r.functional = Functional::riesz1;
    r.threshold_desc = "all z >= 0";
    const double first = 2.0 / (d + 2.0) * std::pow(Cd, -d / 2.0) * volume *
                         std::pow(z, d / 2.0 + 1.0);
    const double second = 0.25 * 2.0 / (d + 1.0) * std::pow(Cd1, -(d - 1.0) / 2.0) *
                              (volume / width) * std::pow(z, d / 2.0 + 0.5) -
                          1.0 / 96.0 * std::pow(2.0 * kPi, 2.0 - d) * unit_ball_volume(d) *
                              (volume / (width * width)) * std::pow(z, d / 2.0);
    r.value = first + positive_part(second);
    return r;
}

std::vector<BoundResult> neumann_c2(const Query& query, const GeomInputs& g, double z0,
                                    double curvature_ratio, const TubeFn& tube) {
    require_d(g.d);
    if (!g.tags.c2) throw std::invalid_argument("neumann_c2: C^2 tag required");
    const int d = g.d;
    const double Cd = semiclassical_constant(d);
    const double cd = neumann_cd_constant(d);
    const double V = g.volume, B = g.boundary;
    auto r_prime = [&](double z) {
        const double h = kPi / (2.0 * std::sqrt(z));
        return 2.0 * std::pow(z, 1.0 + d / 2.0) * cd * std::abs(tube(h) - h * B);
    };
    std::vector<BoundResult> out;
    if (const auto* q = std::get_if<QRiesz>(&query)) {
        BoundResult r;
        r.theorem_id = "thm3.3";
        r.side = Side::upper;
        r.functional = Functional::riesz1;
        r.assumptions = {"C2"};
        r.threshold = z0;
        r.threshold_desc = "z >= max{hbar^{-2}, (4/9) max |h k/(1-h k)|^2}";
        r.applicable = q->z >= z0;
        if (r.applicable) {
            r.value = 2.0 / (d + 2.0) * std::pow(Cd, -d / 2.0) * V * std::pow(q->z, 1.0 + d / 2.0) +
                      kPi * B * cd * std::pow(q->z, (d + 1.0) / 2.0) + r_prime(q->z);
        } else {
            r.value = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(r);
        return out;
    }
    const auto* q = std::get_if<QAverage>(&query);
    if (!q) throw std::invalid_argument("neumann_c2: unsupported query type");
    BoundResult r;
    r.theorem_id = "thm3.3";
    r.side = Side::lower;
    r.functional = Functional::average;
    r.assumptions = {"C2"};
    const double hbar = g.tube_radius;
    r.threshold = cd * V *
                  std::max(std::pow(hbar, -static_cast<double>(d)),
                           (2.0 / 3.0) * std::pow(curvature_ratio, static_cast<double>(d)));
    r.threshold_desc = "k >= c_d V max{hbar^{-d}, (2/3) max |h k/(1-h k)|^d}";
    r.note = "k-threshold factor (2/3)M^d differs from (4/9)^{d/2} M^d = z0^{d/2} form";
    r.applicable = q->k >= r.threshold;
    if (r.applicable) {
        const double zk = Cd * std::pow(q->k / V, 2.0 / d);
        r.value = d / (d + 2.0) * zk -
                  kPi * cd * std::pow(Cd, (d + 1.0) / 2.0) * (B / V) * std::pow(q->k / V, 1.0 / d) -
                  r_prime(zk) / q->k;
    } else {
        r.value = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(r);
    return out;
}

SpectralFunctionBound spectral_function_bound(double mu, double delta, int d) {
    require_d(d);
    if (!(mu > 0) || !(delta > 0))
        throw std::invalid_argument("spectral_function_bound: mu, delta must be > 0");
    const double wd = unit_ball_volume(d);
    const double t3 = std::pow(3.0, 1.0 / (d + 1));
    SpectralFunctionBound out;
    out.leading = std::pow(2.0 * kPi, -d) * wd * std::pow(mu, d / 2.0);
    out.correction = d * (d + 2.0) * std::pow(2.0 * kPi, -d) * t3 * wd *
                     (2.0 / kPi * (d + 2.0) * t3 + 1.0) / delta *
                     std::pow(std::sqrt(mu) + (d + 2.0) * t3 / delta, d - 1.0);
    out.total = out.leading + out.correction;
    return out;
}

BoundResult bly_generalized(double sum_grad, double sum_mass, double phi_l2_sq, int d,
                            std::optional<double> radius) {
    require_d(d);
    (void)sum_grad;  // the bound does not consume it; callers compare against it
    if (!(sum_mass > 0) || !(phi_l2_sq > 0))
        throw std::invalid_argument("bly_generalized: inputs must be positive");
    const double Cd = semiclassical_constant(d);
    BoundResult r;
    r.theorem_id = "appA.1";
    r.side = Side::lower;
    r.functional = Functional::single;
    r.threshold_desc = "always";
    if (radius) {
        const double R = *radius;
        r.value = -2.0 / (d + 2.0) * std::pow(Cd, -d / 2.0) * phi_l2_sq * std::pow(R, d + 2.0) +
                  R * R * sum_mass;
        r.note = "fixed R";
    } else {
        // Optimal R = sqrt(C_d) (sum_mass/phi_l2)^{1/d}; consistent with the
        // optimized display for every d.
        r.value = d / (d + 2.0) * Cd * std::pow(phi_l2_sq, -2.0 / d) *
                  std::pow(sum_mass, 1.0 + 2.0 / d);
        r.note = "optimal R";
    }
    return r;
}

SingleFromAverages single_from_averages(int k, double A, double B, int k0, int d, double volume) {
    require_d(d);
    if (k < k0) throw std::invalid_argument("single_from_averages: k < k0");
    if (A < 0 || B < 0) throw std::invalid_argument("single_from_averages: A, B must be >= 0");
    const double Cd = semiclassical_constant(d);
    const double V = volume;
    const double kd = static_cast<double>(k);
    SingleFromAverages out;
    out.window = static_cast<int>(std::lround(std::pow(kd, 1.0 - 1.0 / (2.0 * d))));
    const double head = Cd * std::pow(kd / V, 2.0 / d);
    const double slope_term = (3.0 / (d + 2.0) * Cd * std::pow(V, -2.0 / d) +
                               2.0 * A * std::pow(V, -1.0 / d)) *
                              std::pow(kd, 3.0 / (2.0 * d));
    const double second = (d + 1.0) / d * A * std::pow(kd / V, 1.0 / d);
    const double small_lower = 3.0 * A / (2.0 * d) * std::pow(V, -1.0 / d) *
                               std::pow(kd, 1.0 / (2.0 * d));
    const double small_upper = (3.0 * A / (2.0 * d) * std::pow(V, -1.0 / d) + 2.0 * B) *
                               std::pow(kd, 1.0 / (2.0 * d));

    out.lower_k.theorem_id = "appA.2";
    out.lower_k.side = Side::lower;
    out.lower_k.functional = Functional::single;
    out.lower_k.threshold = k0;
    out.lower_k.threshold_desc = "k >= k0";
    out.lower_k.value = head - slope_term + second - small_lower - B;
    out.lower_k.note = "lambda_k";

    out.upper_k1 = out.lower_k;
    out.upper_k1.side = Side::upper;
    out.upper_k1.value = head + slope_term + second + small_upper + B;
    out.upper_k1.note = "lambda_{k+1}";

    out.modulus_bound = slope_term + small_upper + B;
    return out;
}

SlabIdentity rectangle_slab_identity() {
    // Omega' = (0,1): lambda_1 = pi^2, |Omega'| = 1, |dOmega'| = 2.
    SlabIdentity s;
    s.lhs = kPi * kPi;
    s.rhs = 4.0 * (2.0 / 1.0) * (2.0 / 1.0);
    return s;
}

double second_term_ratio_class_s(int d) {
    require_d(d);
    const double Cd = semiclassical_constant(d);
    const double Cd1 = (d == 2) ? kPi * kPi : semiclassical_constant(d - 1);
    const double numer = 2.0 * std::sqrt(2.0 * Cd / (d + 2.0));
    const double denom = std::pow(Cd, (d + 1.0) / 2.0) /
                         (2.0 * (d + 1.0) * std::pow(Cd1, (d - 1.0) / 2.0));
    return numer / denom;
}

double second_term_ratio_convex(int d) {
    require_d(d);
    const double wd = unit_ball_volume(d);
    const double wd1 = unit_ball_volume(d - 1);
    const double numer = 2.0 * std::sqrt(2.0 / (d + 2.0)) * std::pow(2.0 * kPi, -d) * wd;
    const double denom = 0.25 * 2.0 / (d + 1.0) * std::pow(2.0 * kPi, 1.0 - d) * wd1;
    return numer / denom;
}

}  // namespace spb::bounds
