#include "spectral_bounds/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

namespace spb::geom {

namespace {

constexpr double kPi = std::numbers::pi;

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() * b.y() - a.y() * b.x();
}

bool segments_properly_intersect(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                 const Eigen::Vector2d& c, const Eigen::Vector2d& d) {
    const double d1 = cross2(b - a, c - a);
    const double d2 = cross2(b - a, d - a);
    const double d3 = cross2(d - c, a - c);
    const double d4 = cross2(d - c, b - c);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    auto on_segment = [](const Eigen::Vector2d& p, const Eigen::Vector2d& q,
                         const Eigen::Vector2d& r) {
        return std::abs(cross2(q - p, r - p)) < 1e-14 &&
               (r - p).dot(r - q) <= 1e-14;
    };
    if (on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) ||
        on_segment(c, d, b))
        return true;
    return false;
}

double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0) return (p - a).norm();
    const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + s * ab)).norm();
}

std::vector<Eigen::Vector2d> merge_collinear(std::vector<Eigen::Vector2d> v) {
    bool changed = true;
    while (changed && v.size() > 3) {
        changed = false;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Eigen::Vector2d& prev = v[(i + v.size() - 1) % v.size()];
            const Eigen::Vector2d& cur = v[i];
            const Eigen::Vector2d& next = v[(i + 1) % v.size()];
            const Eigen::Vector2d e0 = cur - prev, e1 = next - cur;
            const double scale = e0.norm() * e1.norm();
            if (scale > 0 && std::abs(cross2(e0, e1)) < 1e-12 * scale && e0.dot(e1) > 0) {
                v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    return v;
}

/// Interior angle at vertex i of a CCW polygon, in (0, 2*pi).
double interior_angle(const std::vector<Eigen::Vector2d>& v, std::size_t i) {
    const std::size_t n = v.size();
    const Eigen::Vector2d in = v[i] - v[(i + n - 1) % n];
    const Eigen::Vector2d out = v[(i + 1) % n] - v[i];
    // Exterior turn angle in (-pi, pi); interior = pi - turn.
    const double turn = std::atan2(cross2(in, out), in.dot(out));
    return kPi - turn;
}

/// Inward angle-bisector direction at vertex i of a CCW polygon.
Eigen::Vector2d bisector_direction(const std::vector<Eigen::Vector2d>& v, std::size_t i) {
    const std::size_t n = v.size();
    const Eigen::Vector2d e_prev = (v[i] - v[(i + n - 1) % n]).normalized();
    const Eigen::Vector2d e_next = (v[(i + 1) % n] - v[i]).normalized();
    Eigen::Vector2d dir = e_next - e_prev;
    if (dir.norm() < 1e-12) {
        // Straight-through vertex: bisector is the inward normal.
        dir = Eigen::Vector2d(-e_next.y(), e_next.x());
    } else if (interior_angle(v, i) > kPi) {
        dir = -dir;
    }
    return dir.normalized();
}

struct RayIntersection {
    bool hit = false;
    Eigen::Vector2d point{0, 0};
};

RayIntersection intersect_rays(const Eigen::Vector2d& p0, const Eigen::Vector2d& d0,
                               const Eigen::Vector2d& p1, const Eigen::Vector2d& d1) {
    const double den = cross2(d0, d1);
    if (std::abs(den) < 1e-14) return {};
    const Eigen::Vector2d dp = p1 - p0;
    const double s = cross2(dp, d1) / den;
    const double u = cross2(dp, d0) / den;
    if (s <= 0 || u <= 0) return {};
    return {true, p0 + s * d0};
}

struct CurveGeometry {
    double length = 0;
    double area = 0;
    double total_curvature = 0;
    double max_abs_curvature = 0;
    std::vector<double> curvature;       // per sample
    std::vector<Eigen::Vector2d> pts;    // per sample
    std::vector<Eigen::Vector2d> inward; // unit inward normal per sample
};

CurveGeometry curve_geometry(const SmoothCurve& c) {
    const std::size_t n = c.samples.size();
    if (n < 8) throw std::invalid_argument("curve: need at least 8 samples");
    CurveGeometry g;
    g.curvature.resize(n);
    g.pts.resize(n);
    g.inward.resize(n);
    const double dt = (c.samples[1].t - c.samples[0].t);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = c.samples[i];
        const double sp2 = s.xp * s.xp + s.yp * s.yp;
        const double sp = std::sqrt(sp2);
        if (sp < 1e-10) throw std::invalid_argument("curve: tangent vanishes (not regular)");
        g.length += sp * dt;
        g.area += 0.5 * (s.x * s.yp - s.y * s.xp) * dt;
        const double num = s.xp * s.ypp - s.yp * s.xpp;
        g.total_curvature += num / sp2 * dt;
        const double kappa = num / (sp2 * sp);
        g.curvature[i] = kappa;
        g.max_abs_curvature = std::max(g.max_abs_curvature, std::abs(kappa));
        g.pts[i] = Eigen::Vector2d(s.x, s.y);
        // CCW curve: inward normal is (-y', x') rotated ... for positive
        // orientation the interior is on the left, so inward = (-y', x')/|.|.
        g.inward[i] = Eigen::Vector2d(-s.yp, s.xp) / sp;
    }
    return g;
}

/// Distance from each sample to the medial axis along the inward normal:
/// rho(x) = min over other samples y with n.(y-x) > 0 of |y-x|^2 / (2 n.(y-x)).
double min_medial_distance(const CurveGeometry& g) {
    const std::size_t n = g.pts.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double rho = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const Eigen::Vector2d d = g.pts[j] - g.pts[i];
            const double proj = g.inward[i].dot(d);
            if (proj <= 1e-12) continue;
            rho = std::min(rho, d.squaredNorm() / (2.0 * proj));
        }
        best = std::min(best, rho);
    }
    return best;
}

bool polygon_is_convex(const std::vector<Eigen::Vector2d>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (interior_angle(v, i) > kPi + 1e-12) return false;
    return true;
}

/// Inradius of a polygon: coarse grid scan plus compass-search refinement,
/// seeded with the bisector-intersection candidates.
double polygon_inradius(const std::vector<Eigen::Vector2d>& v) {
    Eigen::Vector2d lo = v[0], hi = v[0];
    for (const auto& p : v) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    auto depth = [&](const Eigen::Vector2d& p) {
        if (!point_in_polygon(v, p)) return -distance_to_polygon_boundary(v, p);
        return distance_to_polygon_boundary(v, p);
    };
    std::vector<Eigen::Vector2d> seeds;
    const int grid = 48;
    Eigen::Vector2d best_pt = 0.5 * (lo + hi);
    double best = depth(best_pt);
    for (int i = 0; i <= grid; ++i)
        for (int j = 0; j <= grid; ++j) {
            Eigen::Vector2d p(lo.x() + (hi.x() - lo.x()) * i / grid,
                              lo.y() + (hi.y() - lo.y()) * j / grid);
            const double d = depth(p);
            if (d > best) {
                best = d;
                best_pt = p;
            }
        }
    seeds.push_back(best_pt);
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = intersect_rays(v[i], bisector_direction(v, i), v[(i + 1) % n],
                                      bisector_direction(v, (i + 1) % n));
        if (r.hit && point_in_polygon(v, r.point)) seeds.push_back(r.point);
    }
    double best_r = 0;
    for (const auto& seed : seeds) {
        Eigen::Vector2d p = seed;
        double f = depth(p);
        double step = 0.25 * std::max(hi.x() - lo.x(), hi.y() - lo.y());
        while (step > 1e-13) {
            bool improved = false;
            const Eigen::Vector2d dirs[4] = {{step, 0}, {-step, 0}, {0, step}, {0, -step}};
            for (const auto& d : dirs) {
                const double fd = depth(p + d);
                if (fd > f) {
                    f = fd;
                    p += d;
                    improved = true;
                }
            }
            if (!improved) step *= 0.5;
        }
        best_r = std::max(best_r, f);
    }
    return best_r;
}

/// Bisector radius: min distance to the boundary over intersections of
/// consecutive angle bisectors that land inside the polygon.
double polygon_bisector_radius(const std::vector<Eigen::Vector2d>& v, bool* fell_back,
                               double inradius) {
    const std::size_t n = v.size();
    double h = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = intersect_rays(v[i], bisector_direction(v, i), v[(i + 1) % n],
                                      bisector_direction(v, (i + 1) % n));
        if (!r.hit || !point_in_polygon(v, r.point)) continue;
        h = std::min(h, distance_to_polygon_boundary(v, r.point));
    }
    if (!std::isfinite(h)) {
        *fell_back = true;
        return inradius;
    }
    *fell_back = false;
    return std::min(h, inradius);
}

struct MonteCarloDomain {
    Eigen::Vector2d lo, hi;
    std::function<bool(const Eigen::Vector2d&)> inside;
    std::function<double(const Eigen::Vector2d&)> boundary_dist;
};

MonteCarloDomain mc_domain(const Domain& domain) {
    if (const auto* poly = std::get_if<Polygon>(&domain)) {
        const auto& v = poly->vertices;
        Eigen::Vector2d lo = v[0], hi = v[0];
        for (const auto& p : v) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        return {lo, hi, [&v](const Eigen::Vector2d& p) { return point_in_polygon(v, p); },
                [&v](const Eigen::Vector2d& p) { return distance_to_polygon_boundary(v, p); }};
    }
    const auto* curve = std::get_if<SmoothCurve>(&domain);
    if (!curve) throw std::logic_error("mc_domain: unsupported domain");
    auto pts = std::make_shared<std::vector<Eigen::Vector2d>>();
    for (const auto& s : curve->samples) pts->emplace_back(s.x, s.y);
    Eigen::Vector2d lo = (*pts)[0], hi = (*pts)[0];
    for (const auto& p : *pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return {lo, hi, [pts](const Eigen::Vector2d& p) { return point_in_polygon(*pts, p); },
            [pts](const Eigen::Vector2d& p) { return distance_to_polygon_boundary(*pts, p); }};
}

/// Stratified Monte-Carlo tube volume on a 2D domain.
TubeEstimate tube_volume_mc(const Domain& domain, double h, std::uint64_t seed) {
    const auto mc = mc_domain(domain);
    const int cells = 320;
    const double wx = (mc.hi.x() - mc.lo.x()) / cells;
    const double wy = (mc.hi.y() - mc.lo.y()) / cells;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::int64_t hits = 0;
    const std::int64_t total = static_cast<std::int64_t>(cells) * cells;
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j) {
            const Eigen::Vector2d p(mc.lo.x() + (i + unif(rng)) * wx,
                                    mc.lo.y() + (j + unif(rng)) * wy);
            if (mc.inside(p) && mc.boundary_dist(p) <= h) ++hits;
        }
    const double box_area = (mc.hi.x() - mc.lo.x()) * (mc.hi.y() - mc.lo.y());
    const double frac = static_cast<double>(hits) / static_cast<double>(total);
    // Binomial error; stratification only reduces it.
    const double se = box_area * std::sqrt(std::max(frac * (1 - frac), 1e-12) /
                                           static_cast<double>(total));
    return {box_area * frac, se, false};
}

}  // namespace

double polygon_area(const std::vector<Eigen::Vector2d>& v) {
    double a = 0;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross2(v[i], v[(i + 1) % v.size()]);
    return 0.5 * a;
}

double polygon_perimeter(const std::vector<Eigen::Vector2d>& v) {
    double p = 0;
    for (std::size_t i = 0; i < v.size(); ++i) p += (v[(i + 1) % v.size()] - v[i]).norm();
    return p;
}

bool point_in_polygon(const std::vector<Eigen::Vector2d>& v, const Eigen::Vector2d& p) {
    bool inside = false;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        const bool straddles = (v[i].y() > p.y()) != (v[j].y() > p.y());
        if (straddles) {
            const double x_cross =
                v[j].x() + (v[i].x() - v[j].x()) * (p.y() - v[j].y()) / (v[i].y() - v[j].y());
            if (p.x() < x_cross) inside = !inside;
        }
    }
    return inside;
}

double distance_to_polygon_boundary(const std::vector<Eigen::Vector2d>& v,
                                    const Eigen::Vector2d& p) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i)
        d = std::min(d, point_segment_distance(p, v[i], v[(i + 1) % v.size()]));
    return d;
}

SmoothCurve make_ellipse(double a, double b, int n) {
    if (a <= 0 || b <= 0) throw std::invalid_argument("ellipse: semi-axes must be positive");
    SmoothCurve c;
    c.samples.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * kPi * i / n;
        auto& s = c.samples[static_cast<std::size_t>(i)];
        s.t = t;
        s.x = a * std::cos(t);
        s.y = b * std::sin(t);
        s.xp = -a * std::sin(t);
        s.yp = b * std::cos(t);
        s.xpp = -a * std::cos(t);
        s.ypp = -b * std::sin(t);
    }
    return c;
}

void validate(const Domain& domain) {
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Box>) {
                if (d.dim < 1) throw std::invalid_argument("box: dim must be >= 1");
                if (static_cast<int>(d.lengths.size()) != d.dim)
                    throw std::invalid_argument("box: lengths must have size dim");
                for (double L : d.lengths)
                    if (!(L > 0)) throw std::invalid_argument("box: lengths must be positive");
            } else if constexpr (std::is_same_v<T, Disk>) {
                if (!(d.radius > 0)) throw std::invalid_argument("disk: radius must be positive");
            } else if constexpr (std::is_same_v<T, Annulus>) {
                if (!(d.r_in > 0) || !(d.r_out > d.r_in))
                    throw std::invalid_argument("annulus: need 0 < r_in < r_out");
            } else if constexpr (std::is_same_v<T, Polygon>) {
                const auto v = merge_collinear(d.vertices);
                if (v.size() < 3) throw std::invalid_argument("polygon: need >= 3 vertices");
                if (polygon_area(v) <= 0)
                    throw std::invalid_argument("polygon: vertices must be counter-clockwise");
                const std::size_t n = v.size();
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = i + 1; j < n; ++j) {
                        // Skip edges sharing a vertex.
                        if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
                        if (segments_properly_intersect(v[i], v[(i + 1) % n], v[j],
                                                        v[(j + 1) % n]))
                            throw std::invalid_argument("polygon: edges intersect (not simple)");
                    }
            } else if constexpr (std::is_same_v<T, SmoothCurve>) {
                if (d.samples.size() < 8)
                    throw std::invalid_argument("curve: need at least 8 samples");
                const auto& first = d.samples.front();
                const auto& last = d.samples.back();
                const double dt = d.samples[1].t - d.samples[0].t;
                // Uniform grid over one period; the wrap gap must match dt.
                const double gap = std::hypot(first.x - (last.x + last.xp * dt),
                                              first.y - (last.y + last.yp * dt));
                const double scale = std::max(1.0, std::hypot(first.x, first.y));
                if (gap > 0.2 * scale)
                    throw std::invalid_argument("curve: endpoints do not close up");
                curve_geometry(d);  // throws on vanishing tangent
            }
        },
        domain);
}

GeometricSummary summarize(const Domain& domain) {
    validate(domain);
    GeometricSummary g;
    if (const auto* b = std::get_if<Box>(&domain)) {
        g.dim = b->dim;
        g.volume = 1;
        for (double L : b->lengths) g.volume *= L;
        double surf = 0;
        for (int i = 0; i < b->dim; ++i) {
            double face = 1;
            for (int j = 0; j < b->dim; ++j)
                if (j != i) face *= b->lengths[static_cast<std::size_t>(j)];
            surf += 2 * face;
        }
        g.boundary_measure = surf;
        g.inradius = *std::min_element(b->lengths.begin(), b->lengths.end()) / 2.0;
        g.max_tube_radius = g.inradius;
        g.tags.convex = true;
        g.tags.planar = (b->dim == 2);
        g.tags.polygon = (b->dim == 2);
        if (b->dim == 2) {
            g.has_angle_sums = true;
            g.angle_sum_convex = 4.0;  // four right angles, cot(pi/4) = 1
            g.angle_sum_reflex = 0.0;
        }
        return g;
    }
    if (const auto* d = std::get_if<Disk>(&domain)) {
        const double R = d->radius;
        g.dim = 2;
        g.volume = kPi * R * R;
        g.boundary_measure = 2 * kPi * R;
        g.inradius = R;
        g.max_tube_radius = R;
        g.boundary_components = 1;
        g.curvature_integrals = {2 * kPi};
        g.tags = {.convex = true, .class_s = true, .c2 = true, .mean_convex = true,
                  .planar = true, .polygon = false};
        return g;
    }
    if (const auto* a = std::get_if<Annulus>(&domain)) {
        g.dim = 2;
        g.volume = kPi * (a->r_out * a->r_out - a->r_in * a->r_in);
        g.boundary_measure = 2 * kPi * (a->r_out + a->r_in);
        g.inradius = 0.5 * (a->r_out - a->r_in);
        g.max_tube_radius = g.inradius;
        g.boundary_components = 2;
        g.curvature_integrals = {0.0};  // 2*pi - 2*pi
        g.tags = {.convex = false, .class_s = true, .c2 = true, .mean_convex = false,
                  .planar = true, .polygon = false};
        return g;
    }
    if (const auto* p = std::get_if<Polygon>(&domain)) {
        const auto v = merge_collinear(p->vertices);
        g.dim = 2;
        g.volume = polygon_area(v);
        g.boundary_measure = polygon_perimeter(v);
        g.inradius = polygon_inradius(v);
        g.exact.inradius = false;  // numeric refinement
        g.max_tube_radius = polygon_bisector_radius(v, &g.tube_radius_fallback, g.inradius);
        g.has_angle_sums = true;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double ang = interior_angle(v, i);
            if (ang < kPi)
                g.angle_sum_convex += 1.0 / std::tan(ang / 2.0);
            else
                g.angle_sum_reflex += (ang - kPi) / 2.0;
        }
        g.tags.convex = polygon_is_convex(v);
        g.tags.planar = true;
        g.tags.polygon = true;
        return g;
    }
    const auto& c = std::get<SmoothCurve>(domain);
    const auto cg = curve_geometry(c);
    g.dim = 2;
    g.volume = cg.area;
    g.boundary_measure = cg.length;
    g.boundary_components = 1;
    g.curvature_integrals = {cg.total_curvature};
    g.exact.volume = g.exact.boundary = g.exact.curvature = false;  // quadrature
    // Inradius: polyline depth maximisation.
    std::vector<Eigen::Vector2d> poly = cg.pts;
    g.inradius = polygon_inradius(poly);
    g.exact.inradius = false;
    const double reach = std::min(cg.max_abs_curvature > 0
                                      ? 1.0 / cg.max_abs_curvature
                                      : std::numeric_limits<double>::infinity(),
                                  min_medial_distance(cg));
    g.max_tube_radius = std::min(reach, g.inradius);
    g.exact.tube_radius = false;
    const double min_kappa = *std::min_element(cg.curvature.begin(), cg.curvature.end());
    g.tags = {.convex = min_kappa >= -1e-9, .class_s = true, .c2 = true,
              .mean_convex = min_kappa >= -1e-9, .planar = true, .polygon = false};
    return g;
}

TubeEstimate tube_volume(const Domain& domain, double h, std::uint64_t seed) {
    validate(domain);
    if (!(h > 0)) throw std::invalid_argument("tube_volume: h must be positive");
    if (const auto* b = std::get_if<Box>(&domain)) {
        double vol = 1, core = 1;
        for (double L : b->lengths) {
            vol *= L;
            core *= std::max(L - 2 * h, 0.0);
        }
        return {vol - core, 0, true};
    }
    if (const auto* d = std::get_if<Disk>(&domain)) {
        const double R = d->radius;
        if (h >= R) return {kPi * R * R, 0, true};
        return {kPi * (R * R - (R - h) * (R - h)), 0, true};
    }
    if (const auto* a = std::get_if<Annulus>(&domain)) {
        const double ri = a->r_in, ro = a->r_out;
        if (h >= 0.5 * (ro - ri)) return {kPi * (ro * ro - ri * ri), 0, true};
        const double outer = kPi * (ro * ro - (ro - h) * (ro - h));
        const double inner = kPi * ((ri + h) * (ri + h) - ri * ri);
        return {outer + inner, 0, true};
    }
    const GeometricSummary g = summarize(domain);
    if (h >= g.inradius) return {g.volume, 0, true};
    if (std::holds_alternative<Polygon>(domain)) {
        if (h < g.max_tube_radius && !g.tube_radius_fallback) {
            const double val = h * g.boundary_measure - h * h * g.angle_sum_convex +
                               h * h * g.angle_sum_reflex;
            return {val, 0, true};
        }
        return tube_volume_mc(domain, h, seed);
    }
    // Smooth curve: normal-coordinates formula below the tubular radius.
    if (h < g.max_tube_radius) {
        const double val = h * g.boundary_measure - 0.5 * h * h * g.curvature_integrals[0];
        return {val, 0, false};  // quadrature-backed, not closed-form exact
    }
    return tube_volume_mc(domain, h, seed);
}

double direction_width(const Domain& domain, const std::vector<double>& v) {
    validate(domain);
    double norm2 = 0;
    for (double x : v) norm2 += x * x;
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-8)
        throw std::invalid_argument("direction_width: v must be a unit vector");
    if (const auto* b = std::get_if<Box>(&domain)) {
        if (static_cast<int>(v.size()) != b->dim)
            throw std::invalid_argument("direction_width: v has wrong dimension");
        double w = 0;
        for (int i = 0; i < b->dim; ++i)
            w += std::abs(v[static_cast<std::size_t>(i)]) * b->lengths[static_cast<std::size_t>(i)];
        return w;
    }
    if (v.size() != 2) throw std::invalid_argument("direction_width: v has wrong dimension");
    if (const auto* d = std::get_if<Disk>(&domain)) return 2 * d->radius;
    if (const auto* a = std::get_if<Annulus>(&domain)) return 2 * a->r_out;
    const Eigen::Vector2d dir(v[0], v[1]);
    auto support_width = [&dir](const std::vector<Eigen::Vector2d>& pts) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& p : pts) {
            const double s = dir.dot(p);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        return hi - lo;
    };
    if (const auto* p = std::get_if<Polygon>(&domain)) return support_width(p->vertices);
    const auto& c = std::get<SmoothCurve>(domain);
    std::vector<Eigen::Vector2d> pts;
    for (const auto& s : c.samples) pts.emplace_back(s.x, s.y);
    return support_width(pts);
}

MinkowskiFit minkowski_content_fit(const Domain& domain, const std::vector<double>& h_grid) {
    if (h_grid.size() < 2)
        throw std::invalid_argument("minkowski_content_fit: need at least 2 grid points");
    for (std::size_t i = 1; i < h_grid.size(); ++i)
        if (!(h_grid[i] < h_grid[i - 1]))
            throw std::invalid_argument("minkowski_content_fit: grid must be strictly decreasing");
    const GeometricSummary g = summarize(domain);
    Eigen::MatrixXd A(static_cast<Eigen::Index>(h_grid.size()), 2);
    Eigen::VectorXd y(static_cast<Eigen::Index>(h_grid.size()));
    for (std::size_t i = 0; i < h_grid.size(); ++i) {
        const double h = h_grid[i];
        if (!(h > 0) || h >= g.max_tube_radius)
            throw std::invalid_argument("minkowski_content_fit: grid must lie below the tube radius");
        A(static_cast<Eigen::Index>(i), 0) = h;
        A(static_cast<Eigen::Index>(i), 1) = h * h;
        y(static_cast<Eigen::Index>(i)) = tube_volume(domain, h).value;
    }
    const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd r = A * coef - y;
    return {coef(0), coef(1), r.cwiseAbs().maxCoeff()};
}

double curvature_ratio_max(const Domain& domain) {
    validate(domain);
    const GeometricSummary g = summarize(domain);
    const double hbar = g.max_tube_radius;
    auto ratio_for = [hbar](double kappa) {
        // |h k / (1 - h k)| is increasing in h on [0, hbar/2] for either sign.
        double best = 0;
        const int samples = 64;
        for (int i = 0; i <= samples; ++i) {
            const double h = 0.5 * hbar * i / samples;
            const double den = 1.0 - h * kappa;
            if (std::abs(den) < 1e-12) continue;
            best = std::max(best, std::abs(h * kappa / den));
        }
        return best;
    };
    if (const auto* d = std::get_if<Disk>(&domain)) return ratio_for(1.0 / d->radius);
    if (const auto* a = std::get_if<Annulus>(&domain))
        return std::max(ratio_for(1.0 / a->r_out), ratio_for(-1.0 / a->r_in));
    if (const auto* c = std::get_if<SmoothCurve>(&domain)) {
        const auto cg = curve_geometry(*c);
        double best = 0;
        for (double k : cg.curvature) best = std::max(best, ratio_for(k));
        return best;
    }
    throw std::invalid_argument("curvature_ratio_max: domain has no curvature (polygon/box)");
}

double neumann_z0_threshold(const Domain& domain) {
    const double m = curvature_ratio_max(domain);  // validates domain class
    const GeometricSummary g = summarize(domain);
    const double hbar = g.max_tube_radius;
    return std::max(1.0 / (hbar * hbar), (4.0 / 9.0) * m * m);
}

}  // namespace spb::geom
