#include "spectral_bounds/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace spb::mesh {

namespace {

using Eigen::Vector2d;

double orient2d(const Vector2d& a, const Vector2d& b, const Vector2d& c) {
    const long double acx = static_cast<long double>(a.x()) - c.x();
    const long double acy = static_cast<long double>(a.y()) - c.y();
    const long double bcx = static_cast<long double>(b.x()) - c.x();
    const long double bcy = static_cast<long double>(b.y()) - c.y();
    return static_cast<double>(acx * bcy - acy * bcx);
}

/// > 0 when p lies strictly inside the circumcircle of the CCW triangle abc.
double incircle(const Vector2d& a, const Vector2d& b, const Vector2d& c, const Vector2d& p) {
    const long double adx = a.x() - p.x(), ady = a.y() - p.y();
    const long double bdx = b.x() - p.x(), bdy = b.y() - p.y();
    const long double cdx = c.x() - p.x(), cdy = c.y() - p.y();
    const long double ad = adx * adx + ady * ady;
    const long double bd = bdx * bdx + bdy * bdy;
    const long double cd = cdx * cdx + cdy * cdy;
    const long double det = adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) +
                            ad * (bdx * cdy - bdy * cdx);
    return static_cast<double>(det);
}

Vector2d circumcenter(const Vector2d& a, const Vector2d& b, const Vector2d& c) {
    const Vector2d ab = b - a, ac = c - a;
    const double d = 2.0 * (ab.x() * ac.y() - ab.y() * ac.x());
    const double ab2 = ab.squaredNorm(), ac2 = ac.squaredNorm();
    const double ux = (ac.y() * ab2 - ab.y() * ac2) / d;
    const double uy = (ab.x() * ac2 - ac.x() * ab2) / d;
    return a + Vector2d(ux, uy);
}

struct Triangulation {
    std::vector<Vector2d> pts;
    std::vector<std::array<int, 3>> tris;
    std::vector<char> alive;
    std::vector<std::pair<int, int>> segments;  // boundary subsegments
    std::vector<char> boundary_flag;            // per point

    int add_point(const Vector2d& p, bool on_bd) {
        pts.push_back(p);
        boundary_flag.push_back(on_bd ? 1 : 0);
        return static_cast<int>(pts.size()) - 1;
    }

    void add_triangle(int a, int b, int c) {
        if (orient2d(pts[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(b)],
                     pts[static_cast<std::size_t>(c)]) < 0)
            std::swap(b, c);
        tris.push_back({a, b, c});
        alive.push_back(1);
    }

    /// Bowyer-Watson insertion: remove every triangle whose circumcircle
    /// contains p, fan new triangles from p over the cavity boundary.
    bool insert(const Vector2d& p, bool on_bd, int* out_index = nullptr) {
        std::vector<std::size_t> cavity;
        for (std::size_t t = 0; t < tris.size(); ++t) {
            if (!alive[t]) continue;
            const auto& tr = tris[t];
            if (incircle(pts[static_cast<std::size_t>(tr[0])],
                         pts[static_cast<std::size_t>(tr[1])],
                         pts[static_cast<std::size_t>(tr[2])], p) > 0)
                cavity.push_back(t);
        }
        if (cavity.empty()) return false;
        // Boundary edges of the cavity appear exactly once.
        std::map<std::pair<int, int>, int> edge_count;
        for (std::size_t t : cavity)
            for (int e = 0; e < 3; ++e) {
                const int u = tris[t][static_cast<std::size_t>(e)];
                const int v = tris[t][static_cast<std::size_t>((e + 1) % 3)];
                edge_count[{std::min(u, v), std::max(u, v)}]++;
            }
        std::vector<std::pair<int, int>> border;
        for (std::size_t t : cavity)
            for (int e = 0; e < 3; ++e) {
                const int u = tris[t][static_cast<std::size_t>(e)];
                const int v = tris[t][static_cast<std::size_t>((e + 1) % 3)];
                if (edge_count[{std::min(u, v), std::max(u, v)}] == 1) border.push_back({u, v});
            }
        // Reject insertions that would create degenerate triangles.
        for (const auto& [u, v] : border)
            if (std::abs(orient2d(pts[static_cast<std::size_t>(u)],
                                  pts[static_cast<std::size_t>(v)], p)) < 1e-300)
                return false;
        for (std::size_t t : cavity) alive[t] = 0;
        const int pi = add_point(p, on_bd);
        for (const auto& [u, v] : border) add_triangle(u, v, pi);
        if (out_index) *out_index = pi;
        return true;
    }

    bool encroached(const std::pair<int, int>& seg, const Vector2d& p) const {
        const Vector2d& a = pts[static_cast<std::size_t>(seg.first)];
        const Vector2d& b = pts[static_cast<std::size_t>(seg.second)];
        const Vector2d mid = 0.5 * (a + b);
        const double r2 = (a - mid).squaredNorm();
        return (p - mid).squaredNorm() < r2 * (1.0 - 1e-12);
    }

    int find_encroached_segment() const {
        for (std::size_t s = 0; s < segments.size(); ++s) {
            for (std::size_t q = 0; q < pts.size(); ++q) {
                const int qi = static_cast<int>(q);
                if (qi == segments[s].first || qi == segments[s].second) continue;
                if (encroached(segments[s], pts[q])) return static_cast<int>(s);
            }
        }
        return -1;
    }

    void split_segment(int s) {
        const auto seg = segments[static_cast<std::size_t>(s)];
        const Vector2d mid = 0.5 * (pts[static_cast<std::size_t>(seg.first)] +
                                    pts[static_cast<std::size_t>(seg.second)]);
        int mi = -1;
        if (!insert(mid, true, &mi))
            throw std::runtime_error("mesh: failed to split boundary segment");
        segments[static_cast<std::size_t>(s)] = {seg.first, mi};
        segments.push_back({mi, seg.second});
    }
};

double triangle_area(const Vector2d& a, const Vector2d& b, const Vector2d& c) {
    return 0.5 * std::abs(orient2d(a, b, c));
}

double triangle_min_angle(const Vector2d& a, const Vector2d& b, const Vector2d& c) {
    const double la = (b - c).norm(), lb = (c - a).norm(), lc = (a - b).norm();
    auto angle = [](double opp, double s1, double s2) {
        const double cosv = std::clamp((s1 * s1 + s2 * s2 - opp * opp) / (2 * s1 * s2), -1.0, 1.0);
        return std::acos(cosv);
    };
    return std::min({angle(la, lb, lc), angle(lb, lc, la), angle(lc, la, lb)});
}

}  // namespace

double Mesh::min_angle_deg() const {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& t : triangles)
        worst = std::min(worst, triangle_min_angle(vertices[static_cast<std::size_t>(t[0])],
                                                   vertices[static_cast<std::size_t>(t[1])],
                                                   vertices[static_cast<std::size_t>(t[2])]));
    return worst * 180.0 / std::numbers::pi;
}

double Mesh::max_triangle_area() const {
    double worst = 0;
    for (const auto& t : triangles)
        worst = std::max(worst, triangle_area(vertices[static_cast<std::size_t>(t[0])],
                                              vertices[static_cast<std::size_t>(t[1])],
                                              vertices[static_cast<std::size_t>(t[2])]));
    return worst;
}

Mesh triangulate_polygon(const geom::Polygon& polygon, double max_area, double min_angle_deg) {
    geom::validate(geom::Domain{polygon});
    if (!(max_area > 0)) throw std::invalid_argument("mesh: max_area must be positive");
    const auto& v = polygon.vertices;
    const int n = static_cast<int>(v.size());

    Triangulation tr;
    Vector2d lo = v[0], hi = v[0];
    for (const auto& p : v) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const double span = std::max(hi.x() - lo.x(), hi.y() - lo.y());
    const Vector2d mid = 0.5 * (lo + hi);
    // Super-triangle well outside the domain.
    tr.add_point(mid + Vector2d(-20 * span, -10 * span), false);
    tr.add_point(mid + Vector2d(20 * span, -10 * span), false);
    tr.add_point(mid + Vector2d(0, 20 * span), false);
    tr.add_triangle(0, 1, 2);

    for (int i = 0; i < n; ++i)
        if (!tr.insert(v[static_cast<std::size_t>(i)], true))
            throw std::runtime_error("mesh: failed to insert polygon vertex");
    // Polygon vertices were inserted in order right after the 3 super-vertices.
    for (int i = 0; i < n; ++i) tr.segments.push_back({3 + i, 3 + (i + 1) % n});

    const double min_angle = min_angle_deg * std::numbers::pi / 180.0;
    const std::size_t vertex_cap = 100000;

    auto interior = [&](std::size_t t) {
        const Vector2d c = (tr.pts[static_cast<std::size_t>(tr.tris[t][0])] +
                            tr.pts[static_cast<std::size_t>(tr.tris[t][1])] +
                            tr.pts[static_cast<std::size_t>(tr.tris[t][2])]) /
                           3.0;
        return geom::point_in_polygon(v, c);
    };

    for (int guard = 0; guard < 400000; ++guard) {
        const int enc = tr.find_encroached_segment();
        if (enc >= 0) {
            tr.split_segment(enc);
            continue;
        }
        if (tr.pts.size() >= vertex_cap) break;
        // Worst interior triangle: oversized first, then skinny.
        std::size_t worst = tr.tris.size();
        double worst_key = 0;
        for (std::size_t t = 0; t < tr.tris.size(); ++t) {
            if (!tr.alive[t] || !interior(t)) continue;
            const Vector2d& a = tr.pts[static_cast<std::size_t>(tr.tris[t][0])];
            const Vector2d& b = tr.pts[static_cast<std::size_t>(tr.tris[t][1])];
            const Vector2d& c = tr.pts[static_cast<std::size_t>(tr.tris[t][2])];
            const double area = triangle_area(a, b, c);
            const double ang = triangle_min_angle(a, b, c);
            double key = 0;
            if (area > max_area) key = 1e6 * (area / max_area);
            else if (ang < min_angle) key = (min_angle / std::max(ang, 1e-6));
            if (key > worst_key) {
                worst_key = key;
                worst = t;
            }
        }
        if (worst == tr.tris.size()) break;  // quality reached
        const auto& t = tr.tris[worst];
        const Vector2d cc = circumcenter(tr.pts[static_cast<std::size_t>(t[0])],
                                         tr.pts[static_cast<std::size_t>(t[1])],
                                         tr.pts[static_cast<std::size_t>(t[2])]);
        bool split_any = false;
        for (std::size_t s = 0; s < tr.segments.size(); ++s) {
            if (tr.encroached(tr.segments[s], cc)) {
                tr.split_segment(static_cast<int>(s));
                split_any = true;
                break;
            }
        }
        if (split_any) continue;
        if (!geom::point_in_polygon(v, cc) || !tr.insert(cc, false)) {
            // Circumcenter rejected (outside or degenerate); split the longest
            // edge's segment if possible, otherwise give up on this triangle.
            break;
        }
    }

    // Keep interior triangles, compact vertex indices.
    Mesh m;
    std::vector<int> remap(tr.pts.size(), -1);
    for (std::size_t t = 0; t < tr.tris.size(); ++t) {
        if (!tr.alive[t] || !interior(t)) continue;
        std::array<int, 3> out{};
        for (int e = 0; e < 3; ++e) {
            const int p = tr.tris[t][static_cast<std::size_t>(e)];
            if (remap[static_cast<std::size_t>(p)] < 0) {
                remap[static_cast<std::size_t>(p)] = static_cast<int>(m.vertices.size());
                m.vertices.push_back(tr.pts[static_cast<std::size_t>(p)]);
                m.on_boundary.push_back(tr.boundary_flag[static_cast<std::size_t>(p)]);
            }
            out[static_cast<std::size_t>(e)] = remap[static_cast<std::size_t>(p)];
        }
        m.triangles.push_back(out);
    }
    if (m.triangles.empty()) throw std::runtime_error("mesh: triangulation produced no triangles");
    return m;
}

Mesh refine_uniform(const Mesh& mesh) {
    Mesh out;
    out.vertices = mesh.vertices;
    out.on_boundary = mesh.on_boundary;

    // An edge is on the boundary iff it belongs to exactly one triangle.
    std::map<std::pair<int, int>, int> edge_use;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            const int u = t[static_cast<std::size_t>(e)], w = t[static_cast<std::size_t>((e + 1) % 3)];
            edge_use[{std::min(u, w), std::max(u, w)}]++;
        }
    std::map<std::pair<int, int>, int> midpoint;
    auto mid_index = [&](int u, int w) {
        const auto key = std::make_pair(std::min(u, w), std::max(u, w));
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int idx = static_cast<int>(out.vertices.size());
        out.vertices.push_back(0.5 * (mesh.vertices[static_cast<std::size_t>(u)] +
                                      mesh.vertices[static_cast<std::size_t>(w)]));
        out.on_boundary.push_back(edge_use[key] == 1 ? 1 : 0);
        midpoint[key] = idx;
        return idx;
    };
    for (const auto& t : mesh.triangles) {
        const int a = t[0], b = t[1], c = t[2];
        const int ab = mid_index(a, b), bc = mid_index(b, c), ca = mid_index(c, a);
        out.triangles.push_back({a, ab, ca});
        out.triangles.push_back({ab, b, bc});
        out.triangles.push_back({ca, bc, c});
        out.triangles.push_back({ab, bc, ca});
    }
    return out;
}

}  // namespace spb::mesh
