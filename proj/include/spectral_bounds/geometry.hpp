#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace spb::geom {

/// Axis-aligned box in R^d, d >= 1.
struct Box {
    int dim = 2;
    std::vector<double> lengths;
};

struct Disk {
    double radius = 1.0;
};

struct Annulus {
    double r_in = 1.0;
    double r_out = 2.0;
};

/// Simple polygon, vertices in counter-clockwise order.
struct Polygon {
    std::vector<Eigen::Vector2d> vertices;
};

/// One row of a sampled closed C^2 curve: parameter, position and the first
/// two derivatives with respect to the parameter.
struct CurvePoint {
    double t = 0, x = 0, y = 0, xp = 0, yp = 0, xpp = 0, ypp = 0;
};

/// Closed C^2 boundary curve given as a sample table on a uniform parameter
/// grid over one period (the closing sample is implicit), positively oriented.
struct SmoothCurve {
    std::vector<CurvePoint> samples;
};

using Domain = std::variant<Box, Disk, Annulus, Polygon, SmoothCurve>;

SmoothCurve make_ellipse(double a, double b, int n = 2048);

/// Domain-class tags consumed by the bound evaluators.
struct ClassTags {
    bool convex = false;
    bool class_s = true;  // every built-in domain has Lipschitz boundary
    bool c2 = false;
    bool mean_convex = false;
    bool planar = false;
    bool polygon = false;
};

struct FieldExact {
    bool volume = true;
    bool boundary = true;
    bool inradius = true;
    bool tube_radius = true;
    bool curvature = true;
};

struct GeometricSummary {
    int dim = 2;
    double volume = 0;
    double boundary_measure = 0;
    double inradius = 0;
    /// Maximal tubular radius: unique-nearest-point radius for C^2-type
    /// boundaries, the bisector-intersection radius for polygons, and the
    /// inradius as a fallback (boxes with d >= 3, degenerate polygons).
    double max_tube_radius = 0;
    int boundary_components = 1;
    bool has_angle_sums = false;
    double angle_sum_convex = 0;  // sum of cot(alpha_i/2) over angles in (0,pi)
    double angle_sum_reflex = 0;  // sum of (beta_i-pi)/2 over angles in (pi,2pi)
    /// I_j = integral of (mean curvature)^j over the boundary, j = 1..d-1.
    /// Empty when curvature is unavailable (polygons, boxes).
    std::vector<double> curvature_integrals;
    /// Set when every bisector intersection fell outside the polygon and the
    /// tube radius fell back to the inradius.
    bool tube_radius_fallback = false;
    ClassTags tags;
    FieldExact exact;
};

/// Throws std::invalid_argument when the domain violates its type invariants
/// (non-positive lengths, non-simple or clockwise polygon, open or irregular
/// curve, r_in >= r_out).
void validate(const Domain& domain);

GeometricSummary summarize(const Domain& domain);

struct TubeEstimate {
    double value = 0;
    double std_error = 0;  // 0 on the closed-form path
    bool exact = true;
};

/// Volume of the inner tube { x in Omega : dist(x, boundary) <= h }.
/// Closed forms for boxes, disks, annuli, polygons below their bisector
/// radius and smooth curves below the tubular radius; stratified Monte-Carlo
/// fallback otherwise (deterministic for a fixed seed).
TubeEstimate tube_volume(const Domain& domain, double h, std::uint64_t seed = 42);

/// Width of the domain in direction v (a unit vector of size dim):
/// sup { v . (x - y) : x, y in Omega }.
double direction_width(const Domain& domain, const std::vector<double>& v);

struct MinkowskiFit {
    double slope = 0;            // coefficient of h; estimates |bd Omega|
    double curvature_coeff = 0;  // coefficient of h^2
    double max_residual = 0;
};

/// Least-squares fit of |omega_h| ~ c1 h + c2 h^2 over a strictly decreasing
/// grid of tube widths below the maximal tube radius.
MinkowskiFit minkowski_content_fit(const Domain& domain, const std::vector<double>& h_grid);

/// max over boundary points x and h in [0, hbar/2] of |h k(x) / (1 - h k(x))|,
/// the curvature ratio entering the Neumann spectral-function thresholds.
/// Requires curvature (Disk, Annulus, SmoothCurve), d = 2.
double curvature_ratio_max(const Domain& domain);

/// z0 = max{ hbar^{-2}, (4/9) curvature_ratio_max^2 }.
double neumann_z0_threshold(const Domain& domain);

// Polygon helpers shared with the mesher and the tests.
double polygon_area(const std::vector<Eigen::Vector2d>& vertices);
double polygon_perimeter(const std::vector<Eigen::Vector2d>& vertices);
bool point_in_polygon(const std::vector<Eigen::Vector2d>& vertices, const Eigen::Vector2d& p);
double distance_to_polygon_boundary(const std::vector<Eigen::Vector2d>& vertices,
                                    const Eigen::Vector2d& p);

}  // namespace spb::geom
