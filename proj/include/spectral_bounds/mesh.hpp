#pragma once

#include "spectral_bounds/geometry.hpp"

#include <array>
#include <vector>

namespace spb::mesh {

struct Mesh {
    std::vector<Eigen::Vector2d> vertices;
    std::vector<std::array<int, 3>> triangles;  // CCW
    std::vector<char> on_boundary;              // per vertex

    double min_angle_deg() const;
    double max_triangle_area() const;
};

/// Delaunay triangulation of the polygon followed by Ruppert-style
/// refinement: encroached boundary subsegments are split at their midpoints,
/// skinny or oversized interior triangles by circumcenter insertion.
/// Boundary vertices lie exactly on the polygon edges.
Mesh triangulate_polygon(const geom::Polygon& polygon, double max_area,
                         double min_angle_deg = 25.0);

/// Uniform 4-way refinement through edge midpoints; halves the mesh size h.
Mesh refine_uniform(const Mesh& mesh);

}  // namespace spb::mesh
