#pragma once

#include "spectral_bounds/geometry.hpp"

#include <string>
#include <vector>

namespace spb::spectra {

enum class Bc { dirichlet, neumann };

enum class Source { analytic, fem, user };

struct Spectrum {
    Bc bc = Bc::dirichlet;
    std::vector<double> values;        // sorted nondecreasing, with multiplicity
    std::vector<double> error_bounds;  // per-value, 0 for analytic
    Source source = Source::analytic;

    int count() const { return static_cast<int>(values.size()); }
};

/// Closed-form spectra: separation of variables for boxes, Bessel zeros for
/// disks, Bessel cross-product zeros for annuli. The enumeration cutoff is
/// grown until at least count+1 eigenvalues lie strictly below it, so the
/// first `count` returned values are complete.
Spectrum analytic_spectrum(const geom::Domain& domain, Bc bc, int count);

struct FemOptions {
    double target_h = 0.1;
    int refinements = 3;  // mesh levels used for Richardson extrapolation
    double min_angle_deg = 25.0;
};

/// P1 finite elements on a Delaunay-refined triangulation of the polygon;
/// shift-invert Lanczos for the lowest eigenpairs; Richardson extrapolation
/// across uniformly refined levels fills error_bounds.
Spectrum fem_spectrum(const geom::Polygon& polygon, Bc bc, int count, const FemOptions& opts);

/// Exact heat trace of a box via Jacobi theta products (reference oracle).
double exact_heat_trace_box(const geom::Box& box, Bc bc, double t);

std::string to_string(Bc bc);
std::string to_string(Source s);

}  // namespace spb::spectra
