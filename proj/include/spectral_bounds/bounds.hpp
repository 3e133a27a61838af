#pragma once

#include "spectral_bounds/geometry.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace spb::bounds {

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// Semiclassical constant C_d = 4 pi^2 omega_d^{-2/d}, d >= 2.
double semiclassical_constant(int d);

/// Spectral-function constant c_d entering the Neumann C^2 bounds.
double neumann_cd_constant(int d);

enum class Side { upper, lower };
enum class Functional { average, riesz1, partition, single, lambda1, mu };

struct BoundResult {
    std::string theorem_id;
    Side side = Side::upper;
    Functional functional = Functional::average;
    double value = 0;
    bool applicable = true;
    double threshold = 0;  // numeric threshold on the query variable (k, z or t)
    std::string threshold_desc;
    std::vector<std::string> assumptions;
    std::string note;  // fallbacks and flagged open cases
};

struct TestFunctionNorms {
    double l2_sq = 0;
    double grad_l2_sq = 0;
    double sup = 1.0;

    double rho(double volume) const { return l2_sq / (volume * sup * sup); }
};

enum class PhiProfile { linear, sine };

/// Norms of the boundary cut-off family phi_h (1 away from the boundary,
/// profile f(dist/h) inside the tube). The L2 norm uses the conservative
/// lower bound |Omega| - |omega_h|.
TestFunctionNorms phi_family_norms(PhiProfile profile, double h, double volume,
                                   double tube_volume_at_h);

struct QRiesz {
    double z = 0;
};
struct QAverage {
    int k = 1;
};
struct QPartition {
    double t = 1;
};
struct QBracket {
    int k = 1;
    double avg_k = 0;
    std::optional<double> lambda_k;  // enables the Cor 2.3 hypothesis check
};
using Query = std::variant<QRiesz, QAverage, QPartition, QBracket>;

/// Geometric inputs shared by the bound evaluators.
struct GeomInputs {
    int d = 2;
    double volume = 0;
    double boundary = 0;
    double inradius = 0;
    double tube_radius = 0;  // hbar or htilde
    int boundary_components = 1;
    bool has_angle_sums = false;
    double angle_sum_convex = 0;
    double angle_sum_reflex = 0;
    std::vector<double> curvature_integrals;
    geom::ClassTags tags;
};

GeomInputs from_summary(const geom::GeometricSummary& g);

using TubeFn = std::function<double(double)>;

struct Semiclassical {
    double constant = 0;           // C_d
    double one_term_average = 0;   // (d/(d+2)) C_d (k/V)^{2/d}
    double boundary_coefficient = 0;  // C_d^{(d+1)/2} / (2(d+1) C_{d-1}^{(d-1)/2})
    double two_term_dirichlet = 0;    // reference curve, not a bound
    double two_term_neumann = 0;
};

Semiclassical semiclassical(int d, double volume, double boundary, double k);

// -- General-domain bounds driven by a test function ------------------------

std::vector<BoundResult> dirichlet_avp(const TestFunctionNorms& phi, double volume, int d,
                                       const Query& query);

// -- Inradius bounds ---------------------------------------------------------

std::vector<BoundResult> dirichlet_inradius(const Query& query, double lambda1, double inradius,
                                            double volume, int d, bool convex);

BoundResult lambda1_upper_inradius(double inradius, int d);
BoundResult lambda1_lower_protter(double inradius, bool convex);
BoundResult lambda1_upper_convex(const GeomInputs& g);

// -- Convex domains ----------------------------------------------------------

std::vector<BoundResult> dirichlet_convex(const Query& query, const GeomInputs& g);
BoundResult dirichlet_convex_riesz_alpha(double z, double alpha, const GeomInputs& g);

// -- Class-S domains (Minkowski content equals the boundary measure) ---------

std::vector<BoundResult> dirichlet_class_s(const Query& query, const GeomInputs& g,
                                           const TubeFn& tube);

// -- C^2 domains --------------------------------------------------------------

double c2_remainder(double k, const GeomInputs& g);
double c2_remainder_limit(const GeomInputs& g);
std::vector<BoundResult> dirichlet_c2(const Query& query, const GeomInputs& g);
std::vector<BoundResult> dirichlet_mean_convex(const Query& query, const GeomInputs& g);

// -- Planar domains ------------------------------------------------------------

enum class PlanarCase { c2_general, c2_two_components, convex, polygon };

double planar_remainder(PlanarCase c, double k, const GeomInputs& g);
double planar_remainder_limit(PlanarCase c, const GeomInputs& g);
std::vector<BoundResult> dirichlet_planar(PlanarCase c, const Query& query, const GeomInputs& g,
                                          double alpha = 0.5);

// -- Neumann bounds -------------------------------------------------------------

struct NeumannExtras {
    std::optional<double> mu_next;  // mu_{k+1} for the refined Kroger record
    std::optional<double> avg_k;    // running average for the bracket
    std::optional<double> width;    // delta_v for the two-term Riesz bound
};

std::vector<BoundResult> neumann_classical(const Query& query, double volume, int d,
                                           const NeumannExtras& extras);

BoundResult neumann_two_term_riesz(double z, double volume, double width, int d);

std::vector<BoundResult> neumann_c2(const Query& query, const GeomInputs& g, double z0,
                                    double curvature_ratio, const TubeFn& tube);

// -- Pointwise spectral function ---------------------------------------------

struct SpectralFunctionBound {
    double leading = 0;
    double correction = 0;
    double total = 0;
};

SpectralFunctionBound spectral_function_bound(double mu, double delta, int d);

// -- Generalized Berezin-Li-Yau (appendix) -------------------------------------

BoundResult bly_generalized(double sum_grad, double sum_mass, double phi_l2_sq, int d,
                            std::optional<double> radius = std::nullopt);

// -- Single eigenvalues from averages (appendix) --------------------------------

struct SingleFromAverages {
    BoundResult lower_k;    // lower bound on lambda_k
    BoundResult upper_k1;   // upper bound on lambda_{k+1}
    double modulus_bound = 0;
    int window = 0;  // l = round(k^{1 - 1/(2d)})
};

SingleFromAverages single_from_averages(int k, double A, double B, int k0, int d, double volume);

// -- Remark-level identities used by the acceptance suite -----------------------

struct SlabIdentity {
    double lhs = 0;  // pi^2: first Dirichlet eigenvalue of the unit interval
    double rhs = 0;  // 4 |dOmega'|^2 / |Omega'|^2 = 16 for Omega' = (0,1)
};

SlabIdentity rectangle_slab_identity();

/// Ratio of the proved second-term coefficient to the semiclassical one,
/// class-S route (Thm on Minkowski-regular domains).
double second_term_ratio_class_s(int d);

/// Same ratio for the convex Riesz-mean route.
double second_term_ratio_convex(int d);

}  // namespace spb::bounds
