#pragma once

#include "spectral_bounds/bounds.hpp"
#include "spectral_bounds/riesz.hpp"
#include "spectral_bounds/spectra.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spb::verify {

struct Record {
    std::string theorem_id;
    std::string query_kind;  // "k", "z", "t" or "const"
    double query = 0;
    double bound = 0;
    double reference = 0;
    double margin = 0;  // signed slack in the bound's favourable direction
    bool applicable = true;
    bool pass = false;
    bool inconclusive = false;  // violation within the reference uncertainty
    std::string note;
};

struct Summary {
    int total = 0;
    int passed = 0;
    int failed = 0;
    int inapplicable = 0;
    int inconclusive = 0;
    double worst_margin = 0;
};

struct AsymptoticFitResult {
    std::string theorem_id;
    double estimate = 0;
    double prediction = 0;
    double deviation = 0;
};

struct Report {
    std::string domain_desc;
    std::string bc;
    std::string spectrum_source;
    std::vector<Record> records;
    Summary summary;
    std::vector<AsymptoticFitResult> fits;
};

struct GridSpec {
    std::vector<int> ks;
    std::vector<double> zs;
    std::vector<double> ts;
};

struct VerifyOptions {
    int spectrum_count = 600;
    std::uint64_t seed = 42;
    double rel_slack = 1e-9;
    std::vector<double> phi_h = {0.05, 0.1, 0.2};
    std::optional<spectra::FemOptions> fem_opts;  // polygons default otherwise
    bool with_fits = true;
};

/// Theorem ids applicable to each boundary condition.
std::vector<std::string> all_theorem_ids(spectra::Bc bc);

/// k log-spaced over [1, count*5/6], z log-spaced over the spectrum range,
/// t log-spaced over inradius^2 * [1e-4, 1].
GridSpec default_grid(const geom::GeometricSummary& g, int spectrum_count);

Report verify_domain(const geom::Domain& domain, spectra::Bc bc,
                     const std::vector<std::string>& theorem_ids, const GridSpec& grid,
                     const VerifyOptions& opts);

/// Evaluate one theorem's remainder against its predicted large-k behaviour.
AsymptoticFitResult asymptotic_fit(const std::string& theorem_id, const geom::Domain& domain,
                                   double k_lo, double k_hi, int points = 24);

// -- Finite-dimensional averaged variational principle -------------------------

struct TightFrame {
    Eigen::MatrixXd vectors;  // rows are the frame vectors f_xi
    Eigen::VectorXd weights;  // mu(xi) > 0
    double frame_constant = 1.0;
};

/// Random tight frame of m >= n weighted vectors in R^n; the tight-frame
/// identity is enforced by construction and verified to 1e-10.
TightFrame make_random_tight_frame(int n, int m, std::uint64_t seed);

TightFrame make_eigenbasis_frame(int n);

Eigen::MatrixXd random_psd_matrix(int n, std::uint64_t seed);

struct AvpCheckResult {
    double lhs = 0;  // sum_{j<=k} (lambda_{k+1}-lambda_j) int |<f,u_j>|^2 dmu
    double rhs = 0;  // int (lambda_{k+1}|f|^2 - Q(f,f)) dmu0, positive-part set
    bool pass = false;
    double worst_riesz_margin = 0;  // min over sampled z of R1(z) - (1/C)int(...)_+
    bool riesz_pass = false;
};

AvpCheckResult avp_finite_check(const Eigen::MatrixXd& Q, const TightFrame& frame, int k);

AvpCheckResult avp_finite_check_seeded(std::uint64_t seed, int n, int k, int frame_size);

}  // namespace spb::verify
