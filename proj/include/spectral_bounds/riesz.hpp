#pragma once

#include "spectral_bounds/spectra.hpp"

#include <variant>
#include <vector>

namespace spb::riesz {

struct RieszMean {
    double z = 0;
    double sigma = 1.0;
};
struct Average {
    int k = 1;
};
struct Counting {
    double lambda = 0;
};
struct Partition {
    double t = 1.0;
};
struct Legendre {
    double w = 1.0;
};

using SpectralQuery = std::variant<RieszMean, Average, Counting, Partition, Legendre>;

struct EvalResult {
    double value = 0;
    /// Estimated spectral tail for Partition queries (Weyl-model fit over the
    /// top decile of the available eigenvalues); reported, never added.
    double truncation_bound = 0;
};

/// R_sigma(z), partial averages, counting function, heat trace with reported
/// truncation, and the piecewise-linear Legendre transform of R_1.
/// Throws when the spectrum is incomplete for the requested cutoff.
EvalResult evaluate(const spectra::Spectrum& spectrum, const SpectralQuery& query);

/// Max over the grid of |numeric conjugate sup_z(wz - R_1(z)) - closed form|.
double legendre_identity_check(const spectra::Spectrum& spectrum,
                               const std::vector<double>& w_grid);

}  // namespace spb::riesz
