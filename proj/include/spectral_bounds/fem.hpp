#pragma once

#include "spectral_bounds/mesh.hpp"

#include <Eigen/SparseCore>

#include <vector>

namespace spb::fem {

struct Assembled {
    Eigen::SparseMatrix<double> stiffness;
    Eigen::SparseMatrix<double> mass;
};

/// P1 stiffness and mass matrices; Dirichlet eliminates boundary vertices,
/// Neumann keeps all degrees of freedom.
Assembled assemble_p1(const mesh::Mesh& mesh, bool dirichlet);

/// Lowest `count` eigenvalues of K x = lambda M x by shift-invert Lanczos at
/// the given shift with full reorthogonalization (dense fallback for small
/// problems). Residual tolerance is relative.
std::vector<double> lowest_eigenvalues(const Eigen::SparseMatrix<double>& K,
                                       const Eigen::SparseMatrix<double>& M, int count,
                                       double sigma, double tol = 1e-9);

}  // namespace spb::fem
