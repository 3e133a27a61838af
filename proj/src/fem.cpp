#include "spectral_bounds/fem.hpp"

#include "spectral_bounds/spectra.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace spb::fem {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

}  // namespace

Assembled assemble_p1(const mesh::Mesh& mesh, bool dirichlet) {
    const int nv = static_cast<int>(mesh.vertices.size());
    std::vector<int> dof(static_cast<std::size_t>(nv), -1);
    int ndof = 0;
    for (int i = 0; i < nv; ++i)
        if (!dirichlet || !mesh.on_boundary[static_cast<std::size_t>(i)])
            dof[static_cast<std::size_t>(i)] = ndof++;
    if (ndof == 0) throw std::runtime_error("fem: no degrees of freedom");

    std::vector<Triplet> kt, mt;
    kt.reserve(mesh.triangles.size() * 9);
    mt.reserve(mesh.triangles.size() * 9);
    for (const auto& t : mesh.triangles) {
        const Eigen::Vector2d& a = mesh.vertices[static_cast<std::size_t>(t[0])];
        const Eigen::Vector2d& b = mesh.vertices[static_cast<std::size_t>(t[1])];
        const Eigen::Vector2d& c = mesh.vertices[static_cast<std::size_t>(t[2])];
        const double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
        const double area = 0.5 * std::abs(det);
        if (area <= 0) throw std::runtime_error("fem: degenerate triangle");
        // Gradients of the barycentric hat functions.
        const Eigen::Vector2d grads[3] = {
            Eigen::Vector2d(b.y() - c.y(), c.x() - b.x()) / det,
            Eigen::Vector2d(c.y() - a.y(), a.x() - c.x()) / det,
            Eigen::Vector2d(a.y() - b.y(), b.x() - a.x()) / det,
        };
        for (int i = 0; i < 3; ++i) {
            const int di = dof[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])];
            if (di < 0) continue;
            for (int j = 0; j < 3; ++j) {
                const int dj = dof[static_cast<std::size_t>(t[static_cast<std::size_t>(j)])];
                if (dj < 0) continue;
                kt.emplace_back(di, dj, area * grads[i].dot(grads[j]));
                mt.emplace_back(di, dj, (i == j ? area / 6.0 : area / 12.0));
            }
        }
    }
    Assembled out;
    out.stiffness.resize(ndof, ndof);
    out.mass.resize(ndof, ndof);
    out.stiffness.setFromTriplets(kt.begin(), kt.end());
    out.mass.setFromTriplets(mt.begin(), mt.end());
    return out;
}

std::vector<double> lowest_eigenvalues(const SpMat& K, const SpMat& M, int count, double sigma,
                                       double tol) {
    const int n = static_cast<int>(K.rows());
    if (count < 1 || count > n) throw std::invalid_argument("fem: bad eigenvalue count");

    if (n <= 400) {
        Eigen::MatrixXd Kd(K), Md(M);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kd, Md);
        if (es.info() != Eigen::Success) throw std::runtime_error("fem: dense eigensolver failed");
        std::vector<double> vals(es.eigenvalues().data(), es.eigenvalues().data() + count);
        return vals;
    }

    // Shift-invert Lanczos on Op = (K - sigma M)^{-1} M in the M-inner product.
    SpMat A = K - sigma * M;
    Eigen::SimplicialLDLT<SpMat> solver(A);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("fem: factorization of shifted operator failed");

    const int m = std::min(n, std::max(2 * count + 30, 60));
    Eigen::MatrixXd Q(n, m + 1);
    Eigen::VectorXd alpha(m), beta(m + 1);
    beta(0) = 0;

    std::mt19937_64 rng(20240711);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd q(n);
    for (int i = 0; i < n; ++i) q(i) = gauss(rng);
    auto m_dot = [&M](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        return x.dot(M * y);
    };
    q /= std::sqrt(m_dot(q, q));
    Q.col(0) = q;

    int steps = 0;
    std::vector<double> converged;
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd w = solver.solve(M * Q.col(j));
        alpha(j) = m_dot(w, Q.col(j));
        w -= alpha(j) * Q.col(j);
        if (j > 0) w -= beta(j) * Q.col(j - 1);
        // Full reorthogonalization in the M-inner product, applied twice.
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i <= j; ++i) w -= m_dot(w, Q.col(i)) * Q.col(i);
        beta(j + 1) = std::sqrt(std::max(m_dot(w, w), 0.0));
        steps = j + 1;
        if (beta(j + 1) < 1e-14) break;
        Q.col(j + 1) = w / beta(j + 1);

        if (j + 1 >= count + 2 || j + 1 == m) {
            // Ritz values of the tridiagonal section; residual from the last
            // component of the Ritz vector.
            const int s = j + 1;
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(s, s);
            for (int i = 0; i < s; ++i) {
                T(i, i) = alpha(i);
                if (i + 1 < s) T(i, i + 1) = T(i + 1, i) = beta(i + 1);
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> te(T);
            // Largest theta correspond to eigenvalues nearest the shift.
            std::vector<std::pair<double, int>> thetas;
            for (int i = 0; i < s; ++i) thetas.push_back({te.eigenvalues()(i), i});
            std::sort(thetas.begin(), thetas.end(),
                      [](const auto& x, const auto& y) { return x.first > y.first; });
            converged.clear();
            bool all_ok = thetas.size() >= static_cast<std::size_t>(count);
            for (int i = 0; i < count && all_ok; ++i) {
                const double theta = thetas[static_cast<std::size_t>(i)].first;
                const int col = thetas[static_cast<std::size_t>(i)].second;
                const double resid = std::abs(beta(s) * te.eigenvectors()(s - 1, col));
                const double lam = sigma + 1.0 / theta;
                if (resid > tol * std::max(std::abs(theta), 1e-30) * 10.0 + tol)
                    all_ok = false;
                else
                    converged.push_back(lam);
            }
            if (all_ok && static_cast<int>(converged.size()) == count) {
                std::sort(converged.begin(), converged.end());
                return converged;
            }
        }
    }
    // Final attempt with whatever Krylov space we have.
    const int s = steps;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(s, s);
    for (int i = 0; i < s; ++i) {
        T(i, i) = alpha(i);
        if (i + 1 < s) T(i, i + 1) = T(i + 1, i) = beta(i + 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> te(T);
    std::vector<double> lams;
    for (int i = 0; i < s; ++i) {
        const double theta = te.eigenvalues()(i);
        if (theta != 0) lams.push_back(sigma + 1.0 / theta);
    }
    std::sort(lams.begin(), lams.end());
    std::vector<double> keep;
    for (double l : lams)
        if (l >= sigma) keep.push_back(l);
    if (static_cast<int>(keep.size()) < count)
        throw std::runtime_error("fem: Lanczos failed to converge the requested eigenvalues");
    keep.resize(static_cast<std::size_t>(count));
    return keep;
}

}  // namespace spb::fem

namespace spb::spectra {

Spectrum fem_spectrum(const geom::Polygon& polygon, Bc bc, int count, const FemOptions& opts) {
    if (count < 1) throw std::invalid_argument("fem_spectrum: count must be >= 1");
    if (opts.refinements < 2)
        throw std::invalid_argument("fem_spectrum: need at least 2 refinement levels");
    const double max_area = std::sqrt(3.0) / 4.0 * opts.target_h * opts.target_h;
    std::vector<mesh::Mesh> levels;
    levels.push_back(mesh::triangulate_polygon(polygon, max_area, opts.min_angle_deg));
    for (int l = 1; l < opts.refinements; ++l) levels.push_back(mesh::refine_uniform(levels.back()));

    std::vector<std::vector<double>> per_level;
    for (const auto& m : levels) {
        const auto sys = fem::assemble_p1(m, bc == Bc::dirichlet);
        const double sigma = (bc == Bc::dirichlet) ? 0.0 : -1.0;
        per_level.push_back(fem::lowest_eigenvalues(sys.stiffness, sys.mass, count, sigma));
    }

    const auto& fine = per_level.back();
    Spectrum s;
    s.bc = bc;
    s.source = Source::fem;
    s.values.resize(static_cast<std::size_t>(count));
    s.error_bounds.resize(static_cast<std::size_t>(count));
    const int L = static_cast<int>(per_level.size());
    for (int i = 0; i < count; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        const double lh = fine[si];
        const double l2h = per_level[static_cast<std::size_t>(L - 2)][si];
        double rate = 2.0;
        if (L >= 3) {
            const double l4h = per_level[static_cast<std::size_t>(L - 3)][si];
            const double num = l4h - l2h, den = l2h - lh;
            if (den != 0 && num / den > 0) rate = std::clamp(std::log2(num / den), 0.5, 4.0);
        }
        const double corr = (lh - l2h) / (std::pow(2.0, rate) - 1.0);
        s.values[si] = lh + corr;
        s.error_bounds[si] = std::abs(corr) + 1e-12 * std::abs(lh);
    }
    if (bc == Bc::neumann) {
        // The constant mode is exact; snap it when it is resolved as tiny.
        const double scale = std::abs(s.values.back()) + 1.0;
        if (std::abs(s.values[0]) < std::max(1e-8 * scale, 4.0 * s.error_bounds[0])) {
            s.error_bounds[0] = std::max(s.error_bounds[0], std::abs(s.values[0]));
            s.values[0] = 0.0;
        }
    }
    std::sort(s.values.begin(), s.values.end());
    return s;
}

}  // namespace spb::spectra
