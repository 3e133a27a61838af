#pragma once

namespace spb::bessel {

/// J_nu(x), nu >= 0, x >= 0.
double cyl_j(double nu, double x);

/// Y_nu(x), nu >= 0, x > 0.
double cyl_y(double nu, double x);

/// d/dx J_nu(x).
double cyl_j_prime(double nu, double x);

/// d/dx Y_nu(x).
double cyl_y_prime(double nu, double x);

enum class ZeroKind { J, JPrime };

/// k-th positive zero of J_nu or J_nu', to relative tolerance 1e-12.
/// Bracketed by a scan started below the first zero, then bisection with a
/// secant polish. For nu = 0 the JPrime zeros are the positive zeros of J_0'
/// (the value x = 0 is not counted; the spectra module handles the constant
/// Neumann mode separately).
double zero(double nu, int k, ZeroKind kind);

struct Lambda1Ball {
    double lambda1 = 0;   // first Dirichlet eigenvalue of the unit ball in R^d
    double j_at_sqrt = 0; // J_{d/2} evaluated at sqrt(lambda1)
};

Lambda1Ball lambda1_ball(int d);

}  // namespace spb::bessel
