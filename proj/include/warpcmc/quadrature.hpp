#pragma once

#include <Eigen/Dense>

#include <functional>

namespace warpcmc {

/// Nodes and weights of a Gauss rule on [-1, 1], nodes ascending.
struct GaussRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

/// Three-term recurrence of the orthonormal polynomials for the weight
/// (1 - x^2)^alpha on [-1, 1]:  x p_k = b_{k+1} p_{k+1} + b_k p_{k-1}.
/// Entry k of the returned vector holds b_k (entry 0 unused).
Eigen::VectorXd symmetric_jacobi_recurrence(int count, double alpha);

/// Integral of (1 - x^2)^alpha over [-1, 1].
double symmetric_jacobi_mass(double alpha);

/// Orthonormal polynomials p_0..p_{count-1} for the weight (1 - x^2)^alpha
/// evaluated at x, together with first and second x-derivatives.
struct OrthoValues {
    Eigen::VectorXd p, dp, ddp;
};
OrthoValues symmetric_jacobi_values(int count, double alpha, double x);

/// Gauss rule for the weight (1 - x^2)^alpha (Gauss-Gegenbauer).  Nodes come
/// from the Jacobi matrix eigenproblem and are polished by Newton on p_n;
/// weights are Christoffel numbers 1 / sum p_k(x)^2.
GaussRule gauss_jacobi_symmetric(int n, double alpha);

inline GaussRule gauss_legendre(int n) { return gauss_jacobi_symmetric(n, 0.0); }

/// Composite Gauss-Legendre on [a, b] with `panels` equal panels.
double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, const GaussRule& rule);

} // namespace warpcmc
