#pragma once

#include "warpcmc/hypersurface.hpp"

#include <string>

namespace warpcmc {

enum class Verdict { equality, inequality_satisfied, violated };

std::string to_string(Verdict verdict);

struct IdentityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;           ///< lhs - rhs
    double relative_residual = 0.0;  ///< |residual| / max(|lhs|, |rhs|)
    Verdict verdict = Verdict::violated;
    double tolerance_used = 0.0;     ///< absolute
};

/// Identity lhs = rhs: equality within tol, violated otherwise.
IdentityReport judge_identity(std::string name, double lhs, double rhs, double relative_tol);
/// lhs <= rhs (sense = -1) or lhs >= rhs (sense = +1); equality within tol.
IdentityReport judge_inequality(std::string name, double lhs, double rhs, int sense, double relative_tol);

/// int H <X, nu> d mu = (n - 1) int f d mu.
IdentityReport minkowski_check(const GraphSurface& surface, double relative_tol = 1e-8);
IdentityReport minkowski_check(const GraphSurface& surface, const GeometryReport& report,
                               double relative_tol = 1e-8);

/// int (H / f) <X, nu> d mu <= (n - 1) mu(Sigma), for surfaces inside
/// N x (0, r1).  Throws HypothesisError when max rho >= r1.
IdentityReport minkowski_weighted_check(const GraphSurface& surface, double relative_tol = 1e-9);

/// The term (n-1) mu - int (H/f) <X, nu> d mu written as
/// int h'' h (1 - nu_r^2) / f^2 d mu.
double weighted_minkowski_gap(const GraphSurface& surface, const GeometryReport& report);

/// (n - 1) int f / H d mu >= n int_Omega f + h(0)^n vol(N) (boundary variant).
/// Throws HypothesisError when min H <= 0.
IdentityReport hk_check(const GraphSurface& surface, double relative_tol = 1e-9);
IdentityReport hk_check(const GraphSurface& surface, const GeometryReport& report, double relative_tol = 1e-9);

/// Divergence theorem for X: int <X, nu> d mu = n int_Omega f + h(0)^n vol(N).
IdentityReport divergence_check(const GraphSurface& surface, double relative_tol = 1e-9);

} // namespace warpcmc
