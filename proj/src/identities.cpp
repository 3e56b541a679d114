#include "warpcmc/identities.hpp"
#include "warpcmc/conditions.hpp"
#include "warpcmc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace warpcmc {

namespace {

double boundary_term(const WarpingFunction& w) {
    if (w.variant() == Variant::ball) return 0.0;
    return std::pow(w.eval(0.0).v, w.dimension()) * w.vol_N();
}

} // namespace

std::string to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::equality: return "equality";
    case Verdict::inequality_satisfied: return "inequality-satisfied";
    case Verdict::violated: return "violated";
    }
    return "unknown";
}

IdentityReport judge_identity(std::string name, double lhs, double rhs, double relative_tol) {
    IdentityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.residual = lhs - rhs;
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    r.relative_residual = scale > 0.0 ? std::abs(r.residual) / scale : 0.0;
    r.tolerance_used = relative_tol * scale;
    r.verdict = std::abs(r.residual) <= r.tolerance_used ? Verdict::equality : Verdict::violated;
    return r;
}

IdentityReport judge_inequality(std::string name, double lhs, double rhs, int sense, double relative_tol) {
    IdentityReport r = judge_identity(std::move(name), lhs, rhs, relative_tol);
    if (r.verdict == Verdict::equality) return r;
    r.verdict = sense * r.residual > 0.0 ? Verdict::inequality_satisfied : Verdict::violated;
    return r;
}

IdentityReport minkowski_check(const GraphSurface& surface, const GeometryReport& g, double relative_tol) {
    const int n = surface.ambient.dimension();
    const double lhs = integrate(surface, g, g.H.cwiseProduct(g.x_dot_nu));
    const double rhs = (n - 1) * integrate(surface, g, g.f);
    return judge_identity("minkowski", lhs, rhs, relative_tol);
}

IdentityReport minkowski_check(const GraphSurface& surface, double relative_tol) {
    return minkowski_check(surface, geometry(surface), relative_tol);
}

double weighted_minkowski_gap(const GraphSurface& surface, const GeometryReport& g) {
    Eigen::VectorXd density(g.H.size());
    for (Eigen::Index k = 0; k < density.size(); ++k) {
        const WarpingJet j = surface.ambient.eval(g.radius[k]);
        density[k] = j.d2 * j.v * (1.0 - g.nu_r[k] * g.nu_r[k]) / (j.d1 * j.d1);
    }
    return integrate(surface, g, density);
}

IdentityReport minkowski_weighted_check(const GraphSurface& surface, double relative_tol) {
    const double r1 = compute_r1(surface.ambient);
    if (!(surface.rho.maxCoeff() < r1))
        throw HypothesisError("weighted Minkowski inequality needs the surface inside N x (0, r1)");
    const GeometryReport g = geometry(surface);
    const int n = surface.ambient.dimension();
    const double lhs = integrate(surface, g, g.H.cwiseProduct(g.x_dot_nu).cwiseQuotient(g.f));
    return judge_inequality("minkowski-weighted", lhs, (n - 1) * g.area, -1, relative_tol);
}

IdentityReport hk_check(const GraphSurface& surface, const GeometryReport& g, double relative_tol) {
    if (!(g.min_H > 0.0)) throw HypothesisError("Heintze-Karcher inequality needs positive mean curvature");
    const int n = surface.ambient.dimension();
    const double lhs = (n - 1) * integrate(surface, g, g.f.cwiseQuotient(g.H));
    const double rhs = n * enclosed_weighted_volume(surface) + boundary_term(surface.ambient);
    return judge_inequality("heintze-karcher", lhs, rhs, +1, relative_tol);
}

IdentityReport hk_check(const GraphSurface& surface, double relative_tol) {
    return hk_check(surface, geometry(surface), relative_tol);
}

IdentityReport divergence_check(const GraphSurface& surface, double relative_tol) {
    const GeometryReport g = geometry(surface);
    const int n = surface.ambient.dimension();
    const double lhs = integrate(surface, g, g.x_dot_nu);
    const double rhs = n * enclosed_weighted_volume(surface) + boundary_term(surface.ambient);
    return judge_identity("divergence", lhs, rhs, relative_tol);
}

} // namespace warpcmc
