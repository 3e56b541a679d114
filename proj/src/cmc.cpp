#include "warpcmc/cmc.hpp"
#include "warpcmc/curvature.hpp"
#include "warpcmc/errors.hpp"

#include <cmath>

namespace warpcmc {

namespace {

double mean_over_sphere(const SphereGrid& grid, const Eigen::VectorXd& field) {
    return grid.integrate(field) / grid.weights().sum();
}

/// Shift rho by a constant so that the enclosed weighted volume equals target.
Eigen::VectorXd restore_volume(const WarpingFunction& w, const SphereGrid& grid, Eigen::VectorXd rho,
                               double target) {
    const int n = w.dimension();
    const double base = std::pow(w.eval(0.0).v, n);
    for (int iter = 0; iter < 20; ++iter) {
        double volume = 0.0, slope = 0.0;
        for (Eigen::Index k = 0; k < rho.size(); ++k) {
            const WarpingJet j = w.eval(rho[k]);
            volume += grid.weights()[k] * (std::pow(j.v, n) - base) / n;
            slope += grid.weights()[k] * std::pow(j.v, n - 1) * j.d1;
        }
        const double shift = (target - volume) / slope;
        rho.array() += shift;
        if (std::abs(shift) <= 1e-15 * std::abs(rho.mean())) break;
    }
    return rho;
}

} // namespace

CmcResult find_cmc(const GraphSurface& initial, double cmc_tol, int max_iter, const CmcOptions& options) {
    if (!(cmc_tol > 0.0)) throw ParameterError("cmc_tol must be positive");
    const WarpingFunction& w = initial.ambient;
    const SphereGrid& grid = initial.grid;
    const int n = w.dimension();

    CmcResult result;
    result.surface = initial;
    result.initial_volume = enclosed_weighted_volume(initial);

    Eigen::VectorXd degree_weight(grid.coefficient_count());
    for (Eigen::Index k = 0; k < degree_weight.size(); ++k) {
        const double l = grid.degree_of(k);
        degree_weight[k] = l * (l + n - 2.0);
    }

    GraphSurface current = initial;
    for (int iter = 0;; ++iter) {
        GeometryReport g;
        try {
            g = geometry(current);
        } catch (const Error& e) {
            result.reason = std::string("graph breakdown: ") + e.what();
            break;
        }
        const double mean_H = integrate(current, g, g.f.cwiseProduct(g.H)) / integrate(current, g, g.f);
        const double residual = (g.H.array() - mean_H).abs().maxCoeff();
        result.surface = current;
        result.mean_H = mean_H;
        result.cmc_residual = residual;
        result.umbilicity_deficit = g.umbilicity_deficit;
        result.iterations = iter;
        result.residual_history.push_back(residual);
        if (residual < cmc_tol) {
            result.converged = true;
            result.reason = "converged";
            break;
        }
        if (iter >= max_iter) {
            result.reason = "max_iter reached";
            break;
        }
        if (!(g.nu_r.minCoeff() > 0.0)) {
            result.reason = "graph breakdown: normal turned tangential";
            break;
        }

        const double h_mean = w.eval(mean_over_sphere(grid, current.rho)).v;
        const double sigma = 1.0 / (h_mean * h_mean);
        const double dt = options.dt_scale * h_mean * h_mean;
        const Eigen::VectorXd speed = (mean_H - g.H.array()) / g.nu_r.array();
        const Eigen::VectorXd update =
            grid.synthesize(grid.analyze(speed).cwiseQuotient((1.0 + dt * sigma * degree_weight.array()).matrix()));
        try {
            Eigen::VectorXd rho = current.rho + dt * update;
            if (!(rho.minCoeff() > 0.0 && rho.maxCoeff() < w.r_bar()))
                throw GeometryError("rho left (0, r_bar)");
            rho = restore_volume(w, grid, std::move(rho), result.initial_volume);
            current = make_graph(w, grid, std::move(rho));
        } catch (const Error& e) {
            result.reason = std::string("graph breakdown: ") + e.what();
            break;
        }
        result.flow_time += dt;
    }

    const Eigen::VectorXd& rho = result.surface.rho;
    const double mean_rho = mean_over_sphere(grid, rho);
    result.slice_spread = (rho.array() - mean_rho).abs().maxCoeff();
    result.is_slice = result.slice_spread < options.slice_tol_factor * w.r_bar();
    result.final_volume = enclosed_weighted_volume(result.surface);
    return result;
}

UmbilicityVerdict umbilicity_verdict(const CmcResult& result, const WarpingFunction& ambient, int n,
                                     double deficit_tol, double margin_tol) {
    UmbilicityVerdict v;
    v.deficit = result.umbilicity_deficit;
    v.is_slice = result.is_slice;
    v.mean_radius = mean_over_sphere(result.surface.grid, result.surface.rho);
    const bool ball = ambient.variant() == Variant::ball;
    const double q4 = h4_quantity(ambient, v.mean_radius, ball ? 1.0 : ambient.rho());
    v.h4_margin = ball ? std::abs(q4) : q4;
    const RicciSplit ric = ricci_split(ambient, v.mean_radius, n);
    v.ricci_gap = ric.radial - ric.tangential;
    v.umbilic = v.deficit < deficit_tol;
    v.alarm = result.converged && v.umbilic && v.h4_margin > margin_tol && !v.is_slice;
    return v;
}

} // namespace warpcmc
