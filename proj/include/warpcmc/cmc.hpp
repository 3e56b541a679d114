#pragma once

#include "warpcmc/hypersurface.hpp"

#include <string>
#include <vector>

namespace warpcmc {

struct CmcOptions {
    double dt_scale = 1.0;          ///< time step in units of h(mean rho)^2
    double slice_tol_factor = 1e-5; ///< slice_tol = factor * r_bar
    double deficit_tol = 1e-5;
};

struct CmcResult {
    GraphSurface surface;
    double mean_H = 0.0;        ///< f-weighted mean of H
    double cmc_residual = 0.0;  ///< max |H - mean_H|
    double umbilicity_deficit = 0.0;
    bool is_slice = false;
    double slice_spread = 0.0;  ///< max |rho - mean rho|
    int iterations = 0;
    bool converged = false;
    std::string reason;
    double initial_volume = 0.0, final_volume = 0.0;  ///< int_Omega f
    double flow_time = 0.0;
    std::vector<double> residual_history;
};

/// Volume-preserving mean curvature flow on radial graphs,
/// rho_t = (Hbar - H) / <d/dr, nu>, with Hbar the f-weighted mean so that
/// int_Omega f is invariant.  Semi-implicit in the spectral modes; the
/// degree-0 mode is re-projected each step to restore the enclosed volume.
CmcResult find_cmc(const GraphSurface& initial, double cmc_tol = 1e-7, int max_iter = 2000,
                   const CmcOptions& options = {});

struct UmbilicityVerdict {
    double deficit = 0.0;
    bool is_slice = false;
    double mean_radius = 0.0;
    double h4_margin = 0.0;   ///< (H4) quantity, |(H4')| for the ball variant
    double ricci_gap = 0.0;   ///< radial minus tangential Ricci eigenvalue
    bool umbilic = false;
    bool alarm = false;       ///< umbilic, (H4) margin > 0, yet not a slice
};

UmbilicityVerdict umbilicity_verdict(const CmcResult& result, const WarpingFunction& ambient, int n,
                                     double deficit_tol = 1e-5, double margin_tol = 1e-9);

} // namespace warpcmc
