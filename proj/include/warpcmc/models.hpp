#pragma once

#include "warpcmc/warping.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace warpcmc {

/// omega and its first two derivatives in the area-radius coordinate s.
struct OmegaJet {
    double v, d1, d2;
};

/// Metric omega(s)^{-1} ds^2 + s^2 g_{S^{n-1}} on (s_lower, s_upper).
struct OmegaProfile {
    std::string name;
    std::function<OmegaJet(double)> omega;
    int n = 3;
    double rho = 1.0;
    double s_lower = 0.0;  ///< horizon: omega(s_lower) = 0, omega'(s_lower) > 0
    double s_upper = std::numeric_limits<double>::infinity();  ///< next root or +inf
    double s_max = 0.0;    ///< working truncation, s_lower < s_max <= s_upper
    double domain_lo = 0.0;  ///< where omega may be evaluated (tabulated data)
    double domain_hi = std::numeric_limits<double>::infinity();
};

enum class Family {
    euclidean,
    sphere,
    hyperbolic,
    schwarzschild,
    desitter_schwarzschild,
    reissner_nordstrom,
    tabulated
};

std::string to_string(Family family);
Family parse_family(const std::string& name);
const std::vector<Family>& all_families();

struct ModelSpec {
    Family family = Family::euclidean;
    int n = 3;
    double m = 1.0;
    double kappa = 0.0;
    double q = 0.0;
    double curvature = 1.0;    ///< sectional curvature magnitude of space forms
    double s_max_factor = 10.0;
    double r_max = 0.0;        ///< working r_bar for non-compact space forms; 0 = default
    std::string omega_file;    ///< tabulated family: two-column (s, omega) file
    int table_size = 2048;     ///< knots of the s -> r inversion table
};

struct Admissibility {
    bool ok;
    double margin;          ///< slack of the binding constraint
    std::string violated;   ///< name of the violated bound, empty when ok
};

Admissibility admissibility(const ModelSpec& spec);

/// Largest kappa > 0 allowed for deSitter-Schwarzschild with mass m in dimension n.
double desitter_kappa_limit(double m, int n);

/// Profile of a black-hole family (s_lower, s_upper, s_max filled in).
OmegaProfile make_omega_profile(const ModelSpec& spec);

/// Two-column (s, omega) text file, '#' comments, strictly increasing s.
OmegaProfile read_omega_profile(const std::string& path, int n, double rho = 1.0);

/// Horizon s_lower: the root where omega turns from negative to positive,
/// refined to 1e-12 relative.  Throws ParameterError when there is none and
/// SingularityError for a degenerate (double) root.
double horizon_radius(const OmegaProfile& profile);

/// F(s) = integral from s_lower to s of omega^{-1/2}, computed in the
/// desingularized variable s = s_lower + xi^2 with composite Gauss-Legendre.
double area_radius_to_arclength(const OmegaProfile& profile, double s, int panels = 64,
                                int points_per_panel = 32);

/// h = F^{-1}: tabulates F on `grid_size` intervals uniform in xi and inverts
/// it with a quintic Hermite table built from the exact jets
/// (h, h', h'') = (s, sqrt(omega), omega'/2).  Derivatives are evaluated
/// from omega at the interpolated s; h''' = omega'' sqrt(omega) / 2.
WarpingFunction omega_to_warping(const OmegaProfile& profile, int grid_size = 2048);

WarpingFunction make_model(const ModelSpec& spec);

/// The structure conditions written in the area-radius coordinate.
struct OmegaConditionMargins {
    double h3_value;   ///< omega'/s - (n-2)(rho - omega)/s^2
    double h3_slope;   ///< d/ds of h3_value
    double h4;         ///< omega'/(2s) + (rho - omega)/s^2
};
OmegaConditionMargins omega_condition_margins(const OmegaProfile& profile, double s);

} // namespace warpcmc
