#pragma once

#include "warpcmc/warping.hpp"

#include <string>
#include <vector>

namespace warpcmc {

/// Absolute tolerance on condition margins.
inline constexpr double kConditionTolerance = 1e-9;

/// Which family of structure conditions to check: (H1)-(H4) for the
/// boundary variant, (H1')-(H4') for the ball variant.
enum class ConditionSet { H, Hprime };

struct ConditionResult {
    std::string name;            ///< "H1".."H4" or "H1'".."H4'"
    bool pass = false;
    bool degenerate = false;     ///< margin vanishes identically (|margin| <= tol)
    double min_margin = 0.0;
    double worst_radius = 0.0;
    std::vector<double> margins; ///< per grid radius (single entry for H1)
};

struct ConditionReport {
    ConditionSet set = ConditionSet::H;
    std::vector<double> grid;
    std::vector<ConditionResult> conditions;  ///< H1, H2, H3, H4 in order
    bool degraded_accuracy = false;
    double tolerance = kConditionTolerance;

    const ConditionResult& at(int index) const { return conditions.at(index - 1); }
    /// (H1)-(H3): the hypotheses of the umbilicity conclusion.
    bool umbilicity_hypotheses() const;
    bool all_pass() const;
};

/// Chebyshev (first-kind) points on the open interval (0, r_bar).
std::vector<double> chebyshev_radii(double r_bar, int count);

/// Margins of the structure conditions on a Chebyshev radial grid.  Strict
/// conditions (h''(0) > 0, h' > 0, (H4) > 0, (H4') != 0) pass when the
/// minimum margin exceeds +tol; the monotonicity condition (H3) passes when
/// it exceeds -tol; (H1') equalities pass within tol.
ConditionReport check_conditions(const WarpingFunction& w, int n, ConditionSet set,
                                 int grid_size = 128);

enum class ExtremumType { min, max };

struct H3Extremum {
    double radius;
    ExtremumType type;
    bool ricci_distinct;  ///< radial and tangential Ricci eigenvalues differ
};

/// Interior strict local extrema of W(r).  Radii where small non-umbilic
/// CMC spheres exist when the Ricci eigenvalues are distinct.
std::vector<H3Extremum> scan_h3_extrema(const WarpingFunction& w, int n, int grid_size = 256);

/// Largest r1 <= r_bar with h'' > 0 on [0, r1].
double compute_r1(const WarpingFunction& w);

} // namespace warpcmc
