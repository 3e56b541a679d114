#include "warpcmc/conditions.hpp"
#include "warpcmc/curvature.hpp"
#include "warpcmc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace warpcmc {

namespace {

ConditionResult summarize(std::string name, std::vector<double> margins,
                          const std::vector<double>& grid, double threshold, double tol) {
    ConditionResult c;
    c.name = std::move(name);
    c.min_margin = std::numeric_limits<double>::infinity();
    double max_abs = 0.0;
    for (std::size_t i = 0; i < margins.size(); ++i) {
        if (margins[i] < c.min_margin) {
            c.min_margin = margins[i];
            c.worst_radius = grid.empty() ? 0.0 : grid[i];
        }
        max_abs = std::max(max_abs, std::abs(margins[i]));
    }
    c.pass = c.min_margin > threshold;
    c.degenerate = max_abs <= tol;
    c.margins = std::move(margins);
    return c;
}

} // namespace

bool ConditionReport::umbilicity_hypotheses() const {
    return at(1).pass && at(2).pass && at(3).pass;
}

bool ConditionReport::all_pass() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

std::vector<double> chebyshev_radii(double r_bar, int count) {
    std::vector<double> radii(count);
    for (int k = 0; k < count; ++k)
        radii[k] = 0.5 * r_bar * (1.0 - std::cos((2.0 * k + 1.0) * M_PI / (2.0 * count)));
    return radii;
}

ConditionReport check_conditions(const WarpingFunction& w, int n, ConditionSet set, int grid_size) {
    if (grid_size < 16) throw ParameterError("check_conditions: grid_size must be >= 16");
    const double tol = kConditionTolerance;
    const bool prime = set == ConditionSet::Hprime;
    const double rho = prime ? 1.0 : w.rho();
    const std::string tick = prime ? "'" : "";

    ConditionReport report;
    report.set = set;
    report.tolerance = tol;
    report.grid = chebyshev_radii(w.r_bar(), grid_size);
    report.degraded_accuracy = w.kind() == WarpingKind::tabulated && w.info().smoothness_defect > 1e-6;

    const WarpingJet origin = w.eval(0.0);
    if (prime) {
        // h(r) = r phi(r^2) with phi(0) = 1:  h(0) = 0, h'(0) = 1, h''(0) = 0
        const double defect = std::max({std::abs(origin.v), std::abs(origin.d1 - 1.0), std::abs(origin.d2)});
        report.conditions.push_back(summarize("H1" + tick, {-defect}, {0.0}, -tol, tol));
    } else {
        const double margin = std::abs(origin.d1) <= tol ? origin.d2 : -std::abs(origin.d1);
        report.conditions.push_back(summarize("H1", {margin}, {0.0}, tol, tol));
    }

    std::vector<double> h2, h3, h4;
    for (double r : report.grid) {
        const WarpingJet j = w.eval(r);
        h2.push_back(j.d1);
        const double h = j.v;
        const double gap = warping_gap(w, r, rho, j);
        const double w_prime = 2.0 * (j.d3 / h - j.d2 * j.d1 / (h * h)) +
                               (n - 2) * (2.0 * j.d1 * j.d2 / (h * h) + 2.0 * gap * j.d1 / (h * h * h));
        h3.push_back(w_prime);
        const double q4 = j.d2 / h + gap / (h * h);
        h4.push_back(prime ? std::abs(q4) : q4);
    }
    report.conditions.push_back(summarize("H2" + tick, std::move(h2), report.grid, tol, tol));
    report.conditions.push_back(summarize("H3" + tick, std::move(h3), report.grid, -tol, tol));
    report.conditions.push_back(summarize("H4" + tick, std::move(h4), report.grid, tol, tol));
    return report;
}

std::vector<H3Extremum> scan_h3_extrema(const WarpingFunction& w, int n, int grid_size) {
    if (grid_size < 64) throw ParameterError("scan_h3_extrema: grid_size must be >= 64");
    const double r_bar = w.r_bar();
    const auto radii = chebyshev_radii(r_bar, grid_size);
    std::vector<double> slope(radii.size()), noise(radii.size());
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 0; i < radii.size(); ++i) {
        slope[i] = h3_quantity(w, radii[i], n).derivative;
        // roundoff of gap / h^3 and h''' / h grows as h -> 0
        const double h = w.eval(radii[i]).v;
        noise[i] = kConditionTolerance + 1e3 * eps * ((n - 2) / (h * h * h) + 1.0 / h);
    }

    std::vector<H3Extremum> found;
    // walk significant samples only, so a constant W (slope at roundoff) has no extrema
    std::ptrdiff_t last = -1;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (std::abs(slope[i]) <= noise[i]) continue;
        if (last >= 0 && (slope[last] > 0.0) != (slope[i] > 0.0)) {
            double lo = radii[last], hi = radii[i];
            const bool rising_at_lo = slope[last] > 0.0;
            while (hi - lo > 1e-8 * r_bar) {
                const double mid = 0.5 * (lo + hi);
                const bool rising = h3_quantity(w, mid, n).derivative > 0.0;
                (rising == rising_at_lo ? lo : hi) = mid;
            }
            const double r = 0.5 * (lo + hi);
            const RicciSplit ric = ricci_split(w, r, n);
            found.push_back({r, rising_at_lo ? ExtremumType::max : ExtremumType::min,
                             std::abs(ric.radial - ric.tangential) > 1e-9});
        }
        last = static_cast<std::ptrdiff_t>(i);
    }
    return found;
}

double compute_r1(const WarpingFunction& w) {
    const double r_bar = w.r_bar();
    if (!(w.eval(0.0).d2 > 0.0))
        throw NotApplicableError("compute_r1: requires h''(0) > 0 (boundary variant, (H1))");
    const int samples = 4096;
    double prev = 0.0;
    for (int k = 1; k < samples; ++k) {
        const double r = r_bar * k / samples;
        if (w.eval(r).d2 <= 0.0) {
            double lo = prev, hi = r;
            while (hi - lo > 1e-13 * r_bar) {
                const double mid = 0.5 * (lo + hi);
                (w.eval(mid).d2 > 0.0 ? lo : hi) = mid;
            }
            return lo;
        }
        prev = r;
    }
    return r_bar;
}

} // namespace warpcmc
