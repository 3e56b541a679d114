#pragma once

#include "warpcmc/hermite_table.hpp"

#include <functional>
#include <memory>
#include <string>

namespace warpcmc {

/// Jet (h, h', h'', h''') of the warping function at one radius.
using WarpingJet = Jet3<double>;

enum class WarpingKind { closed_form, tabulated };

/// boundary: h'(0) = 0, h(0) > 0 (the manifold has an inner boundary N x {0}).
/// ball:     h(0) = 0, h'(0) = 1 (smooth metric on a ball around the origin).
enum class Variant { boundary, ball };

/// Volume of the unit sphere S^{n-1} in R^n.
double unit_sphere_volume(int n);

/// The warped ambient (N x [0, r_bar), dr^2 + h(r)^2 g_N).  Immutable after
/// construction; copies share the evaluator.
class WarpingFunction {
public:
    using Evaluator = std::function<WarpingJet(double)>;
    using Inverse = std::function<double(double)>;

    struct Info {
        std::string name;
        WarpingKind kind = WarpingKind::closed_form;
        Variant variant = Variant::ball;
        int n = 3;             ///< ambient dimension
        double r_bar = 1.0;    ///< working end of the radial interval
        double rho = 1.0;      ///< Ric_N >= (n-2) rho g_N
        double vol_N = 0.0;    ///< volume of (N, g_N); 0 selects vol(S^{n-1})
        double smoothness_defect = 0.0;  ///< relative h''' jump at knots
        bool truncated = false;          ///< r_bar is a working bound
    };

    WarpingFunction() = default;
    WarpingFunction(Info info, Evaluator jet, Inverse inverse = {});

    /// Jet at r; throws DomainError unless 0 <= r < r_bar.
    WarpingJet eval(double r) const;
    /// Radius r with h(r) = value (h is increasing under (H2)).
    double radius_of(double value) const;

    const Info& info() const { return info_; }
    const std::string& name() const { return info_.name; }
    WarpingKind kind() const { return info_.kind; }
    Variant variant() const { return info_.variant; }
    int dimension() const { return info_.n; }
    double r_bar() const { return info_.r_bar; }
    double rho() const { return info_.rho; }
    double vol_N() const { return info_.vol_N; }

private:
    Info info_;
    std::shared_ptr<const Evaluator> jet_;
    std::shared_ptr<const Inverse> inverse_;
};

WarpingJet eval_warping(const WarpingFunction& w, double r);

struct PotentialField {
    double f;      ///< h'(r)
    double x_mag;  ///< |X| = h(r) for X = h(r) d/dr
};
PotentialField potential_field(const WarpingFunction& w, double r);

/// Closed-form warping from an analytic jet.
WarpingFunction closed_form_warping(WarpingFunction::Info info, WarpingFunction::Evaluator jet);

/// Tabulated warping backed by a quintic Hermite table of (h, h', h'').
WarpingFunction tabulated_warping(WarpingFunction::Info info, QuinticHermiteTable table);

} // namespace warpcmc
