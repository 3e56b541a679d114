#include "warpcmc/warping.hpp"
#include "warpcmc/errors.hpp"

#include <cmath>
#include <sstream>

namespace warpcmc {

double unit_sphere_volume(int n) {
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

WarpingFunction::WarpingFunction(Info info, Evaluator jet, Inverse inverse)
    : info_(std::move(info)),
      jet_(std::make_shared<const Evaluator>(std::move(jet))),
      inverse_(inverse ? std::make_shared<const Inverse>(std::move(inverse)) : nullptr) {
    if (!(info_.r_bar > 0.0)) throw ParameterError("warping: r_bar must be positive");
    if (info_.n < 2) throw ParameterError("warping: dimension must be >= 2");
    if (info_.vol_N <= 0.0) info_.vol_N = unit_sphere_volume(info_.n);
}

WarpingJet WarpingFunction::eval(double r) const {
    if (!(r >= 0.0 && r < info_.r_bar)) {
        std::ostringstream msg;
        msg << "warping '" << info_.name << "': r = " << r << " outside [0, " << info_.r_bar << ")";
        throw DomainError(msg.str());
    }
    return (*jet_)(r);
}

double WarpingFunction::radius_of(double value) const {
    if (inverse_) return (*inverse_)(value);
    double lo = 0.0, hi = info_.r_bar;
    const double h_lo = (*jet_)(lo).v;
    if (value < h_lo) throw DomainError("warping: value below h(0)");
    // safeguarded Newton on h(r) = value inside the bracket [lo, hi)
    double r = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const WarpingJet j = (*jet_)(r);
        const double g = j.v - value;
        if (g > 0.0) hi = r; else lo = r;
        double next = (j.d1 > 0.0) ? r - g / j.d1 : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - r) <= 1e-15 * std::max(1.0, r)) return next;
        r = next;
    }
    return r;
}

WarpingJet eval_warping(const WarpingFunction& w, double r) { return w.eval(r); }

PotentialField potential_field(const WarpingFunction& w, double r) {
    const WarpingJet j = w.eval(r);
    return {j.d1, j.v};
}

WarpingFunction closed_form_warping(WarpingFunction::Info info, WarpingFunction::Evaluator jet) {
    info.kind = WarpingKind::closed_form;
    return WarpingFunction(std::move(info), std::move(jet));
}

WarpingFunction tabulated_warping(WarpingFunction::Info info, QuinticHermiteTable table) {
    info.kind = WarpingKind::tabulated;
    info.smoothness_defect = table.third_derivative_jump();
    if (table.lower() > 0.0) throw ParameterError("tabulated warping: table must start at r = 0");
    info.r_bar = table.upper();
    auto shared = std::make_shared<const QuinticHermiteTable>(std::move(table));
    return WarpingFunction(std::move(info), [shared](double r) { return shared->eval(r); });
}

} // namespace warpcmc
