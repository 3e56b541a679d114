#include "warpcmc/curvature.hpp"
#include "warpcmc/errors.hpp"
#include "warpcmc/quadrature.hpp"

#include <cmath>

#include <sstream>

namespace warpcmc {

namespace {

WarpingJet nonsingular_jet(const WarpingFunction& w, double r) {
    const WarpingJet j = w.eval(r);
    if (j.v == 0.0) {
        std::ostringstream msg;
        msg << "warping '" << w.name() << "': h(" << r << ") = 0 is a singular point";
        throw SingularityError(msg.str());
    }
    return j;
}

} // namespace

double warping_gap(const WarpingFunction& w, double r, double rho, const WarpingJet& j) {
    const double direct = rho - j.d1 * j.d1;
    if (w.kind() != WarpingKind::closed_form || w.variant() != Variant::ball || std::abs(direct) >= 0.25 * std::abs(rho) ||
        r <= 0.0)
        return direct;
    static const GaussRule rule = gauss_legendre(24);
    double integral = 0.0;
    for (Eigen::Index k = 0; k < rule.nodes.size(); ++k) {
        const WarpingJet q = w.eval(0.5 * r * (1.0 + rule.nodes[k]));
        integral += rule.weights[k] * q.d1 * q.d2;
    }
    const double slope0 = w.eval(0.0).d1;
    return (rho - slope0 * slope0) - r * integral;
}

double warping_gap(const WarpingFunction& w, double r, double rho) { return warping_gap(w, r, rho, w.eval(r)); }

RicciSplit ricci_split(const WarpingFunction& w, double r, int n) {
    const WarpingJet j = nonsingular_jet(w, r);
    const double gap = warping_gap(w, r, w.rho(), j);
    return {-(n - 1) * j.d2 / j.v, ((n - 2) * gap - j.v * j.d2) / (j.v * j.v)};
}

H3Quantity h3_quantity(const WarpingFunction& w, double r, int n) {
    const WarpingJet j = nonsingular_jet(w, r);
    const double h = j.v, h1 = j.d1, h2 = j.d2, h3 = j.d3;
    const double gap = warping_gap(w, r, w.rho(), j);
    const double value = 2.0 * h2 / h - (n - 2) * gap / (h * h);
    const double derivative = 2.0 * (h3 / h - h2 * h1 / (h * h)) +
                              (n - 2) * (2.0 * h1 * h2 / (h * h) + 2.0 * gap * h1 / (h * h * h));
    return {value, derivative};
}

double scalar_curvature(const WarpingFunction& w, double r, int n) {
    return -(n - 1) * h3_quantity(w, r, n).value;
}

StaticTensor static_tensor(const WarpingFunction& w, double r, int n) {
    const WarpingJet j = nonsingular_jet(w, r);
    const double h = j.v, h1 = j.d1, h2 = j.d2, h3 = j.d3;
    const double coefficient = h * h * h3 + (n - 3) * h * h1 * h2 + (n - 2) * h1 * warping_gap(w, r, w.rho(), j);
    return {0.0, coefficient / (h * h)};
}

double h4_quantity(const WarpingFunction& w, double r, double rho) {
    const WarpingJet j = nonsingular_jet(w, r);
    return j.d2 / j.v + warping_gap(w, r, rho, j) / (j.v * j.v);
}

} // namespace warpcmc
