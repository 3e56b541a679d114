#include "warpcmc/hermite_table.hpp"
#include "warpcmc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace warpcmc {

Eigen::MatrixXd fornberg_weights(double x0, const Eigen::VectorXd& stencil, int max_order) {
    const Eigen::Index n = stencil.size();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(max_order + 1, n);
    double c1 = 1.0;
    double c4 = stencil[0] - x0;
    c(0, 0) = 1.0;
    for (Eigen::Index i = 1; i < n; ++i) {
        const Eigen::Index mn = std::min<Eigen::Index>(i, max_order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = stencil[i] - x0;
        for (Eigen::Index j = 0; j < i; ++j) {
            const double c3 = stencil[i] - stencil[j];
            c2 *= c3;
            if (j == i - 1) {
                for (Eigen::Index k = mn; k >= 1; --k)
                    c(k, i) = c1 * (k * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
                c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
            }
            for (Eigen::Index k = mn; k >= 1; --k)
                c(k, j) = (c4 * c(k, j) - k * c(k - 1, j)) / c3;
            c(0, j) = c4 * c(0, j) / c3;
        }
        c1 = c2;
    }
    return c;
}

QuinticHermiteTable::QuinticHermiteTable(Eigen::VectorXd knots, Eigen::VectorXd values,
                                         Eigen::VectorXd d1, Eigen::VectorXd d2)
    : knots_(std::move(knots)), v_(std::move(values)), d1_(std::move(d1)), d2_(std::move(d2)) {
    const Eigen::Index n = knots_.size();
    if (n < 2 || v_.size() != n || d1_.size() != n || d2_.size() != n)
        throw ParameterError("hermite table: need >= 2 knots with matching jets");
    for (Eigen::Index i = 1; i < n; ++i)
        if (!(knots_[i] > knots_[i - 1]))
            throw ParameterError("hermite table: knots must be strictly increasing");

    double max3 = 1.0, jump = 0.0;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const auto c = coefficients(i);
        const double dx = knots_[i + 1] - knots_[i];
        const double left3 = 6.0 * c[3] / (dx * dx * dx);
        const double right3 = (6.0 * c[3] + 24.0 * c[4] + 60.0 * c[5]) / (dx * dx * dx);
        max3 = std::max({max3, std::abs(left3), std::abs(right3)});
        if (i + 2 < n) {
            const auto cn = coefficients(i + 1);
            const double dn = knots_[i + 2] - knots_[i + 1];
            jump = std::max(jump, std::abs(6.0 * cn[3] / (dn * dn * dn) - right3));
        }
    }
    jump3_ = jump / max3;

    if (n >= 6) {
        d3_.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::Index start = std::clamp<Eigen::Index>(i - 3, 0, n - 6);
            const Eigen::MatrixXd w = fornberg_weights(knots_[i], knots_.segment(start, 6), 1);
            d3_[i] = w.row(1).dot(d2_.segment(start, 6));
        }
    }
}

QuinticHermiteTable QuinticHermiteTable::from_samples(const Eigen::VectorXd& knots,
                                                      const Eigen::VectorXd& values) {
    const Eigen::Index n = knots.size();
    if (n < 6) throw ParameterError("hermite table: need >= 6 samples to estimate derivatives");
    Eigen::VectorXd d1(n), d2(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index start = std::clamp<Eigen::Index>(i - 3, 0, n - 6);
        const Eigen::MatrixXd w = fornberg_weights(knots[i], knots.segment(start, 6), 2);
        d1[i] = w.row(1).dot(values.segment(start, 6));
        d2[i] = w.row(2).dot(values.segment(start, 6));
    }
    return QuinticHermiteTable(knots, values, d1, d2);
}

Eigen::Index QuinticHermiteTable::interval(double x) const {
    const auto* begin = knots_.data();
    const auto* end = begin + knots_.size();
    const auto* it = std::upper_bound(begin, end, x);
    Eigen::Index i = static_cast<Eigen::Index>(it - begin) - 1;
    return std::clamp<Eigen::Index>(i, 0, knots_.size() - 2);
}

std::array<double, 6> QuinticHermiteTable::coefficients(Eigen::Index i) const {
    const double dx = knots_[i + 1] - knots_[i];
    const double c0 = v_[i];
    const double c1 = dx * d1_[i];
    const double c2 = 0.5 * dx * dx * d2_[i];
    const double a = v_[i + 1] - (c0 + c1 + c2);
    const double b = dx * d1_[i + 1] - (c1 + 2.0 * c2);
    const double c = dx * dx * d2_[i + 1] - 2.0 * c2;
    return {c0, c1, c2, 10.0 * a - 4.0 * b + 0.5 * c, -15.0 * a + 7.0 * b - c,
            6.0 * a - 3.0 * b + 0.5 * c};
}

Jet3<double> QuinticHermiteTable::eval(double x) const {
    const Eigen::Index i = interval(x);
    const auto c = coefficients(i);
    const double dx = knots_[i + 1] - knots_[i];
    const double t = (x - knots_[i]) / dx;
    Jet3<double> j;
    j.v = c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
    j.d1 = (c[1] + t * (2 * c[2] + t * (3 * c[3] + t * (4 * c[4] + t * 5 * c[5])))) / dx;
    j.d2 = (2 * c[2] + t * (6 * c[3] + t * (12 * c[4] + t * 20 * c[5]))) / (dx * dx);
    if (d3_.size() == 0) {
        j.d3 = (6 * c[3] + t * (24 * c[4] + t * 60 * c[5])) / (dx * dx * dx);
        return j;
    }
    // cubic Hermite interpolant of (h'', h''') at the knots
    const double p0 = d2_[i], p1 = d2_[i + 1], m0 = dx * d3_[i], m1 = dx * d3_[i + 1];
    const double u = 1.0 - t;
    j.d2 = u * u * (1.0 + 2.0 * t) * p0 + t * t * (3.0 - 2.0 * t) * p1 + t * u * (u * m0 - t * m1);
    j.d3 = (6.0 * t * u * (p1 - p0) + m0 * u * (1.0 - 3.0 * t) + m1 * t * (3.0 * t - 2.0)) / dx;
    return j;
}

} // namespace warpcmc
