#pragma once

#include <Eigen/Dense>

#include <array>

namespace warpcmc {

/// Value and first three derivatives of a scalar function at a point.
template <typename Scalar>
struct Jet3 {
    Scalar v{}, d1{}, d2{}, d3{};
};

/// Piecewise quintic Hermite interpolant through (value, first, second
/// derivative) at each knot.  Globally C^2, polynomial between knots, and
/// exact for polynomials of degree <= 5.  With six or more knots the second
/// and third derivatives come from a cubic Hermite fit of the second
/// derivatives (slopes by 6-point differences), which avoids the 1/dx^2 and
/// 1/dx^3 roundoff growth of the quintic's own.
class QuinticHermiteTable {
public:
    QuinticHermiteTable() = default;
    QuinticHermiteTable(Eigen::VectorXd knots, Eigen::VectorXd values, Eigen::VectorXd d1,
                        Eigen::VectorXd d2);

    /// Build from samples only; derivatives at the knots come from local
    /// degree-5 Lagrange fits through the six nearest samples.
    static QuinticHermiteTable from_samples(const Eigen::VectorXd& knots,
                                            const Eigen::VectorXd& values);

    Jet3<double> eval(double x) const;

    double lower() const { return knots_[0]; }
    double upper() const { return knots_[knots_.size() - 1]; }
    Eigen::Index size() const { return knots_.size(); }
    const Eigen::VectorXd& knots() const { return knots_; }

    /// Largest jump of the third derivative across interior knots, relative
    /// to max(1, max |third derivative|).  Zero means C^3 at the knots.
    double third_derivative_jump() const { return jump3_; }

private:
    Eigen::Index interval(double x) const;
    std::array<double, 6> coefficients(Eigen::Index i) const;

    Eigen::VectorXd knots_, v_, d1_, d2_, d3_;
    double jump3_ = 0.0;
};

/// Finite-difference weights (Fornberg) for derivatives 0..max_order at x0
/// from the given stencil points.  Row k holds the weights for order k.
Eigen::MatrixXd fornberg_weights(double x0, const Eigen::VectorXd& stencil, int max_order);

} // namespace warpcmc
