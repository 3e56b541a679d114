#include "warpcmc/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace warpcmc {

Eigen::VectorXd symmetric_jacobi_recurrence(int count, double alpha) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(count + 1);
    const double s = 2.0 * alpha;
    for (int k = 1; k <= count; ++k) {
        const double kk = k;
        const double num = 4.0 * kk * (kk + alpha) * (kk + alpha) * (kk + s);
        const double den = (2.0 * kk + s) * (2.0 * kk + s) * (2.0 * kk + s + 1.0) * (2.0 * kk + s - 1.0);
        b[k] = std::sqrt(num / den);
    }
    return b;
}

double symmetric_jacobi_mass(double alpha) {
    return std::sqrt(M_PI) * std::exp(std::lgamma(alpha + 1.0) - std::lgamma(alpha + 1.5));
}

OrthoValues symmetric_jacobi_values(int count, double alpha, double x) {
    const Eigen::VectorXd b = symmetric_jacobi_recurrence(count, alpha);
    OrthoValues v{Eigen::VectorXd::Zero(count), Eigen::VectorXd::Zero(count),
                  Eigen::VectorXd::Zero(count)};
    if (count == 0) return v;
    v.p[0] = 1.0 / std::sqrt(symmetric_jacobi_mass(alpha));
    if (count == 1) return v;
    v.p[1] = x * v.p[0] / b[1];
    v.dp[1] = v.p[0] / b[1];
    for (int k = 1; k + 1 < count; ++k) {
        v.p[k + 1] = (x * v.p[k] - b[k] * v.p[k - 1]) / b[k + 1];
        v.dp[k + 1] = (v.p[k] + x * v.dp[k] - b[k] * v.dp[k - 1]) / b[k + 1];
        v.ddp[k + 1] = (2.0 * v.dp[k] + x * v.ddp[k] - b[k] * v.ddp[k - 1]) / b[k + 1];
    }
    return v;
}

GaussRule gauss_jacobi_symmetric(int n, double alpha) {
    if (n < 1) throw std::invalid_argument("gauss rule needs at least one node");
    const Eigen::VectorXd b = symmetric_jacobi_recurrence(n, alpha);
    GaussRule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = symmetric_jacobi_mass(alpha);
        return rule;
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub = b.segment(1, n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    rule.nodes = eig.eigenvalues();

    const double p0 = 1.0 / std::sqrt(symmetric_jacobi_mass(alpha));
    for (int i = 0; i < n; ++i) {
        double x = rule.nodes[i];
        double sum_sq = 0.0;
        for (int iter = 0; iter < 3; ++iter) {
            // p_n and p_n' via the recurrence
            double pm1 = 0.0, p = p0, dpm1 = 0.0, dp = 0.0;
            sum_sq = p * p;
            for (int k = 0; k < n; ++k) {
                const double bk = (k == 0) ? 0.0 : b[k];
                const double pn = (x * p - bk * pm1) / b[k + 1];
                const double dpn = (p + x * dp - bk * dpm1) / b[k + 1];
                pm1 = p;
                p = pn;
                dpm1 = dp;
                dp = dpn;
                if (k + 1 < n) sum_sq += p * p;
            }
            const double step = p / dp;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        // recompute Christoffel number at the polished node
        double pm1 = 0.0, p = p0;
        sum_sq = p * p;
        for (int k = 0; k + 1 < n; ++k) {
            const double bk = (k == 0) ? 0.0 : b[k];
            const double pn = (x * p - bk * pm1) / b[k + 1];
            pm1 = p;
            p = pn;
            sum_sq += p * p;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 1.0 / sum_sq;
    }
    // enforce exact symmetry
    for (int i = 0; i < n / 2; ++i) {
        const double x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[n - 1 - i] + rule.weights[i]);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, const GaussRule& rule) {
    const double width = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double mid = lo + 0.5 * width;
        double acc = 0.0;
        for (Eigen::Index k = 0; k < rule.nodes.size(); ++k)
            acc += rule.weights[k] * f(mid + 0.5 * width * rule.nodes[k]);
        total += 0.5 * width * acc;
    }
    return total;
}

} // namespace warpcmc
