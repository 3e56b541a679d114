#pragma once

// Shared test fixtures and independent oracles.  Nothing here calls into the
// library's geometry code; oracles rebuild what they need from metric values.

#include "warpcmc/hypersurface.hpp"
#include "warpcmc/models.hpp"
#include "warpcmc/warping.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

namespace fixtures {

inline constexpr double pi = 3.14159265358979323846;

// Orthonormal zonal harmonics on S^2.
inline double y20(double theta) {
    const double c = std::cos(theta);
    return std::sqrt(5.0 / (16.0 * pi)) * (3.0 * c * c - 1.0);
}
inline double y30(double theta) {
    const double c = std::cos(theta);
    return std::sqrt(7.0 / (16.0 * pi)) * (5.0 * c * c * c - 3.0 * c);
}

// Fourth-order central difference.
inline double d1(const std::function<double(double)>& g, double x, double e) {
    return (g(x - 2 * e) - 8 * g(x - e) + 8 * g(x + e) - g(x + 2 * e)) / (12 * e);
}

// Ball-variant warping with W(r) = -3 + 0.1 exp(-50 (r - 0.5)^2) (n = 3,
// rho = 1), the bump tapered by 1 - exp(-(r/0.05)^4) so that sin data at
// r = 1e-3 start the integration without a jump.  h'' = (h/2)(W + (1 - h'^2)/h^2).
inline warpcmc::WarpingFunction w_bump_fixture(int knots = 2401) {
    const double r_bar = 1.2, r_join = 1e-3;
    auto W = [](double r) {
        return -3.0 + 0.1 * std::exp(-50.0 * (r - 0.5) * (r - 0.5)) * (1.0 - std::exp(-std::pow(r / 0.05, 4)));
    };
    auto accel = [&](double r, double h, double p) { return 0.5 * h * (W(r) + (1.0 - p * p) / (h * h)); };
    Eigen::VectorXd r(knots), v(knots), p(knots), a(knots);
    const double dr = r_bar / (knots - 1);
    const int substeps = 20;
    double h = std::sin(r_join), hp = std::cos(r_join), t = r_join;
    for (int k = 0; k < knots; ++k) {
        const double rk = k * dr;
        r[k] = rk;
        if (rk <= r_join) {
            v[k] = std::sin(rk);
            p[k] = std::cos(rk);
            a[k] = -std::sin(rk);
            continue;
        }
        while (t < rk - 1e-15) {
            const double s = std::min(dr / substeps, rk - t);
            const double k1h = hp, k1p = accel(t, h, hp);
            const double k2h = hp + 0.5 * s * k1p, k2p = accel(t + 0.5 * s, h + 0.5 * s * k1h, hp + 0.5 * s * k1p);
            const double k3h = hp + 0.5 * s * k2p, k3p = accel(t + 0.5 * s, h + 0.5 * s * k2h, hp + 0.5 * s * k2p);
            const double k4h = hp + s * k3p, k4p = accel(t + s, h + s * k3h, hp + s * k3p);
            h += s / 6 * (k1h + 2 * k2h + 2 * k3h + k4h);
            hp += s / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
            t += s;
        }
        v[k] = h;
        p[k] = hp;
        a[k] = accel(rk, h, hp);
    }
    warpcmc::WarpingFunction::Info info;
    info.name = "w-bump";
    info.variant = warpcmc::Variant::ball;
    info.n = 3;
    info.rho = 1.0;
    return warpcmc::tabulated_warping(info, warpcmc::QuinticHermiteTable(r, v, p, a));
}

// Boundary-variant warping h = 1 + r^2/2 - r^4/(12 c^2) whose h'' = 1 - r^2/c^2
// changes sign at r = c.
inline warpcmc::WarpingFunction h2_crossing_fixture(double c = 0.7, double r_bar = 1.0, int knots = 257) {
    Eigen::VectorXd r = Eigen::VectorXd::LinSpaced(knots, 0.0, r_bar), v(knots), p(knots), a(knots);
    for (int k = 0; k < knots; ++k) {
        const double x = r[k];
        v[k] = 1.0 + x * x / 2.0 - std::pow(x, 4) / (12.0 * c * c);
        p[k] = x - std::pow(x, 3) / (3.0 * c * c);
        a[k] = 1.0 - x * x / (c * c);
    }
    warpcmc::WarpingFunction::Info info;
    info.name = "h2-crossing";
    info.variant = warpcmc::Variant::boundary;
    info.n = 3;
    info.rho = 1.0;
    return warpcmc::tabulated_warping(info, warpcmc::QuinticHermiteTable(r, v, p, a));
}

// g-eigenvalues (radial, tangential) of (Laplacian f) g - D^2 f + f Ric assembled
// by finite differences from a metric given in coordinates x = (x_0, angles).
// x_0 is the radial coordinate; the metric is assumed diagonal at the point.
struct StaticOracle {
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> metric;
    std::function<double(const Eigen::VectorXd&)> f;
    double step = 1e-2;

    int dim() const { return 3; }

    double partial(const std::function<double(const Eigen::VectorXd&)>& g, Eigen::VectorXd x, int i) const {
        const double xi = x[i];
        return d1([&](double t) { x[i] = t; return g(x); }, xi, step);
    }

    // Gamma^k_ij at x.
    std::vector<Eigen::MatrixXd> christoffel(const Eigen::VectorXd& x) const {
        const int d = dim();
        const Eigen::MatrixXd G = metric(x), Ginv = G.inverse();
        std::vector<Eigen::MatrixXd> dG(d);
        for (int l = 0; l < d; ++l) {
            dG[l].resize(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    dG[l](i, j) = partial([&](const Eigen::VectorXd& y) { return metric(y)(i, j); }, x, l);
        }
        std::vector<Eigen::MatrixXd> gamma(d, Eigen::MatrixXd::Zero(d, d));
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int l = 0; l < d; ++l)
                        gamma[k](i, j) += 0.5 * Ginv(k, l) * (dG[i](j, l) + dG[j](i, l) - dG[l](i, j));
        return gamma;
    }

    std::pair<double, double> eigenvalues(const Eigen::VectorXd& x) const {
        const int d = dim();
        const auto gamma = christoffel(x);
        // dGamma[m][k](i, j) = d_m Gamma^k_ij
        std::vector<std::vector<Eigen::MatrixXd>> dgamma(d, std::vector<Eigen::MatrixXd>(d, Eigen::MatrixXd::Zero(d, d)));
        const double stencil[4][2] = {{-2, 1}, {-1, -8}, {1, 8}, {2, -1}};
        for (int m = 0; m < d; ++m)
            for (const auto& s : stencil) {
                Eigen::VectorXd y = x;
                y[m] += s[0] * step;
                const auto g = christoffel(y);
                for (int k = 0; k < d; ++k) dgamma[m][k] += s[1] / (12 * step) * g[k];
            }
        Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) {
                    ric(i, j) += dgamma[k][k](i, j) - dgamma[j][k](i, k);
                    for (int l = 0; l < d; ++l)
                        ric(i, j) += gamma[k](k, l) * gamma[l](i, j) - gamma[k](j, l) * gamma[l](i, k);
                }
        Eigen::VectorXd df(d);
        for (int i = 0; i < d; ++i) df[i] = partial(f, x, i);
        Eigen::MatrixXd hess(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                hess(i, j) = partial([&](const Eigen::VectorXd& y) { return partial(f, y, j); }, x, i);
                for (int k = 0; k < d; ++k) hess(i, j) -= gamma[k](i, j) * df[k];
            }
        const Eigen::MatrixXd G = metric(x), Ginv = G.inverse();
        const double lap = (Ginv * hess).trace();
        const Eigen::MatrixXd T = lap * G - hess + f(x) * ric;
        const Eigen::MatrixXd mixed = Ginv * T;
        return {mixed(0, 0), mixed(1, 1)};
    }
};

// Oracle in area-radius coordinates (s, theta, phi): g = ds^2/omega + s^2 g_S, f = sqrt(omega).
inline StaticOracle omega_static_oracle(std::function<double(double)> omega) {
    StaticOracle o;
    o.metric = [omega](const Eigen::VectorXd& x) {
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(3, 3);
        G(0, 0) = 1.0 / omega(x[0]);
        G(1, 1) = x[0] * x[0];
        G(2, 2) = x[0] * x[0] * std::sin(x[1]) * std::sin(x[1]);
        return G;
    };
    o.f = [omega](const Eigen::VectorXd& x) { return std::sqrt(omega(x[0])); };
    return o;
}

// Oracle in (r, theta, phi) from values of h alone: f = dh/dr by differences.
inline StaticOracle warping_static_oracle(std::function<double(double)> h) {
    StaticOracle o;
    o.metric = [h](const Eigen::VectorXd& x) {
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(3, 3);
        const double hv = h(x[0]);
        G(0, 0) = 1.0;
        G(1, 1) = hv * hv;
        G(2, 2) = hv * hv * std::sin(x[1]) * std::sin(x[1]);
        return G;
    };
    o.f = [h](const Eigen::VectorXd& x) { return d1(h, x[0], 1e-3); };
    return o;
}

// Scalar ODE dr/dt = -h'(r) by classical RK4.
inline double slice_ode(const warpcmc::WarpingFunction& w, double r0, double t, int steps) {
    const double dt = t / steps;
    double r = r0;
    auto rhs = [&](double x) { return -w.eval(x).d1; };
    for (int k = 0; k < steps; ++k) {
        const double k1 = rhs(r), k2 = rhs(r + 0.5 * dt * k1), k3 = rhs(r + 0.5 * dt * k2), k4 = rhs(r + dt * k3);
        r += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return r;
}

inline warpcmc::ModelSpec spec(warpcmc::Family family, int n = 3, double m = 1.0, double kappa = 0.0, double q = 0.0) {
    warpcmc::ModelSpec s;
    s.family = family;
    s.n = n;
    s.m = m;
    s.kappa = kappa;
    s.q = q;
    return s;
}

// Radius with h(r) = s for black-hole models.
inline double area_radius(const warpcmc::WarpingFunction& w, double s) { return w.radius_of(s); }

} // namespace fixtures
