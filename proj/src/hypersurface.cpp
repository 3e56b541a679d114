#include "warpcmc/hypersurface.hpp"
#include "warpcmc/chart.hpp"
#include "warpcmc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <ostream>

namespace warpcmc {

namespace {

struct NodeResult {
    double r, H, dmu, f, xnu, nur, deficit;
    Eigen::Vector3d form;
    Eigen::VectorXd normal;
};

NodeResult full_node(const WarpingFunction& w, double offset, const Eigen::Vector3d& y,
                     const Eigen::Vector3d& yu, const Eigen::Vector3d& yv, const Eigen::Vector3d& yuu,
                     const Eigen::Vector3d& yuv, const Eigen::Vector3d& yvv, double sin_theta) {
    const ChartPoint<3> c(w, offset, y);
    const Eigen::Vector3d nu = c.unit_normal(yu.cross(yv));
    Eigen::Matrix2d gamma, second;
    gamma << c.metric(yu, yu), c.metric(yu, yv), c.metric(yu, yv), c.metric(yv, yv);
    second(0, 0) = -c.metric(yuu + c.connection(yu, yu), nu);
    second(0, 1) = second(1, 0) = -c.metric(yuv + c.connection(yu, yv), nu);
    second(1, 1) = -c.metric(yvv + c.connection(yv, yv), nu);
    const double det = gamma.determinant();
    if (!(det > 0.0)) throw GeometryError("degenerate induced metric");

    const Eigen::LLT<Eigen::Matrix2d> llt(gamma);
    const Eigen::Matrix2d Linv = llt.matrixL().solve(Eigen::Matrix2d::Identity());
    const Eigen::Matrix2d B = Linv * second * Linv.transpose();
    const double off = 0.5 * (B(0, 1) + B(1, 0));
    const double diff = B(0, 0) - B(1, 1);

    NodeResult out;
    out.r = c.r;
    out.H = B(0, 0) + B(1, 1);
    out.dmu = std::sqrt(det) / sin_theta;
    out.f = c.h1;
    out.nur = c.radial(nu);
    out.xnu = c.h * out.nur;
    out.deficit = std::sqrt(0.5 * diff * diff + 2.0 * off * off);
    out.form << B(0, 0), off, B(1, 1);
    out.normal = nu;
    return out;
}

/// Meridian-plane point P = (z, varpi) of a hypersurface of revolution in
/// dimension n; the rotational directions carry metric a varpi^2.
NodeResult axis_node(const WarpingFunction& w, double offset, int n, const Eigen::Vector2d& P,
                     const Eigen::Vector2d& Pu, const Eigen::Vector2d& Puu, double axis_ratio) {
    const ChartPoint<2> c(w, offset, P);
    const Eigen::Vector2d nu = c.unit_normal(Eigen::Vector2d(Pu[1], -Pu[0]));
    const double guu = c.metric(Pu, Pu);
    if (!(guu > 0.0)) throw GeometryError("degenerate induced metric");
    const double k1 = -c.metric(Puu + c.connection(Pu, Pu), nu) / guu;
    const double varpi = P[1];
    const Eigen::Vector2d axis_dir(0.0, 1.0);
    const double nur = c.radial(nu);
    const double k2 = c.metric(axis_dir, nu) / (c.a * varpi) + (c.h * c.h1 - c.dist) * nur / (c.h * c.h);

    NodeResult out;
    out.r = c.r;
    out.H = k1 + (n - 2) * k2;
    out.dmu = std::sqrt(guu) * std::pow(c.h * axis_ratio / c.dist, n - 2);
    out.f = c.h1;
    out.nur = nur;
    out.xnu = c.h * nur;
    out.deficit = std::abs(k1 - k2) * std::sqrt((n - 2.0) / (n - 1.0));
    out.form << k1, k2, 0.0;
    out.normal = nu;
    return out;
}

GeometryReport allocate(const SphereGrid& grid) {
    const Eigen::Index count = grid.size();
    GeometryReport g;
    g.n = grid.dimension();
    g.mode = grid.mode();
    g.radius.resize(count);
    g.H.resize(count);
    g.area_element.resize(count);
    g.f.resize(count);
    g.x_dot_nu.resize(count);
    g.nu_r.resize(count);
    g.deficit.resize(count);
    g.normal.resize(grid.mode() == GridMode::full ? 3 : 2, count);
    g.second_form.resize(grid.mode() == GridMode::full ? 3 : 2, count);
    return g;
}

void store(GeometryReport& g, Eigen::Index k, const NodeResult& node) {
    g.radius[k] = node.r;
    g.H[k] = node.H;
    g.area_element[k] = node.dmu;
    g.f[k] = node.f;
    g.x_dot_nu[k] = node.xnu;
    g.nu_r[k] = node.nur;
    g.deficit[k] = node.deficit;
    g.normal.col(k) = node.normal;
    g.second_form.col(k) = node.form.head(g.second_form.rows());
}

void store_failed(GeometryReport& g, Eigen::Index k) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    g.radius[k] = g.H[k] = g.f[k] = g.x_dot_nu[k] = g.nu_r[k] = g.deficit[k] = nan;
    g.area_element[k] = 0.0;
    g.normal.col(k).setConstant(nan);
    g.second_form.col(k).setConstant(nan);
}

void finalize(GeometryReport& g, const SphereGrid& grid) {
    g.area = grid.weights().dot(g.area_element);
    g.min_H = std::numeric_limits<double>::infinity();
    g.max_H = -g.min_H;
    g.umbilicity_deficit = 0.0;
    for (Eigen::Index k = 0; k < g.H.size(); ++k) {
        if (!std::isfinite(g.H[k])) continue;
        g.min_H = std::min(g.min_H, g.H[k]);
        g.max_H = std::max(g.max_H, g.H[k]);
        g.umbilicity_deficit = std::max(g.umbilicity_deficit, g.deficit[k]);
    }
}

} // namespace

Eigen::MatrixXd GeometryReport::second_fundamental_form(Eigen::Index node) const {
    if (mode == GridMode::full) {
        Eigen::Matrix2d B;
        B << second_form(0, node), second_form(1, node), second_form(1, node), second_form(2, node);
        return B;
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Constant(n - 1, second_form(1, node));
    diag[0] = second_form(0, node);
    return diag.asDiagonal();
}

double chart_offset(const WarpingFunction& ambient) {
    return ambient.variant() == Variant::ball ? 0.0 : ambient.eval(0.0).v;
}

GraphSurface make_graph(const WarpingFunction& ambient, const SphereGrid& grid, Eigen::VectorXd rho) {
    if (grid.dimension() != ambient.dimension())
        throw ParameterError("grid dimension does not match the ambient dimension");
    if (rho.size() != grid.size()) throw ParameterError("rho size does not match the grid");
    if (grid.mode() == GridMode::full) rho = grid.band_limit(rho);
    if (!rho.allFinite()) throw GeometryError("graph radius is not finite");
    if (!(rho.minCoeff() > 0.0)) throw GeometryError("graph radius must stay positive");
    if (!(rho.maxCoeff() < ambient.r_bar())) throw GeometryError("graph radius exceeds r_bar");
    return {grid, std::move(rho), ambient};
}

GraphSurface slice_surface(const WarpingFunction& ambient, const SphereGrid& grid, double r) {
    if (!(r > 0.0 && r < ambient.r_bar())) throw DomainError("slice radius outside (0, r_bar)");
    if (grid.dimension() != ambient.dimension())
        throw ParameterError("grid dimension does not match the ambient dimension");
    return {grid, Eigen::VectorXd::Constant(grid.size(), r), ambient};
}

GraphSurface perturb_slice(const GraphSurface& base, const std::vector<HarmonicMode>& modes,
                           RadialCoordinate coordinate) {
    if (modes.empty()) return base;
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(base.grid.size());
    for (const HarmonicMode& mode : modes) delta += mode.amplitude * base.grid.harmonic(mode.degree, mode.order);
    Eigen::VectorXd rho(base.grid.size());
    if (coordinate == RadialCoordinate::arclength) {
        rho = base.rho + delta;
    } else {
        const double floor = base.ambient.eval(0.0).v;
        for (Eigen::Index k = 0; k < rho.size(); ++k) {
            const double value = base.ambient.eval(base.rho[k]).v + delta[k];
            if (!(value > floor)) throw GeometryError("perturbed area radius falls below h(0)");
            rho[k] = base.ambient.radius_of(value);
        }
    }
    if (!(rho.minCoeff() > 0.0)) throw GeometryError("perturbation drives rho <= 0");
    return make_graph(base.ambient, base.grid, std::move(rho));
}

Embedding graph_embedding(const GraphSurface& surface) {
    const double offset = chart_offset(surface.ambient);
    const Eigen::MatrixXd& dirs = surface.grid.directions();
    Embedding e;
    const Eigen::VectorXd dist = surface.rho.array() + offset;
    if (surface.grid.mode() == GridMode::full) {
        e.points = dirs * dist.asDiagonal();
    } else {
        e.points.resize(2, surface.grid.size());
        e.points.row(0) = dirs.row(0).cwiseProduct(dist.transpose());
        e.points.row(1) = dist.transpose();
    }
    return e;
}

GeometryReport geometry(const GraphSurface& surface) {
    const SphereGrid& grid = surface.grid;
    const double offset = chart_offset(surface.ambient);
    // differentiate the deviation from one node so that slices are exact
    const double level = surface.rho[0];
    const GridDerivatives d = grid.differentiate(surface.rho.array() - level);
    const Eigen::VectorXd dist = surface.rho.array() + offset;
    GeometryReport g = allocate(grid);
    const Eigen::MatrixXd& dirs = grid.directions();

    if (grid.mode() == GridMode::full) {
        for (Eigen::Index k = 0; k < grid.size(); ++k) {
            const double th = grid.colatitude()[k], ph = grid.longitude()[k];
            const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
            const Eigen::Vector3d e = dirs.col(k);
            const Eigen::Vector3d e_u(ct * cp, ct * sp, -st);
            const Eigen::Vector3d e_v(-st * sp, st * cp, 0.0);
            const Eigen::Vector3d e_uv(-ct * sp, ct * cp, 0.0);
            const Eigen::Vector3d e_vv(-st * cp, -st * sp, 0.0);
            const double q = dist[k];
            const Eigen::Vector3d y = q * e;
            const Eigen::Vector3d yu = d.du[k] * e + q * e_u;
            const Eigen::Vector3d yv = d.dv[k] * e + q * e_v;
            const Eigen::Vector3d yuu = d.duu[k] * e + 2.0 * d.du[k] * e_u - q * e;
            const Eigen::Vector3d yuv = d.duv[k] * e + d.du[k] * e_v + d.dv[k] * e_u + q * e_uv;
            const Eigen::Vector3d yvv = d.dvv[k] * e + 2.0 * d.dv[k] * e_v + q * e_vv;
            store(g, k, full_node(surface.ambient, offset, y, yu, yv, yuu, yuv, yvv, st));
        }
    } else {
        const int n = grid.dimension();
        for (Eigen::Index k = 0; k < grid.size(); ++k) {
            const Eigen::Vector2d e = dirs.col(k);
            const Eigen::Vector2d e_u(-e[1], e[0]);
            const double q = dist[k];
            const Eigen::Vector2d P = q * e;
            const Eigen::Vector2d Pu = d.du[k] * e + q * e_u;
            const Eigen::Vector2d Puu = d.duu[k] * e + 2.0 * d.du[k] * e_u - q * e;
            store(g, k, axis_node(surface.ambient, offset, n, P, Pu, Puu, q));
        }
    }
    finalize(g, grid);
    return g;
}

GeometryReport geometry(const WarpingFunction& ambient, const SphereGrid& grid, const Embedding& embedding,
                        bool strict) {
    const double offset = chart_offset(ambient);
    GeometryReport g = allocate(grid);
    auto guarded = [&](Eigen::Index k, auto&& compute) {
        if (strict) {
            store(g, k, compute());
            return;
        }
        try {
            store(g, k, compute());
        } catch (const GeometryError&) {
            store_failed(g, k);
        } catch (const DomainError&) {
            store_failed(g, k);
        }
    };
    if (grid.mode() == GridMode::full) {
        GridDerivatives c[3];
        for (int i = 0; i < 3; ++i) c[i] = grid.differentiate(embedding.points.row(i).transpose());
        auto pick = [&](Eigen::VectorXd GridDerivatives::*field, Eigen::Index k) {
            return Eigen::Vector3d((c[0].*field)[k], (c[1].*field)[k], (c[2].*field)[k]);
        };
        for (Eigen::Index k = 0; k < grid.size(); ++k) {
            guarded(k, [&] {
                return full_node(ambient, offset, pick(&GridDerivatives::value, k), pick(&GridDerivatives::du, k),
                                 pick(&GridDerivatives::dv, k), pick(&GridDerivatives::duu, k),
                                 pick(&GridDerivatives::duv, k), pick(&GridDerivatives::dvv, k),
                                 std::sin(grid.colatitude()[k]));
            });
        }
    } else {
        const int n = grid.dimension();
        const GridDerivatives z = grid.differentiate(embedding.points.row(0).transpose());
        const GridDerivatives w = grid.differentiate(embedding.points.row(1).transpose());
        for (Eigen::Index k = 0; k < grid.size(); ++k) {
            const double x = grid.directions()(0, k), s = grid.directions()(1, k);
            const Eigen::Vector2d P(z.value[k], s * w.value[k]);
            const Eigen::Vector2d Pu(z.du[k], x * w.value[k] + s * w.du[k]);
            const Eigen::Vector2d Puu(z.duu[k], -s * w.value[k] + 2.0 * x * w.du[k] + s * w.duu[k]);
            guarded(k, [&] { return axis_node(ambient, offset, n, P, Pu, Puu, w.value[k]); });
        }
    }
    finalize(g, grid);
    return g;
}

double integrate(const SphereGrid& grid, const GeometryReport& report, const Eigen::VectorXd& field) {
    return grid.weights().dot(report.area_element.cwiseProduct(field));
}

double integrate(const GraphSurface& surface, const GeometryReport& report, const Eigen::VectorXd& field) {
    return integrate(surface.grid, report, field);
}

double integrate(const GraphSurface& surface, const Eigen::VectorXd& field) {
    return integrate(surface, geometry(surface), field);
}

double enclosed_weighted_volume(const GraphSurface& surface) {
    const int n = surface.ambient.dimension();
    const double base = std::pow(surface.ambient.eval(0.0).v, n);
    Eigen::VectorXd column(surface.rho.size());
    for (Eigen::Index k = 0; k < column.size(); ++k)
        column[k] = (std::pow(surface.ambient.eval(surface.rho[k]).v, n) - base) / n;
    return surface.grid.integrate(column);
}

void write_snapshot(std::ostream& out, const GraphSurface& surface, const GeometryReport& report,
                    const std::string& header) {
    out << "# " << header << '\n' << "colatitude,longitude,rho,H,deficit\n";
    char line[160];
    for (Eigen::Index k = 0; k < surface.grid.size(); ++k) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", surface.grid.colatitude()[k],
                      surface.grid.longitude()[k], surface.rho[k], report.H[k], report.deficit[k]);
        out << line;
    }
}

} // namespace warpcmc
