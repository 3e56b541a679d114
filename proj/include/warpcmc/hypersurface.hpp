#pragma once

#include "warpcmc/sphere_grid.hpp"
#include "warpcmc/warping.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace warpcmc {

/// Radial graph r = rho(theta) over S^{n-1}.
struct GraphSurface {
    SphereGrid grid;
    Eigen::VectorXd rho;
    WarpingFunction ambient;
};

/// Node positions of a closed hypersurface in the ambient "Cartesian" chart
/// y = (r + r_offset) theta, which is smooth across the origin for the ball
/// variant.  Full mode: 3 x size.  Axisymmetric mode: rows (z, w) with the
/// distance to the axis equal to sin(u) w.
struct Embedding {
    Eigen::MatrixXd points;
};

struct GeometryReport {
    Eigen::VectorXd radius;        ///< ambient r at each node
    Eigen::VectorXd H;
    Eigen::VectorXd area_element;  ///< d mu relative to the unit-sphere measure
    Eigen::VectorXd f;             ///< h'(r)
    Eigen::VectorXd x_dot_nu;      ///< <X, nu> = h nu_r
    Eigen::VectorXd nu_r;          ///< <d/dr, nu>
    Eigen::VectorXd deficit;       ///< |II - H/(n-1) id| (Frobenius, orthonormal frame)
    Eigen::MatrixXd normal;        ///< unit normal in chart components
    /// Second fundamental form in an orthonormal tangent frame: rows
    /// (II_11, II_12, II_22) in full mode, principal curvatures
    /// (meridian, rotational) in axisymmetric mode.
    Eigen::MatrixXd second_form;
    int n = 3;
    GridMode mode = GridMode::full;

    double area = 0.0;
    double min_H = 0.0, max_H = 0.0;
    double umbilicity_deficit = 0.0;

    Eigen::MatrixXd second_fundamental_form(Eigen::Index node) const;
};

/// Distance of r = 0 from the chart origin: h(0) for the boundary variant.
double chart_offset(const WarpingFunction& ambient);

GraphSurface make_graph(const WarpingFunction& ambient, const SphereGrid& grid, Eigen::VectorXd rho);
GraphSurface slice_surface(const WarpingFunction& ambient, const SphereGrid& grid, double r);

struct HarmonicMode {
    int degree;
    int order;
    double amplitude;
};

/// Which radial coordinate the perturbation amplitudes are measured in.
enum class RadialCoordinate { arclength, area_radius };

/// rho = rho_base + sum a_lm Y_lm (arclength), or h(rho) = h(rho_base) + sum
/// a_lm Y_lm (area radius).  Full-mode results are band limited.
GraphSurface perturb_slice(const GraphSurface& base, const std::vector<HarmonicMode>& modes,
                           RadialCoordinate coordinate = RadialCoordinate::arclength);

GeometryReport geometry(const GraphSurface& surface);
/// Geometry of an arbitrary parametrized surface.  With strict = false a node
/// whose geometry cannot be evaluated gets NaN fields and zero area element.
GeometryReport geometry(const WarpingFunction& ambient, const SphereGrid& grid, const Embedding& embedding,
                        bool strict = true);

Embedding graph_embedding(const GraphSurface& surface);

/// sum field * d mu * weight.
double integrate(const GraphSurface& surface, const GeometryReport& report, const Eigen::VectorXd& field);
double integrate(const GraphSurface& surface, const Eigen::VectorXd& field);
double integrate(const SphereGrid& grid, const GeometryReport& report, const Eigen::VectorXd& field);

/// Integral of f over the region between N x {0} (or the origin) and the
/// graph: sum over directions of (h(rho)^n - h(0)^n) / n.
double enclosed_weighted_volume(const GraphSurface& surface);

/// One row per node: colatitude, longitude, rho, H, deficit.
void write_snapshot(std::ostream& out, const GraphSurface& surface, const GeometryReport& report,
                    const std::string& header);

} // namespace warpcmc
