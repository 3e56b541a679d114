#pragma once

#include <Eigen/Dense>

#include <memory>

namespace warpcmc {

enum class GridMode { full, axisymmetric };

/// A field and its parameter derivatives at the grid nodes.  Full mode uses
/// (u, v) = (colatitude, longitude); axisymmetric mode only fills the u parts.
struct GridDerivatives {
    Eigen::VectorXd value, du, dv, duu, duv, dvv;
};

/// Quadrature and spectral grid on S^{n-1}.
///
/// full (n = 3): Gauss-Legendre latitudes times 2 * nlat uniform longitudes,
/// real spherical harmonics up to degree nlat - 1.  Node i * nlon + j.
///
/// axisymmetric (n >= 3): Gauss-Gegenbauer nodes in x = cos(u) for the weight
/// (1 - x^2)^{(n-3)/2}; fields are zonal and expanded in the orthonormal
/// polynomials of that weight (the zonal harmonics of S^{n-1}).
///
/// Copies share the precomputed tables.
class SphereGrid {
public:
    SphereGrid() = default;
    static SphereGrid full(int nlat);
    static SphereGrid axisymmetric(int n, int count);

    GridMode mode() const;
    int dimension() const;
    Eigen::Index size() const;
    int nlat() const;
    int nlon() const;
    int max_degree() const;

    /// Quadrature weight of each node w.r.t. the unit-sphere measure.
    const Eigen::VectorXd& weights() const;
    const Eigen::VectorXd& colatitude() const;
    const Eigen::VectorXd& longitude() const;
    /// Unit direction of each node: 3 x size (full) or (cos u, sin u) (axisymmetric).
    const Eigen::MatrixXd& directions() const;

    /// Spectral coefficients against the L^2-orthonormal harmonics.
    /// full: index l*l + l + m, m in [-l, l]; axisymmetric: index l.
    Eigen::Index coefficient_count() const;
    /// Harmonic degree of coefficient k.
    int degree_of(Eigen::Index k) const;
    Eigen::Index coefficient_index(int l, int m) const;

    Eigen::VectorXd analyze(const Eigen::VectorXd& field) const;
    Eigen::VectorXd synthesize(const Eigen::VectorXd& coefficients) const;
    GridDerivatives derivatives_from_coefficients(const Eigen::VectorXd& coefficients) const;
    GridDerivatives differentiate(const Eigen::VectorXd& field) const;
    /// L^2 projection onto the resolved harmonics.
    Eigen::VectorXd band_limit(const Eigen::VectorXd& field) const;

    /// Orthonormal harmonic Y_lm at the nodes (axisymmetric: m must be 0).
    Eigen::VectorXd harmonic(int l, int m) const;

    double integrate(const Eigen::VectorXd& field) const { return weights().dot(field); }

    struct Data;

private:
    explicit SphereGrid(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
    std::shared_ptr<const Data> data_;
};

} // namespace warpcmc
