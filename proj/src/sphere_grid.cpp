#include "warpcmc/sphere_grid.hpp"
#include "warpcmc/errors.hpp"
#include "warpcmc/quadrature.hpp"
#include "warpcmc/warping.hpp"

#include <cmath>
#include <vector>

namespace warpcmc {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct SphereGrid::Data {
    GridMode mode = GridMode::full;
    int n = 3;
    int nlat = 0, nlon = 1, lmax = 0;
    Eigen::VectorXd weights, colatitude, longitude;
    Eigen::MatrixXd directions;

    // full mode
    Eigen::VectorXd lat_weights, sin_lat;
    double dlon = 0.0;
    std::vector<Eigen::MatrixXd> legendre, legendre_d, legendre_dd;  // per order m
    Eigen::MatrixXd cos_table, sin_table, cos_d, sin_d, cos_dd, sin_dd;

    // axisymmetric mode
    Eigen::MatrixXd zonal, zonal_x, zonal_xx;
};

SphereGrid SphereGrid::full(int nlat) {
    if (nlat < 4) throw ParameterError("full sphere grid needs at least 4 latitudes");
    auto d = std::make_shared<Data>();
    d->mode = GridMode::full;
    d->n = 3;
    d->nlat = nlat;
    d->nlon = 2 * nlat;
    d->lmax = nlat - 1;
    const int L = d->lmax, nlon = d->nlon;
    const GaussRule rule = gauss_legendre(nlat);
    d->lat_weights = rule.weights;
    d->sin_lat = (1.0 - rule.nodes.array().square()).sqrt();
    d->dlon = 2.0 * M_PI / nlon;

    const Eigen::Index count = static_cast<Eigen::Index>(nlat) * nlon;
    d->weights.resize(count);
    d->colatitude.resize(count);
    d->longitude.resize(count);
    d->directions.resize(3, count);
    for (int i = 0; i < nlat; ++i) {
        const double theta = std::acos(rule.nodes[i]);
        for (int j = 0; j < nlon; ++j) {
            const Eigen::Index k = static_cast<Eigen::Index>(i) * nlon + j;
            const double phi = j * d->dlon;
            d->weights[k] = rule.weights[i] * d->dlon;
            d->colatitude[k] = theta;
            d->longitude[k] = phi;
            d->directions.col(k) << d->sin_lat[i] * std::cos(phi), d->sin_lat[i] * std::sin(phi), rule.nodes[i];
        }
    }

    // normalized associated Legendre functions, integral of square over [-1, 1] = 1
    d->legendre.assign(L + 1, Eigen::MatrixXd());
    d->legendre_d.assign(L + 1, Eigen::MatrixXd());
    d->legendre_dd.assign(L + 1, Eigen::MatrixXd());
    for (int m = 0; m <= L; ++m) {
        d->legendre[m].setZero(nlat, L - m + 1);
        d->legendre_d[m].setZero(nlat, L - m + 1);
        d->legendre_dd[m].setZero(nlat, L - m + 1);
    }
    for (int i = 0; i < nlat; ++i) {
        const double x = rule.nodes[i], s = d->sin_lat[i];
        double pmm = std::sqrt(0.5);
        for (int m = 0; m <= L; ++m) {
            if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
            Eigen::MatrixXd& P = d->legendre[m];
            P(i, 0) = pmm;
            if (m < L) P(i, 1) = std::sqrt(2.0 * m + 3.0) * x * pmm;
            for (int l = m + 2; l <= L; ++l) {
                const double ll = l, mm = m;
                const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
                const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
                P(i, l - m) = a * (x * P(i, l - m - 1) - b * P(i, l - m - 2));
            }
            for (int l = m; l <= L; ++l) {
                const double ll = l, mm = m;
                const double prev = l > m ? P(i, l - m - 1) : 0.0;
                const double c = std::sqrt((2.0 * ll + 1.0) * (ll * ll - mm * mm) / (2.0 * ll - 1.0));
                const double dtheta = (ll * x * P(i, l - m) - c * prev) / s;
                d->legendre_d[m](i, l - m) = dtheta;
                d->legendre_dd[m](i, l - m) =
                    -(x / s) * dtheta - (ll * (ll + 1.0) - mm * mm / (s * s)) * P(i, l - m);
            }
        }
    }

    d->cos_table.resize(nlon, L + 1);
    d->sin_table.resize(nlon, L + 1);
    d->cos_d.resize(nlon, L + 1);
    d->sin_d.resize(nlon, L + 1);
    for (int j = 0; j < nlon; ++j) {
        const double phi = j * d->dlon;
        for (int m = 0; m <= L; ++m) {
            const double norm = m == 0 ? 1.0 / std::sqrt(2.0 * M_PI) : 1.0 / std::sqrt(M_PI);
            const double c = std::cos(m * phi), sn = std::sin(m * phi);
            d->cos_table(j, m) = norm * c;
            d->sin_table(j, m) = m == 0 ? 0.0 : norm * sn;
            d->cos_d(j, m) = -m * norm * sn;
            d->sin_d(j, m) = m == 0 ? 0.0 : m * norm * c;
        }
    }
    const Eigen::VectorXd m2 = Eigen::VectorXd::LinSpaced(L + 1, 0, L).array().square();
    d->cos_dd = -(d->cos_table * m2.asDiagonal());
    d->sin_dd = -(d->sin_table * m2.asDiagonal());
    return SphereGrid(std::move(d));
}

SphereGrid SphereGrid::axisymmetric(int n, int count) {
    if (n < 3) throw ParameterError("axisymmetric grid needs n >= 3");
    if (count < 4) throw ParameterError("axisymmetric grid needs at least 4 nodes");
    auto d = std::make_shared<Data>();
    d->mode = GridMode::axisymmetric;
    d->n = n;
    d->nlat = count;
    d->nlon = 1;
    d->lmax = count - 1;
    const double alpha = 0.5 * (n - 3);
    const GaussRule rule = gauss_jacobi_symmetric(count, alpha);
    const double sub_volume = unit_sphere_volume(n - 1);
    const double scale = 1.0 / std::sqrt(sub_volume);

    d->weights = rule.weights * sub_volume;
    d->colatitude = rule.nodes.array().acos();
    d->longitude = Eigen::VectorXd::Zero(count);
    d->directions.resize(2, count);
    d->zonal.resize(count, count);
    d->zonal_x.resize(count, count);
    d->zonal_xx.resize(count, count);
    for (int i = 0; i < count; ++i) {
        const double x = rule.nodes[i];
        d->directions.col(i) << x, std::sqrt(1.0 - x * x);
        const OrthoValues v = symmetric_jacobi_values(count, alpha, x);
        d->zonal.row(i) = scale * v.p.transpose();
        d->zonal_x.row(i) = scale * v.dp.transpose();
        d->zonal_xx.row(i) = scale * v.ddp.transpose();
    }
    return SphereGrid(std::move(d));
}

GridMode SphereGrid::mode() const { return data_->mode; }
int SphereGrid::dimension() const { return data_->n; }
Eigen::Index SphereGrid::size() const { return data_->weights.size(); }
int SphereGrid::nlat() const { return data_->nlat; }
int SphereGrid::nlon() const { return data_->nlon; }
int SphereGrid::max_degree() const { return data_->lmax; }
const Eigen::VectorXd& SphereGrid::weights() const { return data_->weights; }
const Eigen::VectorXd& SphereGrid::colatitude() const { return data_->colatitude; }
const Eigen::VectorXd& SphereGrid::longitude() const { return data_->longitude; }
const Eigen::MatrixXd& SphereGrid::directions() const { return data_->directions; }

Eigen::Index SphereGrid::coefficient_count() const {
    const Eigen::Index L = data_->lmax;
    return data_->mode == GridMode::full ? (L + 1) * (L + 1) : L + 1;
}

int SphereGrid::degree_of(Eigen::Index k) const {
    if (data_->mode == GridMode::axisymmetric) return static_cast<int>(k);
    int l = static_cast<int>(std::sqrt(static_cast<double>(k)));
    while (l * l > k) --l;
    while ((l + 1) * (l + 1) <= k) ++l;
    return l;
}

Eigen::Index SphereGrid::coefficient_index(int l, int m) const {
    if (l < 0 || l > data_->lmax || std::abs(m) > l)
        throw ParameterError("harmonic (l, m) outside the grid's resolved range");
    if (data_->mode == GridMode::axisymmetric) {
        if (m != 0) throw ParameterError("axisymmetric grid resolves zonal harmonics (m = 0) only");
        return l;
    }
    return static_cast<Eigen::Index>(l) * l + l + m;
}

Eigen::VectorXd SphereGrid::analyze(const Eigen::VectorXd& field) const {
    const Data& d = *data_;
    if (field.size() != size()) throw ParameterError("field size does not match the grid");
    if (d.mode == GridMode::axisymmetric) return d.zonal.transpose() * d.weights.cwiseProduct(field);

    const int L = d.lmax;
    Eigen::Map<const RowMajor> F(field.data(), d.nlat, d.nlon);
    const Eigen::MatrixXd A = d.lat_weights.asDiagonal() * (F * d.cos_table) * d.dlon;
    const Eigen::MatrixXd B = d.lat_weights.asDiagonal() * (F * d.sin_table) * d.dlon;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(coefficient_count());
    for (int m = 0; m <= L; ++m) {
        const Eigen::VectorXd ca = d.legendre[m].transpose() * A.col(m);
        const Eigen::VectorXd cb = d.legendre[m].transpose() * B.col(m);
        for (int l = m; l <= L; ++l) {
            const Eigen::Index base = static_cast<Eigen::Index>(l) * l + l;
            c[base + m] = ca[l - m];
            if (m > 0) c[base - m] = cb[l - m];
        }
    }
    return c;
}

GridDerivatives SphereGrid::derivatives_from_coefficients(const Eigen::VectorXd& c) const {
    const Data& d = *data_;
    if (c.size() != coefficient_count()) throw ParameterError("coefficient count does not match the grid");
    GridDerivatives out;
    if (d.mode == GridMode::axisymmetric) {
        const Eigen::ArrayXd x = d.directions.row(0).transpose();
        const Eigen::ArrayXd s = d.directions.row(1).transpose();
        const Eigen::ArrayXd fx = d.zonal_x * c;
        const Eigen::ArrayXd fxx = d.zonal_xx * c;
        out.value = d.zonal * c;
        out.du = -s * fx;
        out.duu = s * s * fxx - x * fx;
        out.dv = out.duv = out.dvv = Eigen::VectorXd::Zero(size());
        return out;
    }

    const int L = d.lmax, nlat = d.nlat, nlon = d.nlon;
    Eigen::MatrixXd A(nlat, L + 1), Ad(nlat, L + 1), Add(nlat, L + 1);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nlat, L + 1), Bd = B, Bdd = B;
    for (int m = 0; m <= L; ++m) {
        Eigen::VectorXd ca(L - m + 1), cb(L - m + 1);
        for (int l = m; l <= L; ++l) {
            const Eigen::Index base = static_cast<Eigen::Index>(l) * l + l;
            ca[l - m] = c[base + m];
            cb[l - m] = m > 0 ? c[base - m] : 0.0;
        }
        A.col(m) = d.legendre[m] * ca;
        Ad.col(m) = d.legendre_d[m] * ca;
        Add.col(m) = d.legendre_dd[m] * ca;
        if (m > 0) {
            B.col(m) = d.legendre[m] * cb;
            Bd.col(m) = d.legendre_d[m] * cb;
            Bdd.col(m) = d.legendre_dd[m] * cb;
        }
    }
    auto assemble = [&](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& ct,
                        const Eigen::MatrixXd& st) {
        RowMajor f = a * ct.transpose() + b * st.transpose();
        return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(nlat) * nlon));
    };
    out.value = assemble(A, B, d.cos_table, d.sin_table);
    out.du = assemble(Ad, Bd, d.cos_table, d.sin_table);
    out.duu = assemble(Add, Bdd, d.cos_table, d.sin_table);
    out.dv = assemble(A, B, d.cos_d, d.sin_d);
    out.duv = assemble(Ad, Bd, d.cos_d, d.sin_d);
    out.dvv = assemble(A, B, d.cos_dd, d.sin_dd);
    return out;
}

Eigen::VectorXd SphereGrid::synthesize(const Eigen::VectorXd& c) const {
    const Data& d = *data_;
    if (d.mode == GridMode::axisymmetric) return d.zonal * c;
    const int L = d.lmax;
    Eigen::MatrixXd A(d.nlat, L + 1), B = Eigen::MatrixXd::Zero(d.nlat, L + 1);
    for (int m = 0; m <= L; ++m) {
        Eigen::VectorXd ca(L - m + 1), cb(L - m + 1);
        for (int l = m; l <= L; ++l) {
            const Eigen::Index base = static_cast<Eigen::Index>(l) * l + l;
            ca[l - m] = c[base + m];
            cb[l - m] = m > 0 ? c[base - m] : 0.0;
        }
        A.col(m) = d.legendre[m] * ca;
        if (m > 0) B.col(m) = d.legendre[m] * cb;
    }
    RowMajor f = A * d.cos_table.transpose() + B * d.sin_table.transpose();
    return Eigen::Map<const Eigen::VectorXd>(f.data(), size());
}

GridDerivatives SphereGrid::differentiate(const Eigen::VectorXd& field) const {
    return derivatives_from_coefficients(analyze(field));
}

Eigen::VectorXd SphereGrid::band_limit(const Eigen::VectorXd& field) const {
    return synthesize(analyze(field));
}

Eigen::VectorXd SphereGrid::harmonic(int l, int m) const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(coefficient_count());
    c[coefficient_index(l, m)] = 1.0;
    return synthesize(c);
}

} // namespace warpcmc
