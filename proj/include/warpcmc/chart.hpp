#pragma once

#include "warpcmc/errors.hpp"
#include "warpcmc/warping.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace warpcmc {

/// Warped metric g = dr^2 + h^2 g_S in the chart y = (r + offset) theta:
/// G = yhat yhat^T + a (I - yhat yhat^T) with a = h^2 / |y|^2, and Levi-Civita
/// connection D + S with
/// S(U, V) = sA (U_T . V_T) yhat + sB (U_r V_T + V_r U_T).
template <int D>
struct ChartPoint {
    using Vec = Eigen::Matrix<double, D, 1>;
    Vec yhat;
    double dist, r, h, h1, h2, a, sA, sB;

    ChartPoint(const WarpingFunction& w, double offset, const Vec& y) {
        dist = y.norm();
        if (!(dist > 0.0)) throw GeometryError("surface passes through the chart origin");
        yhat = y / dist;
        r = dist - offset;
        if (!(r > 0.0 && r < w.r_bar()))
            throw GeometryError("surface node leaves the ambient domain (0, r_bar)");
        const WarpingJet j = w.eval(r);
        h = j.v;
        h1 = j.d1;
        h2 = j.d2;
        a = h * h / (dist * dist);
        sA = -(h * h1 - dist) / (dist * dist);
        sB = h1 / h - 1.0 / dist;
    }

    double radial(const Vec& u) const { return u.dot(yhat); }

    double metric(const Vec& u, const Vec& v) const {
        const double ur = radial(u), vr = radial(v);
        return ur * vr + a * (u.dot(v) - ur * vr);
    }

    Vec connection(const Vec& u, const Vec& v) const {
        const double ur = radial(u), vr = radial(v);
        const Vec ut = u - ur * yhat, vt = v - vr * yhat;
        return sA * ut.dot(vt) * yhat + sB * (ur * vt + vr * ut);
    }

    /// g-unit normal from a Euclidean normal (G^{-1} n, normalized).
    Vec unit_normal(const Vec& euclidean) const {
        const double nr = radial(euclidean);
        const Vec raised = nr * yhat + (euclidean - nr * yhat) / a;
        return raised / std::sqrt(metric(raised, raised));
    }
};

} // namespace warpcmc
