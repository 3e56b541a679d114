#pragma once

#include "warpcmc/warping.hpp"

namespace warpcmc {

/// Eigenvalues of Ric with respect to g on a round-sphere base
/// (Ric_N = (n-2) rho g_N).  radial has multiplicity 1, tangential n-1.
struct RicciSplit {
    double radial;
    double tangential;
};
RicciSplit ricci_split(const WarpingFunction& w, double r, int n);

/// Scalar curvature R = -(n-1) W(r).
double scalar_curvature(const WarpingFunction& w, double r, int n);

/// W(r) = 2 h''/h - (n-2) (rho - h'^2)/h^2 and its radial derivative.
/// Monotonicity of W is condition (H3); R = -(n-1) W.
struct H3Quantity {
    double value;
    double derivative;
};
H3Quantity h3_quantity(const WarpingFunction& w, double r, int n);

/// g-eigenvalues of (Laplacian f) g - D^2 f + f Ric for f = h'(r).  The
/// dr x dr parts cancel identically, so radial is 0; tangential equals
/// (h^2 h''' + (n-3) h h' h'' + (n-2) h' (rho - h'^2)) / h^2 = h W' / 2.
struct StaticTensor {
    double radial;
    double tangential;
};
StaticTensor static_tensor(const WarpingFunction& w, double r, int n);

/// rho - h'(r)^2.  For closed-form ball variants near the origin it is evaluated as
/// (rho - h'(0)^2) - 2 int_0^r h' h'', which avoids the cancellation that
/// (rho - h'^2) / h^2 otherwise suffers as r -> 0.
double warping_gap(const WarpingFunction& w, double r, double rho);
double warping_gap(const WarpingFunction& w, double r, double rho, const WarpingJet& jet);

/// (H4) quantity h''/h + (rho - h'^2)/h^2 with the given base constant.
double h4_quantity(const WarpingFunction& w, double r, double rho);

} // namespace warpcmc
