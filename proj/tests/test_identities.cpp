#include "doctest.h"
#include "fixtures.hpp"

#include "warpcmc/errors.hpp"
#include "warpcmc/identities.hpp"
#include "warpcmc/quadrature.hpp"

#include <random>

using namespace warpcmc;
using fixtures::pi;
using fixtures::spec;

namespace {

std::vector<WarpingFunction> models3() {
    return {make_model(spec(Family::euclidean)),
            make_model(spec(Family::sphere)),
            make_model(spec(Family::hyperbolic)),
            make_model(spec(Family::schwarzschild)),
            make_model(spec(Family::desitter_schwarzschild, 3, 0.1, 0.2)),
            make_model(spec(Family::reissner_nordstrom, 3, 1.0, 0.0, 0.25))};
}

std::vector<WarpingFunction> all_models() {
    auto out = models3();
    out.push_back(make_model(spec(Family::schwarzschild, 4, 1.0)));
    out.push_back(make_model(spec(Family::euclidean, 5)));
    out.push_back(make_model(spec(Family::hyperbolic, 4)));
    return out;
}

SphereGrid grid_for(int n, int nlat) { return n == 3 ? SphereGrid::full(nlat) : SphereGrid::axisymmetric(n, 4 * nlat); }

double dy20(double t) { return -6.0 * std::sqrt(5.0 / (16.0 * pi)) * std::cos(t) * std::sin(t); }

} // namespace

TEST_CASE("verdict judging") {
    CHECK(judge_identity("x", 1.0, 1.0 + 1e-10, 1e-9).verdict == Verdict::equality);
    CHECK(judge_identity("x", 1.0, 1.1, 1e-9).verdict == Verdict::violated);
    CHECK(judge_inequality("x", 2.0, 1.0, +1, 1e-9).verdict == Verdict::inequality_satisfied);
    CHECK(judge_inequality("x", 1.0, 2.0, +1, 1e-9).verdict == Verdict::violated);
    CHECK(judge_inequality("x", 1.0, 2.0, -1, 1e-9).verdict == Verdict::inequality_satisfied);
    const auto r = judge_identity("x", 3.0, 2.0, 0.1);
    CHECK(r.residual == 1.0);
    CHECK(r.relative_residual == doctest::Approx(1.0 / 3.0));
    CHECK(r.tolerance_used == doctest::Approx(0.3));
    CHECK(to_string(Verdict::inequality_satisfied) == "inequality-satisfied");
}

TEST_CASE("slices: Minkowski, Heintze-Karcher and divergence equalities") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (const auto& w : all_models()) {
        CAPTURE(w.name());
        const int n = w.dimension();
        const SphereGrid grid = grid_for(n, 8);
        for (int k = 0; k < 20; ++k) {
            const double r = u(rng) * w.r_bar();
            const GraphSurface s = slice_surface(w, grid, r);
            const auto j = w.eval(r);
            const auto mk = minkowski_check(s);
            CHECK(mk.relative_residual < 1e-12);
            CHECK(mk.verdict == Verdict::equality);
            const double closed = (n - 1) * j.d1 * std::pow(j.v, n - 1) * unit_sphere_volume(n);
            CHECK(mk.rhs == doctest::Approx(closed).epsilon(1e-10));

            const auto hk = hk_check(s);
            CHECK(hk.relative_residual < 1e-9);
            CHECK(hk.verdict == Verdict::equality);
            // on a slice both sides reduce to h^n vol(N)
            CHECK(hk.lhs == doctest::Approx(std::pow(j.v, n) * unit_sphere_volume(n)).epsilon(1e-10));

            // CMC + Minkowski chain: (n-1) int f/H = int <X, nu> = n int_Omega f + h(0)^n vol(N)
            const auto div = divergence_check(s);
            CHECK(div.verdict == Verdict::equality);
            CHECK(std::abs(div.lhs - hk.lhs) <= 1e-9 * hk.lhs);
        }
    }
}

TEST_CASE("Heintze-Karcher examples") {
    const SphereGrid grid = SphereGrid::full(16);
    const WarpingFunction flat = make_model(spec(Family::euclidean));
    for (double R : {0.5, 1.0, 2.5}) {
        const auto hk = hk_check(slice_surface(flat, grid, R));
        CHECK(hk.lhs == doctest::Approx(4 * pi * R * R * R).epsilon(1e-12));
        CHECK(hk.rhs == doctest::Approx(4 * pi * R * R * R).epsilon(1e-12));
    }
    const WarpingFunction schw = make_model(spec(Family::schwarzschild));
    const auto hk = hk_check(slice_surface(schw, grid, schw.radius_of(2.0)));
    CHECK(hk.lhs == doctest::Approx(32 * pi).epsilon(1e-9));
    CHECK(hk.rhs == doctest::Approx(32 * pi).epsilon(1e-9));
    CHECK(hk.verdict == Verdict::equality);

    const GraphSurface dented = perturb_slice(slice_surface(flat, grid, 1.0), {{6, 0, 0.15}});
    REQUIRE(geometry(dented).min_H <= 0.0);
    CHECK_THROWS_AS(hk_check(dented), HypothesisError);
}

TEST_CASE("perturbed graphs: Minkowski identity and strict Heintze-Karcher") {
    const WarpingFunction flat = make_model(spec(Family::euclidean));
    const SphereGrid grid = SphereGrid::full(64);
    const GraphSurface base = slice_surface(flat, grid, 1.0);
    const auto mk = minkowski_check(perturb_slice(base, {{2, 0, 0.1}}));
    CHECK(mk.relative_residual < 1e-8);
    CHECK(mk.verdict == Verdict::equality);

    double prev = 0.0;
    for (double a : {0.02, 0.05, 0.1}) {
        const auto hk = hk_check(perturb_slice(base, {{2, 0, a}}));
        CHECK(hk.verdict == Verdict::inequality_satisfied);
        CHECK(hk.residual > prev);
        prev = hk.residual;
    }

    const WarpingFunction schw = make_model(spec(Family::schwarzschild));
    const GraphSurface s = perturb_slice(slice_surface(schw, grid, schw.radius_of(2.0)), {{3, 0, 0.05}},
                                         RadialCoordinate::area_radius);
    CHECK(minkowski_check(s).relative_residual < 1e-7);
    CHECK(hk_check(s).verdict == Verdict::inequality_satisfied);
}

TEST_CASE("Heintze-Karcher residual sign and equality characterization") {
    // Degree-1 modes approximate displaced spheres (umbilic to leading order),
    // so the corpus uses degrees >= 2 with amplitudes bounded away from zero.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.02, 0.05);
    std::bernoulli_distribution sign;
    for (const auto& w : models3()) {
        CAPTURE(w.name());
        const SphereGrid grid = SphereGrid::full(24);
        const double r0 = 0.5 * w.r_bar();
        const GraphSurface slice = slice_surface(w, grid, r0);
        const auto eq = hk_check(slice, 1e-8);
        CHECK(eq.verdict == Verdict::equality);
        CHECK(geometry(slice).umbilicity_deficit < 1e-5);
        for (int k = 0; k < 6; ++k) {
            const double a = (sign(rng) ? 1.0 : -1.0) * u(rng) * r0;
            const GraphSurface s = perturb_slice(slice, {{2 + k % 3, (k % 3) - 1, a}});
            const GeometryReport g = geometry(s);
            REQUIRE(g.min_H > 0.0);
            const auto hk = hk_check(s, g, 1e-8);
            CHECK(hk.residual >= -1e-6 * hk.lhs);
            CHECK(g.umbilicity_deficit >= 1e-5);
            CHECK(hk.verdict == Verdict::inequality_satisfied);
        }
    }
}

TEST_CASE("weighted Minkowski inequality") {
    const SphereGrid grid = SphereGrid::full(32);
    const WarpingFunction schw = make_model(spec(Family::schwarzschild));
    const double r0 = schw.radius_of(2.0);
    const auto eq = minkowski_weighted_check(slice_surface(schw, grid, r0));
    CHECK(eq.verdict == Verdict::equality);

    const double a = 0.2;
    const GraphSurface s = perturb_slice(slice_surface(schw, grid, r0), {{2, 0, a}});
    const auto rep = minkowski_weighted_check(s);
    CHECK(rep.verdict == Verdict::inequality_satisfied);
    const double slack = rep.rhs - rep.lhs;
    CHECK(slack > 0.0);

    // int h'' h |grad^Sigma r|^2 / f^2 d mu over the zonal graph, by 1-D quadrature in theta
    auto density = [&](double t) {
        const double rho = r0 + a * fixtures::y20(t), rt = a * dy20(t);
        const auto j = schw.eval(rho);
        const double tangential = rt * rt / (j.v * j.v + rt * rt);
        return 2 * pi * std::sin(t) * j.v * std::sqrt(j.v * j.v + rt * rt) * j.d2 * j.v * tangential / (j.d1 * j.d1);
    };
    const double oracle = integrate_composite(density, 0.0, pi, 32, gauss_legendre(16));
    CHECK(std::abs(slack - oracle) < 1e-8 * rep.rhs);
    CHECK(weighted_minkowski_gap(s, geometry(s)) == doctest::Approx(oracle).epsilon(1e-8));

    const WarpingFunction crossing = fixtures::h2_crossing_fixture();
    CHECK_THROWS_AS(minkowski_weighted_check(slice_surface(crossing, grid, 0.8)), HypothesisError);
    CHECK(minkowski_weighted_check(slice_surface(crossing, grid, 0.5)).verdict == Verdict::equality);
    CHECK_THROWS_AS(minkowski_weighted_check(slice_surface(make_model(spec(Family::hyperbolic)), grid, 0.5)),
                    NotApplicableError);
}

TEST_CASE("Minkowski residual decays spectrally under refinement") {
    const WarpingFunction schw = make_model(spec(Family::schwarzschild));
    const double r0 = schw.radius_of(2.0);
    auto residual = [&](int nlat) {
        const SphereGrid grid = SphereGrid::full(nlat);
        Eigen::VectorXd rho(grid.size());
        for (Eigen::Index k = 0; k < grid.size(); ++k) {
            const Eigen::Vector3d d = grid.directions().col(k);
            rho[k] = r0 + 0.1 * std::exp(10.0 * (d[0] * 0.6 + d[2] * 0.8 - 1.0));
        }
        return minkowski_check(make_graph(schw, grid, rho)).relative_residual;
    };
    const double coarse = residual(12), fine = residual(24);
    CAPTURE(coarse);
    CAPTURE(fine);
    CHECK(fine < 1e-8);
    CHECK(coarse / std::max(fine, 1e-16) >= 100.0);
}
