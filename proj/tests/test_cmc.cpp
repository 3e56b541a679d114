#include "doctest.h"
#include "fixtures.hpp"

#include "warpcmc/cmc.hpp"
#include "warpcmc/errors.hpp"

using namespace warpcmc;
using fixtures::pi;
using fixtures::spec;

namespace {

void check_monotone_tail(const CmcResult& r) {
    const auto& h = r.residual_history;
    const std::size_t start = h.size() / 5;
    for (std::size_t k = start + 1; k < h.size(); ++k) CHECK(h[k] <= h[k - 1] * (1.0 + 1e-6));
}

} // namespace

TEST_CASE("Euclidean perturbed sphere converges to a round sphere") {
    const WarpingFunction flat = make_model(spec(Family::euclidean));
    const GraphSurface initial = perturb_slice(slice_surface(flat, SphereGrid::full(16), 1.0), {{2, 0, 0.05}});
    const CmcResult r = find_cmc(initial, 1e-7, 2000);
    REQUIRE(r.converged);
    CHECK(r.cmc_residual < 1e-7);
    CHECK(r.umbilicity_deficit < 1e-6);
    CHECK(std::abs(r.final_volume - r.initial_volume) <= 1e-8 * r.initial_volume * std::max(1.0, r.flow_time));
    // round sphere with the enclosed volume: H = 2 / R, 4 pi R^3 / 3 = V
    const double R = std::cbrt(3 * r.initial_volume / (4 * pi));
    CHECK(r.mean_H == doctest::Approx(2.0 / R).epsilon(1e-6));
    check_monotone_tail(r);

    const UmbilicityVerdict v = umbilicity_verdict(r, flat, 3);
    CHECK(v.umbilic);
    CHECK(v.h4_margin < 1e-9);
    CHECK_FALSE(v.alarm);
}

TEST_CASE("off-centre Euclidean spheres are umbilic but not slices") {
    const WarpingFunction flat = make_model(spec(Family::euclidean));
    const GraphSurface initial = perturb_slice(slice_surface(flat, SphereGrid::full(16), 1.0), {{1, 0, 0.1}, {2, 0, 0.02}});
    const CmcResult r = find_cmc(initial, 1e-7, 4000);
    REQUIRE(r.converged);
    CHECK(r.umbilicity_deficit < 1e-6);
    CHECK_FALSE(r.is_slice);
    const UmbilicityVerdict v = umbilicity_verdict(r, flat, 3);
    CHECK(v.umbilic);
    CHECK_FALSE(v.is_slice);
    CHECK_FALSE(v.alarm);
}

TEST_CASE("Schwarzschild perturbed slice converges to a slice") {
    const WarpingFunction schw = make_model(spec(Family::schwarzschild));
    const GraphSurface initial = perturb_slice(slice_surface(schw, SphereGrid::full(16), schw.radius_of(2.0)),
                                               {{2, 0, 0.05}}, RadialCoordinate::area_radius);
    const CmcResult r = find_cmc(initial, 1e-7, 2000);
    REQUIRE(r.converged);
    CHECK(r.is_slice);
    CHECK(r.umbilicity_deficit < 1e-6);
    CHECK(std::abs(r.final_volume - r.initial_volume) <= 1e-8 * r.initial_volume * std::max(1.0, r.flow_time));
    check_monotone_tail(r);
    // the slice enclosing the same volume: h^3 = 1 + 3 V / (4 pi)
    const double s = std::cbrt(1.0 + 3 * r.initial_volume / (4 * pi));
    CHECK(r.surface.rho.mean() == doctest::Approx(schw.radius_of(s)).epsilon(1e-6));

    const UmbilicityVerdict v = umbilicity_verdict(r, schw, 3);
    CHECK(v.is_slice);
    CHECK(v.h4_margin > 0.0);
    CHECK(v.umbilic);
    CHECK_FALSE(v.alarm);
    CHECK(v.ricci_gap < 0.0);
}

TEST_CASE("dSS and RN perturbed slices converge to slices") {
    for (const auto& w : {make_model(spec(Family::desitter_schwarzschild, 3, 0.1, 0.2)),
                          make_model(spec(Family::reissner_nordstrom, 3, 1.0, 0.0, 0.25))}) {
        CAPTURE(w.name());
        const double r0 = 0.4 * w.r_bar();
        const GraphSurface initial =
            perturb_slice(slice_surface(w, SphereGrid::full(16), r0), {{3, 1, 0.03 * r0}, {2, 0, -0.02 * r0}});
        const CmcResult r = find_cmc(initial, 1e-7, 3000);
        REQUIRE(r.converged);
        CHECK(r.is_slice);
        CHECK_FALSE(umbilicity_verdict(r, w, 3).alarm);
    }
}

TEST_CASE("max_iter = 0 returns the initial surface") {
    const WarpingFunction flat = make_model(spec(Family::euclidean));
    const GraphSurface initial = perturb_slice(slice_surface(flat, SphereGrid::full(8), 1.0), {{2, 0, 0.05}});
    const CmcResult r = find_cmc(initial, 1e-7, 0);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 0);
    CHECK(r.surface.rho == initial.rho);
    CHECK(r.reason == "max_iter reached");
    CHECK_THROWS_AS(find_cmc(initial, 0.0, 10), ParameterError);
}

TEST_CASE("rigidity alarm on a synthetic record") {
    const WarpingFunction schw = make_model(spec(Family::schwarzschild));
    const SphereGrid grid = SphereGrid::full(8);
    CmcResult fake;
    fake.surface = perturb_slice(slice_surface(schw, grid, schw.radius_of(2.0)), {{1, 0, 0.05}});
    fake.converged = true;
    fake.umbilicity_deficit = 1e-8;
    fake.is_slice = false;
    const UmbilicityVerdict v = umbilicity_verdict(fake, schw, 3);
    CHECK(v.h4_margin > 0.0);
    CHECK(v.alarm);

    fake.is_slice = true;
    CHECK_FALSE(umbilicity_verdict(fake, schw, 3).alarm);
    fake.is_slice = false;
    fake.umbilicity_deficit = 1e-2;
    CHECK_FALSE(umbilicity_verdict(fake, schw, 3).alarm);
}
