#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dbar/errors.hpp"
#include "dbar/testdata.hpp"
#include "dbar/zeroset.hpp"

using namespace dbar;

namespace {

PolynomialF poly(int n, std::map<std::vector<int>, cplx> terms) {
    PolynomialF f;
    f.n = n;
    f.terms = std::move(terms);
    return f;
}

// Field supported in a < |z_1 - c| < b.
ScalarField annulus(const GridSpec& g, double a, double b, cplx c = 0.0) {
    return sample(
        [&](const auto& z) {
            const double s = std::abs(z[0] - c);
            return cplx(s > a && s < b ? std::pow((s - a) * (b - s), 2) : 0.0, 0.0);
        },
        g);
}

}  // namespace

TEST_CASE("polynomial evaluation") {
    const cplx i(0.0, 1.0);
    CHECK(std::abs(eval_f(poly(2, {{{1, 1}, 1.0}, {{0, 0}, -0.25}}), {0.5, 0.5})) < 1e-15);
    CHECK(eval_f(poly(2, {{{1, 0}, 1.0}}), {cplx(0.3, 0.1), 7.0}) == cplx(0.3, 0.1));
    CHECK(std::abs(eval_f(poly(2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}}), {i, 1.0})) < 1e-15);
    CHECK(poly(2, {{{2, 1}, 1.0}, {{0, 3}, 2.0}}).degrees() == std::vector<int>{2, 3});
}

TEST_CASE("polynomial json round trip") {
    const PolynomialF f = poly(2, {{{1, 1}, cplx(1.0, 0.5)}, {{0, 0}, -0.25}});
    const PolynomialF g = PolynomialF::from_json(f.to_json());
    CHECK(g.n == 2);
    CHECK(g.terms == f.terms);
    CHECK_THROWS(PolynomialF::from_json("{\"n\": 2, \"terms\": [{\"exp\": [1], \"re\": 1}]}"));
}

TEST_CASE("line roots") {
    const auto r = line_roots(poly(2, {{{1, 1}, 1.0}, {{0, 0}, -0.25}}), 1, {0.0, 0.5});
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0] - 0.5) < 1e-12);
    const auto r0 = line_roots(poly(1, {{{1}, 1.0}}), 1, {cplx(0.7, 0.2)});
    REQUIRE(r0.size() == 1);
    CHECK(std::abs(r0[0]) < 1e-14);
    CHECK_THROWS_AS(line_roots(poly(2, {{{1, 0}, 0.0}, {{0, 1}, 1.0}}), 1, {0.0, 0.0}), DegenerateLineError);
    // roots outside the closed unit disc are dropped
    CHECK(line_roots(poly(1, {{{1}, 1.0}, {{0}, -2.0}}), 1, {0.0}).empty());
}

TEST_CASE("line roots do not depend on term order or scaling") {
    // (z - 0.3)(z + 0.2i)(z - 0.5 - 0.5i) expanded
    const cplx a(0.3, 0.0), b(0.0, -0.2), c(0.5, 0.5);
    const PolynomialF f = poly(1, {{{3}, 1.0}, {{2}, -(a + b + c)}, {{1}, a * b + a * c + b * c}, {{0}, -a * b * c}});
    PolynomialF g = f;
    for (auto& [e, v] : g.terms) v *= cplx(0.0, -3.0);
    const auto rf = line_roots(f, 1, {0.0}), rg = line_roots(g, 1, {0.0});
    REQUIRE(rf.size() == 3);
    REQUIRE(rg.size() == 3);
    std::vector<cplx> want{b, a, c};
    std::sort(want.begin(), want.end(), [](cplx x, cplx y) { return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag()); });
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(rf[i] - want[i]) < 1e-12);
        CHECK(std::abs(rg[i] - rf[i]) < 1e-12);
    }
}

TEST_CASE("separation from Z") {
    const GridSpec g = GridSpec::uniform(1, 256);
    const PolynomialF f = poly(1, {{{1}, 1.0}});
    CHECK(separation(f, 1, annulus(g, 0.5, 0.8), 1e-10) == doctest::Approx(0.5).epsilon(0.03));
    CHECK_THROWS_AS(separation(f, 1, annulus(g, 0.0, 0.8, 0.05), 1e-10), SupportTouchesZError);
    CHECK_THROWS(separation(f, 1, ScalarField(g), 1e-10));
}

TEST_CASE("disc merging") {
    SUBCASE("far apart discs stay") {
        const auto d = merge_discs({0.0, 0.4}, 0.15, 1);
        REQUIRE(d.size() == 2);
        CHECK(d[0].radius == doctest::Approx(0.05));
        CHECK(d[1].radius == doctest::Approx(0.05));
    }
    SUBCASE("close pair collapses onto the smaller center") {
        const auto d = merge_discs({cplx(0.32, 0.0), cplx(0.3, 0.0)}, 0.15, 1);
        REQUIRE(d.size() == 1);
        CHECK(d[0].center == cplx(0.3, 0.0));
        CHECK(d[0].radius == doctest::Approx(0.15));
    }
    SUBCASE("chain merges into one disc covering all") {
        const cplx c(-0.2, 0.1);
        const auto d = merge_discs({c, c + 0.06, c + 0.12}, 0.15, 1);
        REQUIRE(d.size() == 1);
        CHECK(d[0].center == c);
        CHECK(d[0].radius + 1e-12 >= 0.12);
    }
}

TEST_CASE("corona geometry") {
    const GridSpec g = GridSpec::uniform(1, 400);
    const ScalarField phi = annulus(g, 0.1, 0.4);
    const CoronaGeometry geo = corona_geometry(phi, 1, nullptr);
    const double h = g.h(0);
    CHECK(geo.r == doctest::Approx(0.4).epsilon(2 * h / 0.4));
    CHECK(geo.delta == doctest::Approx((1 - geo.r) / 3));
    CHECK(geo.a == doctest::Approx(geo.r + geo.delta));
    CHECK(geo.b == doctest::Approx(geo.r + 2 * geo.delta));
    CHECK(geo.A0 == doctest::Approx(std::numbers::pi / geo.outer_area()));
    CHECK(geo.inner[0].empty());
    CHECK(outer_normalizer(0.28 * std::numbers::pi) == doctest::Approx(1 / 0.28));
    CHECK(inner_normalizer(2.0) == -outer_normalizer(2.0));

    const DiscFamily fam = disc_family(poly(1, {{{1}, 1.0}}), 1, phi);
    const CoronaGeometry gp = corona_geometry(phi, 1, &fam);
    REQUIRE(gp.inner[0].size() == 1);
    CHECK(gp.inner[0][0].delta == doctest::Approx(fam.discs[0][0].radius / 3));
    CHECK(gp.inner[0][0].A < 0.0);

    CHECK_THROWS_AS(corona_geometry(annulus(g, 0.2, 1.1), 1, nullptr), SupportNotCompactError);
}

TEST_CASE("zero samples lie on Z") {
    const GridSpec g = GridSpec::uniform(2, 12);
    const PolynomialF f = poly(2, {{{1, 1}, 1.0}, {{0, 0}, -0.25}});
    const auto pts = zero_samples(f, g);
    CHECK(!pts.empty());
    for (const auto& p : pts) CHECK(std::abs(eval_f(f, p)) < 1e-12);
}
