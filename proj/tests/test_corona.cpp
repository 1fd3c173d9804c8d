#include <doctest.h>

#include <cmath>

#include "dbar/corona.hpp"
#include "dbar/errors.hpp"
#include "dbar/testdata.hpp"

using namespace dbar;

namespace {

double moment_gap(const ScalarField& a, const ScalarField& b, int k, int l_max) {
    double d = 0.0;
    for (int l = 0; l <= l_max; ++l) {
        const SliceField ma = moment(a, k, l), mb = moment(b, k, l);
        for (std::size_t p = 0; p < ma.values.size(); ++p) d = std::max(d, std::abs(ma.values[p] - mb.values[p]));
    }
    return d;
}

}  // namespace

TEST_CASE("annulus weights hit the lattice constraints") {
    const GridSpec g = GridSpec::uniform(1, 128);
    const PlaneLayout L(g, 1);
    const auto w = corona::annulus_weights(L, 0.0, 0.6, 0.8, false, -6, 10, 0, 8);
    CHECK(!w.cells.empty());
    CHECK(w.residual < 1e-10);
    CHECK(w.p_lo == -6);
    CHECK(w.p_hi == 10);
    double area = 0.0;
    for (double x : w.w) area += x;
    CHECK(area * L.ha * L.hb == doctest::Approx(3.141592653589793 * (0.64 - 0.36)).epsilon(1e-10));
}

TEST_CASE("constraint band is trimmed outside the kept range first") {
    const GridSpec g = GridSpec::uniform(1, 24);
    const PlaneLayout L(g, 1);
    const auto w = corona::annulus_weights(L, 0.0, 0.6, 0.8, false, -40, 40, 0, 4);
    CHECK(w.p_lo <= 0);
    CHECK(w.p_hi >= 4);
    CHECK(2 * (w.p_hi - w.p_lo + 1) <= static_cast<int>(w.cells.size()));
}

TEST_CASE("outer component preserves moments") {
    GridSpec g = GridSpec::uniform(2, 96);
    g.res[2] = g.res[3] = 6;
    const ScalarField phi = testdata::random_field(g, 11);
    const CoronaGeometry geo = corona_geometry(phi, 1, nullptr);
    const auto op = corona::make_operator(g, geo, 8);
    const double norm = lr_norm(phi, 2.0);
    CHECK(moment_gap(corona::K_outer(phi, op), phi, 1, 8) / norm < 1e-8);
    // The component lives in the outer annulus only.
    const ScalarField K = corona::K_outer(phi, op);
    std::vector<cplx> z;
    double inside = 0.0;
    for (std::size_t i = 0; i < K.size(); ++i) {
        point_at(g, i, z);
        if (std::abs(z[0]) <= geo.a) inside = std::max(inside, std::abs(K[i]));
    }
    CHECK(inside == 0.0);
}

TEST_CASE("moment-free data has a vanishing outer component") {
    const GridSpec g = GridSpec::uniform(1, 256);
    const ScalarField phi = testdata::annulus_moment_free(g).omega.get_increasing({1});
    const auto op = corona::make_operator(g, corona_geometry(phi, 1, nullptr), 16);
    CHECK(corona::K_outer(phi, op).sup() / phi.sup() < 1e-6);
}

TEST_CASE("operators are linear") {
    const GridSpec g = GridSpec::uniform(1, 64);
    const ScalarField a = testdata::random_field(g, 1), b = testdata::random_field(g, 2);
    const ScalarField sum = a + cplx(2.0, 1.0) * b;
    const auto op = corona::make_operator(g, corona_geometry(sum, 1, nullptr), 8);
    const ScalarField lhs = corona::K_full(sum, op);
    const ScalarField rhs = corona::K_full(a, op) + cplx(2.0, 1.0) * corona::K_full(b, op);
    CHECK((lhs - rhs).sup() / lhs.sup() < 1e-12);
}

TEST_CASE("mismatched geometry is refused") {
    const GridSpec g = GridSpec::uniform(1, 64);
    const testdata::Bump small{{0.0, 0.0}, 0.3, 4}, big{{0.0, 0.0}, 0.7, 4};
    const ScalarField a = sample([&](const auto& z) { return small.value(z[0]); }, g);
    const ScalarField b = sample([&](const auto& z) { return big.value(z[0]); }, g);
    const auto op = corona::make_operator(g, corona_geometry(a, 1, nullptr), 8);
    CHECK_THROWS_AS(corona::K_outer(b, op), GeometryError);
    CHECK_THROWS_AS(corona::K_inner(a, 1, op), GeometryError);
}

TEST_CASE("decomposition telescopes and annihilates moments") {
    GridSpec g = GridSpec::uniform(2, 96);
    g.res[2] = g.res[3] = 8;
    const ScalarField phi = testdata::random_field(g, 4);
    const auto d = corona::decompose(phi, 2);
    REQUIRE(d.parts.size() == 2);
    const ScalarField sum = d.parts[0] + d.parts[1];
    CHECK((sum - phi).sup() <= 1e-12 * phi.sup());
    CHECK(d.residual_report[0] < 1e-5);
}

TEST_CASE("telescoping holds for any seed") {
    const GridSpec g = GridSpec::uniform(2, 16);
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const ScalarField phi = testdata::random_field(g, seed);
        const auto d = corona::decompose(phi, 2);
        CHECK(((d.parts[0] + d.parts[1]) - phi).sup() <= 1e-12 * phi.sup());
    }
}
