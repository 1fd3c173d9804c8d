#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dbar/cauchy.hpp"
#include "dbar/errors.hpp"
#include "dbar/testdata.hpp"

using namespace dbar;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_diff(const ScalarField& a, const ScalarField& b) {
    double d = 0.0, m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
        m = std::max(m, std::abs(b[i]));
    }
    return d / m;
}

}  // namespace

TEST_CASE("kernel table is odd with zero at the origin") {
    const auto t = CauchyKernelTable::build(9, 7, 0.1, 0.13);
    CHECK(t.at(0, 0) == cplx(0.0, 0.0));
    for (int a = -8; a <= 8; ++a)
        for (int b = -6; b <= 6; ++b) CHECK(std::abs(t.at(a, b) + t.at(-a, -b)) < 1e-14);
    // Far cells are plain samples of 1/(πz).
    CHECK(std::abs(t.at(5, 3) - 1.0 / (kPi * cplx(0.5, 0.39))) < 1e-14);
}

TEST_CASE("parallel transform matches the direct convolution") {
    for (int res : {16, 40}) {
        const ScalarField phi = testdata::random_field(GridSpec::uniform(1, res), 3);
        CHECK(rel_diff(cauchy_transform(phi, 1), reference::cauchy_transform(phi, 1)) < 1e-12);
    }
    GridSpec g = GridSpec::uniform(2, 40);
    g.res[0] = g.res[1] = 6;
    const ScalarField psi = testdata::random_field(g, 5);
    CHECK(rel_diff(cauchy_transform(psi, 2), reference::cauchy_transform(psi, 2)) < 1e-12);
}

TEST_CASE("G inverts dbar on compactly supported data") {
    const GridSpec g = GridSpec::uniform(1, 256);
    const testdata::Bump b{{0.1, -0.05}, 0.5, 8};
    const ScalarField u = sample([&](const auto& z) { return b.value(z[0]); }, g);
    const ScalarField du = sample([&](const auto& z) { return b.dbar(z[0]); }, g);
    CHECK(rel_diff(cauchy_transform(du, 1), u) < 5e-3);
}

TEST_CASE("far field of a radial bump") {
    // Mean value property: outside the support G(φ) = I/(πz) with I = ∫φ.
    const GridSpec g = GridSpec::uniform(1, 512);
    const testdata::Bump b{{0.0, 0.0}, 0.4, 4};
    const ScalarField phi = sample([&](const auto& z) { return b.value(z[0]); }, g);
    cplx I(0.0, 0.0);
    for (const auto& v : phi.values) I += v;
    I *= g.cell_area(1);
    const ScalarField G = cauchy_transform(phi, 1);
    const PlaneLayout L(g, 1);
    double worst = 0.0;
    for (int i = 0; i < L.ra; i += 37)
        for (int j = 0; j < L.rb; j += 41) {
            const cplx z = L.point(i, j);
            if (std::abs(z) < 0.4 + 3 * L.ha) continue;
            const cplx want = I / (kPi * z);
            worst = std::max(worst, std::abs(G[L.at(0, i, j)] - want) / std::abs(want));
        }
    CHECK(worst < 5e-3);
}

TEST_CASE("cauchy transform is linear") {
    const GridSpec g = GridSpec::uniform(1, 48);
    const ScalarField a = testdata::random_field(g, 1), b = testdata::random_field(g, 2);
    const cplx s(0.3, -1.2);
    ScalarField lhs = cauchy_transform(a + s * b, 1);
    ScalarField rhs = cauchy_transform(a, 1) + s * cauchy_transform(b, 1);
    CHECK(rel_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("moments") {
    const GridSpec g = GridSpec::uniform(1, 256);
    const testdata::Bump b{{0.0, 0.0}, 0.5, 6};
    const ScalarField phi = sample([&](const auto& z) { return b.value(z[0]); }, g);
    cplx I(0.0, 0.0);
    for (const auto& v : phi.values) I += v;
    I *= g.cell_area(1) / kPi;
    CHECK(std::abs(moment(phi, 1, 0).values[0] - I) < 1e-12);
    // radial data has no higher moments
    CHECK(std::abs(moment(phi, 1, 3).values[0]) < 1e-12);

    const auto pair = testdata::annulus_moment_free(g);
    const ScalarField w = pair.omega.get_increasing({1});
    const CenterField c{cplx(0.1, 0.0)};
    const MomentTable t = moment_table(w, 1, {c}, 8);
    CHECK(t.passes(1e-8));
    CHECK_THROWS_AS(punctured_moment(w, 1, CenterField{cplx(0.5, 0.0)}, 0), PunctureTooCloseError);
    CHECK(punctured_moment(w, 1, CenterField{no_center()}, 2).values[0] == cplx(0.0, 0.0));
}

TEST_CASE("transform of a translated field is the translated transform") {
    const GridSpec g = GridSpec::uniform(1, 64);
    const double h = g.h(0);
    const testdata::Bump b{{0.0, 0.0}, 0.4, 4};
    for (int shift : {1, 3, 7}) {
        const cplx s(shift * h, -2 * h);
        const ScalarField a = sample([&](const auto& z) { return b.value(z[0]); }, g);
        const ScalarField t = sample([&](const auto& z) { return b.value(z[0] - s); }, g);
        const ScalarField Ga = cauchy_transform(a, 1), Gt = cauchy_transform(t, 1);
        const PlaneLayout L(g, 1);
        double d = 0.0;
        for (int i = 10; i < L.ra - 10; ++i)
            for (int j = 10; j < L.rb - 10; ++j)
                d = std::max(d, std::abs(Gt[L.at(0, i + shift, j - 2)] - Ga[L.at(0, i, j)]));
        CHECK(d < 1e-12 * Ga.sup());
    }
}
