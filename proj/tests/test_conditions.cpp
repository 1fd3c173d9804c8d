#include <doctest.h>

#include "dbar/conditions.hpp"
#include "dbar/errors.hpp"
#include "dbar/testdata.hpp"

using namespace dbar;
using namespace dbar::conditions;

TEST_CASE("structure conditions hold for exact forms") {
    const GridSpec g = GridSpec::uniform(2, 24);
    const ScalarField phi = testdata::exact_form(g, 2, 42).omega.get_increasing({1, 2});
    const StructureReport rep = check_structure(phi, 2, 3, Context{});
    CHECK(rep.pass);
    CHECK(rep.worst < 1e-5);
    CHECK(rep.entries.size() == 3u * 4u);
}

TEST_CASE("mass bump fails at the first entry") {
    const GridSpec g = GridSpec::uniform(2, 16);
    const ScalarField phi = testdata::mass_bump(g, 2).get_increasing({1, 2});
    const StructureReport rep = check_structure(phi, 1, 1, Context{});
    CHECK(!rep.pass);
    REQUIRE(rep.first_failure == 0);
    const auto& e = rep.entries[0].spec;
    CHECK(e.mu == std::vector<int>{0});
    CHECK(e.l == std::vector<int>{0});
    CHECK(e.k == 0);
    CHECK(rep.to_json()["pass"] == false);
}

TEST_CASE("zero field passes trivially") {
    const GridSpec g = GridSpec::uniform(2, 8);
    CHECK(check_structure(ScalarField(g), 4, 4, Context{}).pass);
}

TEST_CASE("J outer of a product field factorises") {
    // φ = a(z1) b(z2): J with mu = 0 is [a](l) · [b](k) in the output-free case.
    const GridSpec g = GridSpec::uniform(2, 20);
    const testdata::Bump a{{0.1, 0.0}, 0.5, 4}, b{{0.0, -0.1}, 0.5, 4};
    const ScalarField phi = sample([&](const auto& z) { return a.value(z[0]) * b.value(z[1]); }, g);
    const GridSpec g1 = GridSpec::uniform(1, 20);
    const ScalarField fa = sample([&](const auto& z) { return a.value(z[0]); }, g1);
    const ScalarField fb = sample([&](const auto& z) { return b.value(z[0]); }, g1);
    for (int l = 0; l <= 2; ++l)
        for (int k = 0; k <= 2; ++k) {
            const JField J = J_outer(phi, {{0}, {l}, k, 0}, Context{});
            REQUIRE(J.values.size() == 1u);
            const cplx want = moment(fa, 1, l).values[0] * moment(fb, 1, k).values[0];
            CHECK(std::abs(J.values[0] - want) < 1e-12 * (1.0 + std::abs(want)));
        }
}

TEST_CASE("punctured indices need a polynomial") {
    const GridSpec g = GridSpec::uniform(2, 8);
    const ScalarField phi = testdata::random_field(g, 1);
    CHECK_THROWS_AS(J_outer(phi, {{1}, {0}, 0, 0}, Context{}), DomainError);
    CHECK_THROWS_AS(J_inner(phi, 0, {{0}, {0}, 0, 0}, Context{}), DomainError);
    CHECK(MultiIndexSpec{{0, 1}, {2, 3}, 1, 0}.I() == Index{1});
}
