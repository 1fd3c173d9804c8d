#include <doctest.h>

#include <cmath>

#include "dbar/errors.hpp"
#include "dbar/solver.hpp"
#include "dbar/testdata.hpp"

using namespace dbar;
using namespace dbar::solver;

namespace {

SolveOptions loose() {
    SolveOptions o;
    o.enforce_support = false;
    return o;
}

}  // namespace

TEST_CASE("options are validated") {
    SolveOptions o;
    o.l_max = 3;
    CHECK_THROWS_AS(o.validate(), DomainError);
    o = {};
    o.tol_moment = 0.0;
    CHECK_THROWS_AS(o.validate(), DomainError);
    o = {};
    o.r = 0.5;
    CHECK_THROWS_AS(o.validate(), DomainError);
}

TEST_CASE("zero in, zero out") {
    for (int q : {1, 2}) {
        const QForm w(GridSpec::uniform(2, 12), q);
        const SolveResult r = solve(w);
        CHECK(r.solution.q == q - 1);
        CHECK(sup_norm(r.solution) == 0.0);
        CHECK(r.residual == 0.0);
    }
}

TEST_CASE("routes by degree") {
    const GridSpec g = GridSpec::uniform(2, 16);
    CHECK(solve(testdata::exact_form(g, 1, 1).omega, loose()).route == "degree-1");
    SolveOptions unchecked = loose();
    unchecked.check_structure = false;
    CHECK(solve(testdata::exact_form(g, 2, 1).omega, unchecked).route == "top-degree");
    CHECK_THROWS_AS(solve_01(testdata::exact_form(g, 2, 1).omega), DomainError);
}

TEST_CASE("one variable solve recovers a compactly supported primitive") {
    const GridSpec g = GridSpec::uniform(1, 256);
    const auto pair = testdata::annulus_moment_free(g);
    const SolveResult r = solve_1d_punctured(pair.omega.get_increasing({1}), nullptr, loose());
    const ScalarField u = r.solution.get_increasing({});
    const ScalarField u0 = pair.T.get_increasing({});
    CHECK((u - u0).sup() / u0.sup() < 5e-3);
    CHECK(r.max_tail() < 1e-6);
}

TEST_CASE("mass obstructs the top-degree solve") {
    const GridSpec g1 = GridSpec::uniform(1, 64);
    try {
        solve(testdata::mass_bump(g1, 1));
        FAIL("no obstruction raised");
    } catch (const MomentObstructionError& e) {
        CHECK(e.l == 0);
        CHECK(e.code() == ErrorCode::moment_obstruction);
    }
    const GridSpec g2 = GridSpec::uniform(2, 16);
    CHECK_THROWS_AS(solve(testdata::mass_bump(g2, 2)), StructureObstructionError);
}

TEST_CASE("degree one recovery and linearity") {
    const GridSpec g = GridSpec::uniform(2, 32);
    const auto a = testdata::exact_form(g, 1, 3), b = testdata::exact_form(g, 1, 4);
    const SolveResult ra = solve(a.omega, loose());
    const ScalarField T = a.T.get_increasing({});
    CHECK((ra.solution.get_increasing({}) - T).sup() / T.sup() < 5e-2);
    CHECK(ra.norm_ratio <= 2.1);

    const QForm sum = a.omega + b.omega;
    const SolveResult rs = solve(sum, loose());
    const SolveResult rb = solve(b.omega, loose());
    const ScalarField lin = rs.solution.get_increasing({}) - ra.solution.get_increasing({}) - rb.solution.get_increasing({});
    CHECK(lin.sup() <= 1e-10 * rs.solution.get_increasing({}).sup());
}

TEST_CASE("closedness is enforced for degree one") {
    const GridSpec g = GridSpec::uniform(2, 16);
    QForm w(g, 1);
    w.set_increasing({1}, testdata::random_field(g, 2));
    CHECK(closedness_ratio(w) > 0.2);
    CHECK_THROWS_AS(solve(w), NotClosedError);
}

TEST_CASE("report json") {
    const GridSpec g = GridSpec::uniform(2, 16);
    const SolveResult r = solve(testdata::exact_form(g, 1, 5).omega, loose());
    const auto j = r.to_json();
    CHECK(j["schema"] == "solve-report/1");
    CHECK(j["route"] == "degree-1");
    CHECK(j.contains("support"));
}

TEST_CASE("vanishing solutions in one variable") {
    const GridSpec g = GridSpec::uniform(1, 256);
    PolynomialF z;
    z.terms[{1}] = 1.0;
    for (int k : {1, 2}) {
        VanishingReport rep;
        const SolveResult r = solve_vanishing(testdata::cutoff_power(g, k).omega, z, k, loose(), &rep);
        CHECK(rep.slope == doctest::Approx(k).epsilon(0.1));
        CHECK(r.residual < 0.1);
    }
    CHECK_THROWS_AS(solve_vanishing(testdata::cutoff_power(g, 1).omega, z, -1), DomainError);
}
