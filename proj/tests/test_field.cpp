#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dbar/errors.hpp"
#include "dbar/field.hpp"
#include "dbar/testdata.hpp"

using namespace dbar;

namespace {

double max_abs_diff(const ScalarField& a, const ScalarField& b, double inner = 1e9) {
    double d = 0.0;
    std::vector<cplx> z;
    for (std::size_t i = 0; i < a.size(); ++i) {
        point_at(a.grid, i, z);
        bool ok = true;
        for (const auto& x : z) ok = ok && std::abs(x.real()) < inner && std::abs(x.imag()) < inner;
        if (ok) d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(GridSpec::uniform(1, 5).validate(), GridError);
    CHECK_NOTHROW(GridSpec::uniform(2, 6).validate());
    GridSpec g = GridSpec::uniform(1, 16);
    g.hi[0] = g.lo[0];
    CHECK_THROWS_AS(g.validate(), GridError);
}

TEST_CASE("row-major strides") {
    const GridSpec g = GridSpec::uniform(2, 8);
    CHECK(g.size() == 8u * 8 * 8 * 8);
    CHECK(g.stride(3) == 1u);
    CHECK(g.stride(0) == 8u * 8 * 8);
    std::vector<cplx> z;
    point_at(g, g.stride(1) * 3 + 5, z);
    CHECK(z[0].imag() == doctest::Approx(g.coord(1, 3)));
    CHECK(z[1].imag() == doctest::Approx(g.coord(3, 5)));
}

TEST_CASE("dbar_fd is exact on quadratics") {
    const GridSpec g = GridSpec::uniform(1, 32);
    // dbar zbar = 1, dbar |z|^2 = z, dbar z^2 = 0
    const ScalarField zb = sample([](const auto& z) { return std::conj(z[0]); }, g);
    const ScalarField r2 = sample([](const auto& z) { return cplx(std::norm(z[0]), 0.0); }, g);
    const ScalarField zz = sample([](const auto& z) { return z[0] * z[0]; }, g);
    CHECK(max_abs_diff(dbar_fd(zb, 1), sample([](const auto&) { return cplx(1.0, 0.0); }, g)) < 1e-12);
    CHECK(max_abs_diff(dbar_fd(r2, 1), sample([](const auto& z) { return z[0]; }, g)) < 1e-12);
    CHECK(dbar_fd(zz, 1).sup() < 1e-12);
}

TEST_CASE("dbar_fd converges at second order") {
    auto err = [](int res) {
        const GridSpec g = GridSpec::uniform(1, res);
        const ScalarField u = sample([](const auto& z) { return std::exp(std::conj(z[0])) * z[0]; }, g);
        const ScalarField du = sample([](const auto& z) { return std::exp(std::conj(z[0])) * z[0]; }, g);
        return max_abs_diff(dbar_fd(u, 1), du);
    };
    CHECK(err(64) / err(128) > 3.5);
}

TEST_CASE("parallel dbar_fd matches the serial reference") {
    const GridSpec g = GridSpec::uniform(2, 10);
    const ScalarField phi = testdata::random_field(g, 7);
    for (int k = 1; k <= 2; ++k) CHECK(max_abs_diff(dbar_fd(phi, k), reference::dbar_fd(phi, k)) == 0.0);
}

TEST_CASE("lr_norm of the disc indicator") {
    const GridSpec g = GridSpec::uniform(1, 512);
    const ScalarField chi = sample([](const auto& z) { return cplx(std::abs(z[0]) <= 1.0 ? 1.0 : 0.0, 0.0); }, g);
    CHECK(lr_norm(chi, 2.0) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(5e-3));
    CHECK(lr_norm(chi, 1.0) == doctest::Approx(std::numbers::pi).epsilon(1e-2));
}

TEST_CASE("support of a bump") {
    const GridSpec g = GridSpec::uniform(2, 24);
    const testdata::Bump b{{0.0, 0.0}, 0.5, 4};
    const ScalarField phi = sample([&](const auto& z) { return b.value(z[0]) * b.value(z[1]); }, g);
    const SupportInfo s = support_info(phi, 1e-12);
    const double h = g.h(0);
    CHECK(s.radius_per_axis[0] >= 0.5 - 2 * h);
    CHECK(s.radius_per_axis[0] <= 0.5 + 2 * h);
    CHECK(support_info(ScalarField(g), 1e-12).count == 0u);
    CHECK(support_info(ScalarField(g), 1e-12).radius_per_axis[1] == 0.0);
}

TEST_CASE("distance from a support to a point set") {
    const GridSpec g = GridSpec::uniform(2, 16);
    const testdata::Bump b{{0.0, 0.0}, 0.4, 4};
    const ScalarField phi = sample([&](const auto& z) { return b.value(z[0]) * b.value(z[1]); }, g);
    const SupportInfo far = support_info(phi, 1e-12, {{cplx(1.0, 0.0), cplx(0.0, 0.0)}});
    REQUIRE(far.distance_to_set);
    CHECK(*far.distance_to_set == doctest::Approx(1.0 - 0.4).epsilon(0.3));
    const SupportInfo in = support_info(phi, 1e-12, {{cplx(0.0, 0.0), cplx(0.0, 0.0)}});
    CHECK(*in.distance_to_set == 0.0);
    CHECK_THROWS_AS(support_info(phi, 1e-12, {{cplx(0.0, 0.0)}}), DomainError);
}

TEST_CASE("wedge signs") {
    CHECK(wedge_sign(1, {2, 3}) == 1);
    CHECK(wedge_sign(2, {1, 3}) == -1);
    CHECK(wedge_sign(3, {1, 2}) == 1);
    CHECK(wedge_sign(2, {2}) == 0);
    CHECK(merge_sign({2}, {1}) == -1);
    CHECK(merge_sign({1, 3}, {2, 4}) == -1);
    // dz̄_k ∧ dz̄_I = s·dz̄_{I∪k} and back again
    for (int k = 1; k <= 4; ++k) {
        const Index I = set_minus(range_index(1, 4), {k});
        CHECK(wedge_sign(k, I) * merge_sign({k}, I) == 1);
    }
}

TEST_CASE("form dbar squares to zero") {
    const GridSpec g = GridSpec::uniform(2, 24);
    QForm u(g, 0);
    u.set_increasing({}, sample([](const auto& z) { return std::conj(z[0] * z[1]) * std::conj(z[1]); }, g));
    const QForm d1 = form_dbar(u);
    CHECK(d1.q == 1);
    CHECK(sup_norm(form_dbar(d1)) < 1e-10);
}

TEST_CASE("qform coefficient access") {
    const GridSpec g = GridSpec::uniform(3, 6);
    QForm w(g, 2);
    ScalarField f(g);
    f[0] = 1.0;
    w.set_increasing({1, 3}, f);
    CHECK(w.coeffs.count({2}) == 1);
    CHECK(w.get_increasing({1, 2}).sup() == 0.0);
    w.add_increasing({1, 3}, -1.0, f);
    CHECK(w.get_increasing({1, 3}).sup() == 0.0);
}
