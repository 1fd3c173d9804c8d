#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dbar/field.hpp"
#include "dbar/zeroset.hpp"

namespace dbar::testdata {

/// (1 - |z-c|²/ρ²)^p inside the disc, 0 outside. C^{p-1}.
struct Bump {
    cplx center{0.0, 0.0};
    double radius = 0.5;
    int power = 6;

    cplx value(cplx z) const;
    /// Exact ∂/∂z̄.
    cplx dbar(cplx z) const;
};

/// Radial cutoff: 1 for |z| <= inner, 0 for |z| >= outer, a degree 2p+1
/// polynomial in |z|² between.
struct Cutoff {
    double inner = 0.5;
    double outer = 0.8;
    int power = 4;

    double value(cplx z) const;
    cplx dbar(cplx z) const;
};

/// ω together with a primitive T (∂̄T = ω exactly, sampled analytically).
struct ExactPair {
    QForm omega;
    QForm T;
};

/// Seeded product bump placed in the coefficient of dz̄_1 ∧ ... ∧ dz̄_q.
QForm bump(const GridSpec& g, int q, std::uint64_t seed);

/// Seeded smooth field on one variable: a sum of three bumps with random
/// centers, radii and complex amplitudes.
ScalarField random_field(const GridSpec& g, std::uint64_t seed);

/// ω = ∂̄T for a seeded (0,q-1)-form T of product bumps with radius `radius`.
ExactPair exact_form(const GridSpec& g, int q, std::uint64_t seed, double radius = 0.55);

/// n = 1: u0 = annular bump around `center` times (1 + (z-c)/4); ω = ∂̄u0.
/// All outer moments and all punctured moments at `center` vanish.
ExactPair annulus_moment_free(const GridSpec& g, cplx center = {0.1, 0.0}, double inner = 0.3,
                              double outer = 0.75);

/// Positive product bump of nonzero mass in the top coefficient (dz̄_1..dz̄_q).
QForm mass_bump(const GridSpec& g, int q);

/// ω = ∂̄T with T a centered product bump of per-variable radii `radii`;
/// raises SupportTouchesZError when supp ω comes within 3h of f = 0.
ExactPair off_z(const GridSpec& g, int q, const PolynomialF& f, const std::vector<double>& radii);

/// n = 1: T = z^k · cutoff, ω = ∂̄T (supported in the cutoff annulus).
ExactPair cutoff_power(const GridSpec& g, int k, double inner = 0.5, double outer = 0.8);

/// Names accepted by make().
std::vector<std::string> names();

/// Dispatch by name; unknown names raise UnknownTestcaseError. `f` is needed
/// by off-Z only.
ExactPair make(const std::string& name, const GridSpec& g, int q, std::uint64_t seed,
               const PolynomialF* f = nullptr);

}  // namespace dbar::testdata
