#pragma once

#include <cstdint>
#include <vector>

#include "dbar/cauchy.hpp"
#include "dbar/field.hpp"
#include "dbar/zeroset.hpp"

namespace dbar::corona {

/// Weights over the cells of one annulus. The sharp cell-centre indicator is
/// adjusted by the smallest correction that makes the lattice sums
/// Σ w (z-c)^p dA equal area·[p = 0] over a band of exponents p. This is what
/// lets the discrete operators preserve moments to rounding.
struct AnnulusWeights {
    std::vector<std::uint32_t> cells;  // i * rb + j inside the plane
    std::vector<double> w;
    double residual = 0.0;  // max |Σ w (z-c)^p dA - area·[p=0]| / area after correction
    int p_lo = 0, p_hi = 0;
};

/// p in [p_lo, p_hi] constraints on the annulus lo < |z - c| < hi (closed
/// when `closed`). When the cells cannot carry them all, exponents outside
/// [keep_lo, keep_hi] are dropped first.
AnnulusWeights annulus_weights(const PlaneLayout& L, cplx c, double lo, double hi, bool closed, int p_lo, int p_hi,
                               int keep_lo, int keep_hi);

struct CoronaOperatorSpec {
    int k = 1;
    CoronaGeometry geometry;
    AnnulusWeights outer;
    std::vector<std::vector<AnnulusWeights>> inner;  // parallel to geometry.inner
    double max_inner_A = 0.0;
    bool unreliable = false;  // some |A_j|·h > 1
};

/// l_max is the largest moment order the operator has to preserve exactly.
CoronaOperatorSpec make_operator(const GridSpec& g, const CoronaGeometry& geo, int l_max);

/// A0 · w_0(z_k) · z_k · G_k(φ).
ScalarField K_outer(const ScalarField& phi, const CoronaOperatorSpec& op);
/// A_j · w_j(z_k) · (z_k - c_j) · G_k(φ) on every plane that has puncture j.
ScalarField K_inner(const ScalarField& phi, int j, const CoronaOperatorSpec& op);
/// Sum of the outer and every inner component.
ScalarField K_full(const ScalarField& phi, const CoronaOperatorSpec& op);

struct DecomposeOptions {
    int l_max = 16;
    double r = 2.0;
    double tau_geom = 1e-12;
    double tau_supp = 1e-10;
    const PolynomialF* f = nullptr;  // punctures come from the lines of f when set
};

struct Decomposition {
    std::vector<ScalarField> parts;
    /// For i < m: max over l <= l_max of the normalised outer and punctured
    /// moments of part i in variable i.
    std::vector<double> residual_report;
    std::vector<CoronaGeometry> geometries;
    std::vector<DiscFamily> discs;
    double max_inner_A = 0.0;
    bool unreliable = false;
};

/// φ = φ_1 + ... + φ_m over the variables 1..m (m = 0 means all n). Stage i
/// measures the current support again before building its coronas.
Decomposition decompose(const ScalarField& phi, int m, const DecomposeOptions& opt = {});

/// Center fields (one per puncture index) for moment tables.
std::vector<CenterField> center_fields(const DiscFamily& fam);

}  // namespace dbar::corona
