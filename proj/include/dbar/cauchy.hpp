#pragma once

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "dbar/field.hpp"

namespace dbar {

/// A function of the variables other than z_k, stored one value per plane of
/// PlaneLayout(grid, k).
struct SliceField {
    int k = 1;
    std::vector<cplx> values;

    double sup() const;
};

/// Per-plane puncture centers for one variable. NaN marks "no puncture here".
using CenterField = std::vector<cplx>;

bool has_center(const cplx& c);
inline cplx no_center() { return {std::nan(""), std::nan("")}; }

/// Samples of 1/(πz) on the lattice offsets of one complex variable. The
/// origin cell holds its exact average (zero); the eight neighbouring cells
/// hold sub-cell midpoint averages.
struct CauchyKernelTable {
    int ra = 0, rb = 0;
    double ha = 0, hb = 0;
    std::vector<cplx> samples;  // (2ra-1) x (2rb-1), offset (m1, m2) at [(m1+ra-1)*(2rb-1) + m2+rb-1]

    static CauchyKernelTable build(int ra, int rb, double ha, double hb, int sub = 16);
    cplx at(int m1, int m2) const { return samples[(m1 + ra - 1) * (2 * rb - 1) + (m2 + rb - 1)]; }
};

/// G_k(φ) = φ *_k 1/(πz), one discrete convolution per plane.
ScalarField cauchy_transform(const ScalarField& phi, int k);

/// [φ]_k(l) = (1/π) Σ φ ζ_k^l dA.
SliceField moment(const ScalarField& phi, int k, int l);

/// [φ,c]_k(l) = (1/π) Σ φ (ζ_k - c)^{-l-1} dA. Planes without a center give 0.
/// Throws PunctureTooCloseError when the slice support comes within 3h of c.
SliceField punctured_moment(const ScalarField& phi, int k, const CenterField& c, int l,
                            double support_tol = 1e-10);

struct MomentTable {
    int k = 1;
    int l_max = 0;
    double norm = 0.0;  // ‖φ‖_r used for normalisation
    std::vector<SliceField> outer;
    std::map<std::pair<int, int>, SliceField> punctured;  // (j, l), j is 1-based

    /// Largest normalised entry and where it occurs (j = 0 for outer).
    struct Worst {
        int j = 0;
        int l = 0;
        double value = 0.0;
    };
    Worst worst() const;
    bool passes(double tol) const { return worst().value <= tol; }
};

MomentTable moment_table(const ScalarField& phi, int k, const std::vector<CenterField>& punctures, int l_max,
                         double r = 2.0);

namespace reference {
/// Direct O(N^2) convolution per plane; independent check on the FFT path.
ScalarField cauchy_transform(const ScalarField& phi, int k);
}  // namespace reference

}  // namespace dbar
