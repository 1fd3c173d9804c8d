#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "dbar/errors.hpp"

namespace dbar {

using cplx = std::complex<double>;

/// z^e for integer e (negative allowed), by repeated squaring.
inline cplx ipow(cplx z, int e) {
    if (e < 0) return 1.0 / ipow(z, -e);
    cplx r(1.0, 0.0);
    while (e) {
        if (e & 1) r *= z;
        z *= z;
        e >>= 1;
    }
    return r;
}

/// Smallest admissible number of samples per real axis.
inline constexpr int kMinRes = 6;

/// Uniform tensor grid over 2n real axes. Real axes 2(k-1) and 2(k-1)+1 carry
/// the real and imaginary part of the complex variable z_k (k is 1-based).
/// Storage is row-major with the last real axis fastest.
struct GridSpec {
    int n = 1;
    std::vector<int> res;
    std::vector<double> lo;
    std::vector<double> hi;

    /// Same resolution on every axis, extent [-1-pad, 1+pad].
    static GridSpec uniform(int n, int res, double pad = 0.25);

    void validate() const;
    int axes() const { return 2 * n; }
    double h(int axis) const { return (hi[axis] - lo[axis]) / (res[axis] - 1); }
    double coord(int axis, int i) const { return lo[axis] + i * h(axis); }
    std::size_t size() const;
    std::size_t stride(int axis) const;
    /// Area element of one complex variable (hx * hy).
    double cell_area(int k) const { return h(2 * k - 2) * h(2 * k - 1); }
    /// Volume element of the whole grid.
    double cell_volume() const;

    bool operator==(const GridSpec& o) const;
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

/// Addressing of the 2D planes spanned by one complex variable. A plane is the
/// set of samples obtained by fixing every other variable.
struct PlaneLayout {
    int k = 1;
    int ra = 0, rb = 0;        // samples along Re z_k and Im z_k
    std::size_t sa = 0, sb = 0;  // strides of those axes
    std::size_t count = 0;     // number of planes
    double ha = 0, hb = 0;
    double xa = 0, xb = 0;     // lower corner

    PlaneLayout(const GridSpec& g, int k);
    std::size_t base(std::size_t p) const { return (p / sb) * ra * rb * sb + p % sb; }
    std::size_t at(std::size_t p, int i, int j) const { return base(p) + i * sa + j * sb; }
    cplx point(int i, int j) const { return {xa + i * ha, xb + j * hb}; }
    std::size_t plane_of(std::size_t flat) const;
};

/// Complex samples over the full grid.
struct ScalarField {
    GridSpec grid;
    std::vector<cplx> values;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g) : grid(g), values(g.size(), cplx(0.0, 0.0)) {}

    std::size_t size() const { return values.size(); }
    cplx& operator[](std::size_t i) { return values[i]; }
    const cplx& operator[](std::size_t i) const { return values[i]; }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(cplx s);
    /// this += s * o
    ScalarField& axpy(cplx s, const ScalarField& o);

    double sup() const;
    bool is_finite() const;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(cplx s, ScalarField a);
/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

/// Coordinates of all n complex variables at a flat index.
void point_at(const GridSpec& g, std::size_t flat, std::vector<cplx>& z);

// ---------------------------------------------------------------------------
// Multi-indices and the exterior algebra of dz̄_1, ..., dz̄_n.

/// Strictly increasing tuple of 1-based variable indices.
using Index = std::vector<int>;

Index complement(const Index& s, int n);
bool is_increasing(const Index& s, int n);
/// Sign s with dz̄_k ∧ dz̄_I = s · dz̄_{I∪{k}}; 0 when k ∈ I.
int wedge_sign(int k, const Index& I);
/// Sign s with dz̄_A ∧ dz̄_B = s · dz̄_{A∪B}; 0 when A and B overlap.
int merge_sign(const Index& A, const Index& B);
Index set_union(const Index& A, const Index& B);
Index set_minus(const Index& A, const Index& B);
Index range_index(int first, int last);

/// A (0,q)-form. Coefficients are keyed by the complement multi-index J of
/// the differentials that appear: the basis element dẑ̄_J is the increasing
/// wedge dz̄_{i1} ∧ ... ∧ dz̄_{iq} over the variables not in J, with sign +1.
/// Missing keys are zero.
struct QForm {
    GridSpec grid;
    int q = 0;
    std::map<Index, ScalarField> coeffs;

    QForm() = default;
    QForm(const GridSpec& g, int q);

    /// Coefficient of dẑ̄_J (zero field when absent).
    ScalarField get(const Index& J) const;
    /// Coefficient of the increasing wedge dz̄_I.
    ScalarField get_increasing(const Index& I) const { return get(complement(I, grid.n)); }
    ScalarField& ref(const Index& J);
    ScalarField& ref_increasing(const Index& I) { return ref(complement(I, grid.n)); }
    void set(const Index& J, ScalarField f);
    void set_increasing(const Index& I, ScalarField f) { set(complement(I, grid.n), std::move(f)); }
    /// coefficient(I) += s * f
    void add_increasing(const Index& I, cplx s, const ScalarField& f);

    void validate() const;
};

QForm operator-(const QForm& a, const QForm& b);
QForm operator+(const QForm& a, const QForm& b);

// ---------------------------------------------------------------------------
// Operations.

using PointFn = std::function<cplx(const std::vector<cplx>&)>;

ScalarField sample(const PointFn& fn, const GridSpec& grid);

/// ½(∂x + i∂y) along variable k: centered second order in the interior,
/// one-sided second order on the boundary rows.
ScalarField dbar_fd(const ScalarField& phi, int k);

/// (Σ|φ|^r h^{2n})^{1/r}.
double lr_norm(const ScalarField& phi, double r);
double lr_norm(const QForm& w, double r);
double sup_norm(const QForm& w);

struct SupportInfo {
    std::vector<std::uint8_t> mask;
    std::vector<double> radius_per_axis;   // index k-1
    std::optional<double> distance_to_set;
    std::size_t count = 0;
};

/// mask = |φ| > tau * max|φ|.
SupportInfo support_info(const ScalarField& phi, double tau);
/// Same, plus the smallest Euclidean distance in C^n from the mask to `set`
/// (points given as n coordinates each; infinity for an empty set).
SupportInfo support_info(const ScalarField& phi, double tau, const std::vector<std::vector<cplx>>& set);

/// ∂̄ over the active variables 1..m (m = 0 means all n).
QForm form_dbar(const QForm& w, int m = 0);

namespace reference {
/// Straight serial loop version of dbar_fd, kept for cross-checking.
ScalarField dbar_fd(const ScalarField& phi, int k);
}  // namespace reference

}  // namespace dbar
