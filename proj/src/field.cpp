#include "dbar/field.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <sstream>

namespace dbar {

GridSpec GridSpec::uniform(int n, int res, double pad) {
    GridSpec g;
    g.n = n;
    g.res.assign(2 * n, res);
    g.lo.assign(2 * n, -1.0 - pad);
    g.hi.assign(2 * n, 1.0 + pad);
    g.validate();
    return g;
}

void GridSpec::validate() const {
    if (n < 1) throw GridError("grid: n must be >= 1");
    if (static_cast<int>(res.size()) != 2 * n || static_cast<int>(lo.size()) != 2 * n ||
        static_cast<int>(hi.size()) != 2 * n)
        throw GridError("grid: expected one resolution and extent per real axis");
    for (int a = 0; a < 2 * n; ++a) {
        if (res[a] < kMinRes) {
            std::ostringstream os;
            os << "grid: axis " << a << " has " << res[a] << " samples, need >= " << kMinRes;
            throw GridError(os.str());
        }
        if (!(lo[a] <= -1.0 && hi[a] >= 1.0))
            throw GridError("grid: extent must contain [-1, 1] on every axis");
    }
}

std::size_t GridSpec::size() const {
    std::size_t s = 1;
    for (int r : res) s *= static_cast<std::size_t>(r);
    return s;
}

std::size_t GridSpec::stride(int axis) const {
    std::size_t s = 1;
    for (int a = 2 * n - 1; a > axis; --a) s *= static_cast<std::size_t>(res[a]);
    return s;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < 2 * n; ++a) v *= h(a);
    return v;
}

bool GridSpec::operator==(const GridSpec& o) const {
    return n == o.n && res == o.res && lo == o.lo && hi == o.hi;
}

PlaneLayout::PlaneLayout(const GridSpec& g, int k_) : k(k_) {
    if (k < 1 || k > g.n) throw DomainError("variable index out of range");
    const int a = 2 * k - 2, b = a + 1;
    ra = g.res[a];
    rb = g.res[b];
    sb = g.stride(b);
    sa = g.stride(a);
    count = g.size() / (static_cast<std::size_t>(ra) * rb);
    ha = g.h(a);
    hb = g.h(b);
    xa = g.lo[a];
    xb = g.lo[b];
}

std::size_t PlaneLayout::plane_of(std::size_t flat) const {
    const std::size_t block = static_cast<std::size_t>(ra) * rb * sb;
    return (flat / block) * sb + flat % sb;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
}

ScalarField& ScalarField::operator*=(cplx s) {
    for (auto& v : values) v *= s;
    return *this;
}

ScalarField& ScalarField::axpy(cplx s, const ScalarField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += s * o.values[i];
    return *this;
}

double ScalarField::sup() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

bool ScalarField::is_finite() const {
    return std::all_of(values.begin(), values.end(),
                       [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(cplx s, ScalarField a) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
    ScalarField out(a.grid);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

void point_at(const GridSpec& g, std::size_t flat, std::vector<cplx>& z) {
    z.resize(g.n);
    std::vector<int> idx(2 * g.n);
    for (int a = 2 * g.n - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % g.res[a]);
        flat /= g.res[a];
    }
    for (int k = 0; k < g.n; ++k) z[k] = {g.coord(2 * k, idx[2 * k]), g.coord(2 * k + 1, idx[2 * k + 1])};
}

// ---------------------------------------------------------------------------

Index complement(const Index& s, int n) {
    Index out;
    for (int i = 1; i <= n; ++i)
        if (!std::binary_search(s.begin(), s.end(), i)) out.push_back(i);
    return out;
}

bool is_increasing(const Index& s, int n) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 1 || s[i] > n) return false;
        if (i > 0 && s[i] <= s[i - 1]) return false;
    }
    return true;
}

int wedge_sign(int k, const Index& I) {
    int before = 0;
    for (int i : I) {
        if (i == k) return 0;
        if (i < k) ++before;
    }
    return before % 2 ? -1 : 1;
}

int merge_sign(const Index& A, const Index& B) {
    // Count inversions: pairs (a in A, b in B) with a > b.
    int inv = 0;
    for (int a : A)
        for (int b : B) {
            if (a == b) return 0;
            if (a > b) ++inv;
        }
    return inv % 2 ? -1 : 1;
}

Index set_union(const Index& A, const Index& B) {
    Index out;
    std::set_union(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(out));
    return out;
}

Index set_minus(const Index& A, const Index& B) {
    Index out;
    std::set_difference(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(out));
    return out;
}

Index range_index(int first, int last) {
    Index out;
    for (int i = first; i <= last; ++i) out.push_back(i);
    return out;
}

QForm::QForm(const GridSpec& g, int q_) : grid(g), q(q_) {
    if (q < 0 || q > g.n) throw DomainError("form degree out of range");
}

ScalarField QForm::get(const Index& J) const {
    auto it = coeffs.find(J);
    if (it == coeffs.end()) return ScalarField(grid);
    return it->second;
}

ScalarField& QForm::ref(const Index& J) {
    auto it = coeffs.find(J);
    if (it == coeffs.end()) it = coeffs.emplace(J, ScalarField(grid)).first;
    return it->second;
}

void QForm::set(const Index& J, ScalarField f) {
    if (static_cast<int>(J.size()) != grid.n - q || !is_increasing(J, grid.n))
        throw DomainError("form key has wrong length or is not increasing");
    coeffs[J] = std::move(f);
}

void QForm::add_increasing(const Index& I, cplx s, const ScalarField& f) {
    ref_increasing(I).axpy(s, f);
}

void QForm::validate() const {
    for (const auto& [J, f] : coeffs) {
        if (static_cast<int>(J.size()) != grid.n - q || !is_increasing(J, grid.n))
            throw DomainError("form key has wrong length or is not increasing");
        if (f.grid != grid) throw GridError("form coefficient lives on a different grid");
    }
}

QForm operator-(const QForm& a, const QForm& b) {
    QForm out = a;
    for (const auto& [J, f] : b.coeffs) out.ref(J) -= f;
    return out;
}

QForm operator+(const QForm& a, const QForm& b) {
    QForm out = a;
    for (const auto& [J, f] : b.coeffs) out.ref(J) += f;
    return out;
}

// ---------------------------------------------------------------------------

ScalarField sample(const PointFn& fn, const GridSpec& grid) {
    ScalarField out(grid);
    const std::size_t N = grid.size();
    bool bad = false;
#pragma omp parallel
    {
        std::vector<cplx> z;
#pragma omp for schedule(static) reduction(|| : bad)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(N); ++i) {
            point_at(grid, i, z);
            cplx v = fn(z);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) bad = true;
            out[i] = v;
        }
    }
    if (bad) throw SampleError("sample: function returned a non-finite value");
    return out;
}

namespace {

// Second-order derivative along a strided line of length n with spacing h.
inline cplx d1(const cplx* p, std::size_t s, int i, int n, double h) {
    if (i == 0) return (-3.0 * p[0] + 4.0 * p[s] - p[2 * s]) / (2.0 * h);
    if (i == n - 1) return (3.0 * p[i * s] - 4.0 * p[(i - 1) * s] + p[(i - 2) * s]) / (2.0 * h);
    return (p[(i + 1) * s] - p[(i - 1) * s]) / (2.0 * h);
}

}  // namespace

ScalarField dbar_fd(const ScalarField& phi, int k) {
    const PlaneLayout L(phi.grid, k);
    ScalarField out(phi.grid);
    const cplx I(0.0, 1.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(L.count); ++p) {
        const std::size_t b = L.base(p);
        const cplx* src = phi.values.data() + b;
        cplx* dst = out.values.data() + b;
        for (int i = 0; i < L.ra; ++i)
            for (int j = 0; j < L.rb; ++j) {
                const cplx dx = d1(src + j * L.sb, L.sa, i, L.ra, L.ha);
                const cplx dy = d1(src + i * L.sa, L.sb, j, L.rb, L.hb);
                dst[i * L.sa + j * L.sb] = 0.5 * (dx + I * dy);
            }
    }
    return out;
}

namespace reference {

ScalarField dbar_fd(const ScalarField& phi, int k) {
    const GridSpec& g = phi.grid;
    const int a = 2 * k - 2, b = a + 1;
    const std::size_t sa = g.stride(a), sb = g.stride(b);
    const double ha = g.h(a), hb = g.h(b);
    const int ra = g.res[a], rb = g.res[b];
    ScalarField out(g);
    std::vector<int> idx(2 * g.n);
    for (std::size_t f = 0; f < g.size(); ++f) {
        std::size_t t = f;
        for (int ax = 2 * g.n - 1; ax >= 0; --ax) {
            idx[ax] = static_cast<int>(t % g.res[ax]);
            t /= g.res[ax];
        }
        auto diff = [&](int i, int n, std::size_t s, double h) {
            const cplx* p = phi.values.data() + f - i * s;
            if (i == 0) return (-3.0 * p[0] + 4.0 * p[s] - p[2 * s]) / (2.0 * h);
            if (i == n - 1) return (3.0 * p[i * s] - 4.0 * p[(i - 1) * s] + p[(i - 2) * s]) / (2.0 * h);
            return (p[(i + 1) * s] - p[(i - 1) * s]) / (2.0 * h);
        };
        out[f] = 0.5 * (diff(idx[a], ra, sa, ha) + cplx(0, 1) * diff(idx[b], rb, sb, hb));
    }
    return out;
}

}  // namespace reference

double lr_norm(const ScalarField& phi, double r) {
    if (!(r >= 1.0) || !std::isfinite(r)) throw DomainError("lr_norm: need finite r >= 1");
    double s = 0.0;
    if (r == 2.0) {
        for (const auto& v : phi.values) s += std::norm(v);
    } else {
        for (const auto& v : phi.values) s += std::pow(std::abs(v), r);
    }
    return std::pow(s * phi.grid.cell_volume(), 1.0 / r);
}

double lr_norm(const QForm& w, double r) {
    double s = 0.0;
    for (const auto& [J, f] : w.coeffs) s += std::pow(lr_norm(f, r), r);
    return std::pow(s, 1.0 / r);
}

double sup_norm(const QForm& w) {
    double m = 0.0;
    for (const auto& [J, f] : w.coeffs) m = std::max(m, f.sup());
    return m;
}

SupportInfo support_info(const ScalarField& phi, double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw DomainError("support_info: tau must lie in (0, 1)");
    const GridSpec& g = phi.grid;
    SupportInfo info;
    info.mask.assign(phi.size(), 0);
    info.radius_per_axis.assign(g.n, 0.0);
    const double m = phi.sup();
    if (m == 0.0) return info;
    const double thr = tau * m;
    std::vector<cplx> z;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (std::abs(phi[i]) > thr) {
            info.mask[i] = 1;
            ++info.count;
            point_at(g, i, z);
            for (int k = 0; k < g.n; ++k) info.radius_per_axis[k] = std::max(info.radius_per_axis[k], std::abs(z[k]));
        }
    }
    return info;
}

SupportInfo support_info(const ScalarField& phi, double tau, const std::vector<std::vector<cplx>>& set) {
    SupportInfo info = support_info(phi, tau);
    const GridSpec& g = phi.grid;
    const int A = g.axes();
    for (const auto& x : set)
        if (static_cast<int>(x.size()) != g.n) throw DomainError("support_info: set points need n coordinates");
    if (set.empty()) return info;

    // A set point inside a masked cell means distance zero.
    for (const auto& x : set) {
        std::size_t flat = 0;
        bool inside = true;
        for (int a = 0; a < A && inside; ++a) {
            const double v = a % 2 == 0 ? x[a / 2].real() : x[a / 2].imag();
            const double t = std::round((v - g.lo[a]) / g.h(a));
            inside = t >= 0 && t < g.res[a];
            if (inside) flat += static_cast<std::size_t>(t) * g.stride(a);
        }
        if (inside && info.mask[flat]) {
            info.distance_to_set = 0.0;
            return info;
        }
    }

    // Otherwise the nearest masked cell sits on the boundary of the mask.
    std::vector<std::size_t> edge;
    std::vector<int> idx(A);
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (!info.mask[i]) continue;
        std::size_t rem = i;
        for (int a = A; a-- > 0;) {
            idx[a] = static_cast<int>(rem % g.res[a]);
            rem /= g.res[a];
        }
        bool border = false;
        for (int a = 0; a < A && !border; ++a) {
            const std::size_t s = g.stride(a);
            border = idx[a] == 0 || idx[a] == g.res[a] - 1 || !info.mask[i - s] || !info.mask[i + s];
        }
        if (border) edge.push_back(i);
    }

    double best = std::numeric_limits<double>::infinity();
#pragma omp parallel
    {
        std::vector<cplx> z;
#pragma omp for schedule(static) reduction(min : best)
        for (std::ptrdiff_t e = 0; e < static_cast<std::ptrdiff_t>(edge.size()); ++e) {
            point_at(g, edge[e], z);
            for (const auto& x : set) {
                double d2 = 0.0;
                for (int k = 0; k < g.n && d2 < best; ++k) d2 += std::norm(z[k] - x[k]);
                best = std::min(best, d2);
            }
        }
    }
    info.distance_to_set = std::sqrt(best);
    return info;
}

QForm form_dbar(const QForm& w, int m) {
    const int n = w.grid.n;
    if (m <= 0) m = n;
    QForm out(w.grid, std::min(w.q + 1, n));
    if (w.q >= n) return out;
    for (const auto& [J, f] : w.coeffs) {
        const Index I = complement(J, n);
        for (int k = 1; k <= m; ++k) {
            const int s = wedge_sign(k, I);
            if (s == 0) continue;
            Index Ik = I;
            Ik.insert(std::upper_bound(Ik.begin(), Ik.end(), k), k);
            out.add_increasing(Ik, static_cast<double>(s), dbar_fd(f, k));
        }
    }
    return out;
}

}  // namespace dbar
