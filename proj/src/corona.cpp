#include "dbar/corona.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dbar::corona {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxOrder = 96;

// Exponent needed for ratio^p to drop below double precision.
int decay_order(double ratio) {
    if (ratio <= 0.0) return 1;
    if (ratio >= 1.0) return kMaxOrder;
    return std::min(kMaxOrder, static_cast<int>(std::ceil(-39.0 / std::log(ratio))));
}

}  // namespace

AnnulusWeights annulus_weights(const PlaneLayout& L, cplx c, double lo, double hi, bool closed, int p_lo, int p_hi,
                               int keep_lo, int keep_hi) {
    AnnulusWeights out;
    std::vector<cplx> pts;
    for (int i = 0; i < L.ra; ++i)
        for (int j = 0; j < L.rb; ++j) {
            const double s = std::abs(L.point(i, j) - c);
            const bool in = closed ? (s >= lo && s <= hi) : (s > lo && s < hi);
            if (!in) continue;
            out.cells.push_back(static_cast<std::uint32_t>(i * L.rb + j));
            pts.push_back(L.point(i, j) - c);
        }
    const int N = static_cast<int>(pts.size());
    out.w.assign(N, 1.0);
    if (N == 0) return out;

    // Keep at most about 0.8 real constraints per unknown. Exponents in
    // [keep_lo, keep_hi] are trimmed last; the surplus on either side is
    // trimmed from whichever side has more of it.
    const int budget = std::max(1, (4 * N) / 5);
    while (p_hi - p_lo + 1 > 1 && 2 * (p_hi - p_lo + 1) - 1 > budget) {
        const int below = std::max(0, keep_lo - p_lo), above = std::max(0, p_hi - keep_hi);
        if (below == 0 && above == 0) {
            if (-p_lo > p_hi) ++p_lo;
            else --p_hi;
        } else if (below > above) {
            ++p_lo;
        } else {
            --p_hi;
        }
    }
    out.p_lo = p_lo;
    out.p_hi = p_hi;

    const double dA = L.ha * L.hb;
    const double area = kPi * (hi * hi - lo * lo);
    const double rho = 0.5 * (lo + hi);
    const int rows = 2 * (p_hi - p_lo + 1);
    Eigen::MatrixXd B(rows, N);
    Eigen::VectorXd t = Eigen::VectorXd::Zero(rows);
    Eigen::VectorXd rowscale(rows);
    int row = 0;
    for (int p = p_lo; p <= p_hi; ++p) {
        double m = 0.0;
        for (int s = 0; s < N; ++s) {
            const cplx v = ipow(pts[s] / rho, p);
            B(row, s) = v.real();
            B(row + 1, s) = v.imag();
            m = std::max(m, std::abs(v));
        }
        B.row(row) /= m;
        B.row(row + 1) /= m;
        rowscale(row) = rowscale(row + 1) = m;
        if (p == 0) t(row) = area / dA;
        row += 2;
    }
    const Eigen::VectorXd w0 = Eigen::VectorXd::Ones(N);
    const Eigen::VectorXd resid = t.cwiseQuotient(rowscale) - B * w0;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(B);
    cod.setThreshold(1e-13);
    const Eigen::VectorXd w = w0 + cod.solve(resid);
    for (int s = 0; s < N; ++s) out.w[s] = w(s);
    // Report the constraint error relative to the row scale, in units of area.
    const Eigen::VectorXd err = (B * w - t.cwiseQuotient(rowscale)).cwiseProduct(rowscale) * dA / area;
    out.residual = err.cwiseAbs().maxCoeff();
    return out;
}

CoronaOperatorSpec make_operator(const GridSpec& g, const CoronaGeometry& geo, int l_max) {
    const PlaneLayout L(g, geo.k);
    CoronaOperatorSpec op;
    op.k = geo.k;
    op.geometry = geo;
    // Outer: G ~ Σ a_m z^{-m-1} decays like (r/a)^m on the annulus, and the
    // moments beyond l_max decide how fast G(φ - Kφ) decays past the annulus.
    const int p_neg = decay_order(geo.a > 0 ? geo.r / geo.a : 0.0);
    const int p_pos = std::max(l_max, decay_order(geo.b));
    op.outer = annulus_weights(L, 0.0, geo.a, geo.b, false, -p_neg, p_pos, 0, l_max);
    // Inner: the Taylor series of G about c converges with ratio <= 2/3 there.
    const int p_taylor = decay_order(2.0 / 3.0);
    op.inner.resize(geo.inner.size());
    const double h = std::max(L.ha, L.hb);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(geo.inner.size()); ++p)
        for (const InnerCorona& ic : geo.inner[p])
            op.inner[p].push_back(annulus_weights(L, ic.center, ic.delta, 2.0 * ic.delta, true, -l_max, p_taylor, -l_max, 0));
    for (const auto& plane : geo.inner)
        for (const InnerCorona& ic : plane) op.max_inner_A = std::max(op.max_inner_A, std::abs(ic.A));
    op.unreliable = op.max_inner_A * h > 1.0;
    return op;
}

namespace {

enum class Part { outer, inner_one, all };

ScalarField apply(const ScalarField& phi, const CoronaOperatorSpec& op, Part part, int j_only) {
    const PlaneLayout L(phi.grid, op.k);
    if (op.geometry.inner.size() != L.count) throw GeometryError("corona operator built for a different grid");
    ScalarField G = cauchy_transform(phi, op.k);
    ScalarField out(phi.grid);
    const CoronaGeometry& geo = op.geometry;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(L.count); ++p) {
        const std::size_t b = L.base(p);
        const cplx* g = G.values.data() + b;
        cplx* o = out.values.data() + b;
        if (part != Part::inner_one) {
            for (std::size_t s = 0; s < op.outer.cells.size(); ++s) {
                const int i = op.outer.cells[s] / L.rb, j = op.outer.cells[s] % L.rb;
                const std::size_t off = i * L.sa + j * L.sb;
                o[off] += geo.A0 * op.outer.w[s] * L.point(i, j) * g[off];
            }
        }
        if (part == Part::outer) continue;
        for (std::size_t m = 0; m < geo.inner[p].size(); ++m) {
            const InnerCorona& ic = geo.inner[p][m];
            if (part == Part::inner_one && ic.j != j_only) continue;
            const AnnulusWeights& aw = op.inner[p][m];
            for (std::size_t s = 0; s < aw.cells.size(); ++s) {
                const int i = aw.cells[s] / L.rb, j = aw.cells[s] % L.rb;
                const std::size_t off = i * L.sa + j * L.sb;
                o[off] += ic.A * aw.w[s] * (L.point(i, j) - ic.center) * g[off];
            }
        }
    }
    return out;
}

void check_geometry(const ScalarField& phi, const CoronaOperatorSpec& op) {
    const PlaneLayout L(phi.grid, op.k);
    const double h = std::max(L.ha, L.hb);
    const CoronaGeometry probe = corona_geometry(phi, op.k, nullptr);
    if (probe.r > op.geometry.r + 2.0 * h)
        throw GeometryError("corona operator: field support exceeds the geometry it was built for");
}

}  // namespace

ScalarField K_outer(const ScalarField& phi, const CoronaOperatorSpec& op) {
    check_geometry(phi, op);
    return apply(phi, op, Part::outer, 0);
}

ScalarField K_inner(const ScalarField& phi, int j, const CoronaOperatorSpec& op) {
    check_geometry(phi, op);
    bool found = false;
    for (const auto& plane : op.geometry.inner)
        for (const auto& ic : plane) found = found || ic.j == j;
    if (!found) throw GeometryError("K_inner: no plane carries that puncture");
    return apply(phi, op, Part::inner_one, j);
}

ScalarField K_full(const ScalarField& phi, const CoronaOperatorSpec& op) {
    check_geometry(phi, op);
    return apply(phi, op, Part::all, 0);
}

std::vector<CenterField> center_fields(const DiscFamily& fam) {
    std::size_t most = 0;
    for (const auto& d : fam.discs) most = std::max(most, d.size());
    std::vector<CenterField> out(most, CenterField(fam.discs.size(), no_center()));
    for (std::size_t p = 0; p < fam.discs.size(); ++p)
        for (std::size_t j = 0; j < fam.discs[p].size(); ++j) out[j][p] = fam.discs[p][j].center;
    return out;
}

Decomposition decompose(const ScalarField& phi, int m, const DecomposeOptions& opt) {
    const int n = phi.grid.n;
    if (m <= 0) m = n;
    Decomposition d;
    const double norm = lr_norm(phi, opt.r);
    ScalarField psi = phi;
    for (int i = 1; i < m; ++i) {
        DiscFamily fam;
        const DiscFamily* famp = nullptr;
        if (opt.f && psi.sup() > 0.0) {
            fam = disc_family(*opt.f, i, psi, opt.tau_supp);
            famp = &fam;
        }
        const CoronaGeometry geo = corona_geometry(psi, i, famp, opt.tau_geom);
        const CoronaOperatorSpec op = make_operator(phi.grid, geo, opt.l_max);
        ScalarField next = apply(psi, op, Part::all, 0);
        ScalarField part = psi;
        part -= next;

        double worst = 0.0;
        if (norm > 0.0) {
            for (int l = 0; l <= opt.l_max; ++l) worst = std::max(worst, moment(part, i, l).sup() / norm);
            if (famp) {
                // Only punctures that received an inner corona are expected to be annihilated;
                // the others lie outside the outer annulus where G(part) already vanishes.
                const PlaneLayout L(phi.grid, i);
                std::vector<CenterField> centers;
                for (std::size_t p = 0; p < L.count; ++p)
                    for (const InnerCorona& ic : geo.inner[p]) {
                        if (static_cast<int>(centers.size()) < ic.j) centers.resize(ic.j, CenterField(L.count, no_center()));
                        centers[ic.j - 1][p] = ic.center;
                    }
                for (const CenterField& c : centers)
                    for (int l = 0; l <= opt.l_max; ++l)
                        worst = std::max(worst, punctured_moment(part, i, c, l, opt.tau_supp).sup() / norm);
            }
        }
        d.residual_report.push_back(worst);
        d.parts.push_back(std::move(part));
        d.geometries.push_back(geo);
        d.discs.push_back(fam);
        d.max_inner_A = std::max(d.max_inner_A, op.max_inner_A);
        d.unreliable = d.unreliable || op.unreliable;
        psi = std::move(next);
    }
    d.parts.push_back(std::move(psi));
    return d;
}

}  // namespace dbar::corona
