#include "dbar/zeroset.hpp"

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace dbar {

namespace {

constexpr double kPi = std::numbers::pi;

bool lex_less(const cplx& x, const cplx& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
}

// Coefficients c_0..c_d of the restriction to variable k.
std::vector<cplx> restrict_line(const PolynomialF& f, int k, const std::vector<cplx>& a) {
    const int N = f.degrees()[k - 1];
    std::vector<cplx> c(N + 1, cplx(0.0, 0.0));
    for (const auto& [e, coef] : f.terms) {
        cplx t = coef;
        for (int i = 0; i < f.n; ++i)
            if (i != k - 1) t *= ipow(a[i], e[i]);
        c[e[k - 1]] += t;
    }
    return c;
}

cplx horner(const std::vector<cplx>& c, cplx z) {
    cplx v(0.0, 0.0);
    for (std::size_t i = c.size(); i-- > 0;) v = v * z + c[i];
    return v;
}

}  // namespace

void PolynomialF::validate() const {
    if (n < 1) throw DomainError("polynomial: n must be >= 1");
    bool nonzero = false;
    for (const auto& [e, c] : terms) {
        if (static_cast<int>(e.size()) != n) throw DomainError("polynomial: exponent tuple has wrong length");
        for (int x : e)
            if (x < 0) throw DomainError("polynomial: negative exponent");
        if (c != cplx(0.0, 0.0)) nonzero = true;
    }
    if (!nonzero) throw DomainError("polynomial: needs at least one nonzero term");
}

std::vector<int> PolynomialF::degrees() const {
    std::vector<int> d(n, 0);
    for (const auto& [e, c] : terms)
        if (c != cplx(0.0, 0.0))
            for (int i = 0; i < n; ++i) d[i] = std::max(d[i], e[i]);
    return d;
}

PolynomialF PolynomialF::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("polynomial JSON: ") + e.what());
    }
    PolynomialF f;
    try {
        f.n = j.at("n").get<int>();
        for (const auto& t : j.at("terms")) {
            std::vector<int> e = t.at("exp").get<std::vector<int>>();
            const double re = t.value("re", 0.0), im = t.value("im", 0.0);
            f.terms[e] += cplx(re, im);
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("polynomial JSON: ") + e.what());
    }
    f.validate();
    return f;
}

std::string PolynomialF::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["terms"] = nlohmann::json::array();
    for (const auto& [e, c] : terms) j["terms"].push_back({{"exp", e}, {"re", c.real()}, {"im", c.imag()}});
    return j.dump();
}

cplx eval_f(const PolynomialF& f, const std::vector<cplx>& z) {
    // Horner in z_1 with the remaining variables folded into the coefficients.
    const std::vector<cplx> c = restrict_line(f, 1, z);
    return horner(c, z[0]);
}

std::vector<cplx> line_roots(const PolynomialF& f, int k, const std::vector<cplx>& a, double slack) {
    std::vector<cplx> c = restrict_line(f, k, a);
    double scale = 0.0;
    for (const auto& [e, coef] : f.terms) {
        double t = std::abs(coef);
        for (int i = 0; i < f.n; ++i)
            if (i != k - 1) t *= std::pow(std::max(1.0, std::abs(a[i])), e[i]);
        scale = std::max(scale, t);
    }
    const double eps = 1e-13 * scale;
    while (!c.empty() && std::abs(c.back()) <= eps) c.pop_back();
    if (c.empty()) throw DegenerateLineError("line_roots: restriction to the coordinate line is identically zero");
    const int d = static_cast<int>(c.size()) - 1;
    std::vector<cplx> roots;
    if (d == 0) return roots;

    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) C(i, d - 1) = -c[i] / c[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    std::vector<cplx> dc(d);
    for (int i = 1; i <= d; ++i) dc[i - 1] = static_cast<double>(i) * c[i];
    for (int i = 0; i < d; ++i) {
        cplx z = es.eigenvalues()[i];
        for (int it = 0; it < 3; ++it) {
            const cplx dp = horner(dc, z);
            if (std::abs(dp) == 0.0) break;
            const cplx step = horner(c, z) / dp;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            z -= step;
        }
        if (std::abs(z) <= 1.0 + slack) roots.push_back(z);
    }
    std::sort(roots.begin(), roots.end(), lex_less);
    return roots;
}

std::vector<std::vector<cplx>> plane_roots(const PolynomialF& f, const GridSpec& g, int k) {
    const PlaneLayout L(g, k);
    std::vector<std::vector<cplx>> out(L.count);
    const double slack = std::max(L.ha, L.hb);
    bool degenerate = false;
#pragma omp parallel
    {
        std::vector<cplx> z;
#pragma omp for schedule(static) reduction(|| : degenerate)
        for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(L.count); ++p) {
            point_at(g, L.base(p), z);
            try {
                out[p] = line_roots(f, k, z, slack);
            } catch (const DegenerateLineError&) {
                degenerate = true;
            }
        }
    }
    if (degenerate) throw DegenerateLineError("plane_roots: f vanishes identically on some coordinate line");
    return out;
}

std::vector<std::vector<cplx>> zero_samples(const PolynomialF& f, const GridSpec& g) {
    std::vector<std::vector<cplx>> out;
    std::vector<cplx> z;
    for (int k = 1; k <= g.n; ++k) {
        const PlaneLayout L(g, k);
        const double slack = std::max(L.ha, L.hb);
        for (std::size_t p = 0; p < L.count; ++p) {
            point_at(g, L.base(p), z);
            std::vector<cplx> roots;
            try {
                roots = line_roots(f, k, z, slack);
            } catch (const DegenerateLineError&) {
                for (int i = 0; i < L.ra; ++i)
                    for (int j = 0; j < L.rb; ++j) roots.push_back(L.point(i, j));
            }
            for (const cplx& c : roots) {
                z[k - 1] = c;
                out.push_back(z);
            }
        }
    }
    return out;
}

double separation(const GridSpec& g, int k, const std::vector<std::vector<cplx>>& roots, const SupportInfo& supp) {
    if (supp.count == 0) throw DomainError("separation: support is empty");
    const PlaneLayout L(g, k);
    double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(min : best)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(L.count); ++p) {
        if (roots[p].empty()) continue;
        const std::size_t b = L.base(p);
        for (int i = 0; i < L.ra; ++i)
            for (int j = 0; j < L.rb; ++j) {
                if (!supp.mask[b + i * L.sa + j * L.sb]) continue;
                const cplx z = L.point(i, j);
                for (const cplx& c : roots[p]) best = std::min(best, std::abs(z - c));
            }
    }
    const double h = std::max(L.ha, L.hb);
    if (best <= 3.0 * h)
        throw SupportTouchesZError("separation: support comes within 3h of the zero set");
    return best;
}

double separation(const PolynomialF& f, int k, const ScalarField& phi, double tau) {
    return separation(phi.grid, k, plane_roots(f, phi.grid, k), support_info(phi, tau));
}

std::vector<Disc> merge_discs(const std::vector<cplx>& centers, double delta, int N) {
    std::vector<Disc> discs;
    const double r0 = delta / (3.0 * std::max(N, 1));
    for (const cplx& c : centers) discs.push_back({c, r0});
    for (bool changed = true; changed;) {
        changed = false;
        const std::size_t m = discs.size();
        std::vector<std::size_t> parent(m);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                if (std::abs(discs[i].center - discs[j].center) < discs[i].radius + discs[j].radius) {
                    parent[find(i)] = find(j);
                    changed = true;
                }
        if (!changed) break;
        std::map<std::size_t, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < m; ++i) groups[find(i)].push_back(i);
        std::vector<Disc> next;
        for (const auto& [root, members] : groups) {
            if (members.size() == 1) {
                next.push_back(discs[members[0]]);
                continue;
            }
            cplx c = discs[members[0]].center;
            for (std::size_t i : members)
                if (lex_less(discs[i].center, c)) c = discs[i].center;
            next.push_back({c, delta});
        }
        discs = std::move(next);
    }
    std::sort(discs.begin(), discs.end(), [](const Disc& x, const Disc& y) { return lex_less(x.center, y.center); });
    return discs;
}

DiscFamily disc_family(const PolynomialF& f, int k, const ScalarField& phi, double tau) {
    DiscFamily fam;
    fam.k = k;
    const auto roots = plane_roots(f, phi.grid, k);
    fam.delta = separation(phi.grid, k, roots, support_info(phi, tau));
    const int N = f.degrees()[k - 1];
    fam.discs.resize(roots.size());
    // With no roots near the support the separation is infinite; cap the
    // radius so that discs stay inside the unit disc scale.
    const double delta = std::min(fam.delta, 1.0);
    for (std::size_t p = 0; p < roots.size(); ++p) fam.discs[p] = merge_discs(roots[p], delta, N);
    return fam;
}

double CoronaGeometry::outer_area() const { return kPi * (b * b - a * a); }

double outer_normalizer(double area) { return kPi / area; }
double inner_normalizer(double area) { return -kPi / area; }

CoronaGeometry corona_geometry(const ScalarField& phi, int k, const DiscFamily* discs, double tau) {
    const PlaneLayout L(phi.grid, k);
    CoronaGeometry geo;
    geo.k = k;
    const double thr = tau * phi.sup();
    std::vector<std::uint8_t> plane_live(L.count, 0);
    double r = 0.0;
#pragma omp parallel for schedule(static) reduction(max : r)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(L.count); ++p) {
        const cplx* src = phi.values.data() + L.base(p);
        for (int i = 0; i < L.ra; ++i)
            for (int j = 0; j < L.rb; ++j)
                if (std::abs(src[i * L.sa + j * L.sb]) > thr && thr > 0.0) {
                    r = std::max(r, std::abs(L.point(i, j)));
                    plane_live[p] = 1;
                }
    }
    if (r >= 1.0) throw SupportNotCompactError("corona_geometry: support reaches the unit circle");
    geo.r = r;
    geo.delta = (1.0 - r) / 3.0;
    geo.a = r + geo.delta;
    geo.b = r + 2.0 * geo.delta;
    geo.A0 = outer_normalizer(geo.outer_area());
    geo.inner.resize(L.count);
    if (!discs) return geo;
    if (discs->discs.size() != L.count) throw GeometryError("corona_geometry: disc family does not match the grid");
    for (std::size_t p = 0; p < L.count; ++p) {
        if (!plane_live[p]) continue;
        int j = 0;
        for (const Disc& d : discs->discs[p]) {
            ++j;
            const double m = std::abs(d.center);
            if (m >= geo.b) continue;  // the outer corona already accounts for it
            if (m >= r) throw GeometryError("corona_geometry: puncture lies between the support and the outer corona");
            InnerCorona ic;
            ic.j = j;
            ic.center = d.center;
            ic.delta = d.radius / 3.0;
            if (m + 2.0 * ic.delta >= geo.a)
                throw GeometryError("corona_geometry: inner corona overlaps the outer corona");
            ic.A = inner_normalizer(3.0 * kPi * ic.delta * ic.delta);
            geo.inner[p].push_back(ic);
        }
    }
    return geo;
}

}  // namespace dbar
