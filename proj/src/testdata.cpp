#include "dbar/testdata.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace dbar::testdata {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Per-variable factor b(z)·m(z) of a product form, m ∈ {1, 1 + z, z̄}.
struct Factor {
    Bump b;
    int mult = 0;

    cplx value(cplx z) const {
        const cplx v = b.value(z);
        if (mult == 1) return v * (1.0 + z);
        if (mult == 2) return v * std::conj(z);
        return v;
    }
    cplx dbar(cplx z) const {
        const cplx d = b.dbar(z);
        if (mult == 1) return d * (1.0 + z);
        if (mult == 2) return d * std::conj(z) + b.value(z);
        return d;
    }
};

struct Product {
    cplx amplitude{1.0, 0.0};
    std::vector<Factor> f;  // one per variable

    cplx value(const std::vector<cplx>& z) const {
        cplx v = amplitude;
        for (std::size_t i = 0; i < f.size(); ++i) v *= f[i].value(z[i]);
        return v;
    }
    /// ∂̄_k, k 1-based.
    cplx dbar(const std::vector<cplx>& z, int k) const {
        cplx v = amplitude;
        for (std::size_t i = 0; i < f.size(); ++i)
            v *= static_cast<int>(i) + 1 == k ? f[i].dbar(z[i]) : f[i].value(z[i]);
        return v;
    }
};

std::vector<Index> subsets(int n, int size) {
    std::vector<Index> out;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + size, true);
    do {
        Index I;
        for (int v = 0; v < n; ++v)
            if (pick[v]) I.push_back(v + 1);
        out.push_back(I);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    std::sort(out.begin(), out.end());
    return out;
}

// ω = ∂̄T for T = Σ_I T_I dz̄_I with product coefficients.
ExactPair from_products(const GridSpec& g, int q, const std::map<Index, Product>& T) {
    ExactPair out{QForm(g, q), QForm(g, q - 1)};
    for (const auto& [I, P] : T) out.T.set_increasing(I, sample([&](const auto& z) { return P.value(z); }, g));
    for (const Index& I : subsets(g.n, q)) {
        bool any = false;
        for (int k : I) any = any || T.count(set_minus(I, {k}));
        if (!any) continue;
        out.omega.set_increasing(I, sample(
                                        [&](const std::vector<cplx>& z) {
                                            cplx s(0.0, 0.0);
                                            for (int k : I) {
                                                const Index rest = set_minus(I, {k});
                                                const auto it = T.find(rest);
                                                if (it == T.end()) continue;
                                                s += static_cast<double>(wedge_sign(k, rest)) * it->second.dbar(z, k);
                                            }
                                            return s;
                                        },
                                        g));
    }
    return out;
}

}  // namespace

cplx Bump::value(cplx z) const {
    const double t = 1.0 - std::norm(z - center) / (radius * radius);
    return t > 0.0 ? cplx(std::pow(t, power), 0.0) : cplx(0.0, 0.0);
}

cplx Bump::dbar(cplx z) const {
    const double t = 1.0 - std::norm(z - center) / (radius * radius);
    if (t <= 0.0) return {0.0, 0.0};
    return -static_cast<double>(power) * std::pow(t, power - 1) * (z - center) / (radius * radius);
}

double Cutoff::value(cplx z) const {
    const double s = std::norm(z), s1 = inner * inner, s2 = outer * outer;
    if (s <= s1) return 1.0;
    if (s >= s2) return 0.0;
    const double t = (s - s1) / (s2 - s1);
    const int m = 2 * power + 1;
    double I = 0.0;
    for (int j = power + 1; j <= m; ++j) I += binom(m, j) * std::pow(t, j) * std::pow(1.0 - t, m - j);
    return 1.0 - I;
}

cplx Cutoff::dbar(cplx z) const {
    const double s = std::norm(z), s1 = inner * inner, s2 = outer * outer;
    if (s <= s1 || s >= s2) return {0.0, 0.0};
    const double t = (s - s1) / (s2 - s1);
    // d/dt I_t(p+1, p+1) = t^p (1-t)^p / B(p+1, p+1), B = p!² / (2p+1)!
    const double invB = (2 * power + 1) * binom(2 * power, power);
    const double dC = -invB * std::pow(t * (1.0 - t), power) / (s2 - s1);
    return dC * z;  // ∂̄|z|² = z
}

QForm bump(const GridSpec& g, int q, std::uint64_t seed) {
    if (q < 0 || q > g.n) throw DomainError("bump: q out of range");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Product P;
    P.amplitude = std::polar(1.0, std::numbers::pi * u(rng));
    for (int v = 0; v < g.n; ++v) P.f.push_back({Bump{{0.1 * u(rng), 0.1 * u(rng)}, 0.5 + 0.05 * u(rng), 8}, 0});
    QForm w(g, q);
    w.set_increasing(range_index(1, q), sample([&](const auto& z) { return P.value(z); }, g));
    return w;
}

ScalarField random_field(const GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Product> parts(3);
    for (auto& P : parts) {
        P.amplitude = cplx(u(rng), u(rng));
        for (int v = 0; v < g.n; ++v)
            P.f.push_back({Bump{{0.35 * u(rng), 0.35 * u(rng)}, 0.3 + 0.1 * u(rng), 4}, 0});
    }
    return sample(
        [&](const std::vector<cplx>& z) {
            cplx s(0.0, 0.0);
            for (const auto& P : parts) s += P.value(z);
            return s;
        },
        g);
}

ExactPair exact_form(const GridSpec& g, int q, std::uint64_t seed, double radius) {
    if (q < 1 || q > g.n) throw DomainError("exact-form: q must lie in [1, n]");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::map<Index, Product> T;
    int idx = 0;
    for (const Index& I : subsets(g.n, q - 1)) {
        Product P;
        P.amplitude = (0.75 + 0.25 * u(rng)) * std::polar(1.0, std::numbers::pi * u(rng));
        const int marked = idx % g.n;
        for (int v = 0; v < g.n; ++v) {
            Factor F{Bump{{0.05 * u(rng), 0.05 * u(rng)}, radius * (1.0 - 0.05 * (idx % 2)), 6},
                     v == marked ? 1 + idx % 2 : 0};
            P.f.push_back(F);
        }
        T[I] = P;
        ++idx;
    }
    return from_products(g, q, T);
}

ExactPair annulus_moment_free(const GridSpec& g, cplx center, double inner, double outer) {
    if (g.n != 1) throw DomainError("annulus-moment-free is a one-variable test case");
    const double s1 = inner * inner, s2 = outer * outer;
    const int p = 8;
    const double scale = std::pow(0.25 * (s2 - s1) * (s2 - s1), p);
    auto B = [&](double s) { return s > s1 && s < s2 ? std::pow((s - s1) * (s2 - s), p) / scale : 0.0; };
    auto dB = [&](double s) {
        if (!(s > s1 && s < s2)) return 0.0;
        const double a = s - s1, b = s2 - s;
        return p * std::pow(a * b, p - 1) * (b - a) / scale;
    };
    ExactPair out{QForm(g, 1), QForm(g, 0)};
    out.T.set_increasing({}, sample(
                                 [&](const std::vector<cplx>& z) {
                                     const cplx w = z[0] - center;
                                     return B(std::norm(w)) * (1.0 + 0.25 * w);
                                 },
                                 g));
    out.omega.set_increasing({1}, sample(
                                      [&](const std::vector<cplx>& z) {
                                          const cplx w = z[0] - center;
                                          return dB(std::norm(w)) * w * (1.0 + 0.25 * w);
                                      },
                                      g));
    return out;
}

QForm mass_bump(const GridSpec& g, int q) {
    if (q < 1 || q > g.n) throw DomainError("mass-bump: q must lie in [1, n]");
    const Bump b{{0.0, 0.0}, 0.5, 4};
    QForm w(g, q);
    w.set_increasing(range_index(1, q), sample(
                                            [&](const std::vector<cplx>& z) {
                                                cplx v(1.0, 0.0);
                                                for (const cplx& x : z) v *= b.value(x);
                                                return v;
                                            },
                                            g));
    return w;
}

ExactPair off_z(const GridSpec& g, int q, const PolynomialF& f, const std::vector<double>& radii) {
    if (f.n != g.n) throw DomainError("off-Z: polynomial dimension does not match the grid");
    if (static_cast<int>(radii.size()) != g.n) throw DomainError("off-Z: one radius per variable");
    if (q < 1 || q > g.n) throw DomainError("off-Z: q must lie in [1, n]");
    std::map<Index, Product> T;
    int idx = 0;
    for (const Index& I : subsets(g.n, q - 1)) {
        Product P;
        P.amplitude = std::polar(1.0, 0.7 * idx);
        for (int v = 0; v < g.n; ++v)
            P.f.push_back({Bump{{0.0, 0.0}, radii[v] * (1.0 - 0.05 * (idx % 2)), 6}, v == idx % g.n ? 1 : 0});
        T[I] = P;
        ++idx;
    }
    ExactPair out = from_products(g, q, T);
    ScalarField mag(g);
    for (const auto& [J, c] : out.omega.coeffs)
        for (std::size_t i = 0; i < c.size(); ++i) mag[i] = std::max(mag[i].real(), std::abs(c[i]));
    separation(f, 1, mag, 1e-10);  // throws when the support touches Z
    return out;
}

ExactPair cutoff_power(const GridSpec& g, int k, double inner, double outer) {
    if (g.n != 1) throw DomainError("cutoff-power is a one-variable test case");
    const Cutoff chi{inner, outer, 4};
    ExactPair out{QForm(g, 1), QForm(g, 0)};
    out.T.set_increasing({}, sample([&](const auto& z) { return ipow(z[0], k) * chi.value(z[0]); }, g));
    out.omega.set_increasing({1}, sample([&](const auto& z) { return ipow(z[0], k) * chi.dbar(z[0]); }, g));
    return out;
}

std::vector<std::string> names() { return {"bump", "exact-form", "annulus-moment-free", "mass-bump", "off-Z"}; }

ExactPair make(const std::string& name, const GridSpec& g, int q, std::uint64_t seed, const PolynomialF* f) {
    if (name == "bump") return {bump(g, q, seed), QForm()};
    if (name == "exact-form") return exact_form(g, q, seed);
    if (name == "annulus-moment-free") return annulus_moment_free(g);
    if (name == "mass-bump") return {mass_bump(g, q), QForm()};
    if (name == "off-Z") {
        if (!f) throw UsageError("off-Z needs a polynomial (--poly)");
        std::vector<double> radii(g.n, 0.28);
        radii[0] = 0.5;
        return off_z(g, q, *f, radii);
    }
    throw UnknownTestcaseError("unknown test case '" + name + "'");
}

}  // namespace dbar::testdata
