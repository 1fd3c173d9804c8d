#include "dbar/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace dbar::conditions {

namespace {

constexpr double kPi = std::numbers::pi;

// Dense tensor over a subset of the variables; each present variable is either
// still integrated (ζ) or already an output coordinate (z).
struct State {
    std::vector<int> var;
    std::vector<bool> is_z;
    std::vector<std::size_t> dim;
    std::vector<cplx> v;
};

struct Step {
    enum Kind { power, punctured, last_power, last_punctured } kind;
    int order = 0;   // l_i or k
    int which = 0;   // puncture index for punctured kinds
    bool keep_z = false;
};

const Disc* disc_at(const Context& ctx, int var, std::size_t plane, int which) {
    if (which < 1 || ctx.discs.size() < static_cast<std::size_t>(var)) return nullptr;
    const auto& fam = ctx.discs[var - 1];
    if (plane >= fam.discs.size() || static_cast<int>(fam.discs[plane].size()) < which) return nullptr;
    return &fam.discs[plane][which - 1];
}

void contract(State& st, const GridSpec& g, int var, const Step& step, const Context& ctx) {
    const std::size_t d = std::find(st.var.begin(), st.var.end(), var) - st.var.begin();
    std::size_t pre = 1, post = 1;
    for (std::size_t t = 0; t < d; ++t) pre *= st.dim[t];
    for (std::size_t t = d + 1; t < st.dim.size(); ++t) post *= st.dim[t];
    const PlaneLayout L(g, var);
    const std::size_t D = st.dim[d];
    const double dA = L.ha * L.hb;
    const double h = std::max(L.ha, L.hb);

    const bool needs_center = step.kind == Step::punctured || step.kind == Step::last_punctured;
    const bool add_z = step.keep_z;

    double vmax = 0.0;
    for (const auto& x : st.v) vmax = std::max(vmax, std::abs(x));
    const double thr = 1e-10 * vmax;

    std::vector<cplx> powers(D);
    if (!needs_center)
        for (std::size_t t = 0; t < D; ++t) powers[t] = ipow(L.point(t / L.rb, t % L.rb), step.order);

    std::vector<cplx> out(pre * (add_z ? D : 1) * post, cplx(0.0, 0.0));
    bool too_close = false;

#pragma omp parallel for schedule(static) reduction(|| : too_close)
    for (std::ptrdiff_t ab = 0; ab < static_cast<std::ptrdiff_t>(pre * post); ++ab) {
        const std::size_t a = ab / post, b = ab % post;
        const Disc* disc = nullptr;
        if (needs_center) {
            // Locate the plane of `var` through the coordinates of every other variable.
            std::size_t flat = 0;
            std::size_t ra = a, rb_ = b;
            for (std::size_t t = d; t-- > 0;) {
                flat += (ra % st.dim[t]) * g.stride(2 * st.var[t] - 1);
                ra /= st.dim[t];
            }
            for (std::size_t t = st.dim.size(); t-- > d + 1;) {
                flat += (rb_ % st.dim[t]) * g.stride(2 * st.var[t] - 1);
                rb_ /= st.dim[t];
            }
            disc = disc_at(ctx, var, L.plane_of(flat), step.which);
            if (!disc) continue;
        }
        cplx S(0.0, 0.0);
        for (std::size_t t = 0; t < D; ++t) {
            const cplx x = st.v[(a * D + t) * post + b];
            if (x == cplx(0.0, 0.0)) continue;
            cplx w;
            if (!needs_center) {
                w = powers[t];
            } else {
                const cplx dz = L.point(t / L.rb, t % L.rb) - disc->center;
                if (std::abs(dz) < 3.0 * h) {
                    if (std::abs(x) > thr) too_close = true;
                    continue;
                }
                const int e = step.order + 1;
                w = (step.kind == Step::punctured && ctx.raw_display) ? ipow(dz, e) : ipow(dz, -e);
            }
            S += x * w;
        }
        S *= dA;
        if (!add_z) {
            out[a * post + b] = S;
            continue;
        }
        for (std::size_t t = 0; t < D; ++t) {
            cplx gz(1.0, 0.0);
            if (step.kind == Step::punctured) {
                const cplx dz = L.point(t / L.rb, t % L.rb) - disc->center;
                const double s = std::abs(dz), del = disc->radius / 3.0;
                gz = (s >= del && s <= 2.0 * del) ? ipow(dz, step.order + 1) : cplx(0.0, 0.0);
            }
            out[(a * D + t) * post + b] = S * gz;
        }
    }
    if (too_close) throw PunctureTooCloseError("J integral: support within 3h of a puncture");

    st.v = std::move(out);
    if (add_z) {
        st.is_z[d] = true;
    } else {
        st.var.erase(st.var.begin() + d);
        st.is_z.erase(st.is_z.begin() + d);
        st.dim.erase(st.dim.begin() + d);
    }
}

JField evaluate(const ScalarField& phi, const MultiIndexSpec& spec, int j, const Context& ctx) {
    const GridSpec& g = phi.grid;
    const int n = g.n;
    if (static_cast<int>(spec.mu.size()) != n - 1 || static_cast<int>(spec.l.size()) != n - 1)
        throw DomainError("J: mu and l need n-1 components");
    if ((j >= 1 || std::any_of(spec.mu.begin(), spec.mu.end(), [](int m) { return m > 0; })) && !ctx.f)
        throw DomainError("J: punctured factors need a polynomial");
    for (int x : spec.l)
        if (x < 0) throw DomainError("J: negative moment order");

    State st;
    for (int v = 1; v <= n; ++v) {
        st.var.push_back(v);
        st.is_z.push_back(false);
        st.dim.push_back(static_cast<std::size_t>(g.res[2 * v - 2]) * g.res[2 * v - 1]);
    }
    st.v = phi.values;

    auto centers_after = [&](int v) {
        if (!ctx.f) return false;
        for (int i = v + 1; i < n; ++i)
            if (spec.mu[i - 1] >= 1) return true;
        return j >= 1;
    };

    for (int v = 1; v <= n; ++v) {
        Step step;
        if (v < n) {
            const bool punct = spec.mu[v - 1] >= 1;
            step.kind = punct ? Step::punctured : Step::power;
            step.order = spec.l[v - 1];
            step.which = spec.mu[v - 1];
            step.keep_z = punct || centers_after(v);
        } else {
            step.kind = j >= 1 ? Step::last_punctured : Step::last_power;
            step.order = spec.k;
            step.which = j;
        }
        contract(st, g, v, step, ctx);
    }
    JField out;
    out.vars = st.var;
    out.values = std::move(st.v);
    const double s = 1.0 / std::pow(kPi, n);
    for (auto& x : out.values) x *= s;
    return out;
}

}  // namespace

Index MultiIndexSpec::I() const {
    Index out;
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (mu[i] == 0) out.push_back(static_cast<int>(i) + 1);
    return out;
}

std::string MultiIndexSpec::str() const {
    std::ostringstream os;
    auto list = [&](const std::vector<int>& v) {
        os << '(';
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << ')';
    };
    os << "mu=";
    list(mu);
    os << " l=";
    list(l);
    os << " k=" << k << " j=" << j;
    return os.str();
}

double JField::sup() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

Context make_context(const ScalarField& phi, const PolynomialF* f, double tau) {
    Context ctx;
    ctx.f = f;
    if (!f || phi.sup() == 0.0) return ctx;
    for (int k = 1; k <= phi.grid.n; ++k) ctx.discs.push_back(disc_family(*f, k, phi, tau));
    return ctx;
}

JField J_outer(const ScalarField& phi, const MultiIndexSpec& spec, const Context& ctx) {
    MultiIndexSpec s = spec;
    s.j = 0;
    return evaluate(phi, s, 0, ctx);
}

JField J_inner(const ScalarField& phi, int j, const MultiIndexSpec& spec, const Context& ctx) {
    if (j < 1) throw DomainError("J_inner: puncture index must be >= 1");
    MultiIndexSpec s = spec;
    s.j = j;
    return evaluate(phi, s, j, ctx);
}

nlohmann::json StructureReport::to_json() const {
    nlohmann::json j;
    j["schema"] = "structure-report/1";
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    j["worst"] = worst;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : entries)
        j["entries"].push_back({{"mu", e.spec.mu},
                                {"l", e.spec.l},
                                {"k", e.spec.k},
                                {"j", e.spec.j},
                                {"value", e.value},
                                {"tolerance", tolerance},
                                {"pass", e.pass}});
    return j;
}

StructureReport check_structure(const ScalarField& phi, int l_max, int k_max, const Context& ctx, double tol,
                                double r) {
    if (l_max < 0 || k_max < 0) throw DomainError("check_structure: truncation bounds must be >= 0");
    const int n = phi.grid.n;
    StructureReport rep;
    rep.tolerance = tol;
    const double norm = lr_norm(phi, r);
    if (norm == 0.0) {
        MultiIndexSpec s;
        s.mu.assign(n - 1, 0);
        s.l.assign(n - 1, 0);
        rep.entries.push_back({s, 0.0, true});
        return rep;
    }
    std::vector<int> N(n, 0);
    if (ctx.f) N = ctx.f->degrees();

    std::vector<int> mu(n - 1, 0), l(n - 1, 0);
    auto next = [](std::vector<int>& v, auto bound) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (++v[i] <= bound(i)) return true;
            v[i] = 0;
        }
        return false;
    };
    do {
        std::fill(l.begin(), l.end(), 0);
        do {
            for (int k = 0; k <= k_max; ++k)
                for (int j = 0; j <= N[n - 1]; ++j) {
                    MultiIndexSpec s{mu, l, k, j};
                    const JField J = j == 0 ? J_outer(phi, s, ctx) : J_inner(phi, j, s, ctx);
                    StructureEntry e{s, J.sup() / norm, true};
                    e.pass = e.value <= tol;
                    if (!e.pass && rep.pass) {
                        rep.pass = false;
                        rep.first_failure = static_cast<int>(rep.entries.size());
                    }
                    rep.worst = std::max(rep.worst, e.value);
                    rep.entries.push_back(e);
                }
        } while (next(l, [&](std::size_t) { return l_max; }));
    } while (next(mu, [&](std::size_t i) { return N[i]; }));
    return rep;
}

}  // namespace dbar::conditions
