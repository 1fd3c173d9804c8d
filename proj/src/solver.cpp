#include "dbar/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dbar/cauchy.hpp"
#include "dbar/conditions.hpp"

namespace dbar::solver {

namespace {

bool is_zero(const QForm& w) {
    for (const auto& [J, f] : w.coeffs)
        if (f.sup() > 0.0) return false;
    return true;
}

// Restrict a form to coefficients containing / not containing dz̄_m.
QForm split_without(const QForm& w, int m) {
    QForm out(w.grid, w.q);
    for (const auto& [J, f] : w.coeffs) {
        const Index I = complement(J, w.grid.n);
        if (!std::binary_search(I.begin(), I.end(), m)) out.set_increasing(I, f);
    }
    return out;
}

// The form g with (part of w containing dz̄_m) = g ∧ dz̄_m, for m the largest active index.
QForm split_with(const QForm& w, int m) {
    QForm out(w.grid, w.q - 1);
    for (const auto& [J, f] : w.coeffs) {
        const Index I = complement(J, w.grid.n);
        if (!std::binary_search(I.begin(), I.end(), m)) continue;
        const Index Ip = set_minus(I, {m});
        out.add_increasing(Ip, static_cast<double>(merge_sign(Ip, {m})), f);
    }
    return out;
}

// β += g ∧ dz̄_m
void add_wedge_last(QForm& beta, const QForm& g, int m) {
    for (const auto& [J, f] : g.coeffs) {
        const Index K = complement(J, g.grid.n);
        beta.add_increasing(set_union(K, {m}), static_cast<double>(merge_sign(K, {m})), f);
    }
}

struct Trace {
    nlohmann::json steps = nlohmann::json::array();
    double worst_moment = 0.0;
    bool unreliable = false;
    double max_A0 = 0.0;
};

QForm solve_rec(const QForm& w, int m, int depth, const SolveOptions& opt, Trace& tr);

QForm core_01(const QForm& w, int /*m*/) {
    QForm beta(w.grid, 0);
    const ScalarField f = cauchy_transform(w.get_increasing({1}), 1);
    beta.set_increasing({}, f);
    return beta;
}

QForm core_0n(const QForm& w, int m, const SolveOptions& opt, Trace& tr) {
    const Index all = range_index(1, m);
    const ScalarField phi = w.get_increasing(all);
    corona::DecomposeOptions dopt;
    dopt.l_max = opt.l_max;
    dopt.r = opt.r;
    const corona::Decomposition dec = corona::decompose(phi, m, dopt);
    QForm beta(w.grid, m - 1);
    for (int i = 1; i <= m; ++i) {
        const Index K = set_minus(all, {i});
        beta.add_increasing(K, static_cast<double>(wedge_sign(i, K)), cauchy_transform(dec.parts[i - 1], i));
    }
    for (double v : dec.residual_report) tr.worst_moment = std::max(tr.worst_moment, v);
    for (const auto& g : dec.geometries) tr.max_A0 = std::max(tr.max_A0, g.A0);
    tr.unreliable = tr.unreliable || dec.unreliable;
    tr.steps.push_back({{"step", "top-degree"}, {"m", m}, {"moments", dec.residual_report}});
    return beta;
}

QForm core_0n1(const QForm& w, int m, int depth, const SolveOptions& opt, Trace& tr) {
    const Index head = range_index(1, m - 1);
    const ScalarField wm = w.get_increasing(head);
    corona::DecomposeOptions dopt;
    dopt.l_max = opt.l_max;
    dopt.r = opt.r;
    const corona::Decomposition dec = corona::decompose(wm, m - 1, dopt);
    QForm gamma(w.grid, m - 2);
    for (int j = 1; j <= m - 1; ++j) {
        const Index K = set_minus(head, {j});
        gamma.add_increasing(K, static_cast<double>(wedge_sign(j, K)), cauchy_transform(dec.parts[j - 1], j));
    }
    for (double v : dec.residual_report) tr.worst_moment = std::max(tr.worst_moment, v);
    for (const auto& g : dec.geometries) tr.max_A0 = std::max(tr.max_A0, g.A0);
    tr.unreliable = tr.unreliable || dec.unreliable;
    tr.steps.push_back({{"step", "degree n-1"}, {"m", m}, {"moments", dec.residual_report}});

    const QForm rest = w - form_dbar(gamma, m);
    const QForm psi = split_with(rest, m);
    const QForm xi = solve_rec(psi, m - 1, depth + 1, opt, tr);
    QForm beta = gamma;
    add_wedge_last(beta, xi, m);
    return beta;
}

QForm core_general(const QForm& w, int m, int depth, const SolveOptions& opt, Trace& tr) {
    const QForm h = split_without(w, m);
    const QForm H = solve_rec(h, m - 1, depth + 1, opt, tr);
    const QForm g = split_with(w - form_dbar(H, m), m);
    const QForm Gp = solve_rec(g, m - 1, depth + 1, opt, tr);
    QForm beta = H;
    add_wedge_last(beta, Gp, m);
    tr.steps.push_back({{"step", "split"}, {"m", m}, {"q", w.q}});
    return beta;
}

QForm solve_rec(const QForm& w, int m, int depth, const SolveOptions& opt, Trace& tr) {
    if (depth > opt.max_depth) throw DepthError("solver recursion exceeded the depth guard");
    const int q = w.q;
    if (q < 1 || q > m) throw DomainError("solver: form degree must lie in [1, m]");
    if (is_zero(w)) return QForm(w.grid, q - 1);
    if (q == 1) return core_01(w, m);
    if (q == m) return core_0n(w, m, opt, tr);
    if (q == m - 1) return core_0n1(w, m, depth, opt, tr);
    return core_general(w, m, depth, opt, tr);
}

void check_closed(const QForm& w, const SolveOptions& opt) {
    if (w.q >= w.grid.n) return;
    const double ratio = closedness_ratio(w);
    if (ratio > opt.tol_closed) {
        std::ostringstream os;
        os << "input form is not closed: |dbar w| ratio " << ratio << " > " << opt.tol_closed;
        throw NotClosedError(os.str());
    }
}

void check_structure_or_throw(const ScalarField& phi, const SolveOptions& opt, nlohmann::json& out) {
    const auto ctx = conditions::make_context(phi, nullptr);
    const auto rep = conditions::check_structure(phi, opt.structure_l_max, opt.structure_k_max, ctx, opt.tol_moment, opt.r);
    out["structure"] = {{"pass", rep.pass}, {"worst", rep.worst}, {"tolerance", rep.tolerance}};
    if (!rep.pass) {
        const auto& e = rep.entries[rep.first_failure];
        out["structure"]["failure"] = {{"spec", e.spec.str()}, {"value", e.value}};
        throw StructureObstructionError("structure condition fails at " + e.spec.str(), e.spec.str(), e.value);
    }
}

std::vector<CoefficientSupport> support_of(const QForm& beta, double tau) {
    const GridSpec& g = beta.grid;
    const double top = sup_norm(beta);
    std::vector<CoefficientSupport> out;
    std::vector<cplx> z;
    for (const auto& [J, f] : beta.coeffs) {
        CoefficientSupport cs;
        cs.J = J;
        cs.max = f.sup();
        double tail = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (f[i] == cplx(0.0, 0.0)) continue;
            point_at(g, i, z);
            bool outside = false;
            for (const auto& x : z) outside = outside || std::abs(x) > 1.0;
            if (outside) tail = std::max(tail, std::abs(f[i]));
        }
        cs.tail = top > 0 ? tail / top : 0.0;
        cs.radius_per_axis = cs.max > 0 ? support_info(f, tau).radius_per_axis : std::vector<double>(g.n, 0.0);
        out.push_back(cs);
    }
    return out;
}

SolveResult finish(const QForm& w, QForm beta, const SolveOptions& opt, std::string route, const Trace& tr) {
    SolveResult res;
    res.route = std::move(route);
    res.solution = std::move(beta);
    const double wn = lr_norm(w, opt.r);
    const QForm d = form_dbar(res.solution) - w;
    res.residual = wn > 0 ? lr_norm(d, opt.r) / wn : lr_norm(d, opt.r);
    const double ws = sup_norm(w);
    res.residual_sup = ws > 0 ? sup_norm(d) / ws : sup_norm(d);
    res.norm_ratio = wn > 0 ? lr_norm(res.solution, opt.r) / wn : 0.0;
    res.support_report = support_of(res.solution, opt.tol_support);
    res.diagnostics["steps"] = tr.steps;
    res.diagnostics["max_decomposition_moment"] = tr.worst_moment;
    res.diagnostics["unreliable_inner_normalizer"] = tr.unreliable;
    if (tr.max_A0 > 0) {
        // (A0·M + 1)^n · M with M = 2, the operator-norm bound of the top-degree solve.
        res.diagnostics["operator_bound"] = std::pow(tr.max_A0 * 2.0 + 1.0, w.grid.n) * 2.0;
    }
    if (opt.enforce_support && res.max_tail() > opt.tol_support) {
        std::ostringstream os;
        os << "solution leaks outside the unit polydisc: tail " << res.max_tail() << " > " << opt.tol_support;
        throw SupportLeakError(os.str());
    }
    return res;
}

}  // namespace

void SolveOptions::validate() const {
    if (l_max < 4) throw DomainError("SolveOptions: l_max must be >= 4");
    if (!(tol_moment > 0 && tol_support > 0 && tol_closed > 0)) throw DomainError("SolveOptions: tolerances must be positive");
    if (!(r >= 1.0)) throw DomainError("SolveOptions: r must be >= 1");
    if (!(tol_support < 1.0)) throw DomainError("SolveOptions: tol_support must be < 1");
}

double SolveResult::max_tail() const {
    double t = 0.0;
    for (const auto& s : support_report) t = std::max(t, s.tail);
    return t;
}

nlohmann::json SolveResult::to_json() const {
    nlohmann::json j;
    j["schema"] = "solve-report/1";
    j["route"] = route;
    j["q"] = solution.q;
    j["residual"] = residual;
    j["residual_sup"] = residual_sup;
    j["norm_ratio"] = norm_ratio;
    j["max_tail"] = max_tail();
    j["support"] = nlohmann::json::array();
    for (const auto& s : support_report) {
        nlohmann::json e{{"J", s.J}, {"max", s.max}, {"tail", s.tail}, {"radius_per_axis", s.radius_per_axis}};
        if (s.distance_to_z) e["distance_to_z"] = *s.distance_to_z;
        j["support"].push_back(e);
    }
    j["obstruction"] = obstruction_report;
    j["diagnostics"] = diagnostics;
    return j;
}

double closedness_ratio(const QForm& w) {
    double scale = 0.0;
    for (const auto& [J, f] : w.coeffs)
        for (int k = 1; k <= w.grid.n; ++k) scale = std::max(scale, dbar_fd(f, k).sup());
    if (scale == 0.0) return 0.0;
    return sup_norm(form_dbar(w)) / scale;
}

SolveResult solve_1d_punctured(const ScalarField& phi, const DiscFamily* punctures, const SolveOptions& opt) {
    opt.validate();
    if (phi.grid.n != 1) throw DomainError("solve_1d_punctured needs n = 1");
    std::vector<CenterField> centers;
    if (punctures) centers = corona::center_fields(*punctures);
    SolveResult res;
    nlohmann::json obstruction;
    if (phi.sup() > 0.0) {
        const MomentTable t = moment_table(phi, 1, centers, opt.l_max, opt.r);
        const auto w = t.worst();
        obstruction["moments"] = {{"worst", w.value}, {"j", w.j}, {"l", w.l}, {"tolerance", opt.tol_moment}};
        if (w.value > opt.tol_moment) {
            std::ostringstream os;
            os << "moment obstruction at puncture " << w.j << ", order " << w.l << ": " << w.value;
            throw MomentObstructionError(os.str(), w.j, w.l, w.value);
        }
    }
    QForm omega(phi.grid, 1);
    omega.set_increasing({1}, phi);
    QForm beta(phi.grid, 0);
    beta.set_increasing({}, cauchy_transform(phi, 1));
    Trace tr;
    SolveOptions o = opt;
    o.enforce_support = false;
    res = finish(omega, std::move(beta), o, "one-variable", tr);
    res.obstruction_report = obstruction;
    if (!centers.empty()) {
        // Distance from supp u to the punctures.
        const ScalarField& u = res.solution.coeffs.begin()->second;
        std::vector<std::vector<cplx>> pts;
        for (const CenterField& c : centers)
            if (has_center(c[0])) pts.push_back({c[0]});
        const double dist = support_info(u, opt.tol_support, pts).distance_to_set.value_or(0.0);
        res.support_report.front().distance_to_z = dist;
    }
    if (opt.enforce_support && res.max_tail() > opt.tol_support)
        throw SupportLeakError("solution leaks outside the unit disc");
    return res;
}

SolveResult solve_01(const QForm& w, const SolveOptions& opt) {
    opt.validate();
    if (w.q != 1) throw DomainError("solve_01 needs a (0,1)-form");
    if (w.grid.n < 2) throw DomainError("solve_01 needs n >= 2; use solve_1d_punctured for n = 1");
    check_closed(w, opt);
    Trace tr;
    return finish(w, core_01(w, w.grid.n), opt, "degree-1", tr);
}

SolveResult solve_0n(const QForm& w, const SolveOptions& opt) {
    opt.validate();
    const int n = w.grid.n;
    if (w.q != n) throw DomainError("solve_0n needs a (0,n)-form");
    if (n == 1) {
        const SolveResult r = solve_1d_punctured(w.get_increasing({1}), nullptr, opt);
        SolveResult out = r;
        out.route = "top-degree";
        return out;
    }
    nlohmann::json obstruction;
    const ScalarField phi = w.get_increasing(range_index(1, n));
    if (opt.check_structure && phi.sup() > 0.0) check_structure_or_throw(phi, opt, obstruction);
    Trace tr;
    QForm beta = is_zero(w) ? QForm(w.grid, n - 1) : core_0n(w, n, opt, tr);
    SolveResult res = finish(w, std::move(beta), opt, "top-degree", tr);
    res.obstruction_report = obstruction;
    return res;
}

SolveResult solve_0n1(const QForm& w, const SolveOptions& opt) {
    opt.validate();
    const int n = w.grid.n;
    if (n < 3 || w.q != n - 1) throw DomainError("solve_0n1 needs n >= 3 and a (0,n-1)-form");
    check_closed(w, opt);
    const StarReport star = check_star(w, opt.r);
    if (!star.pass) throw StarConditionError("derivative condition fails on the input form");
    Trace tr;
    return finish(w, solve_rec(w, n, 0, opt, tr), opt, "degree n-1", tr);
}

SolveResult solve_general(const QForm& w, const SolveOptions& opt) {
    opt.validate();
    const int n = w.grid.n;
    if (w.q == 1 && n >= 2) return solve_01(w, opt);
    if (w.q == n) return solve_0n(w, opt);
    if (w.q == n - 1 && n >= 3) return solve_0n1(w, opt);
    if (w.q < 1 || w.q > n) throw DomainError("solve_general: degree out of range");
    check_closed(w, opt);
    const StarReport star = check_star(w, opt.r);
    if (!star.pass) throw StarConditionError("derivative condition fails on the input form");
    Trace tr;
    return finish(w, solve_rec(w, n, 0, opt, tr), opt, "split", tr);
}

SolveResult solve(const QForm& w, const SolveOptions& opt) { return solve_general(w, opt); }

SolveResult solve_vanishing(const QForm& w, const PolynomialF& f, int k, const SolveOptions& opt,
                            VanishingReport* report) {
    opt.validate();
    if (k < 0) throw DomainError("vanishing order must be >= 0");
    if (f.n != w.grid.n) throw DomainError("polynomial and form live in different dimensions");
    if (k == 0) return solve(w, opt);
    const GridSpec& g = w.grid;

    // Support of ω as a whole, and its distance from Z in C^n.
    ScalarField magnitude(g);
    for (const auto& [J, c] : w.coeffs)
        for (std::size_t i = 0; i < c.size(); ++i) magnitude[i] = std::max(magnitude[i].real(), std::abs(c[i]));
    const auto zs = zero_samples(f, g);
    const double delta = support_info(magnitude, opt.tol_support, zs).distance_to_set.value_or(0.0);

    // φ' = ω / f^k, zero where ω is negligible.
    ScalarField fk = sample([&](const std::vector<cplx>& z) { return ipow(eval_f(f, z), k); }, g);
    QForm wdiv(g, w.q);
    const double wmax = sup_norm(w);
    for (const auto& [J, c] : w.coeffs) {
        ScalarField d(g);
        for (std::size_t i = 0; i < c.size(); ++i)
            if (std::abs(c[i]) > opt.tol_support * wmax) d[i] = c[i] / fk[i];
        wdiv.set(J, std::move(d));
    }

    const int n = g.n;
    const Index all = range_index(1, n);
    // Top degree: split φ' with punctures at Z, so every part but the last is
    // compactly supported away from Z. No structure check on this route.
    const bool punctured = w.q == n;
    QForm beta(g, w.q - 1);
    Trace tr;
    std::string route;
    double inner_residual = 0.0;
    nlohmann::json obstruction = nlohmann::json::object();
    if (punctured) {
        corona::DecomposeOptions dopt;
        dopt.l_max = opt.l_max;
        dopt.r = opt.r;
        dopt.f = &f;
        const corona::Decomposition dec = corona::decompose(wdiv.get_increasing(all), n, dopt);
        for (int i = 1; i <= n; ++i) {
            const Index K = set_minus(all, {i});
            beta.add_increasing(K, static_cast<double>(wedge_sign(i, K)), cauchy_transform(dec.parts[i - 1], i));
        }
        for (double v : dec.residual_report) tr.worst_moment = std::max(tr.worst_moment, v);
        for (const auto& geo : dec.geometries) tr.max_A0 = std::max(tr.max_A0, geo.A0);
        tr.unreliable = dec.unreliable;
        tr.steps.push_back({{"step", "punctured top-degree"}, {"m", n}, {"moments", dec.residual_report}});
        route = "vanishing/punctured";
        const QForm d = form_dbar(beta) - wdiv;
        const double wn = lr_norm(wdiv, opt.r);
        inner_residual = wn > 0 ? lr_norm(d, opt.r) / wn : 0.0;
    } else {
        SolveOptions inner = opt;
        SolveResult sol = solve(wdiv, inner);
        beta = std::move(sol.solution);
        tr.steps = sol.diagnostics.value("steps", nlohmann::json::array());
        route = "vanishing/" + sol.route;
        inner_residual = sol.residual;
        obstruction = sol.obstruction_report;
    }

    QForm eta(g, beta.q);
    for (const auto& [J, b] : beta.coeffs) eta.set(J, hadamard(fk, b));
    SolveOptions o = opt;
    o.enforce_support = false;
    SolveResult res = finish(w, std::move(eta), o, route, tr);
    res.obstruction_report = obstruction;
    res.diagnostics["inner_residual"] = inner_residual;

    // On the punctured route the coefficient carrying the last part is only
    // L^r; it is exempt from the support promises.
    auto exempt = [&](const Index& J) { return punctured && complement(J, n) == set_minus(all, {n}); };
    int near = 0;
    double leak = 0.0;
    for (auto& cs : res.support_report) {
        const ScalarField& c = res.solution.coeffs.at(cs.J);
        cs.distance_to_z = cs.max > 0 ? support_info(c, opt.tol_support, zs).distance_to_set.value_or(0.0)
                                      : std::numeric_limits<double>::infinity();
        if (*cs.distance_to_z < 0.5 * delta) ++near;
        if (exempt(cs.J)) continue;
        leak = std::max(leak, cs.tail);
    }
    if (opt.enforce_support && leak > opt.tol_support) {
        std::ostringstream os;
        os << "solution leaks outside the unit polydisc: tail " << leak << " > " << opt.tol_support;
        throw SupportLeakError(os.str());
    }

    VanishingReport vr;
    vr.delta = delta;
    vr.coefficients_near_z = near;
    vr.eps = {0.05, 0.1, 0.2};
    ScalarField fabs = sample([&](const std::vector<cplx>& z) { return cplx(std::abs(eval_f(f, z)), 0.0); }, g);
    for (double e : vr.eps) {
        double m = 0.0;
        for (const auto& [J, c] : res.solution.coeffs)
            for (std::size_t i = 0; i < c.size(); ++i)
                if (fabs[i].real() < e) m = std::max(m, std::abs(c[i]));
        vr.max_eta.push_back(m);
    }
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (std::size_t i = 0; i < vr.eps.size(); ++i) {
            if (vr.max_eta[i] <= 0) continue;
            const double x = std::log(vr.eps[i]), y = std::log(vr.max_eta[i]);
            sx += x, sy += y, sxx += x * x, sxy += x * y;
            ++cnt;
        }
        vr.slope = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0.0;
    }
    res.diagnostics["vanishing"] = {{"delta", vr.delta},
                                    {"eps", vr.eps},
                                    {"max_eta", vr.max_eta},
                                    {"slope", vr.slope},
                                    {"coefficients_near_z", vr.coefficients_near_z}};
    if (report) *report = vr;
    return res;
}

nlohmann::json StarReport::to_json() const {
    nlohmann::json j;
    j["pass"] = pass;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json x{{"J", e.J}, {"derivatives", e.derivatives}, {"norm", e.norm}, {"stable", e.stable}};
        if (e.refined_norm) x["refined_norm"] = *e.refined_norm;
        j["entries"].push_back(x);
    }
    return j;
}

StarReport check_star(const QForm& w, double r, const QForm* refined) {
    StarReport rep;
    for (const auto& [J, f] : w.coeffs) {
        for (std::size_t start = 0; start < J.size(); ++start) {
            StarEntry e;
            e.J = J;
            ScalarField d = f;
            std::unique_ptr<ScalarField> dr;
            if (refined) dr = std::make_unique<ScalarField>(refined->get(J));
            for (std::size_t t = J.size(); t-- > start;) {
                e.derivatives.push_back(J[t]);
                d = dbar_fd(d, J[t]);
                if (dr) *dr = dbar_fd(*dr, J[t]);
            }
            e.norm = lr_norm(d, r);
            if (!std::isfinite(e.norm)) e.stable = false;
            if (dr) {
                e.refined_norm = lr_norm(*dr, r);
                if (e.norm > 0 && *e.refined_norm / e.norm > 1.5) e.stable = false;
            }
            rep.pass = rep.pass && e.stable;
            rep.entries.push_back(e);
        }
    }
    return rep;
}

}  // namespace dbar::solver
