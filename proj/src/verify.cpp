#include "dbar/verify.hpp"

#include <omp.h>
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <unistd.h>
#include <sstream>

#include "dbar/cauchy.hpp"
#include "dbar/conditions.hpp"
#include "dbar/corona.hpp"
#include "dbar/io.hpp"
#include "dbar/solver.hpp"
#include "dbar/testdata.hpp"
#include "dbar/zeroset.hpp"

namespace dbar::verify {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

Check le(std::string name, double value, double tol, std::string note = {}) {
    return {std::move(name), value, tol, "<=", value <= tol, std::move(note)};
}
Check ge(std::string name, double value, double tol, std::string note = {}) {
    return {std::move(name), value, tol, ">=", value >= tol, std::move(note)};
}
Check holds(std::string name, bool ok, std::string note = {}) {
    return {std::move(name), ok ? 1.0 : 0.0, 1.0, "==", ok, std::move(note)};
}
Check reported(std::string name, double value, std::string note = {}) {
    return {std::move(name), value, kInf, "<=", std::isfinite(value), std::move(note)};
}

int pick(const VerifyOptions& o, int fallback) { return o.res > 0 ? o.res : fallback; }

PolynomialF poly(int n, std::initializer_list<std::pair<std::vector<int>, cplx>> terms) {
    PolynomialF f;
    f.n = n;
    for (const auto& [e, c] : terms) f.terms[e] = c;
    return f;
}

double rel_sup_diff(const ScalarField& a, const ScalarField& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    const double s = b.sup();
    return s > 0 ? d / s : d;
}

// Max |f| at points with some |z_k| > 1.
double outside_polydisc(const ScalarField& f) {
    std::vector<cplx> z;
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == cplx(0.0, 0.0)) continue;
        point_at(f.grid, i, z);
        for (const cplx& x : z)
            if (std::abs(x) > 1.0) m = std::max(m, std::abs(f[i]));
    }
    return m;
}

// Direct punctured moment without the proximity guard; independent of cauchy.cpp.
SliceField punctured_direct(const ScalarField& phi, int k, const CenterField& c, int l) {
    const PlaneLayout L(phi.grid, k);
    SliceField out;
    out.k = k;
    out.values.assign(L.count, cplx(0.0, 0.0));
    for (std::size_t p = 0; p < L.count; ++p) {
        if (!has_center(c[p])) continue;
        cplx acc(0.0, 0.0);
        for (int i = 0; i < L.ra; ++i)
            for (int j = 0; j < L.rb; ++j) {
                const cplx v = phi[L.at(p, i, j)];
                if (v != cplx(0.0, 0.0)) acc += v * ipow(L.point(i, j) - c[p], -l - 1);
            }
        out.values[p] = acc * (L.ha * L.hb / kPi);
    }
    return out;
}

double slice_diff(const SliceField& a, const SliceField& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
    return d;
}

// Annular bump around c in z_1 times centered bumps in the other variables.
ScalarField ring_field(const GridSpec& g, cplx c, double inner, double outer) {
    const double s1 = inner * inner, s2 = outer * outer;
    const double scale = std::pow(0.25 * (s2 - s1) * (s2 - s1), 4);
    const testdata::Bump b{{0.0, 0.0}, 0.5, 6};
    return sample(
        [&](const std::vector<cplx>& z) {
            const double s = std::norm(z[0] - c);
            if (!(s > s1 && s < s2)) return cplx(0.0, 0.0);
            cplx v = std::pow((s - s1) * (s2 - s), 4) / scale * (1.0 + 0.3 * z[0]);
            for (std::size_t t = 1; t < z.size(); ++t) v *= b.value(z[t]);
            return v;
        },
        g);
}

// ----------------------------------------------------------------------------

void cauchy_inversion(SuiteResult& s, const VerifyOptions& o) {
    const int res = pick(o, 512);
    auto residual = [&](int r) {
        const GridSpec g = GridSpec::uniform(1, r);
        const ScalarField phi = testdata::bump(g, 1, o.seed).get_increasing({1});
        return rel_sup_diff(dbar_fd(cauchy_transform(phi, 1), 1), phi);
    };
    const double r1 = residual(res);
    const double r2 = residual(2 * res);
    s.checks.push_back(le("relative sup residual at res " + std::to_string(res), r1, 2e-2));
    s.checks.push_back(ge("residual reduction factor on doubling", r1 / r2, 1.7));
}

void norm_bound(SuiteResult& s, const VerifyOptions& o) {
    const GridSpec g = GridSpec::uniform(1, pick(o, 256));
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 10; ++t) {
        const ScalarField phi = testdata::random_field(g, o.seed + t);
        worst = std::max(worst, lr_norm(cauchy_transform(phi, 1), 2.0) / lr_norm(phi, 2.0));
    }
    s.checks.push_back(le("max ||G phi||_2 / ||phi||_2 over 10 fields", worst, 2.1));
}

void moment_equivalence(SuiteResult& s, const VerifyOptions& o) {
    const GridSpec g = GridSpec::uniform(1, pick(o, 512));
    const cplx c(0.1, 0.0);
    const auto pair = testdata::annulus_moment_free(g, c);
    const ScalarField phi = pair.omega.get_increasing({1});
    const ScalarField u0 = pair.T.get_increasing({});
    const PolynomialF f = poly(1, {{{1}, 1.0}, {{0}, -c}});
    const DiscFamily fam = disc_family(f, 1, phi);
    const MomentTable t = moment_table(phi, 1, corona::center_fields(fam), 12);
    s.checks.push_back(le("max normalised moment, outer and punctured, l <= 12", t.worst().value, 1e-6));
    solver::SolveOptions so;
    so.enforce_support = false;
    const auto sol = solver::solve_1d_punctured(phi, &fam, so);
    s.checks.push_back(le("reconstruction |u - u0|/|u0|", rel_sup_diff(sol.solution.get_increasing({}), u0), 1e-3));

    const ScalarField mass = testdata::mass_bump(g, 1).get_increasing({1});
    bool raised = false;
    std::string where;
    try {
        solver::solve_1d_punctured(mass, nullptr, so);
    } catch (const MomentObstructionError& e) {
        raised = true;
        where = "j=" + std::to_string(e.puncture) + " l=" + std::to_string(e.l);
    }
    s.checks.push_back(holds("mass-bump raises MomentObstructionError", raised, where));
    const CoronaGeometry geo = corona_geometry(mass, 1, nullptr);
    const ScalarField G = cauchy_transform(mass, 1);
    const PlaneLayout L(g, 1);
    double acc = 0.0;
    for (int i = 0; i < L.ra; ++i)
        for (int j = 0; j < L.rb; ++j) {
            const double a = std::abs(L.point(i, j));
            if (a > geo.a && a < geo.b) acc += std::norm(G[L.at(0, i, j)]);
        }
    const double corona_mass = std::sqrt(acc * L.ha * L.hb) / lr_norm(mass, 2.0);
    s.checks.push_back(ge("mass-bump corona mass / ||phi||", corona_mass, 0.1));
}

// Moment preservation of the corona components for one field and polynomial.
void corona_case(SuiteResult& s, const std::string& tag, const ScalarField& phi, const PolynomialF& f,
                 bool expect_merge) {
    const int lmax = 8;
    const DiscFamily fam = disc_family(f, 1, phi);
    const CoronaGeometry geo = corona_geometry(phi, 1, &fam);
    const corona::CoronaOperatorSpec op = corona::make_operator(phi.grid, geo, 16);
    const double norm = lr_norm(phi, 2.0);
    const PlaneLayout L(phi.grid, 1);

    std::map<int, CenterField> centers;
    std::size_t inner_count = 0, merged_planes = 0, live_planes = 0;
    const auto roots = plane_roots(f, phi.grid, 1);
    for (std::size_t p = 0; p < L.count; ++p) {
        if (!geo.inner[p].empty()) ++live_planes;
        if (!geo.inner[p].empty() && fam.discs[p].size() < roots[p].size()) ++merged_planes;
        for (const InnerCorona& ic : geo.inner[p]) {
            auto& cf = centers.try_emplace(ic.j, CenterField(L.count, no_center())).first->second;
            cf[p] = ic.center;
            ++inner_count;
        }
    }
    s.checks.push_back(holds(tag + ": inner coronas present", inner_count > 0));
    if (expect_merge) s.checks.push_back(holds(tag + ": discs merged on every live plane", merged_planes == live_planes && live_planes > 0));

    const ScalarField K0 = corona::K_outer(phi, op);
    const ScalarField Kf = corona::K_full(phi, op);
    double outer = 0.0, full = 0.0;
    for (int l = 0; l <= lmax; ++l) {
        const SliceField m = moment(phi, 1, l);
        outer = std::max(outer, slice_diff(moment(K0, 1, l), m) / norm);
        full = std::max(full, slice_diff(moment(Kf, 1, l), m) / norm);
    }
    double punct = 0.0, punct_full = 0.0;
    for (const auto& [j, cf] : centers) {
        const ScalarField Kj = corona::K_inner(phi, j, op);
        for (int l = 0; l <= lmax; ++l) {
            const SliceField m = punctured_direct(phi, 1, cf, l);
            punct = std::max(punct, slice_diff(punctured_direct(Kj, 1, cf, l), m) / norm);
            punct_full = std::max(punct_full, slice_diff(punctured_direct(Kf, 1, cf, l), m) / norm);
        }
    }
    s.checks.push_back(le(tag + ": outer moments of K_outer", outer, 1e-5));
    s.checks.push_back(le(tag + ": punctured moments of K_inner", punct, 1e-5));
    s.checks.push_back(le(tag + ": outer moments of K", full, 1e-5));
    s.checks.push_back(le(tag + ": punctured moments of K", punct_full, 1e-5));
}

void corona_moments(SuiteResult& s, const VerifyOptions& o) {
    const GridSpec g1 = GridSpec::uniform(1, pick(o, 256));
    const cplx c(0.1, 0.0);
    const ScalarField ring1 = ring_field(g1, c, 0.3, 0.6);
    corona_case(s, "n=1 single puncture", ring1, poly(1, {{{1}, 1.0}, {{0}, -c}}), false);
    // (z - 0.1)(z - 0.13): two roots closer than their disc radii.
    corona_case(s, "n=1 merged discs", ring1, poly(1, {{{2}, 1.0}, {{1}, -0.23}, {{0}, 0.013}}), true);

    // Fine in z_1, where the coronas live; coarse in z_2, which only labels planes.
    GridSpec g2 = GridSpec::uniform(2, 128);
    g2.res[2] = g2.res[3] = 12;
    const ScalarField ring2 = ring_field(g2, c, 0.3, 0.6);
    // (z1 - 0.1)(z1 - 0.13 - 0.02 z2)
    const PolynomialF f2 = poly(2, {{{2, 0}, 1.0}, {{1, 0}, -0.23}, {{1, 1}, -0.02}, {{0, 1}, 0.002}, {{0, 0}, 0.013}});
    corona_case(s, "n=2 merged discs", ring2, f2, true);
}

void decomposition(SuiteResult& s, const VerifyOptions& o) {
    const GridSpec g = GridSpec::uniform(2, pick(o, 48));
    const ScalarField phi = testdata::exact_form(g, 2, o.seed).omega.get_increasing({1, 2});
    const auto dec = corona::decompose(phi, 2);
    ScalarField sum(g);
    for (const auto& p : dec.parts) sum += p;
    const double norm = lr_norm(phi, 2.0);
    s.checks.push_back(le("telescoping |phi - sum parts| / |phi|", lr_norm(phi - sum, 2.0) / norm, 1e-12));
    double worst = 0.0;
    for (int l = 0; l <= 8; ++l) worst = std::max(worst, moment(dec.parts[0], 1, l).sup() / norm);
    s.checks.push_back(le("first part moments in z1, l <= 8", worst, 1e-5));
}

void structure_conditions(SuiteResult& s, const VerifyOptions& o) {
    const GridSpec g = GridSpec::uniform(2, pick(o, 48));
    const ScalarField phi = testdata::exact_form(g, 2, o.seed).omega.get_increasing({1, 2});
    const auto ctx = conditions::make_context(phi, nullptr);
    const auto rep = conditions::check_structure(phi, 4, 8, ctx);
    s.checks.push_back(le("exact form: worst structure integral", rep.worst, 1e-5));
    const auto dec = corona::decompose(phi, 2);
    const double norm = lr_norm(phi, 2.0);
    double worst = 0.0;
    for (int l = 0; l <= 16; ++l) worst = std::max(worst, moment(dec.parts[1], 2, l).sup() / norm);
    s.checks.push_back(le("exact form: last part moments in z2, l <= 16", worst, 1e-5));

    const ScalarField mass = testdata::mass_bump(g, 2).get_increasing({1, 2});
    const auto bad = conditions::check_structure(mass, 4, 8, conditions::make_context(mass, nullptr));
    bool at_origin = false;
    std::string where = "passes";
    if (!bad.pass) {
        const auto& e = bad.entries[bad.first_failure].spec;
        where = e.str();
        at_origin = e.k == 0 && e.j == 0 && e.mu == std::vector<int>{0} && e.l == std::vector<int>{0};
    }
    s.checks.push_back(holds("mass-bump fails first at mu=0 l=0 k=0", !bad.pass && at_origin, where));
}

void solver_01(SuiteResult& s, const VerifyOptions& o) {
    const GridSpec g = GridSpec::uniform(2, pick(o, 48));
    const auto pair = testdata::exact_form(g, 1, o.seed);
    solver::SolveOptions so;
    so.enforce_support = false;
    const auto res = solver::solve_01(pair.omega, so);
    s.checks.push_back(le("recovery |f - g| / |g|", rel_sup_diff(res.solution.get_increasing({}), pair.T.get_increasing({})), 2e-2));
    s.checks.push_back(le("support tail", res.max_tail(), 1e-6));
    s.checks.push_back(le("norm ratio", res.norm_ratio, 2.1));
}

void solver_0n(SuiteResult& s, const VerifyOptions& o) {
    const GridSpec g = GridSpec::uniform(2, pick(o, 48));
    const auto pair = testdata::exact_form(g, 2, o.seed);
    solver::SolveOptions so;
    so.enforce_support = false;
    const auto res = solver::solve_0n(pair.omega, so);
    s.checks.push_back(le("relative L2 residual", res.residual, 2e-2));
    s.checks.push_back(le("support tail / max", res.max_tail(), 1e-6));
}

// Telescoping and support of the decomposition the (0,n-1) and general solvers run on.
void decomposition_invariants(SuiteResult& s, const ScalarField& phi, int m) {
    const auto dec = corona::decompose(phi, m);
    ScalarField sum(phi.grid);
    double outside = 0.0;
    for (const auto& p : dec.parts) {
        sum += p;
        outside = std::max(outside, outside_polydisc(p));
    }
    const double norm = lr_norm(phi, 2.0);
    s.checks.push_back(le("telescoping |phi - sum parts| / |phi|", lr_norm(phi - sum, 2.0) / norm, 1e-12));
    s.checks.push_back(le("parts vanish outside the unit polydisc", outside, 0.0));
}

void solver_0n1(SuiteResult& s, const VerifyOptions& o) {
    const GridSpec g = GridSpec::uniform(3, pick(o, 12));
    const auto pair = testdata::exact_form(g, 2, o.seed);
    solver::SolveOptions so;
    so.enforce_support = false;
    so.tol_closed = 1.0;  // coarse-grid FD closedness is only indicative
    const auto res = solver::solve_0n1(pair.omega, so);
    s.checks.push_back(holds("pipeline completes", res.solution.q == 1, res.route));
    decomposition_invariants(s, pair.omega.get_increasing({1, 2}), 2);
    s.checks.push_back(le("relative L2 residual", res.residual, 0.3));
}

void general_dispatch(SuiteResult& s, const VerifyOptions& o) {
    const GridSpec g = GridSpec::uniform(4, pick(o, 6));
    const auto pair = testdata::exact_form(g, 2, o.seed);
    solver::SolveOptions so;
    so.enforce_support = false;
    so.tol_closed = 1.0;
    const auto res = solver::solve(pair.omega, so);
    s.checks.push_back(holds("pipeline completes through the split route", res.route == "split", res.route));
    const QForm d1 = form_dbar(res.solution);
    const double d2 = sup_norm(form_dbar(d1));
    s.checks.push_back(le("dbar(dbar beta) / |dbar beta|", sup_norm(d1) > 0 ? d2 / sup_norm(d1) : d2, 1e-12));
    decomposition_invariants(s, pair.omega.get_increasing({1, 2}), 2);
    s.checks.push_back(reported("relative L2 residual (reported)", res.residual));
}

void vanishing(SuiteResult& s, const VerifyOptions& o) {
    const GridSpec g1 = GridSpec::uniform(1, pick(o, 512));
    const PolynomialF z = poly(1, {{{1}, 1.0}});
    solver::SolveOptions so;
    so.enforce_support = false;
    for (int k : {1, 2}) {
        const auto pair = testdata::cutoff_power(g1, k);
        solver::VanishingReport rep;
        solver::solve_vanishing(pair.omega, z, k, so, &rep);
        s.checks.push_back(le("1D slope error, k=" + std::to_string(k), std::abs(rep.slope - k), 0.2,
                              "slope " + std::to_string(rep.slope)));
    }
    const GridSpec g2 = GridSpec::uniform(2, 48);
    const PolynomialF f = poly(2, {{{1, 1}, 1.0}, {{0, 0}, -0.25}});
    const auto pair = testdata::off_z(g2, 2, f, {0.5, 0.28});
    solver::VanishingReport rep;
    const auto res = solver::solve_vanishing(pair.omega, f, 1, so, &rep);
    s.checks.push_back(le("n=2 relative L2 residual", res.residual, 5e-2));
    const ScalarField fabs = sample([&](const std::vector<cplx>& x) { return cplx(std::abs(eval_f(f, x)), 0.0); }, g2);
    double near = 0.0;
    for (const auto& [J, c] : res.solution.coeffs)
        for (std::size_t i = 0; i < c.size(); ++i)
            if (fabs[i].real() < 0.02) near = std::max(near, std::abs(c[i]));
    const double top = sup_norm(res.solution);
    s.checks.push_back(le("max|eta| on {|f| < 0.02} / max|eta|", top > 0 ? near / top : 0.0, 1e-3));
    std::string dists;
    for (const auto& cs : res.support_report)
        dists += (dists.empty() ? "" : ", ") + std::to_string(cs.distance_to_z.value_or(0.0));
    s.checks.push_back(le("coefficients closer than delta/2 to Z", rep.coefficients_near_z, 1.0,
                          "delta " + std::to_string(rep.delta) + ", distances " + dists));
}

int run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

void infrastructure(SuiteResult& s, const VerifyOptions& o) {
    const GridSpec g = GridSpec::uniform(2, 12);
    const QForm w = testdata::exact_form(g, 2, o.seed).omega;
    std::stringstream a;
    io::write_cfld(a, w);
    const std::string bytes = a.str();
    std::stringstream b(bytes);
    const QForm back = io::read_cfld(b);
    bool same = back.grid == w.grid && back.q == w.q && back.coeffs.size() == w.coeffs.size();
    for (const auto& [J, f] : w.coeffs) {
        const auto it = back.coeffs.find(J);
        same = same && it != back.coeffs.end() &&
               std::memcmp(it->second.values.data(), f.values.data(), f.values.size() * sizeof(cplx)) == 0;
    }
    std::stringstream again;
    io::write_cfld(again, back);
    s.checks.push_back(holds("CFLD1 round trip is bit-exact", same && again.str() == bytes));

    // Every error class owns a distinct non-zero code.
    std::vector<std::unique_ptr<Error>> errs;
    errs.push_back(std::make_unique<UsageError>(""));
    errs.push_back(std::make_unique<GridError>(""));
    errs.push_back(std::make_unique<SampleError>(""));
    errs.push_back(std::make_unique<DomainError>(""));
    errs.push_back(std::make_unique<DegenerateLineError>(""));
    errs.push_back(std::make_unique<SupportTouchesZError>(""));
    errs.push_back(std::make_unique<SupportNotCompactError>(""));
    errs.push_back(std::make_unique<GeometryError>(""));
    errs.push_back(std::make_unique<PunctureTooCloseError>(""));
    errs.push_back(std::make_unique<MomentObstructionError>("", 0, 0, 0.0));
    errs.push_back(std::make_unique<StructureObstructionError>("", "", 0.0));
    errs.push_back(std::make_unique<NotClosedError>(""));
    errs.push_back(std::make_unique<SupportLeakError>(""));
    errs.push_back(std::make_unique<StarConditionError>(""));
    errs.push_back(std::make_unique<DepthError>(""));
    errs.push_back(std::make_unique<FormatError>(""));
    errs.push_back(std::make_unique<UnknownTestcaseError>(""));
    std::set<int> codes;
    bool nonzero = true;
    for (const auto& e : errs) {
        codes.insert(static_cast<int>(e->code()));
        nonzero = nonzero && e->code() != ErrorCode::ok;
    }
    s.checks.push_back(holds("error classes map to distinct non-zero codes", nonzero && codes.size() == errs.size()));

    if (!o.cli_path.empty()) {
        const auto dir = std::filesystem::temp_directory_path() / ("dbar_verify_" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir);
        const std::string mb = (dir / "mass.cfld").string();
        const std::string ex = (dir / "exact.cfld").string();
        const int make_ok = run_cli(o.cli_path, "make mass-bump --n 1 --res 64 -o \"" + mb + "\"");
        const int obstructed = run_cli(o.cli_path, "solve \"" + mb + "\" --report \"" + (dir / "r.json").string() + "\"");
        const int unknown = run_cli(o.cli_path, "make no-such-case -o \"" + ex + "\"");
        const int bad_usage = run_cli(o.cli_path, "solve");
        const int zero_ok = run_cli(o.cli_path, "make exact-form --n 1 --res 64 -o \"" + ex + "\"") == 0 &&
                            run_cli(o.cli_path, "solve \"" + ex + "\" -o \"" + (dir / "sol.cfld").string() + "\"") == 0;
        std::filesystem::remove_all(dir);
        const bool ok = make_ok == 0 && obstructed == static_cast<int>(ErrorCode::moment_obstruction) &&
                        unknown == static_cast<int>(ErrorCode::unknown_testcase) &&
                        bad_usage == static_cast<int>(ErrorCode::usage) && zero_ok;
        std::ostringstream note;
        note << "make=" << make_ok << " mass-bump solve=" << obstructed << " unknown=" << unknown
             << " usage=" << bad_usage;
        s.checks.push_back(holds("CLI exit codes", ok, note.str()));
    }

    const int threads = omp_get_max_threads();
    omp_set_num_threads(1);
    auto one_run = [&] {
        const GridSpec gd = GridSpec::uniform(2, 24);
        const QForm om = testdata::exact_form(gd, 2, o.seed).omega;
        solver::SolveOptions so;
        so.enforce_support = false;
        const auto r = solver::solve_0n(om, so);
        std::stringstream ss;
        io::write_cfld(ss, om);
        io::write_cfld(ss, r.solution);
        return ss.str();
    };
    const std::string first = one_run();
    const std::string second = one_run();
    omp_set_num_threads(threads);
    s.checks.push_back(holds("single-thread runs are byte-identical", first == second));
}

struct Suite {
    const char* name;
    const char* title;
    double limit_seconds;
    std::function<void(SuiteResult&, const VerifyOptions&)> body;
};

const std::vector<Suite>& suites() {
    static const std::vector<Suite> all = {
        {"cauchy-inversion", "Cauchy transform inverts dbar", 5, cauchy_inversion},
        {"norm-bound", "L2 bound of the Cauchy transform", 10, norm_bound},
        {"moment-equivalence", "moments versus compact support", 10, moment_equivalence},
        {"corona-moments", "corona operators preserve moments", 60, corona_moments},
        {"decomposition", "telescoping decomposition", 120, decomposition},
        {"structure-conditions", "structure conditions", 300, structure_conditions},
        {"solver-01", "(0,1) solver", 120, solver_01},
        {"solver-0n", "(0,n) solver", 300, solver_0n},
        {"solver-0n1", "(0,n-1) solver, coarse grid", 600, solver_0n1},
        {"general-dispatch", "general degree dispatch, coarse grid", 600, general_dispatch},
        {"vanishing", "solutions vanishing on a hypersurface", 300, vanishing},
        {"infrastructure", "file format, exit codes, determinism", 120, infrastructure},
    };
    return all;
}

}  // namespace

bool SuiteResult::pass() const {
    if (!error.empty()) return false;
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

nlohmann::json SuiteResult::to_json() const {
    nlohmann::json j;
    j["suite"] = name;
    j["title"] = title;
    j["pass"] = pass();
    j["seconds"] = seconds;
    if (!error.empty()) j["error"] = error;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json e{{"name", c.name}, {"value", c.value}, {"cmp", c.cmp}, {"pass", c.pass}};
        e["tolerance"] = std::isfinite(c.tol) ? nlohmann::json(c.tol) : nlohmann::json("reported");
        if (!c.note.empty()) e["note"] = c.note;
        j["checks"].push_back(e);
    }
    return j;
}

std::vector<std::string> suite_names() {
    std::vector<std::string> out;
    for (const auto& s : suites()) out.push_back(s.name);
    return out;
}

SuiteResult run(const std::string& name, const VerifyOptions& opt) {
    for (const auto& suite : suites()) {
        if (name != suite.name) continue;
        SuiteResult r;
        r.name = suite.name;
        r.title = suite.title;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            suite.body(r, opt);
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.checks.push_back(le("runtime seconds", r.seconds, suite.limit_seconds));
        return r;
    }
    throw UsageError("unknown verification suite '" + name + "'");
}

}  // namespace dbar::verify
