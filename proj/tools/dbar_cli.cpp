#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "dbar/corona.hpp"
#include "dbar/errors.hpp"
#include "dbar/io.hpp"
#include "dbar/solver.hpp"
#include "dbar/testdata.hpp"
#include "dbar/verify.hpp"
#include "dbar/zeroset.hpp"

namespace {

using nlohmann::json;
using namespace dbar;

struct RunConfig {
    std::string testcase;
    std::string input;
    std::string output;
    std::string truth;
    std::string report;
    std::string poly;
    std::string format = "csv";
    std::string slice;
    std::string suite = "all";
    int n = 1;
    int q = 0;  // 0: top degree for make, taken from the file for solve
    int res = 64;
    int verify_res = 0;
    double pad = 0.25;
    double r = 2.0;
    int lmax = 16;
    double tol_moment = 1e-5;
    double tol_support = 1e-6;
    int vanish_order = 0;
    std::uint64_t seed = 42;
};

PolynomialF load_poly(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw UsageError("cannot open polynomial file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return PolynomialF::from_json(ss.str());
}

void emit(const json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream os(path);
    if (!os) throw UsageError("cannot write " + path);
    os << j.dump(2) << '\n';
}

std::string truth_path(const RunConfig& c) {
    if (!c.truth.empty()) return c.truth;
    std::filesystem::path p(c.output);
    return (p.parent_path() / (p.stem().string() + ".T" + p.extension().string())).string();
}

int cmd_make(const RunConfig& c) {
    const GridSpec g = GridSpec::uniform(c.n, c.res, c.pad);
    const int q = c.q > 0 ? c.q : c.n;
    std::optional<PolynomialF> f;
    if (!c.poly.empty()) f = load_poly(c.poly);
    const auto pair = testdata::make(c.testcase, g, q, c.seed, f ? &*f : nullptr);
    io::write_cfld_file(c.output, pair.omega);
    json j{{"schema", "make-report/1"}, {"testcase", c.testcase}, {"output", c.output}, {"n", c.n}, {"q", pair.omega.q},
           {"res", c.res}, {"seed", c.seed}};
    if (!pair.T.coeffs.empty()) {
        io::write_cfld_file(truth_path(c), pair.T);
        j["truth"] = truth_path(c);
    }
    emit(j, c.report);
    return 0;
}

int cmd_solve(const RunConfig& c) {
    const QForm w = io::read_cfld_file(c.input);
    if (c.q > 0 && c.q != w.q) throw UsageError("--q does not match the degree stored in " + c.input);
    solver::SolveOptions so;
    so.r = c.r;
    so.l_max = c.lmax;
    so.tol_moment = c.tol_moment;
    so.tol_support = c.tol_support;
    std::optional<PolynomialF> f;
    if (!c.poly.empty()) f = load_poly(c.poly);

    solver::SolveResult res;
    if (c.vanish_order > 0) {
        if (!f) throw UsageError("--vanish-order needs --poly");
        res = solver::solve_vanishing(w, *f, c.vanish_order, so);
    } else if (w.grid.n == 1 && f) {
        const ScalarField phi = w.get_increasing({1});
        const DiscFamily fam = disc_family(*f, 1, phi);
        res = solver::solve_1d_punctured(phi, &fam, so);
    } else {
        res = solver::solve(w, so);
    }
    if (!c.output.empty()) io::write_cfld_file(c.output, res.solution);
    json j = res.to_json();
    j["input"] = c.input;
    if (!c.output.empty()) j["output"] = c.output;
    emit(j, c.report);
    return 0;
}

int cmd_verify(const RunConfig& c) {
    verify::VerifyOptions vo;
    vo.res = c.verify_res;
    vo.seed = c.seed;
    std::vector<std::string> names = c.suite == "all" ? verify::suite_names() : std::vector<std::string>{c.suite};
    json j{{"schema", "verify-report/1"}, {"suites", json::array()}};
    bool ok = true;
    for (const auto& name : names) {
        const auto r = verify::run(name, vo);
        ok = ok && r.pass();
        j["suites"].push_back(r.to_json());
    }
    j["pass"] = ok;
    emit(j, c.report);
    return ok ? 0 : static_cast<int>(ErrorCode::verify_failed);
}

int cmd_export(const RunConfig& c) {
    const QForm w = io::read_cfld_file(c.input);
    std::ofstream file;
    if (!c.output.empty()) {
        file.open(c.output);
        if (!file) throw UsageError("cannot write " + c.output);
    }
    std::ostream& os = c.output.empty() ? std::cout : file;
    if (c.format == "csv") {
        io::write_csv(os, w, io::parse_slice(c.slice, w.grid));
    } else if (c.format == "json") {
        if (!c.slice.empty()) throw UsageError("--slice applies to csv export only");
        json j{{"schema", "field/1"}, {"n", w.grid.n}, {"q", w.q}, {"res", w.grid.res}, {"lo", w.grid.lo},
               {"hi", w.grid.hi}, {"coefficients", json::array()}};
        for (const auto& [J, f] : w.coeffs) {
            json re = json::array(), im = json::array();
            for (const auto& v : f.values) {
                re.push_back(v.real());
                im.push_back(v.imag());
            }
            j["coefficients"].push_back({{"J", J}, {"re", re}, {"im", im}});
        }
        os << j.dump() << '\n';
    } else {
        throw UsageError("unknown export format '" + c.format + "'");
    }
    return 0;
}

json error_report(const Error& e) {
    json j{{"schema", "error-report/1"}, {"error", e.kind()}, {"code", static_cast<int>(e.code())}, {"message", e.what()}};
    if (const auto* m = dynamic_cast<const MomentObstructionError*>(&e)) {
        j["j"] = m->puncture;
        j["l"] = m->l;
        j["value"] = m->value;
    }
    if (const auto* s = dynamic_cast<const StructureObstructionError*>(&e)) {
        j["spec"] = s->spec;
        j["value"] = s->value;
    }
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dbar: compactly supported solutions of the dbar equation on sampled grids"};
    app.require_subcommand(1);
    RunConfig c;

    auto grid_flags = [&](CLI::App* sub) {
        sub->add_option("--n", c.n, "complex dimension")->check(CLI::Range(1, 8));
        sub->add_option("--q", c.q, "form degree");
        sub->add_option("--res", c.res, "samples per real axis");
        sub->add_option("--pad", c.pad, "grid extent is [-1-pad, 1+pad]");
        sub->add_option("--seed", c.seed, "RNG seed");
    };
    auto solver_flags = [&](CLI::App* sub) {
        sub->add_option("--r", c.r, "L^r exponent for reported norms");
        sub->add_option("--lmax", c.lmax, "moment truncation");
        sub->add_option("--tol-moment", c.tol_moment, "normalised moment tolerance");
        sub->add_option("--tol-support", c.tol_support, "support tail tolerance");
        sub->add_option("--poly", c.poly, "polynomial JSON file");
        sub->add_option("--vanish-order", c.vanish_order, "vanishing order k on f = 0");
    };

    auto* make = app.add_subcommand("make", "generate a test case as a CFLD1 file");
    make->add_option("testcase", c.testcase, "bump | exact-form | annulus-moment-free | mass-bump | off-Z")->required();
    make->add_option("-o,--output", c.output, "output CFLD1 path")->required();
    make->add_option("--truth", c.truth, "where to write the primitive T (exact cases)");
    make->add_option("--poly", c.poly, "polynomial JSON file (off-Z)");
    make->add_option("--report", c.report, "JSON report path (default stdout)");
    grid_flags(make);

    auto* solve = app.add_subcommand("solve", "solve dbar u = w for a CFLD1 form");
    solve->add_option("input", c.input, "input CFLD1 form")->required()->check(CLI::ExistingFile);
    solve->add_option("-o,--output", c.output, "solution CFLD1 path");
    solve->add_option("--report", c.report, "JSON report path (default stdout)");
    solve->add_option("--q", c.q, "expected form degree");
    solver_flags(solve);

    auto* ver = app.add_subcommand("verify", "run an invariant suite");
    ver->add_option("suite", c.suite, "suite name or 'all'");
    ver->add_option("--res", c.verify_res, "override the suite resolution");
    ver->add_option("--seed", c.seed, "RNG seed");
    ver->add_option("--report", c.report, "JSON report path (default stdout)");

    auto* exp = app.add_subcommand("export", "dump a CFLD1 file as CSV or JSON");
    exp->add_option("input", c.input, "input CFLD1 file")->required()->check(CLI::ExistingFile);
    exp->add_option("-o,--output", c.output, "output path (default stdout)");
    exp->add_option("--format", c.format, "csv | json");
    exp->add_option("--slice", c.slice, "fixed axes, e.g. 2=0,3=0 (0-based real axes)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ErrorCode::usage);
    }

    try {
        if (*make) return cmd_make(c);
        if (*solve) return cmd_solve(c);
        if (*ver) return cmd_verify(c);
        if (*exp) return cmd_export(c);
    } catch (const Error& e) {
        const json j = error_report(e);
        std::cerr << e.kind() << ": " << e.what() << '\n';
        try {
            emit(j, c.report);
        } catch (const Error&) {
        }
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 100;
    }
    return static_cast<int>(ErrorCode::usage);
}
