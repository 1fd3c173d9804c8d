#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dbar/corona.hpp"
#include "dbar/field.hpp"
#include "dbar/zeroset.hpp"

namespace dbar::solver {

struct SolveOptions {
    int l_max = 16;               // moment truncation
    double tol_moment = 1e-5;     // normalised moment / structure tolerance
    double tol_support = 1e-6;    // tail outside the promised region, relative to max|solution|
    double tol_closed = 0.2;      // ‖∂̄ω‖∞ relative to the largest single derivative ‖∂̄_k ω_I‖∞
    int max_depth = 32;
    double r = 2.0;               // L^r exponent for reporting
    bool check_structure = true;  // run the truncated structure conditions before the top-level top-degree solve
    int structure_l_max = 4;
    int structure_k_max = 8;
    bool enforce_support = true;  // raise SupportLeakError on tails above tol_support

    void validate() const;
};

struct CoefficientSupport {
    Index J;
    double max = 0.0;
    double tail = 0.0;  // max outside the closed unit polydisc / max|solution|
    std::vector<double> radius_per_axis;
    std::optional<double> distance_to_z;
};

struct SolveResult {
    QForm solution;
    double residual = 0.0;  // ‖∂̄β - ω‖_r / ‖ω‖_r, recomputed from `solution`
    double residual_sup = 0.0;
    double norm_ratio = 0.0;  // ‖β‖_r / ‖ω‖_r
    std::vector<CoefficientSupport> support_report;
    std::string route;
    nlohmann::json obstruction_report = nlohmann::json::object();
    nlohmann::json diagnostics = nlohmann::json::object();

    double max_tail() const;
    nlohmann::json to_json() const;
};

/// u = G_1(φ) for n = 1 data with zero outer and punctured moments.
SolveResult solve_1d_punctured(const ScalarField& phi, const DiscFamily* punctures, const SolveOptions& opt = {});

SolveResult solve_01(const QForm& w, const SolveOptions& opt = {});
SolveResult solve_0n(const QForm& w, const SolveOptions& opt = {});
SolveResult solve_0n1(const QForm& w, const SolveOptions& opt = {});
SolveResult solve_general(const QForm& w, const SolveOptions& opt = {});
/// Routes by degree to the dedicated solvers above.
SolveResult solve(const QForm& w, const SolveOptions& opt = {});

struct VanishingReport {
    double delta = 0.0;  // Euclidean distance of supp ω from Z
    std::vector<double> eps;
    std::vector<double> max_eta;  // max|η| on {|f| < eps}
    double slope = 0.0;           // log-log slope of max_eta against eps
    int coefficients_near_z = 0;  // coefficients whose support comes closer than delta/2
};

/// η = f^k β with ∂̄β = ω / f^k, so that ∂̄η = ω and η vanishes to order k on Z.
SolveResult solve_vanishing(const QForm& w, const PolynomialF& f, int k, const SolveOptions& opt = {},
                            VanishingReport* report = nullptr);

struct StarEntry {
    Index J;
    Index derivatives;  // applied in order, last variable first
    double norm = 0.0;
    std::optional<double> refined_norm;
    bool stable = true;
};

struct StarReport {
    std::vector<StarEntry> entries;
    bool pass = true;
    nlohmann::json to_json() const;
};

/// Iterated FD derivatives over the suffixes of each complement index, with
/// an optional refinement comparison (ratio <= 1.5).
StarReport check_star(const QForm& w, double r, const QForm* refined = nullptr);

/// ‖∂̄ω‖∞ over the largest single coefficient derivative.
double closedness_ratio(const QForm& w);

}  // namespace dbar::solver
