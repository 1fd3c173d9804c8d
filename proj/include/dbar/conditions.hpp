#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dbar/field.hpp"
#include "dbar/zeroset.hpp"

namespace dbar::conditions {

/// One obstruction integral. mu selects, per variable k < n, either the outer
/// corona (0) or the mu_k-th puncture; l holds the per-variable moment orders;
/// k is the order in the last variable; j = 0 picks the plain ζ_n^k weight,
/// j >= 1 the punctured weight around the j-th root in the last variable.
struct MultiIndexSpec {
    std::vector<int> mu;
    std::vector<int> l;
    int k = 0;
    int j = 0;

    /// Variables k < n with mu_k = 0 (1-based).
    Index I() const;
    std::string str() const;
};

/// J as a function of the z variables that appear in it.
struct JField {
    std::vector<int> vars;  // 1-based variables the values depend on
    std::vector<cplx> values;
    double sup() const;
};

struct Context {
    const PolynomialF* f = nullptr;
    /// Disc families per variable (index k-1); built by make_context.
    std::vector<DiscFamily> discs;
    /// Read the puncture factor literally as (z-c)^{l+1}(ζ-c)^{l+1}.
    bool raw_display = false;
};

Context make_context(const ScalarField& phi, const PolynomialF* f, double tau = 1e-10);

JField J_outer(const ScalarField& phi, const MultiIndexSpec& spec, const Context& ctx);
JField J_inner(const ScalarField& phi, int j, const MultiIndexSpec& spec, const Context& ctx);

struct StructureEntry {
    MultiIndexSpec spec;
    double value = 0.0;  // sup |J| / ‖φ‖_r
    bool pass = true;
};

struct StructureReport {
    std::vector<StructureEntry> entries;
    double tolerance = 0.0;
    bool pass = true;
    int first_failure = -1;
    double worst = 0.0;

    nlohmann::json to_json() const;
};

StructureReport check_structure(const ScalarField& phi, int l_max, int k_max, const Context& ctx, double tol = 1e-5,
                                double r = 2.0);

}  // namespace dbar::conditions
