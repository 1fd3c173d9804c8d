#pragma once

#include <map>
#include <string>
#include <vector>

#include "dbar/cauchy.hpp"
#include "dbar/field.hpp"

namespace dbar {

/// Polynomial in n complex variables: exponent tuple -> coefficient.
struct PolynomialF {
    int n = 1;
    std::map<std::vector<int>, cplx> terms;

    void validate() const;
    /// N_k = max exponent of z_k over the terms, index k-1.
    std::vector<int> degrees() const;

    /// Parses {"n": 2, "terms": [{"exp": [1,1], "re": 1.0, "im": 0.0}, ...]}.
    static PolynomialF from_json(const std::string& text);
    std::string to_json() const;
};

cplx eval_f(const PolynomialF& f, const std::vector<cplx>& z);

/// Roots in the closed disc |z| <= 1 + slack of z_k -> f(a_1..z_k..a_n),
/// sorted by (re, im). `a[k-1]` is ignored.
std::vector<cplx> line_roots(const PolynomialF& f, int k, const std::vector<cplx>& a, double slack = 0.0);

/// line_roots for every plane of variable k.
std::vector<std::vector<cplx>> plane_roots(const PolynomialF& f, const GridSpec& g, int k);

/// Points of Z inside the closed polydisc of radius 1 + h: the line roots
/// along every axis, completed to full coordinates. Lines on which f vanishes
/// identically contribute all of their grid points.
std::vector<std::vector<cplx>> zero_samples(const PolynomialF& f, const GridSpec& g);

struct Disc {
    cplx center;
    double radius = 0.0;
};

struct DiscFamily {
    int k = 1;
    double delta = 0.0;  // separation of the support from the roots
    std::vector<std::vector<Disc>> discs;  // per plane
};

/// Smallest distance, over planes, from the slice support to that slice's
/// roots. Infinity when no plane carries both support and roots.
double separation(const GridSpec& g, int k, const std::vector<std::vector<cplx>>& roots, const SupportInfo& supp);
double separation(const PolynomialF& f, int k, const ScalarField& phi, double tau);

/// Discs of radius delta/(3N) around the centers; intersecting groups are
/// replaced by a single disc of radius delta at their lexicographically
/// smallest center, repeated until the family is pairwise disjoint.
std::vector<Disc> merge_discs(const std::vector<cplx>& centers, double delta, int N);

/// Separation plus merging for every plane.
DiscFamily disc_family(const PolynomialF& f, int k, const ScalarField& phi, double tau = 1e-10);

struct InnerCorona {
    int j = 0;  // 1-based puncture index within its plane
    cplx center;
    double delta = 0.0;  // annulus delta <= |z - c| <= 2 delta
    double A = 0.0;
};

struct CoronaGeometry {
    int k = 1;
    double r = 0.0;      // support radius in z_k over all planes
    double delta = 0.0;  // (1 - r)/3
    double a = 0.0, b = 0.0;  // outer annulus a < |z| < b
    double A0 = 0.0;
    std::vector<std::vector<InnerCorona>> inner;  // per plane; empty when no punctures

    double outer_area() const;
};

/// Normaliser for an annulus of the given area. With the 1/(πz) kernel the
/// outer component needs +π/area and the inner components need -π/area.
double outer_normalizer(double area);
double inner_normalizer(double area);

/// Corona geometry of φ in variable k. Punctures strictly inside the support
/// radius get inner coronas; punctures beyond the outer annulus need none;
/// anything in between is a GeometryError.
CoronaGeometry corona_geometry(const ScalarField& phi, int k, const DiscFamily* discs, double tau = 1e-12);

}  // namespace dbar
