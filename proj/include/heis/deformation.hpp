#ifndef HEIS_DEFORMATION_HPP
#define HEIS_DEFORMATION_HPP

#include "heis/contact.hpp"
#include "heis/norms.hpp"

namespace heis {

// Symmetrized-derivative bilinear functional of a vector field b against a
// pair of smooth compactly supported functions f, g.  Two algebraically
// equal integral expressions:
//   defining:  -1/2 int [ df(b) Lap_H g + dg(b) Lap_H f - div b <grad_H f, grad_H g> ]
//   explicit:   int sum_{ij} ((Z_i b_j + Z_j b_i)/2) Z_i f Z_j g
//             + 1/2 int <grad_H b_N + 4 J(b), Tg grad_H f + Tf grad_H g>
// The second integral of the explicit form vanishes pointwise for fields
// with the factor-4 contact structure.
struct DeformationInput {
    HVectorField b;
    ScalarField f, g;
    Box region;             // must strictly contain supp f, supp g (and supp b for equality)
    int cells_per_axis = 24;
};

double dsym_defining(const DeformationInput& input);
double dsym_explicit(const DeformationInput& input);
double dsym_jterm(const DeformationInput& input);      // second integral of the explicit form
double dsym_jterm_l1(const DeformationInput& input);   // L1 mass of its integrand

struct DeformationRecord {
    double value_defining = 0.0;
    double value_explicit = 0.0;
    double jterm = 0.0;
    double jterm_l1 = 0.0;
    double bound_rhs = 0.0;
    double quad_tol = 0.0;
    bool pass_equality = false;
    bool pass_bound = false;
    std::string to_json_text() const;
};

// equality of the two formulas within 2x the quadrature tolerance estimated
// from a half-resolution rerun
DeformationRecord deformation_equality(const DeformationInput& input);

// |dsym| <= c |grad_H f|_{L^r} |grad_H g|_{L^s} with c = sum_{ij} |Z_i b_j|_{L^{s'}}
// and r = s = 2 (s')'; requires a contact b and 5% slack.  Throws for
// non-contact inputs.
bool deformation_bound_check(const DeformationInput& input, double s_prime, DeformationRecord* record = nullptr);

}  // namespace heis

#endif
