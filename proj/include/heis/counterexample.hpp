#ifndef HEIS_COUNTEREXAMPLE_HPP
#define HEIS_COUNTEREXAMPLE_HPP

#include <span>

#include "heis/contact.hpp"
#include "heis/norms.hpp"
#include "heis/report.hpp"

namespace heis {

// Oscillating generating functions psi(w,t) = phi(w/beta) g(t/delta) built
// from polynomial bumps with closed-form derivative masses.  The coupling
// delta = M beta^2 with M = 4 G2 / (|d_i phi|_1 G1) makes the vertical
// mixed-derivative mass scale like beta^{2n-1} while every term of the
// horizontal second-order family stays O(beta^{2n}).
struct OscillationParams {
    int n = 1;
    int i = 0;        // distinguished horizontal index, 0-based
    double beta = 0.2;
    double delta = 0.0;
    double M = 0.0;

    // closed-form constants of the profiles (unit L1 masses)
    double G1 = 0.0, G2 = 0.0;       // |g'|_1, |g''|_1 of the time profile
    double F1 = 0.0, F2 = 0.0;       // 1 + sum_j |d_j phi|_1, F1 + sum_{jk} |d_k d_j phi|_1
    double dphi_l1 = 0.0;            // |d_{w_i} phi|_1

    // coupled mode: delta = M beta^2
    static OscillationParams coupled(int n, int i, double beta);
};

// 1D time profile (35/32)(1-t^2)^3 and its exact derivative masses
double time_profile_g1();  // |g'|_1 = 35/16
double time_profile_g2();  // |g''|_1 = (84/25) sqrt 5

ScalarField oscillating_psi(const OscillationParams& params);

// support box of the scaled psi (must fit inside the working box)
Box oscillation_support(const OscillationParams& params);

// beta-ladder study of the L1 masses |psi|, sum |Z_j psi|, sum |Z_k Z_j psi|,
// |T Z_i psi| and the full-gradient mass of the driven component, with the
// displayed bound checks at 5% slack and fitted beta-exponents
ConvergenceReport scaling_study(int n, int i, std::span<const double> betas, const Box& omega, int cells_per_axis);

// total variation surrogate for smooth fields: L1(K) norm of the full
// Euclidean gradient of the chosen frame component of b
double bv_lower_bound(const HVectorField& b, int component, const Box& K, int cells_per_axis);

}  // namespace heis

#endif
