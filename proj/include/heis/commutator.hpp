#ifndef HEIS_COMMUTATOR_HPP
#define HEIS_COMMUTATOR_HPP

#include <vector>

#include "heis/contact.hpp"
#include "heis/grid_field.hpp"
#include "heis/mollifier.hpp"
#include "heis/report.hpp"

namespace heis {

// Inputs for the mollification commutator
//   C_eps = C1 + C2,
//   C1(p) = -((u div b) * rho_eps)(p)
//           - int u(p q^{-1}) sum_j [ b_j(p) Z_j rho_eps(q) - b_j(p q^{-1}) Z_j^r rho_eps(q) ] dq,
//   C2(p) = int u(p q^{-1}) rho_eps(q) [ c(p) - c(p q^{-1}) ] dq,
// evaluated by midpoint quadrature over supp rho_eps on an evaluation region K.
struct CommutatorInput {
    const GridField* u = nullptr;
    HVectorField b;
    ScalarField c;  // invalid() means zero reaction
    Mollifier rho = Mollifier::make(1);
    std::vector<double> ladder;
    Box K;
    int out_cells = 12;  // evaluation lattice over K, per axis
    int w_cells = 18;    // kernel-support lattice, per axis (>= 17)
};

// All per-eps quantities of one commutator evaluation.  The decomposition
// after the change of variables w = delta_{1/eps}(q) reads
//   -C1(p) = (u div b * rho_eps)(p) + A1(p) + B1(p) + B2(p)
// with A1 the first-order horizontal term, B1 the second-order vertical
// quotient of b_N, and B2 carrying the structural residual grad_H b_N + 4J(b).
struct CommutatorEval {
    double eps = 0.0;
    double c_total_l1 = 0.0;   // |C1 + C2|_{L1(K)}
    double c2_l1 = 0.0;
    double a1_l1 = 0.0;
    double b1_l1 = 0.0;
    double b2_l1 = 0.0;
    double b2_linf = 0.0;
    double mdiv_l1 = 0.0;
    double a1_limit_err = 0.0;  // |A1 + u (div b - T b_N)|_{L1(K)}
    double b1_limit_err = 0.0;  // |B1 + u T b_N|_{L1(K)}
    double direct_vs_decomposed = 0.0;
    double noise_floor = 0.0;   // half-resolution quadrature difference
};

CommutatorEval commutator_eval(const CommutatorInput& input, double eps);

// C_eps sampled over K via the direct integral representation
GridField commutator_direct(const CommutatorInput& input, double eps);

// pointwise breakdown over K: the decomposition terms, the reaction term and
// the direct route, as grids on the same lattice
struct CommutatorBreakdown {
    GridField a1, b1, b2, mollified_div, c2, c1_direct;
    double a1_l1 = 0.0, b1_l1 = 0.0, b2_l1 = 0.0, mdiv_l1 = 0.0, c2_l1 = 0.0;
};

CommutatorBreakdown commutator_decomposed(const CommutatorInput& input, double eps);

// ladder study; verdict CONTACT-VANISHING when |C_eps| strictly decreases
// with positive fitted rate, NONCONTACT-BLOWUP when it strictly grows
ConvergenceReport commutator_study(const CommutatorInput& input);

// discrete mass cancellations of the kernel: integrals of Z_j(w_i rho),
// T(w_N rho) and T(w_i w_j rho) over the support
double moment_zj(const Mollifier& rho, int j, int i, int cells_per_axis);
double moment_t_vertical(const Mollifier& rho, int cells_per_axis);
double moment_t_pair(const Mollifier& rho, int i, int j, int cells_per_axis);

}  // namespace heis

#endif
