#ifndef HEIS_QUOTIENTS_HPP
#define HEIS_QUOTIENTS_HPP

#include <vector>

#include "heis/grid_field.hpp"
#include "heis/norms.hpp"
#include "heis/report.hpp"

namespace heis {

// Difference quotients along dilated left translations p -> p * delta_eps(w).
//   first:     (f(p dw) - f(p)) / eps                      -> <grad_H f, w_H>
//   second:    (f(p dw) - f(p) - eps <grad_H f, w_H>)/eps^2 -> 1/2 <Hess_H f w_H, w_H> + w_N Tf
//   vertical1: (f(p dw) - f(p dw_H)) / eps                  -> 0
//   vertical2: (f(p dw) - f(p dw_H)) / eps^2                -> w_N Tf
enum class QuotientOrder { first, second, vertical1, vertical2 };

double quotient_at(const ScalarField& f, const HPoint& w, double eps, QuotientOrder order, const HPoint& p);
double quotient_limit_at(const ScalarField& f, const HPoint& w, QuotientOrder order, const HPoint& p);

// a-priori L^s(A) bound for the quotient in terms of norms over Omega
double quotient_apriori_bound(const ScalarField& f, const HPoint& w, QuotientOrder order, const NormSpec& omega_norm,
                              int cells_per_axis);

GridField quotient1(const ScalarField& f, const HPoint& w, double eps, const Box& A, int cells_per_axis);
GridField quotient2(const ScalarField& f, const HPoint& w, double eps, const Box& A, int cells_per_axis);

struct QuotientSpec {
    ScalarField f;
    HPoint w;
    std::vector<double> ladder;  // strictly decreasing
    QuotientOrder order = QuotientOrder::first;
    double s = 1.0;
    Box A;
    Box omega;
    int cells_per_axis = 16;
    double bound_slack = 0.05;
};

// per-eps L^s(A) distance between the quotient and its limit, the a-priori
// bound check with slack, and the fitted decay rate of the error
ConvergenceReport quotient_limit_error(const QuotientSpec& spec);

// pointwise |second quotient| <= Lip(grad_H f) * gauge(w)^2 on samples of
// omega; the Lipschitz constant is taken as the sampled sup of the Frobenius
// norm of the horizontal Hessian over lip_box (which must enclose every
// evaluation point)
bool linfty_bound_check(const ScalarField& f, const Box& omega, const HPoint& w, double eps, int cells_per_axis,
                        const Box& lip_box);

// enclosing box for the points reached from omega by the dilated translations
Box reachable_box(const Box& omega, const HPoint& w, double eps);

}  // namespace heis

#endif
