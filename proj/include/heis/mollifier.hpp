#ifndef HEIS_MOLLIFIER_HPP
#define HEIS_MOLLIFIER_HPP

#include "heis/box.hpp"
#include "heis/frame_calculus.hpp"
#include "heis/grid_field.hpp"
#include "heis/norms.hpp"

namespace heis {

// Even, nonnegative, unit-mass kernel supported strictly inside the unit
// gauge ball {|w_H| + 2 sqrt|w_N| < 1}:
//
//   rho(w) = C exp(-1/(1 - m(w))),  m(w) = (|w_H|/a)^4 + (w_N/b)^2,
//
// with a = 0.6, b = 1/16.  The even polynomial gauge m keeps rho smooth in
// every coordinate (a gauge built directly from sqrt|w_N| would have
// unbounded t-derivatives on {t = 0}) while m(w) < 1 still forces
// |w_H| + 2 sqrt|w_N| < (a^{4/3} + (2 sqrt b)^{4/3})^{3/4} < 1.
class Mollifier {
  public:
    static Mollifier make(int n);

    int n() const { return n_; }
    int hom_dim() const { return 2 * n_ + 2; }
    double horizontal_radius() const { return a_; }
    double vertical_radius() const { return b_; }
    double normalization() const { return C_; }
    Box support_box() const;

    double operator()(const HPoint& w) const;
    double partial(int axis, const HPoint& w) const;

    // frame derivatives of the unscaled kernel
    double z(int j, const HPoint& w, FrameKind kind = FrameKind::left) const;

    // scaled kernel rho_eps(p) = eps^{-Q} rho(delta_{1/eps}(p)) and its frame
    // derivatives, assembled through the generic chain rule
    double value_eps(double eps, const HPoint& p) const;
    double partial_eps(int axis, double eps, const HPoint& p) const;
    double z_eps(int j, double eps, const HPoint& p, FrameKind kind = FrameKind::left) const;

    double mass(int cells_per_axis) const;

    ScalarField as_field() const;

  private:
    Mollifier() = default;
    double gauge_m(const HPoint& w) const;

    int n_ = 1;
    double a_ = 0.6;
    double b_ = 0.0625;
    double C_ = 1.0;
};

// group convolution (u * rho_eps)(p) = integral of u(p q^{-1}) rho_eps(q) dq
// by midpoint quadrature over supp rho_eps; at least 17 nodes per axis across
// the support regardless of eps.  The output box defaults to u's box shrunk
// so every evaluation point stays inside.
GridField group_convolve(const GridField& u, const Mollifier& rho, double eps, int nodes_per_axis = 20);
GridField group_convolve(const GridField& u, const Mollifier& rho, double eps, const Box& out_box,
                         int nodes_per_axis);

// value of (f * rho_eps)(p) for an arbitrary integrand evaluator
double convolve_at(const PointFn& f, const Mollifier& rho, double eps, const HPoint& p, const Lattice& wlat);

// default output region for convolutions against rho_eps
Box convolution_output_box(const Box& ubox, const Mollifier& rho, double eps);

// true when every p q^{-1}, p in out_box, q in supp rho_eps, stays inside ubox
bool convolution_region_safe(const Box& ubox, const Mollifier& rho, double eps, const Box& out_box);

}  // namespace heis

#endif
