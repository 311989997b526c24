#ifndef HEIS_NORMS_HPP
#define HEIS_NORMS_HPP

#include <cmath>
#include <functional>
#include <limits>

#include "heis/box.hpp"
#include "heis/frame_calculus.hpp"
#include "heis/grid_field.hpp"

namespace heis {

// L^s norm specification over a sub-box; s = infinity takes the max of samples.
struct NormSpec {
    double s = 1.0;
    Box region;

    NormSpec() = default;
    NormSpec(double s_, const Box& region_) : s(s_), region(region_) {
        if (!(s >= 1.0)) throw std::invalid_argument("NormSpec: exponent must satisfy s >= 1");
    }
    bool is_inf() const { return std::isinf(s); }
    double conjugate() const {
        if (is_inf()) return 1.0;
        if (s == 1.0) return std::numeric_limits<double>::infinity();
        return s / (s - 1.0);
    }
};

using PointFn = std::function<double(const HPoint&)>;

// midpoint-rule integral over the lattice (deterministic parallel reduction)
double integrate(const Lattice& lat, const PointFn& fn);

double lp_norm(const PointFn& fn, const NormSpec& spec, int cells_per_axis);
double lp_norm(const GridField& field, const NormSpec& spec);  // lattice from the field's own cells
double lp_norm(const ScalarField& field, const NormSpec& spec, int cells_per_axis);

// |u|_{L^s} + sum_j |Z_j u|_{L^s} (+ sum_{ij} |Z_i Z_j u|_{L^s} for k = 2),
// horizontal indices only
double sobolev_h_norm(const ScalarField& field, int k, const NormSpec& spec, int cells_per_axis);
double sobolev_h_norm(const GridField& field, int k, const NormSpec& spec);

// |Z_j(beta(u)) - beta'(u) Z_j u|_{L^1(K)}.  grid_h <= 0 runs the analytic
// route (partials of the composition); positive grid_h samples both fields
// and uses stencil derivatives, which is the O(h^2) check.
double chain_rule_residual(const ScalarField& u, const Profile1D& beta, int j, const Box& K,
                           int cells_per_axis, double grid_h = 0.0);

}  // namespace heis

#endif
