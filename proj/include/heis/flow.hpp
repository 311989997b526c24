#ifndef HEIS_FLOW_HPP
#define HEIS_FLOW_HPP

#include <array>
#include <functional>
#include <vector>

#include "heis/contact.hpp"
#include "heis/grid_field.hpp"

namespace heis {

// Classical flow of d/dtau Phi = b(Phi), Phi(0,p) = p, integrated with fixed
// step RK4 in Euclidean coordinates together with the variational equation
// dJ/dtau = Dv(Phi) J and the log-determinant track d(logdet)/dtau = div b.
struct FlowMap {
    int n = 1;
    std::vector<double> times;
    std::vector<std::vector<HPoint>> states;                              // [time][trajectory]
    std::vector<std::vector<std::array<double, kMaxDim * kMaxDim>>> jac;  // row-major N x N
    std::vector<std::vector<double>> logdet;

    size_t trajectories() const { return states.empty() ? 0 : states[0].size(); }
    const HPoint& state(size_t time_idx, size_t traj) const { return states[time_idx][traj]; }
};

FlowMap integrate_flow(const HVectorField& b, std::span<const HPoint> initials, double horizon, double dt,
                       int record_stride = 1);

// (C_measured, C_theory): the largest push-forward density along the computed
// trajectories versus exp(horizon * sup (div b)^-), the a-priori bound
std::pair<double, double> pushforward_bound(const FlowMap& flow, const HVectorField& b, const Box& sample_box,
                                            int cells_per_axis);

// push the horizontal frame through D_p Phi and return the largest absolute
// T-component of the result expanded in the frame at the endpoint
double horizontality_defect(const FlowMap& flow);

// determinant of the stored Jacobian (for cross-checking against logdet)
double jacobian_determinant(const FlowMap& flow, size_t time_idx, size_t traj);

// time-indexed snapshots with piecewise-linear interpolation in tau
struct TimeField {
    std::vector<double> taus;
    std::vector<GridField> snaps;
    double operator()(double tau, const HPoint& p) const;
};

enum class TransportForm { minus, plus };        // sign of <b, grad u> in the equation
enum class ReactionMode { exponential, additive };
using ReactionFn = std::function<double(double, const HPoint&)>;  // c(tau, p); empty = zero

// method of characteristics for du/dtau -+ <b, grad u> + c u = 0 (form=minus
// flows along -b, form=plus along b); the reaction enters through the
// integrating factor exp(-int c) in exponential mode, or subtractively in
// additive mode
TimeField solve_transport(const HVectorField& b, const ReactionFn& c, const ScalarField& u0, TransportForm form,
                          ReactionMode mode, std::span<const double> taus, const Box& out_box, int cells_per_axis,
                          double dt);

// du/dtau + div(b u) = 0 via u(tau, q) = u0(xi) det D_q xi with xi the
// backward characteristic; errors out on degenerate Jacobians
TimeField solve_continuity(const HVectorField& b, const ScalarField& u0, std::span<const double> taus,
                           const Box& out_box, int cells_per_axis, double dt);

// compactly supported space-time test function eta(tau) chi(p)
struct SpaceTimeTest {
    Profile1D time;    // eta; must vanish before tau_end
    double tau_end = 1.0;
    ScalarField space;  // chi with partials
    Box space_box;      // quadrature region containing supp chi
};

// weak-formulation pairing of the transport operator against phi; zero for
// exact solutions, and O(h^2 + dtau^2) for solver output under refinement
double distributional_residual(const TimeField& u, const ScalarField& u0, const HVectorField& b,
                               const ReactionFn& c, const SpaceTimeTest& phi, TransportForm form, int time_cells,
                               int space_cells);

// the same pairing after composition with beta: beta(u), beta(u0) and the
// reaction c u beta'(u)
double renormalization_residual(const TimeField& u, const Profile1D& beta, const ScalarField& u0,
                                const HVectorField& b, const ReactionFn& c, const SpaceTimeTest& phi,
                                TransportForm form, int time_cells, int space_cells);

}  // namespace heis

#endif
