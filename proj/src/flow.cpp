#include "heis/flow.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "heis/norms.hpp"
#include "heis/parallel.hpp"

namespace heis {

namespace {

// combined state layout: p (N), J (N*N), logdet (1)
struct OdeDims {
    int N;
    int total() const { return N + N * N + 1; }
};

void flow_rhs(const HVectorField& b, const OdeDims& dims, const double* y, double* dy) {
    const int N = dims.N;
    HPoint p(b.n);
    for (int k = 0; k < N; ++k) p[k] = y[k];
    const HPoint v = b.coordinate_velocity(p);
    double Dv[kMaxDim * kMaxDim];
    b.coordinate_jacobian(p, Dv);
    for (int k = 0; k < N; ++k) dy[k] = v[k];
    const double* J = y + N;
    double* dJ = dy + N;
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k) {
            double s = 0.0;
            for (int l = 0; l < N; ++l) s += Dv[i * N + l] * J[l * N + k];
            dJ[i * N + k] = s;
        }
    double tr = 0.0;
    for (int i = 0; i < N; ++i) tr += Dv[i * N + i];
    dy[N + N * N] = tr;
}

void rk4_step(const HVectorField& b, const OdeDims& dims, double dt, double* y) {
    const int m = dims.total();
    double k1[200], k2[200], k3[200], k4[200], tmp[200];
    flow_rhs(b, dims, y, k1);
    for (int i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    flow_rhs(b, dims, tmp, k2);
    for (int i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    flow_rhs(b, dims, tmp, k3);
    for (int i = 0; i < m; ++i) tmp[i] = y[i] + dt * k3[i];
    flow_rhs(b, dims, tmp, k4);
    for (int i = 0; i < m; ++i) y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

FlowMap integrate_flow(const HVectorField& b, std::span<const HPoint> initials, double horizon, double dt,
                       int record_stride) {
    if (!(horizon > 0.0) || !(dt > 0.0)) throw std::invalid_argument("integrate_flow: need horizon > 0, dt > 0");
    const int steps = std::max(1, static_cast<int>(std::lround(horizon / dt)));
    const double step = horizon / steps;
    const OdeDims dims{2 * b.n + 1};
    const int m = dims.total();
    const int N = dims.N;

    FlowMap flow;
    flow.n = b.n;
    const int records = steps / record_stride + 1 + (steps % record_stride ? 1 : 0);
    flow.times.reserve(records);
    std::vector<std::vector<double>> ys(initials.size(), std::vector<double>(m, 0.0));
    for (size_t i = 0; i < initials.size(); ++i) {
        for (int k = 0; k < N; ++k) ys[i][k] = initials[i][k];
        for (int k = 0; k < N; ++k) ys[i][N + k * N + k] = 1.0;
    }
    auto record = [&](double tau) {
        flow.times.push_back(tau);
        flow.states.emplace_back(initials.size(), HPoint(b.n));
        flow.jac.emplace_back(initials.size());
        flow.logdet.emplace_back(initials.size(), 0.0);
        for (size_t i = 0; i < initials.size(); ++i) {
            HPoint p(b.n);
            for (int k = 0; k < N; ++k) p[k] = ys[i][k];
            flow.states.back()[i] = p;
            std::memcpy(flow.jac.back()[i].data(), ys[i].data() + N, sizeof(double) * N * N);
            flow.logdet.back()[i] = ys[i][N + N * N];
        }
    };
    record(0.0);
    for (int s = 1; s <= steps; ++s) {
        parallel_for(initials.size(), [&](size_t i) { rk4_step(b, dims, step, ys[i].data()); });
        if (s % record_stride == 0 || s == steps) record(s * step);
    }
    return flow;
}

double jacobian_determinant(const FlowMap& flow, size_t time_idx, size_t traj) {
    const int N = 2 * flow.n + 1;
    double a[kMaxDim * kMaxDim];
    std::memcpy(a, flow.jac[time_idx][traj].data(), sizeof(double) * N * N);
    double det = 1.0;
    for (int col = 0; col < N; ++col) {
        int piv = col;
        for (int r = col + 1; r < N; ++r)
            if (std::fabs(a[r * N + col]) > std::fabs(a[piv * N + col])) piv = r;
        if (piv != col) {
            for (int k = 0; k < N; ++k) std::swap(a[col * N + k], a[piv * N + k]);
            det = -det;
        }
        const double d = a[col * N + col];
        if (d == 0.0) return 0.0;
        det *= d;
        for (int r = col + 1; r < N; ++r) {
            const double f = a[r * N + col] / d;
            for (int k = col; k < N; ++k) a[r * N + k] -= f * a[col * N + k];
        }
    }
    return det;
}

std::pair<double, double> pushforward_bound(const FlowMap& flow, const HVectorField& b, const Box& sample_box,
                                            int cells_per_axis) {
    double c_measured = 0.0;
    for (size_t k = 0; k < flow.times.size(); ++k)
        for (size_t i = 0; i < flow.trajectories(); ++i)
            c_measured = std::max(c_measured, std::exp(-flow.logdet[k][i]));
    const ScalarField divb = b.divergence_field();
    Lattice lat(sample_box, cells_per_axis);
    double neg = 0.0;
    for (size_t i = 0; i < lat.size(); ++i) neg = std::max(neg, -divb(lat.node(i)));
    const double c_theory = std::exp(flow.times.back() * neg);
    return {c_measured, c_theory};
}

double horizontality_defect(const FlowMap& flow) {
    const int n = flow.n;
    const int N = 2 * n + 1;
    double defect = 0.0;
    for (size_t k = 0; k < flow.times.size(); ++k) {
        for (size_t i = 0; i < flow.trajectories(); ++i) {
            const HPoint& p0 = flow.states[0][i];
            const HPoint& q = flow.states[k][i];
            const auto& J = flow.jac[k][i];
            for (int j = 0; j < 2 * n; ++j) {
                const HPoint zj = frame_vector(FrameKind::left, j, p0);
                HPoint v(n);
                for (int r = 0; r < N; ++r) {
                    double s = 0.0;
                    for (int c = 0; c < N; ++c) s += J[r * N + c] * zj[c];
                    v[r] = s;
                }
                double coef[kMaxDim];
                frame_coefficients(q, v, coef);
                defect = std::max(defect, std::fabs(coef[N - 1]));
            }
        }
    }
    return defect;
}

double TimeField::operator()(double tau, const HPoint& p) const {
    if (snaps.empty()) throw std::logic_error("TimeField: empty");
    if (tau <= taus.front()) return snaps.front()(p);
    if (tau >= taus.back()) return snaps.back()(p);
    size_t i = 0;
    while (i + 1 < taus.size() && taus[i + 1] < tau) ++i;
    const double th = (tau - taus[i]) / (taus[i + 1] - taus[i]);
    return (1.0 - th) * snaps[i](p) + th * snaps[i + 1](p);
}

namespace {

struct BackwardPaths {
    // per node: positions (and optional logdet) at every step 0..steps
    std::vector<HPoint> pos;
    std::vector<double> logdet;
};

// integrate dxi/ds = sgn * b(xi) from each lattice node, recording each step
void backward_rk4(const HVectorField& b, double sgn, const HPoint& start, int steps, double dt, bool with_logdet,
                  std::vector<HPoint>& pos, std::vector<double>& ld) {
    const int N = 2 * b.n + 1;
    double y[kMaxDim + 1];
    for (int k = 0; k < N; ++k) y[k] = start[k];
    y[N] = 0.0;
    pos[0] = start;
    if (with_logdet) ld[0] = 0.0;
    auto rhs = [&](const double* yy, double* dy) {
        HPoint p(b.n);
        for (int k = 0; k < N; ++k) p[k] = yy[k];
        const HPoint v = b.coordinate_velocity(p);
        for (int k = 0; k < N; ++k) dy[k] = sgn * v[k];
        if (with_logdet) {
            double vals[2 * kMaxDim + 2];
            b.batch_eval(p, vals);
            dy[N] = sgn * vals[N];
        } else {
            dy[N] = 0.0;
        }
    };
    const int m = N + 1;
    double k1[kMaxDim + 1], k2[kMaxDim + 1], k3[kMaxDim + 1], k4[kMaxDim + 1], tmp[kMaxDim + 1];
    for (int s = 1; s <= steps; ++s) {
        rhs(y, k1);
        for (int i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
        rhs(tmp, k2);
        for (int i = 0; i < m; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
        rhs(tmp, k3);
        for (int i = 0; i < m; ++i) tmp[i] = y[i] + dt * k3[i];
        rhs(tmp, k4);
        for (int i = 0; i < m; ++i) y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        HPoint p(b.n);
        for (int k = 0; k < N; ++k) p[k] = y[k];
        pos[s] = p;
        if (with_logdet) ld[s] = y[N];
    }
}

std::vector<int> snap_indices(std::span<const double> taus, double dt) {
    std::vector<int> idx(taus.size());
    for (size_t i = 0; i < taus.size(); ++i) {
        const int k = static_cast<int>(std::lround(taus[i] / dt));
        if (std::fabs(taus[i] - k * dt) > 1e-9 * std::max(1.0, taus[i]))
            throw std::invalid_argument("solver: output times must sit on the step grid");
        idx[i] = k;
    }
    return idx;
}

}  // namespace

TimeField solve_transport(const HVectorField& b, const ReactionFn& c, const ScalarField& u0, TransportForm form,
                          ReactionMode mode, std::span<const double> taus, const Box& out_box, int cells_per_axis,
                          double dt) {
    if (taus.empty()) throw std::invalid_argument("solve_transport: need output times");
    for (size_t i = 1; i < taus.size(); ++i)
        if (!(taus[i] > taus[i - 1])) throw std::invalid_argument("solve_transport: times must increase");
    const auto idx = snap_indices(taus, dt);
    const int steps = idx.back();
    // characteristics flow along +b for form=plus, -b for form=minus;
    // the backward integration reverses the sign once more
    const double sgn = (form == TransportForm::plus) ? -1.0 : 1.0;

    std::array<int, kMaxDim> cells{};
    for (int k = 0; k < out_box.dim(); ++k) cells[k] = cells_per_axis;
    size_t total = 1;
    for (int k = 0; k < out_box.dim(); ++k) total *= static_cast<size_t>(cells[k] + 1);

    std::vector<std::vector<double>> values(taus.size(), std::vector<double>(total));
    parallel_for(total, [&](size_t flat) {
        size_t rem = flat;
        HPoint q(out_box.n());
        for (int k = 0; k < out_box.dim(); ++k) {
            const size_t nk = static_cast<size_t>(cells[k] + 1);
            q[k] = out_box.lo[k] + out_box.extent(k) / cells[k] * static_cast<double>(rem % nk);
            rem /= nk;
        }
        thread_local std::vector<HPoint> pos;
        thread_local std::vector<double> ld;
        pos.resize(steps + 1);
        ld.resize(steps + 1);
        backward_rk4(b, sgn, q, steps, dt, false, pos, ld);
        for (size_t ti = 0; ti < taus.size(); ++ti) {
            const int end = idx[ti];
            double base = u0(pos[end]);
            if (c) {
                // int_0^tau c(sigma, gamma(sigma)) dsigma with gamma(sigma) = pos[end - sigma/dt]
                double integral_c = 0.0;
                for (int m = 0; m <= end; ++m) {
                    const double weight = (m == 0 || m == end) ? 0.5 : 1.0;
                    integral_c += weight * c(m * dt, pos[end - m]);
                }
                integral_c *= (end > 0) ? dt : 0.0;
                base = (mode == ReactionMode::exponential) ? base * std::exp(-integral_c) : base - integral_c;
            }
            values[ti][flat] = base;
        }
    });

    TimeField out;
    out.taus.assign(taus.begin(), taus.end());
    for (size_t ti = 0; ti < taus.size(); ++ti)
        out.snaps.push_back(GridField::from_values(out_box, std::span<const int>(cells.data(), out_box.dim()),
                                                   std::move(values[ti])));
    return out;
}

TimeField solve_continuity(const HVectorField& b, const ScalarField& u0, std::span<const double> taus,
                           const Box& out_box, int cells_per_axis, double dt) {
    if (taus.empty()) throw std::invalid_argument("solve_continuity: need output times");
    const auto idx = snap_indices(taus, dt);
    const int steps = idx.back();

    std::array<int, kMaxDim> cells{};
    for (int k = 0; k < out_box.dim(); ++k) cells[k] = cells_per_axis;
    size_t total = 1;
    for (int k = 0; k < out_box.dim(); ++k) total *= static_cast<size_t>(cells[k] + 1);

    std::vector<std::vector<double>> values(taus.size(), std::vector<double>(total));
    parallel_for(total, [&](size_t flat) {
        size_t rem = flat;
        HPoint q(out_box.n());
        for (int k = 0; k < out_box.dim(); ++k) {
            const size_t nk = static_cast<size_t>(cells[k] + 1);
            q[k] = out_box.lo[k] + out_box.extent(k) / cells[k] * static_cast<double>(rem % nk);
            rem /= nk;
        }
        thread_local std::vector<HPoint> pos;
        thread_local std::vector<double> ld;
        pos.resize(steps + 1);
        ld.resize(steps + 1);
        backward_rk4(b, -1.0, q, steps, dt, true, pos, ld);
        for (size_t ti = 0; ti < taus.size(); ++ti) {
            const int end = idx[ti];
            // det D_p Phi at the foot point is exp(-ld); reject degeneracy
            if (std::exp(-ld[end]) < 1e-12)
                throw std::domain_error("solve_continuity: degenerate Jacobian along a characteristic");
            values[ti][flat] = u0(pos[end]) * std::exp(ld[end]);
        }
    });

    TimeField out;
    out.taus.assign(taus.begin(), taus.end());
    for (size_t ti = 0; ti < taus.size(); ++ti)
        out.snaps.push_back(GridField::from_values(out_box, std::span<const int>(cells.data(), out_box.dim()),
                                                   std::move(values[ti])));
    return out;
}

namespace {

double pairing_residual(const TimeField& u, const ScalarField& composed_u0, const HVectorField& b,
                        const ReactionFn& c, const SpaceTimeTest& phi, TransportForm form, int time_cells,
                        int space_cells, const Profile1D* beta) {
    const double sgn = (form == TransportForm::minus) ? 1.0 : -1.0;
    const int N = 2 * b.n + 1;
    Lattice slat(phi.space_box, space_cells);
    const size_t m = slat.size();

    // per-node spatial data (tau-independent)
    struct NodeData {
        double chi, u0chi, divb;
        double bgradchi;  // sum_j b_j Z_j chi
        HPoint p;
    };
    std::vector<NodeData> nodes(m);
    const ScalarField divb = b.divergence_field();
    parallel_for(m, [&](size_t i) {
        const HPoint p = slat.node(i);
        NodeData nd;
        nd.p = p;
        nd.chi = phi.space(p);
        nd.u0chi = composed_u0(p) * nd.chi;
        nd.divb = divb(p);
        double s = 0.0;
        for (int j = 0; j < N; ++j) s += b.comp[j](p) * z_derivative(phi.space, j, p);
        nd.bgradchi = s;
        nodes[i] = nd;
    });

    const double eta0 = phi.time.d(0.0, 0);
    double initial_term = 0.0;
    for (const NodeData& nd : nodes) initial_term += nd.u0chi;
    initial_term *= slat.cell_volume() * eta0;

    const double dtau = phi.tau_end / time_cells;
    std::vector<double> slab(time_cells);
    parallel_for(static_cast<size_t>(time_cells), [&](size_t ti) {
        const double tau = (static_cast<double>(ti) + 0.5) * dtau;
        const double eta = phi.time.d(tau, 0);
        const double etap = phi.time.d(tau, 1);
        double acc = 0.0;
        for (const NodeData& nd : nodes) {
            const double uv = u(tau, nd.p);
            const double w = beta ? beta->d(uv, 0) : uv;
            double integrand = w * (-etap * nd.chi + sgn * eta * (nd.bgradchi + nd.divb * nd.chi));
            if (c) {
                const double cv = c(tau, nd.p);
                integrand += cv * (beta ? uv * beta->d(uv, 1) : uv) * eta * nd.chi;
            }
            acc += integrand;
        }
        slab[ti] = acc * slat.cell_volume() * dtau;
    });
    double bulk = 0.0;
    for (double v : slab) bulk += v;
    return -initial_term + bulk;
}

}  // namespace

double distributional_residual(const TimeField& u, const ScalarField& u0, const HVectorField& b,
                               const ReactionFn& c, const SpaceTimeTest& phi, TransportForm form, int time_cells,
                               int space_cells) {
    return pairing_residual(u, u0, b, c, phi, form, time_cells, space_cells, nullptr);
}

double renormalization_residual(const TimeField& u, const Profile1D& beta, const ScalarField& u0,
                                const HVectorField& b, const ReactionFn& c, const SpaceTimeTest& phi,
                                TransportForm form, int time_cells, int space_cells) {
    const ScalarField beta_u0 = compose(beta, u0);
    return pairing_residual(u, beta_u0, b, c, phi, form, time_cells, space_cells, &beta);
}

}  // namespace heis
