#include "heis/commutator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "heis/parallel.hpp"

namespace heis {

namespace {

struct KernelNode {
    HPoint w;
    double vol_rho;                       // cellvol * rho(w)
    std::array<double, kMaxDim> vol_zl;   // cellvol * Z_j rho(w)
    std::array<double, kMaxDim> vol_zr;   // cellvol * Z_j^r rho(w)
    size_t mirror;                        // node index of -w
};

struct KernelLattice {
    std::vector<KernelNode> nodes;
};

KernelLattice build_kernel_lattice(const Mollifier& rho, int cells) {
    Lattice lat(rho.support_box(), cells);
    const int N = 2 * rho.n() + 1;
    std::vector<size_t> compact(lat.size(), size_t(-1));
    KernelLattice out;
    for (size_t i = 0; i < lat.size(); ++i) {
        const HPoint w = lat.node(i);
        const double r = rho(w);
        if (r == 0.0) continue;
        compact[i] = out.nodes.size();
        KernelNode nd;
        nd.w = w;
        nd.vol_rho = lat.cell_volume() * r;
        for (int j = 0; j < N; ++j) {
            nd.vol_zl[j] = lat.cell_volume() * rho.z(j, w, FrameKind::left);
            nd.vol_zr[j] = lat.cell_volume() * rho.z(j, w, FrameKind::right);
        }
        nd.mirror = i;  // full-lattice index for now
        out.nodes.push_back(nd);
    }
    // midpoint nodes of a symmetric box map onto each other under negation:
    // index i_k -> cells-1-i_k per axis
    for (KernelNode& nd : out.nodes) {
        size_t idx = nd.mirror;
        size_t flip = 0, stride = 1;
        for (int k = 0; k < N; ++k) {
            const size_t ik = idx % static_cast<size_t>(cells);
            idx /= static_cast<size_t>(cells);
            flip += stride * static_cast<size_t>(cells - 1 - static_cast<int>(ik));
            stride *= static_cast<size_t>(cells);
        }
        if (compact[flip] == size_t(-1))
            throw std::logic_error("kernel lattice: mirror node missing (support not symmetric)");
        nd.mirror = compact[flip];
    }
    return out;
}

struct PointEval {
    double c1_direct, c2, a1, b1, b2, mdiv;
};

class Evaluator {
  public:
    Evaluator(const CommutatorInput& in, double eps, int w_cells)
        : in_(in), eps_(eps), kl_(build_kernel_lattice(in.rho, w_cells)), n_(in.b.n), N_(2 * in.b.n + 1) {}

    PointEval at(const HPoint& p) const {
        const size_t m = kl_.nodes.size();
        thread_local std::vector<double> upw, divw, cvals;
        thread_local std::vector<double> bw;  // N per node
        upw.resize(m);
        divw.resize(m);
        bw.resize(m * N_);
        const bool has_c = in_.c.valid();
        if (has_c) cvals.resize(m);

        double vals[2 * kMaxDim + 2];
        in_.b.batch_eval(p, vals);
        double bp[kMaxDim];
        for (int j = 0; j < N_; ++j) bp[j] = vals[j];
        const double c_p = has_c ? in_.c(p) : 0.0;

        double gradbn[2 * kMaxGroupN], resid[2 * kMaxGroupN];
        for (int k = 0; k < 2 * n_; ++k) gradbn[k] = z_derivative(in_.b.comp[2 * n_], k, p);
        contact_residual_vector(in_.b, p, resid);

        for (size_t i = 0; i < m; ++i) {
            const HPoint pw = mul(p, dilate(eps_, kl_.nodes[i].w));
            in_.b.batch_eval(pw, vals);
            for (int j = 0; j < N_; ++j) bw[i * N_ + j] = vals[j];
            divw[i] = vals[N_];
            upw[i] = (*in_.u)(pw);
            if (has_c) cvals[i] = in_.c(pw);
        }

        PointEval out{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
        const double inv_eps = 1.0 / eps_;
        const double inv_eps2 = inv_eps * inv_eps;
        for (size_t i = 0; i < m; ++i) {
            const KernelNode& nd = kl_.nodes[i];
            const double* bwi = &bw[i * N_];
            const double ui = upw[i];
            // decomposed terms, evaluated at p * delta_eps(w)
            double a1 = 0.0, gw = 0.0, rw = 0.0;
            for (int j = 0; j < 2 * n_; ++j) {
                a1 += (bwi[j] - bp[j]) * nd.vol_zl[j];
                gw += gradbn[j] * nd.w[j];
                rw += resid[j] * nd.w[j];
            }
            out.a1 += a1 * inv_eps * ui;
            out.b1 += (bwi[N_ - 1] - bp[N_ - 1] - eps_ * gw) * inv_eps2 * ui * nd.vol_zl[N_ - 1];
            out.b2 += rw * inv_eps * ui * nd.vol_zl[N_ - 1];
            // direct integrand, evaluated at p q^{-1} = p * delta_eps(-w)
            const size_t mi = nd.mirror;
            const double um = upw[mi];
            const double* bm = &bw[mi * N_];
            out.mdiv += nd.vol_rho * um * divw[mi];
            double s = 0.0;
            for (int j = 0; j < 2 * n_; ++j) s += bp[j] * nd.vol_zl[j] - bm[j] * nd.vol_zr[j];
            s *= inv_eps;
            s += (bp[N_ - 1] - bm[N_ - 1]) * nd.vol_zl[N_ - 1] * inv_eps2;
            out.c1_direct -= um * s;
            if (has_c) out.c2 += um * nd.vol_rho * (c_p - cvals[mi]);
        }
        out.c1_direct -= out.mdiv;
        return out;
    }

  private:
    const CommutatorInput& in_;
    double eps_;
    KernelLattice kl_;
    int n_, N_;
};

struct Accum {
    double c_total = 0.0, c2 = 0.0, a1 = 0.0, b1 = 0.0, b2 = 0.0, b2max = 0.0, mdiv = 0.0;
    double a1_err = 0.0, b1_err = 0.0, dvd = 0.0;
};

Accum accumulate(const CommutatorInput& in, double eps, int w_cells) {
    Evaluator ev(in, eps, w_cells);
    Lattice lat(in.K, in.out_cells);
    const size_t m = lat.size();
    std::vector<PointEval> pe(m);
    std::vector<double> uvals(m), divvals(m), tbn(m);
    parallel_for(m, [&](size_t i) {
        const HPoint p = lat.node(i);
        pe[i] = ev.at(p);
        uvals[i] = (*in.u)(p);
        double vals[2 * kMaxDim + 2];
        in.b.batch_eval(p, vals);
        divvals[i] = vals[2 * in.b.n + 1];
        tbn[i] = z_derivative(in.b.comp[2 * in.b.n], 2 * in.b.n, p);
    });
    Accum acc;
    const double vol = lat.cell_volume();
    for (size_t i = 0; i < m; ++i) {
        const double c1_dec = -(pe[i].mdiv + pe[i].a1 + pe[i].b1 + pe[i].b2);
        acc.c_total += std::fabs(pe[i].c1_direct + pe[i].c2) * vol;
        acc.c2 += std::fabs(pe[i].c2) * vol;
        acc.a1 += std::fabs(pe[i].a1) * vol;
        acc.b1 += std::fabs(pe[i].b1) * vol;
        acc.b2 += std::fabs(pe[i].b2) * vol;
        acc.b2max = std::max(acc.b2max, std::fabs(pe[i].b2));
        acc.mdiv += std::fabs(pe[i].mdiv) * vol;
        acc.a1_err += std::fabs(pe[i].a1 + uvals[i] * (divvals[i] - tbn[i])) * vol;
        acc.b1_err += std::fabs(pe[i].b1 + uvals[i] * tbn[i]) * vol;
        acc.dvd += std::fabs(pe[i].c1_direct - c1_dec) * vol;
    }
    return acc;
}

}  // namespace

CommutatorEval commutator_eval(const CommutatorInput& input, double eps) {
    if (!input.u || !input.u->valid()) throw std::invalid_argument("commutator: missing solution snapshot u");
    if (input.w_cells < 17) throw std::invalid_argument("commutator: w_cells must be at least 17");
    if (!convolution_region_safe(input.u->box(), input.rho, eps, input.K))
        throw std::invalid_argument("commutator: evaluation region K too close to the edge of u's box");

    const Accum full = accumulate(input, eps, input.w_cells);
    // the kernel quadrature converges like h^6, so a 2/3-resolution rerun
    // overshoots the fine-lattice error by (3/2)^6 - 1 ~ 10
    const int coarse_cells = std::max(10, (2 * input.w_cells) / 3);
    const Accum half = accumulate(input, eps, coarse_cells);
    const double ratio = std::pow(static_cast<double>(input.w_cells) / coarse_cells, 6.0) - 1.0;

    CommutatorEval out;
    out.eps = eps;
    out.c_total_l1 = full.c_total;
    out.c2_l1 = full.c2;
    out.a1_l1 = full.a1;
    out.b1_l1 = full.b1;
    out.b2_l1 = full.b2;
    out.b2_linf = full.b2max;
    out.mdiv_l1 = full.mdiv;
    out.a1_limit_err = full.a1_err;
    out.b1_limit_err = full.b1_err;
    out.direct_vs_decomposed = full.dvd;
    out.noise_floor = std::fabs(full.c_total - half.c_total) / std::max(1.0, ratio) + 1e-14 * (1.0 + full.c_total);
    return out;
}

GridField commutator_direct(const CommutatorInput& input, double eps) {
    Evaluator ev(input, eps, input.w_cells);
    ScalarField field([&](const HPoint& p) {
        const PointEval pe = ev.at(p);
        return pe.c1_direct + pe.c2;
    });
    std::array<int, kMaxDim> cells{};
    for (int k = 0; k < input.K.dim(); ++k) cells[k] = input.out_cells;
    return GridField::sample(field, input.K, std::span<const int>(cells.data(), input.K.dim()));
}

CommutatorBreakdown commutator_decomposed(const CommutatorInput& input, double eps) {
    Evaluator ev(input, eps, input.w_cells);
    const int N = input.K.dim();
    std::array<int, kMaxDim> cells{};
    for (int k = 0; k < N; ++k) cells[k] = input.out_cells;
    size_t total = 1;
    for (int k = 0; k < N; ++k) total *= static_cast<size_t>(cells[k] + 1);

    std::vector<std::vector<double>> vals(6, std::vector<double>(total));
    std::array<double, kMaxDim> h{};
    for (int k = 0; k < N; ++k) h[k] = input.K.extent(k) / cells[k];
    parallel_for(total, [&](size_t flat) {
        size_t rem = flat;
        HPoint p(input.K.n());
        for (int k = 0; k < N; ++k) {
            const size_t nk = static_cast<size_t>(cells[k] + 1);
            p[k] = input.K.lo[k] + h[k] * static_cast<double>(rem % nk);
            rem /= nk;
        }
        const PointEval pe = ev.at(p);
        vals[0][flat] = pe.a1;
        vals[1][flat] = pe.b1;
        vals[2][flat] = pe.b2;
        vals[3][flat] = pe.mdiv;
        vals[4][flat] = pe.c2;
        vals[5][flat] = pe.c1_direct;
    });
    CommutatorBreakdown out;
    const std::span<const int> cs(cells.data(), N);
    out.a1 = GridField::from_values(input.K, cs, std::move(vals[0]));
    out.b1 = GridField::from_values(input.K, cs, std::move(vals[1]));
    out.b2 = GridField::from_values(input.K, cs, std::move(vals[2]));
    out.mollified_div = GridField::from_values(input.K, cs, std::move(vals[3]));
    out.c2 = GridField::from_values(input.K, cs, std::move(vals[4]));
    out.c1_direct = GridField::from_values(input.K, cs, std::move(vals[5]));
    const NormSpec one(1.0, input.K);
    out.a1_l1 = lp_norm(out.a1, one);
    out.b1_l1 = lp_norm(out.b1, one);
    out.b2_l1 = lp_norm(out.b2, one);
    out.mdiv_l1 = lp_norm(out.mollified_div, one);
    out.c2_l1 = lp_norm(out.c2, one);
    return out;
}

ConvergenceReport commutator_study(const CommutatorInput& input) {
    if (input.ladder.size() < 4) throw std::invalid_argument("commutator_study: ladder needs >= 4 points");
    for (size_t i = 1; i < input.ladder.size(); ++i)
        if (!(input.ladder[i] < input.ladder[i - 1]))
            throw std::invalid_argument("commutator_study: ladder must be strictly decreasing");

    ConvergenceReport rep;
    rep.experiment = "commutator";
    rep.columns = {"eps", "C_total", "A1_err", "B1_err", "B2_norm", "noise_floor"};
    std::vector<double> totals;
    double worst_floor = 0.0;
    for (double eps : input.ladder) {
        const CommutatorEval ev = commutator_eval(input, eps);
        const double row[6] = {eps, ev.c_total_l1, ev.a1_limit_err, ev.b1_limit_err, ev.b2_l1, ev.noise_floor};
        rep.add_row(row);
        totals.push_back(ev.c_total_l1);
        worst_floor = std::max(worst_floor, ev.noise_floor);
        rep.add_check("direct_vs_decomposed eps=" + format_g17(eps),
                      ev.direct_vs_decomposed <= 2.0 * ev.noise_floor + 1e-12);
    }
    rep.noise_floor = worst_floor;
    if (totals.back() < 10.0 * worst_floor) {
        std::ostringstream err;
        err << "commutator_study: |C_eps| = " << totals.back() << " at eps = " << input.ladder.back()
            << " is below 10x the quadrature noise floor " << worst_floor
            << "; raise w_cells before trusting the trend";
        throw std::runtime_error(err.str());
    }
    rep.fits["c_total_rate"] = fit_loglog(input.ladder, totals);
    bool decreasing = true, increasing = true;
    for (size_t i = 1; i < totals.size(); ++i) {
        decreasing = decreasing && totals[i] < totals[i - 1];
        increasing = increasing && totals[i] > totals[i - 1];
    }
    const double rate = rep.fits["c_total_rate"].slope;
    if (decreasing && rate > 0.0)
        rep.verdict = "CONTACT-VANISHING";
    else if (increasing && rate < 0.0)
        rep.verdict = "NONCONTACT-BLOWUP";
    else
        rep.verdict = "MIXED";
    rep.add_check("monotone_trend", decreasing || increasing);
    return rep;
}

double moment_zj(const Mollifier& rho, int j, int i, int cells_per_axis) {
    Lattice lat(rho.support_box(), cells_per_axis);
    // Z_j(w_i rho) = delta_{ij} rho + w_i Z_j rho for horizontal i, j
    return integrate(lat, [&](const HPoint& w) {
        return (i == j ? rho(w) : 0.0) + w[i] * rho.z(j, w, FrameKind::left);
    });
}

double moment_t_vertical(const Mollifier& rho, int cells_per_axis) {
    Lattice lat(rho.support_box(), cells_per_axis);
    const int tax = 2 * rho.n();
    return integrate(lat, [&](const HPoint& w) { return rho(w) + w[tax] * rho.partial(tax, w); });
}

double moment_t_pair(const Mollifier& rho, int i, int j, int cells_per_axis) {
    Lattice lat(rho.support_box(), cells_per_axis);
    const int tax = 2 * rho.n();
    return integrate(lat, [&](const HPoint& w) { return w[i] * w[j] * rho.partial(tax, w); });
}

}  // namespace heis
