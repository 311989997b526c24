#include "heis/quotients.hpp"

#include <algorithm>
#include <cmath>

namespace heis {

namespace {

HPoint horizontal_part(const HPoint& w) {
    HPoint wh = w;
    wh.t() = 0.0;
    return wh;
}

double pair_horizontal(std::span<const double> g, const HPoint& w) {
    double s = 0.0;
    for (int k = 0; k < 2 * w.n(); ++k) s += g[k] * w[k];
    return s;
}

}  // namespace

double quotient_at(const ScalarField& f, const HPoint& w, double eps, QuotientOrder order, const HPoint& p) {
    switch (order) {
        case QuotientOrder::first:
            return (f(mul(p, dilate(eps, w))) - f(p)) / eps;
        case QuotientOrder::second: {
            const auto g = horizontal_gradient(f, p);
            return (f(mul(p, dilate(eps, w))) - f(p) - eps * pair_horizontal(g, w)) / (eps * eps);
        }
        case QuotientOrder::vertical1:
            return (f(mul(p, dilate(eps, w))) - f(mul(p, dilate(eps, horizontal_part(w))))) / eps;
        case QuotientOrder::vertical2:
            return (f(mul(p, dilate(eps, w))) - f(mul(p, dilate(eps, horizontal_part(w))))) / (eps * eps);
    }
    throw std::logic_error("quotient_at: unreachable");
}

double quotient_limit_at(const ScalarField& f, const HPoint& w, QuotientOrder order, const HPoint& p) {
    switch (order) {
        case QuotientOrder::first:
            return pair_horizontal(horizontal_gradient(f, p), w);
        case QuotientOrder::second: {
            const int m = 2 * p.n();
            const auto H = horizontal_hessian(f, p);
            double quad = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) quad += H[static_cast<size_t>(i) * m + j] * w[i] * w[j];
            return 0.5 * quad + w.t() * t_derivative(f, p);
        }
        case QuotientOrder::vertical1:
            return 0.0;
        case QuotientOrder::vertical2:
            return w.t() * t_derivative(f, p);
    }
    throw std::logic_error("quotient_limit_at: unreachable");
}

double quotient_apriori_bound(const ScalarField& f, const HPoint& w, QuotientOrder order,
                              const NormSpec& omega_norm, int cells_per_axis) {
    const double wh = horizontal_norm(w);
    const double root = 2.0 * std::sqrt(std::fabs(w.t()));
    auto grad_norm = [&]() {
        return lp_norm(PointFn([&](const HPoint& p) {
                           const auto g = horizontal_gradient(f, p);
                           double s = 0.0;
                           for (double v : g) s += v * v;
                           return std::sqrt(s);
                       }),
                       omega_norm, cells_per_axis);
    };
    auto t_norm = [&]() {
        return lp_norm(PointFn([&](const HPoint& p) { return t_derivative(f, p); }), omega_norm, cells_per_axis);
    };
    auto hess_norm = [&]() {
        return lp_norm(PointFn([&](const HPoint& p) {
                           const auto H = horizontal_hessian(f, p);
                           double s = 0.0;
                           for (double v : H) s += v * v;
                           return std::sqrt(s);
                       }),
                       omega_norm, cells_per_axis);
    };
    switch (order) {
        case QuotientOrder::first:
            return (wh + root) * grad_norm();
        case QuotientOrder::vertical1:
            return root * grad_norm();
        case QuotientOrder::vertical2:
            return std::fabs(w.t()) * t_norm();
        case QuotientOrder::second:
            return std::fabs(w.t()) * t_norm() + wh * wh * hess_norm();
    }
    throw std::logic_error("quotient_apriori_bound: unreachable");
}

namespace {

GridField sample_quotient(const ScalarField& f, const HPoint& w, double eps, QuotientOrder order, const Box& A,
                          int cells_per_axis) {
    ScalarField q([&, w, eps, order](const HPoint& p) { return quotient_at(f, w, eps, order, p); });
    std::array<int, kMaxDim> cells{};
    for (int k = 0; k < A.dim(); ++k) cells[k] = cells_per_axis;
    return GridField::sample(q, A, std::span<const int>(cells.data(), A.dim()));
}

}  // namespace

GridField quotient1(const ScalarField& f, const HPoint& w, double eps, const Box& A, int cells_per_axis) {
    return sample_quotient(f, w, eps, QuotientOrder::first, A, cells_per_axis);
}

GridField quotient2(const ScalarField& f, const HPoint& w, double eps, const Box& A, int cells_per_axis) {
    return sample_quotient(f, w, eps, QuotientOrder::second, A, cells_per_axis);
}

ConvergenceReport quotient_limit_error(const QuotientSpec& spec) {
    if (spec.ladder.size() < 4) throw std::invalid_argument("quotient_limit_error: ladder needs >= 4 points");
    for (size_t i = 1; i < spec.ladder.size(); ++i)
        if (!(spec.ladder[i] < spec.ladder[i - 1]))
            throw std::invalid_argument("quotient_limit_error: ladder must be strictly decreasing");
    require_admissible(spec.A, spec.omega, spec.w, spec.ladder.front());

    const NormSpec anorm(spec.s, spec.A);
    const NormSpec onorm(spec.s, spec.omega);
    const double bound = quotient_apriori_bound(spec.f, spec.w, spec.order, onorm, spec.cells_per_axis);

    ConvergenceReport rep;
    rep.experiment = "quotients";
    rep.columns = {"eps", "error", "quotient_norm", "bound", "bound_pass"};
    std::vector<double> errs;
    for (double eps : spec.ladder) {
        const double err = lp_norm(PointFn([&](const HPoint& p) {
                                       return quotient_at(spec.f, spec.w, eps, spec.order, p) -
                                              quotient_limit_at(spec.f, spec.w, spec.order, p);
                                   }),
                                   anorm, spec.cells_per_axis);
        const double qn = lp_norm(
            PointFn([&](const HPoint& p) { return quotient_at(spec.f, spec.w, eps, spec.order, p); }), anorm,
            spec.cells_per_axis);
        const bool ok = qn <= bound * (1.0 + spec.bound_slack) + 1e-14;
        const double row[5] = {eps, err, qn, bound, ok ? 1.0 : 0.0};
        rep.add_row(row);
        rep.add_check("apriori_bound eps=" + format_g17(eps), ok);
        errs.push_back(err);
    }
    // rate fit only where the error is above round-off
    bool all_positive = true;
    for (double e : errs) all_positive = all_positive && e > 1e-13;
    if (all_positive) rep.fits["error_rate"] = fit_loglog(spec.ladder, errs);
    rep.verdict = rep.all_pass() ? "BOUNDS-HOLD" : "BOUND-VIOLATION";
    return rep;
}

Box reachable_box(const Box& omega, const HPoint& w, double eps) {
    const int n = omega.n();
    const int N = omega.dim();
    HPoint lo = omega.lo, hi = omega.hi;
    for (int k = 0; k < 2 * n; ++k) {
        lo[k] -= eps * std::fabs(w[k]);
        hi[k] += eps * std::fabs(w[k]);
    }
    double cross = 0.0;
    for (int j = 0; j < n; ++j) {
        const double mx = std::max(std::fabs(omega.lo[j]), std::fabs(omega.hi[j])) + eps * std::fabs(w[j]);
        const double my = std::max(std::fabs(omega.lo[n + j]), std::fabs(omega.hi[n + j])) + eps * std::fabs(w[n + j]);
        cross += std::fabs(w[j]) * my + std::fabs(w[n + j]) * mx;
    }
    const double tshift = eps * eps * std::fabs(w.t()) + 2.0 * eps * cross;
    // extra slack covers the length-minimizing curves used pointwise
    const double geo = eps * gauge(w);
    lo[N - 1] -= tshift + geo * geo;
    hi[N - 1] += tshift + geo * geo;
    return Box(lo, hi);
}

bool linfty_bound_check(const ScalarField& f, const Box& omega, const HPoint& w, double eps, int cells_per_axis,
                        const Box& lip_box) {
    // Lip(grad_H f) with respect to the path metric: sampled sup of the
    // Frobenius norm of the horizontal Hessian
    double lip = 0.0;
    {
        auto update = [&](const HPoint& p) {
            const auto H = horizontal_hessian(f, p);
            double s = 0.0;
            for (double v : H) s += v * v;
            lip = std::max(lip, std::sqrt(s));
        };
        Lattice lat(lip_box, cells_per_axis);
        for (size_t i = 0; i < lat.size(); ++i) update(lat.node(i));
        for (const HPoint& c : box_corners(lip_box)) update(c);
    }
    const double cap = lip * gauge(w) * gauge(w);
    Lattice lat(omega, cells_per_axis);
    for (size_t i = 0; i < lat.size(); ++i) {
        const HPoint p = lat.node(i);
        const double q2 = quotient_at(f, w, eps, QuotientOrder::second, p);
        if (std::fabs(q2) > cap * (1.0 + 1e-9) + 1e-12) return false;
    }
    return true;
}

}  // namespace heis
