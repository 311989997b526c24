#include "heis/counterexample.hpp"

#include <cmath>
#include <stdexcept>

namespace heis {

namespace {

// normalized (1-s^2)^3 bump: unit mass on (-1,1)
constexpr double kBumpScale = 35.0 / 32.0;

Profile1D unit_poly_bump() {
    Profile1D base = poly_bump_profile();
    return Profile1D{[base](double s, int k) { return kBumpScale * base.d(s, k); }};
}

}  // namespace

double time_profile_g1() { return 35.0 / 16.0; }
double time_profile_g2() { return 84.0 * std::sqrt(5.0) / 25.0; }

OscillationParams OscillationParams::coupled(int n, int i, double beta) {
    if (i < 0 || i >= 2 * n) throw std::invalid_argument("OscillationParams: index i out of range");
    OscillationParams p;
    p.n = n;
    p.i = i;
    p.beta = beta;
    p.G1 = time_profile_g1();
    p.G2 = time_profile_g2();
    // each horizontal factor is sigma*g(sigma w_k), sigma = sqrt(2n), so the
    // support box fits inside the unit ball of R^{2n}
    const double sigma = std::sqrt(2.0 * n);
    p.dphi_l1 = sigma * p.G1;
    p.F1 = 1.0 + 2.0 * n * sigma * p.G1;
    p.F2 = p.F1 + 2.0 * n * sigma * sigma * p.G2 + 2.0 * n * (2.0 * n - 1.0) * (sigma * p.G1) * (sigma * p.G1);
    p.M = 4.0 * p.G2 / (p.dphi_l1 * p.G1);
    p.delta = p.M * beta * beta;
    return p;
}

ScalarField oscillating_psi(const OscillationParams& params) {
    const int n = params.n;
    const double sigma = std::sqrt(2.0 * n);
    Profile1D g = unit_poly_bump();
    // horizontal factor sigma * g(sigma w_k / beta); time factor g(t / delta)
    Profile1D hg{[g, sigma](double s, int k) { return sigma * g.d(s, k); }};
    std::vector<AxisFactor> factors(2 * n + 1);
    for (int k = 0; k < 2 * n; ++k) factors[k] = AxisFactor{hg, 0.0, params.beta / sigma};
    factors[2 * n] = AxisFactor{g, 0.0, params.delta};
    return separable_field(n, std::move(factors));
}

Box oscillation_support(const OscillationParams& params) {
    const int n = params.n;
    const double sigma = std::sqrt(2.0 * n);
    HPoint lo(n), hi(n);
    for (int k = 0; k < 2 * n; ++k) {
        lo[k] = -params.beta / sigma;
        hi[k] = params.beta / sigma;
    }
    lo.t() = -params.delta;
    hi.t() = params.delta;
    return Box(lo, hi);
}

double bv_lower_bound(const HVectorField& b, int component, const Box& K, int cells_per_axis) {
    const ScalarField& f = b.comp.at(component);
    const int N = K.dim();
    return lp_norm(PointFn([&](const HPoint& p) {
                       double s = 0.0;
                       for (int k = 0; k < N; ++k) {
                           const double d = f.partial(k, p);
                           s += d * d;
                       }
                       return std::sqrt(s);
                   }),
                   NormSpec(1.0, K), cells_per_axis);
}

ConvergenceReport scaling_study(int n, int i, std::span<const double> betas, const Box& omega, int cells_per_axis) {
    if (betas.size() < 4) throw std::invalid_argument("scaling_study: ladder needs >= 4 points");
    for (size_t k = 1; k < betas.size(); ++k)
        if (!(betas[k] < betas[k - 1])) throw std::invalid_argument("scaling_study: ladder must decrease");

    ConvergenceReport rep;
    rep.experiment = "counterexample";
    rep.columns = {"beta", "delta", "L1", "W1", "W2", "TZ_i", "bv_lower", "w21_norm", "bv_ratio"};
    const double slack = 0.05;
    std::vector<double> tz_vals, w21_vals, ratios, l1_vals;

    for (double beta : betas) {
        const OscillationParams params = OscillationParams::coupled(n, i, beta);
        const Box supp = oscillation_support(params);
        if (!omega.contains_box(supp))
            throw std::invalid_argument("scaling_study: scaled support overflows the working box");
        const ScalarField psi = oscillating_psi(params);
        const NormSpec one(1.0, supp);

        const double l1 = lp_norm(psi, one, cells_per_axis);
        double w1 = 0.0, w2 = 0.0;
        bool first_bounds_ok = true, second_bounds_ok = true;
        for (int j = 0; j < 2 * n; ++j) {
            const double nz = lp_norm(PointFn([&](const HPoint& p) { return z_derivative(psi, j, p); }), one,
                                      cells_per_axis);
            w1 += nz;
            const double cap1 = std::pow(beta, 2 * n - 1) * params.delta * params.F1 +
                                2.0 * std::pow(beta, 2 * n + 1) * params.G1;
            first_bounds_ok = first_bounds_ok && nz <= cap1 * (1.0 + slack);
        }
        for (int k = 0; k < 2 * n; ++k)
            for (int j = 0; j < 2 * n; ++j) {
                const double nzz = lp_norm(PointFn([&](const HPoint& p) { return zz_derivative(psi, k, j, p); }),
                                           one, cells_per_axis);
                w2 += nzz;
                const double cap2 = std::pow(beta, 2 * n - 2) * params.delta * params.F2 +
                                    2.0 * std::pow(beta, 2 * n) * (params.G1 + 2.0 * params.F1 * params.G1) +
                                    4.0 * std::pow(beta, 2 * n + 2) / params.delta * params.G2;
                second_bounds_ok = second_bounds_ok && nzz <= cap2 * (1.0 + slack);
            }
        const double tz = lp_norm(PointFn([&](const HPoint& p) { return tz_derivative(psi, i, p); }), one,
                                  cells_per_axis);
        const double lead = std::pow(beta, 2 * n - 1) * params.dphi_l1 * params.G1;
        const double neg = 2.0 * std::pow(beta, 2 * n + 1) / params.delta * params.G2;
        const double w21 = l1 + w1 + w2;

        // the component whose formula contains Z_i psi (whose t-partial is T Z_i psi)
        const int comp = (i < n) ? n + i : i - n;
        const HVectorField b = contact_from_psi(psi, n);
        const double bv = bv_lower_bound(b, comp, supp, cells_per_axis);

        const double row[9] = {beta, params.delta, l1, w1, w2, tz, bv, w21, bv / w21};
        rep.add_row(row);
        rep.add_check("first_order_bound beta=" + format_g17(beta), first_bounds_ok);
        rep.add_check("second_order_bound beta=" + format_g17(beta), second_bounds_ok);
        rep.add_check("tz_lower_bound beta=" + format_g17(beta), tz >= (lead - neg) * (1.0 - slack));
        rep.add_check("coupling_halves_leading beta=" + format_g17(beta),
                      std::fabs(neg - 0.5 * lead) <= slack * 0.5 * lead);
        rep.add_check("tz_above_half_leading beta=" + format_g17(beta), tz >= 0.5 * lead * (1.0 - slack));
        rep.add_check("bv_dominates_tz beta=" + format_g17(beta), bv >= tz * (1.0 - 1e-9));
        tz_vals.push_back(tz);
        w21_vals.push_back(w21);
        ratios.push_back(bv / w21);
        l1_vals.push_back(l1);
    }

    bool ratio_up = true;
    for (size_t k = 1; k < ratios.size(); ++k) ratio_up = ratio_up && ratios[k] > ratios[k - 1];
    rep.add_check("bv_to_w21_ratio_increasing", ratio_up);

    rep.fits["tz_exponent"] = fit_loglog(betas, tz_vals);
    rep.fits["w21_exponent"] = fit_loglog(betas, w21_vals);
    rep.fits["l1_exponent"] = fit_loglog(betas, l1_vals);
    const bool separation = rep.fits["tz_exponent"].slope <= 2.0 * n - 1 + 0.1 &&
                            rep.fits["w21_exponent"].slope >= 2.0 * n - 0.1 && ratio_up;
    rep.verdict = separation ? "NO-UNIFORM-BV-BOUND" : "INCONCLUSIVE";
    return rep;
}

}  // namespace heis
