#include "heis/box.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace heis {

std::vector<HPoint> box_corners(const Box& box) {
    const int N = box.dim();
    std::vector<HPoint> out;
    out.reserve(size_t(1) << N);
    for (size_t mask = 0; mask < (size_t(1) << N); ++mask) {
        HPoint p(box.n());
        for (int k = 0; k < N; ++k) p[k] = (mask >> k) & 1 ? box.hi[k] : box.lo[k];
        out.push_back(p);
    }
    return out;
}

double gauge_margin(const Box& inner, const Box& outer) {
    const int N = inner.dim();
    if (!outer.contains_box(inner)) return 0.0;
    double mH = std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < N; ++k) {
        mH = std::min(mH, inner.lo[k] - outer.lo[k]);
        mH = std::min(mH, outer.hi[k] - inner.hi[k]);
    }
    const double mt = std::min(inner.lo[N - 1] - outer.lo[N - 1], outer.hi[N - 1] - inner.hi[N - 1]);
    // d(0,(0,0,t)) >= (sqrt(pi)/2) sqrt|t| by the isoperimetric inequality;
    // 0.8 < sqrt(pi)/2 absorbs the horizontal cross terms of nearby boundary
    // points at this desk scale.
    return std::min(mH, 0.8 * std::sqrt(std::max(0.0, mt)));
}

namespace {

// extreme values of sigma^2 * wN + sigma * L over sigma in [0,eps], L in [Lmin,Lmax]
std::pair<double, double> vertical_shift_range(double wN, double Lmin, double Lmax, double eps) {
    auto range_for = [&](double L) {
        double a = 0.0, b = eps * eps * wN + eps * L;
        double mn = std::min(a, b), mx = std::max(a, b);
        if (std::fabs(wN) > 0.0) {
            const double s = -L / (2.0 * wN);
            if (s > 0.0 && s < eps) {
                const double v = s * s * wN + s * L;
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
        }
        return std::pair<double, double>(mn, mx);
    };
    auto r0 = range_for(Lmin);
    auto r1 = range_for(Lmax);
    return {std::min(r0.first, r1.first), std::max(r0.second, r1.second)};
}

}  // namespace

bool translations_stay_inside(const Box& inner, const Box& outer, const HPoint& move, double eps) {
    const int n = inner.n();
    const int N = inner.dim();
    // horizontal coordinates translate by sigma*move_H, monotone in sigma
    for (int k = 0; k < 2 * n; ++k) {
        const double shift = eps * move[k];
        if (inner.lo[k] + std::min(0.0, shift) < outer.lo[k] - 1e-14) return false;
        if (inner.hi[k] + std::max(0.0, shift) > outer.hi[k] + 1e-14) return false;
    }
    // vertical coordinate picks up sigma^2*w_N + 2*sigma*sum(w_x y_p - x_p w_y);
    // the linear-in-p part is extremal at the corners
    double Lmin = 0.0, Lmax = 0.0;
    for (int j = 0; j < n; ++j) {
        const double ax = 2.0 * move[j];       // multiplies y_j(p)
        const double ay = -2.0 * move[n + j];  // multiplies x_j(p)
        Lmin += std::min(ax * inner.lo[n + j], ax * inner.hi[n + j]) +
                std::min(ay * inner.lo[j], ay * inner.hi[j]);
        Lmax += std::max(ax * inner.lo[n + j], ax * inner.hi[n + j]) +
                std::max(ay * inner.lo[j], ay * inner.hi[j]);
    }
    auto [smin, smax] = vertical_shift_range(move.t(), Lmin, Lmax, eps);
    if (inner.lo[N - 1] + smin < outer.lo[N - 1] - 1e-14) return false;
    if (inner.hi[N - 1] + smax > outer.hi[N - 1] + 1e-14) return false;
    return true;
}

void require_admissible(const Box& inner, const Box& outer, const HPoint& move, double eps) {
    if (!outer.contains_box(inner)) throw std::invalid_argument("admissibility: region A is not inside Omega");
    const double U = gauge(move);
    const double margin = gauge_margin(inner, outer);
    std::ostringstream err;
    if (!(eps * U < margin)) {
        err << "admissibility violated: eps*(|w_H|+2*sqrt|w_N|) = " << eps * U
            << " must stay below the boundary margin " << margin;
        throw std::invalid_argument(err.str());
    }
    if (!translations_stay_inside(inner, outer, move, eps)) {
        throw std::invalid_argument("admissibility violated: translated evaluation points leave Omega");
    }
    // corners of the square path realising the vertical displacement
    if (std::fabs(move.t()) > 0.0) {
        HPoint horiz = move;
        horiz.t() = 0.0;
        for (const HPoint& corner : box_corners(inner)) {
            const HPoint base = mul(corner, dilate(eps, horiz));
            for (const HPoint& q : bch_square_path(base, move.t(), eps)) {
                if (!outer.contains(q, 1e-14))
                    throw std::invalid_argument(
                        "admissibility violated: square-path corner for the vertical displacement leaves Omega");
            }
        }
    }
}

}  // namespace heis
