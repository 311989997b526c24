#ifndef HEIS_FRAME_CALCULUS_HPP
#define HEIS_FRAME_CALCULUS_HPP

#include <vector>

#include "heis/point.hpp"
#include "heis/scalar_field.hpp"

namespace heis {

// Frame index j: [0,n) -> X_j, [n,2n) -> Y_{j-n}, 2n -> T.
//   X_j = d/dx_j + 2 y_j d/dt      X_j^r = d/dx_j - 2 y_j d/dt
//   Y_j = d/dy_j - 2 x_j d/dt      Y_j^r = d/dy_j + 2 x_j d/dt
// The only nonzero brackets are [Y_j, X_j] = 4T, so second frame derivatives
// are kept unsymmetrized throughout.
struct FrameOp {
    int coord;    // differentiated coordinate axis
    int twist;    // coordinate multiplying the d/dt part (-1: none)
    double coef;  // coefficient of w_twist * d/dt
};

inline FrameOp frame_op(int n, int j, FrameKind kind = FrameKind::left) {
    const double s = (kind == FrameKind::left) ? 1.0 : -1.0;
    if (j == 2 * n) return {2 * n, -1, 0.0};
    if (j < n) return {j, n + j, 2.0 * s};
    return {j, j - n, -2.0 * s};
}

// first frame derivative of any field exposing partial(a,p)
template <class Field>
double z_derivative(const Field& f, int j, const HPoint& p, FrameKind kind = FrameKind::left) {
    const FrameOp op = frame_op(p.n(), j, kind);
    double v = f.partial(op.coord, p);
    if (op.twist >= 0) v += op.coef * p[op.twist] * f.partial(2 * p.n(), p);
    return v;
}

// second frame derivative Z_i Z_j f (unsymmetrized), needs partial(a,b,p)
template <class Field>
double zz_derivative(const Field& f, int i, int j, const HPoint& p, FrameKind kind = FrameKind::left) {
    const int n = p.n();
    const int tax = 2 * n;
    const FrameOp oi = frame_op(n, i, kind);
    const FrameOp oj = frame_op(n, j, kind);
    double v = f.partial(oi.coord, oj.coord, p);
    if (oi.twist >= 0) v += oi.coef * p[oi.twist] * f.partial(tax, oj.coord, p);
    if (oj.twist >= 0) {
        // Z_i applied to the coefficient w_{oj.twist}: only the coordinate part acts
        if (oi.coord == oj.twist) v += oj.coef * f.partial(tax, p);
        double inner = f.partial(oi.coord, tax, p);
        if (oi.twist >= 0) inner += oi.coef * p[oi.twist] * f.partial(tax, tax, p);
        v += oj.coef * p[oj.twist] * inner;
    }
    return v;
}

template <class Field>
double t_derivative(const Field& f, const HPoint& p) {
    return f.partial(2 * p.n(), p);
}

// T(Z_i f); the frame coefficients are t-independent
template <class Field>
double tz_derivative(const Field& f, int i, const HPoint& p) {
    const int n = p.n();
    const int tax = 2 * n;
    const FrameOp op = frame_op(n, i, FrameKind::left);
    double v = f.partial(tax, op.coord, p);
    if (op.twist >= 0) v += op.coef * p[op.twist] * f.partial(tax, tax, p);
    return v;
}

template <class Field>
std::vector<double> horizontal_gradient(const Field& f, const HPoint& p) {
    const int n = p.n();
    std::vector<double> g(2 * n);
    for (int j = 0; j < 2 * n; ++j) g[j] = z_derivative(f, j, p);
    return g;
}

// row-major 2n x 2n matrix H[i][j] = Z_i Z_j f
template <class Field>
std::vector<double> horizontal_hessian(const Field& f, const HPoint& p) {
    const int m = 2 * p.n();
    std::vector<double> H(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) H[static_cast<size_t>(i) * m + j] = zz_derivative(f, i, j, p);
    return H;
}

// Z_j f as a ScalarField carrying partials up to order 2 (consumes order 3 of f)
ScalarField z_field(const ScalarField& f, int j, int n, FrameKind kind = FrameKind::left);

// field composed with the inversion map p -> p^{-1} (partials flip sign per order)
ScalarField compose_inverse(const ScalarField& f);

}  // namespace heis

#endif
