#include "heis/contact.hpp"

#include <cmath>
#include <stdexcept>

namespace heis {

HVectorField::HVectorField(int n_, std::vector<ScalarField> comp_) : n(n_), comp(std::move(comp_)) {
    if (static_cast<int>(comp.size()) != 2 * n + 1)
        throw std::invalid_argument("HVectorField: need 2n+1 frame components");
}

double HVectorField::pointwise_norm(const HPoint& p) const {
    double s = 0.0;
    for (int j = 0; j < dim(); ++j) {
        const double v = comp[j](p);
        s += v * v;
    }
    return std::sqrt(s);
}

HPoint HVectorField::coordinate_velocity(const HPoint& p) const {
    HPoint v(n);
    double vt = comp[2 * n](p);
    for (int j = 0; j < n; ++j) {
        const double bx = comp[j](p);
        const double by = comp[n + j](p);
        v[j] = bx;
        v[n + j] = by;
        vt += 2.0 * p.y(j) * bx - 2.0 * p.x(j) * by;
    }
    v.t() = vt;
    return v;
}

void HVectorField::coordinate_jacobian(const HPoint& p, double* J) const {
    const int N = dim();
    for (int i = 0; i < 2 * n; ++i)
        for (int k = 0; k < N; ++k) J[i * N + k] = comp[i].partial(k, p);
    for (int k = 0; k < N; ++k) {
        double d = comp[2 * n].partial(k, p);
        for (int j = 0; j < n; ++j) {
            d += 2.0 * p.y(j) * comp[j].partial(k, p) - 2.0 * p.x(j) * comp[n + j].partial(k, p);
            if (k == n + j) d += 2.0 * comp[j](p);
            if (k == j) d -= 2.0 * comp[n + j](p);
        }
        J[(N - 1) * N + k] = d;
    }
}

ScalarField HVectorField::divergence_field() const {
    if (div.valid()) return div;
    HVectorField self = *this;
    return ScalarField([self](const HPoint& p) {
        double s = 0.0;
        for (int j = 0; j < self.dim(); ++j) s += z_derivative(self.comp[j], j, p);
        return s;
    });
}

void HVectorField::batch_eval(const HPoint& p, double* out) const {
    if (batch) {
        batch(p, out);
        return;
    }
    const int N = dim();
    for (int j = 0; j < N; ++j) out[j] = comp[j](p);
    if (div.valid()) {
        out[N] = div(p);
    } else {
        double s = 0.0;
        for (int j = 0; j < N; ++j) s += z_derivative(comp[j], j, p);
        out[N] = s;
    }
}

HVectorField perturbed_vertical(const ScalarField& psi, int n, double lambda) {
    std::vector<ScalarField> comp(2 * n + 1);
    for (int j = 0; j < n; ++j) {
        comp[j] = z_field(psi, n + j, n);               // Y_j psi
        comp[n + j] = z_field(psi, j, n).scaled(-1.0);  // -X_j psi
    }
    comp[2 * n] = psi.scaled(-lambda);
    HVectorField b(n, std::move(comp));
    b.vertical_factor = lambda;
    b.is_contact = (lambda == 4.0);
    // div b = sum_j [X_j(Y_j psi) - Y_j(X_j psi)] - lambda T psi = -(4n+lambda) T psi
    const double dcoef = -(4.0 * n + lambda);
    ScalarField cpsi = psi;
    b.div = ScalarField([cpsi, n, dcoef](const HPoint& p) { return dcoef * cpsi.partial(2 * n, p); });
    if (psi.has_partials()) {
        ScalarField cp2 = psi;
        b.batch = [cp2, n, lambda, dcoef](const HPoint& p, double* out) {
            const Jet1 jet = cp2.jet1(p);
            const int tax = 2 * n;
            for (int j = 0; j < n; ++j) {
                out[j] = jet.d[n + j] - 2.0 * p.x(j) * jet.d[tax];     // Y_j psi
                out[n + j] = -(jet.d[j] + 2.0 * p.y(j) * jet.d[tax]);  // -X_j psi
            }
            out[tax] = -lambda * jet.v;
            out[tax + 1] = dcoef * jet.d[tax];
        };
    }
    return b;
}

HVectorField contact_from_psi(const ScalarField& psi, int n) { return perturbed_vertical(psi, n, 4.0); }

void contact_residual_vector(const HVectorField& b, const HPoint& p, double* out) {
    const int n = b.n;
    // J acting on frame components: (b_X, b_Y, b_N) -> (-b_Y, b_X, 0)
    for (int j = 0; j < n; ++j) {
        out[j] = z_derivative(b.comp[2 * n], j, p) - 4.0 * b.comp[n + j](p);
        out[n + j] = z_derivative(b.comp[2 * n], n + j, p) + 4.0 * b.comp[j](p);
    }
}

double contact_residual(const HVectorField& b, const Box& K, double s, int cells_per_axis) {
    const NormSpec spec(s, K);
    return lp_norm(PointFn([&](const HPoint& p) {
                       double r[2 * kMaxGroupN];
                       contact_residual_vector(b, p, r);
                       double sq = 0.0;
                       for (int j = 0; j < 2 * b.n; ++j) sq += r[j] * r[j];
                       return std::sqrt(sq);
                   }),
                   spec, cells_per_axis);
}

}  // namespace heis
