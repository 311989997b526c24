#ifndef HEIS_CONTACT_HPP
#define HEIS_CONTACT_HPP

#include <vector>

#include "heis/frame_calculus.hpp"
#include "heis/norms.hpp"
#include "heis/scalar_field.hpp"

namespace heis {

// Vector field written in the left-invariant frame: b = sum_j b_j Z_j.
// The frame is orthonormal for the fixed metric, so |b|^2 = sum b_j^2.
struct HVectorField {
    int n = 1;
    std::vector<ScalarField> comp;  // 2n+1 frame components
    bool is_contact = false;
    double vertical_factor = 0.0;

    HVectorField() = default;
    HVectorField(int n_, std::vector<ScalarField> comp_);

    int dim() const { return 2 * n + 1; }
    double component(int j, const HPoint& p) const { return comp[j](p); }
    double pointwise_norm(const HPoint& p) const;

    // velocity in Euclidean coordinates: sum_j b_j(p) Z_j(p)
    HPoint coordinate_velocity(const HPoint& p) const;
    // row-major N x N Jacobian of the coordinate velocity (needs component partials)
    void coordinate_jacobian(const HPoint& p, double* J) const;

    // div b = sum_j Z_j b_j
    ScalarField divergence_field() const;

    // fills comp_1..comp_N and div b in one call (2n+2 slots); generated
    // fields share the underlying derivative evaluations
    void batch_eval(const HPoint& p, double* out) const;

    std::function<void(const HPoint&, double*)> batch;  // optional fast path
    ScalarField div;                                    // optional closed-form divergence
};

// generated field with vertical factor 4: the flow-compatible structure
//   b_j = Y_j psi (j < n),  b_{n+j} = -X_j psi,  b_N = -4 psi
HVectorField contact_from_psi(const ScalarField& psi, int n);

// negative control: b = -lambda psi T - J(grad_H psi); contact iff lambda = 4
HVectorField perturbed_vertical(const ScalarField& psi, int n, double lambda);

// pointwise structural residual grad_H b_N + 4 J(b) (horizontal 2n-vector);
// identically zero exactly for fields with the factor-4 contact structure
void contact_residual_vector(const HVectorField& b, const HPoint& p, double* out);

// L^s(K) norm of the pointwise Euclidean length of the residual vector
double contact_residual(const HVectorField& b, const Box& K, double s, int cells_per_axis);

}  // namespace heis

#endif
