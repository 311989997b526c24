#include "heis/deformation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "heis/report.hpp"

namespace heis {

namespace {

double horizontal_laplacian(const ScalarField& f, const HPoint& p) {
    double s = 0.0;
    for (int i = 0; i < 2 * p.n(); ++i) s += zz_derivative(f, i, i, p);
    return s;
}

double full_frame_pairing(const HVectorField& b, const ScalarField& f, const HPoint& p) {
    double s = 0.0;
    for (int j = 0; j < b.dim(); ++j) s += b.comp[j](p) * z_derivative(f, j, p);
    return s;
}

double defining_at(const DeformationInput& in, const HPoint& p, const ScalarField& divb) {
    const int m = 2 * in.b.n;
    double grad_pair = 0.0;
    for (int j = 0; j < m; ++j) grad_pair += z_derivative(in.f, j, p) * z_derivative(in.g, j, p);
    return -0.5 * (full_frame_pairing(in.b, in.f, p) * horizontal_laplacian(in.g, p) +
                   full_frame_pairing(in.b, in.g, p) * horizontal_laplacian(in.f, p) -
                   divb(p) * grad_pair);
}

double symmetric_part_at(const DeformationInput& in, const HPoint& p) {
    const int m = 2 * in.b.n;
    double zf[2 * kMaxGroupN], zg[2 * kMaxGroupN];
    for (int j = 0; j < m; ++j) {
        zf[j] = z_derivative(in.f, j, p);
        zg[j] = z_derivative(in.g, j, p);
    }
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const double sym = 0.5 * (z_derivative(in.b.comp[j], i, p) + z_derivative(in.b.comp[i], j, p));
            acc += sym * zf[i] * zg[j];
        }
    return acc;
}

double jterm_at(const DeformationInput& in, const HPoint& p) {
    const int m = 2 * in.b.n;
    double resid[2 * kMaxGroupN];
    contact_residual_vector(in.b, p, resid);
    const double tf = t_derivative(in.f, p);
    const double tg = t_derivative(in.g, p);
    double acc = 0.0;
    for (int j = 0; j < m; ++j)
        acc += resid[j] * (tg * z_derivative(in.f, j, p) + tf * z_derivative(in.g, j, p));
    return 0.5 * acc;
}

}  // namespace

double dsym_defining(const DeformationInput& input) {
    const ScalarField divb = input.b.divergence_field();
    Lattice lat(input.region, input.cells_per_axis);
    return integrate(lat, [&](const HPoint& p) { return defining_at(input, p, divb); });
}

double dsym_explicit(const DeformationInput& input) {
    Lattice lat(input.region, input.cells_per_axis);
    return integrate(lat, [&](const HPoint& p) { return symmetric_part_at(input, p) + jterm_at(input, p); });
}

double dsym_jterm(const DeformationInput& input) {
    Lattice lat(input.region, input.cells_per_axis);
    return integrate(lat, [&](const HPoint& p) { return jterm_at(input, p); });
}

double dsym_jterm_l1(const DeformationInput& input) {
    Lattice lat(input.region, input.cells_per_axis);
    return integrate(lat, [&](const HPoint& p) { return std::fabs(jterm_at(input, p)); });
}

std::string DeformationRecord::to_json_text() const {
    std::ostringstream os;
    os << "{\n"
       << "  \"value_defining\": " << format_g17(value_defining) << ",\n"
       << "  \"value_explicit\": " << format_g17(value_explicit) << ",\n"
       << "  \"jterm\": " << format_g17(jterm) << ",\n"
       << "  \"jterm_l1\": " << format_g17(jterm_l1) << ",\n"
       << "  \"bound_rhs\": " << format_g17(bound_rhs) << ",\n"
       << "  \"quad_tol\": " << format_g17(quad_tol) << ",\n"
       << "  \"pass_equality\": " << (pass_equality ? "true" : "false") << ",\n"
       << "  \"pass_bound\": " << (pass_bound ? "true" : "false") << "\n"
       << "}";
    return os.str();
}

DeformationRecord deformation_equality(const DeformationInput& input) {
    DeformationRecord rec;
    rec.value_defining = dsym_defining(input);
    rec.value_explicit = dsym_explicit(input);
    rec.jterm = dsym_jterm(input);
    rec.jterm_l1 = dsym_jterm_l1(input);
    DeformationInput coarse = input;
    coarse.cells_per_axis = std::max(8, input.cells_per_axis / 2);
    const double d_coarse = dsym_defining(coarse);
    const double e_coarse = dsym_explicit(coarse);
    rec.quad_tol = std::fabs(rec.value_defining - d_coarse) + std::fabs(rec.value_explicit - e_coarse) +
                   1e-10 * (1.0 + std::fabs(rec.value_defining) + std::fabs(rec.value_explicit));
    rec.pass_equality = std::fabs(rec.value_defining - rec.value_explicit) <= 2.0 * rec.quad_tol;
    return rec;
}

bool deformation_bound_check(const DeformationInput& input, double s_prime, DeformationRecord* record) {
    if (!input.b.is_contact)
        throw std::invalid_argument(
            "deformation_bound_check: the deformation-type bound requires a contact field");
    const int m = 2 * input.b.n;
    const NormSpec sp(s_prime, input.region);
    double c = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            c += lp_norm(PointFn([&](const HPoint& p) { return z_derivative(input.b.comp[j], i, p); }), sp,
                         input.cells_per_axis);
    const double conj = (s_prime == 1.0) ? std::numeric_limits<double>::infinity() : s_prime / (s_prime - 1.0);
    const double r = std::isinf(conj) ? std::numeric_limits<double>::infinity() : 2.0 * conj;
    const NormSpec rn(r, input.region);
    auto grad_len = [](const ScalarField& f) {
        return PointFn([f](const HPoint& p) {
            double s = 0.0;
            for (int j = 0; j < 2 * p.n(); ++j) {
                const double d = z_derivative(f, j, p);
                s += d * d;
            }
            return std::sqrt(s);
        });
    };
    const double rhs =
        c * lp_norm(grad_len(input.f), rn, input.cells_per_axis) * lp_norm(grad_len(input.g), rn, input.cells_per_axis);
    DeformationRecord rec = deformation_equality(input);
    rec.bound_rhs = rhs;
    rec.pass_bound = std::fabs(rec.value_explicit) <= rhs * 1.05 + 1e-14;
    if (record) *record = rec;
    return rec.pass_bound;
}

}  // namespace heis
