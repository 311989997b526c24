#include "heis/norms.hpp"

#include <algorithm>
#include <vector>

#include "heis/parallel.hpp"

namespace heis {

double integrate(const Lattice& lat, const PointFn& fn) {
    std::vector<double> vals(lat.size());
    parallel_for(lat.size(), [&](size_t i) { vals[i] = fn(lat.node(i)); });
    double acc = 0.0;
    for (double v : vals) acc += v;
    return acc * lat.cell_volume();
}

namespace {

double lp_norm_lattice(const Lattice& lat, const PointFn& fn, double s) {
    if (std::isinf(s)) {
        std::vector<double> vals(lat.size());
        parallel_for(lat.size(), [&](size_t i) { vals[i] = std::fabs(fn(lat.node(i))); });
        double m = 0.0;
        for (double v : vals) m = std::max(m, v);
        return m;
    }
    const double integralv = integrate(lat, [&](const HPoint& p) { return std::pow(std::fabs(fn(p)), s); });
    return std::pow(integralv, 1.0 / s);
}

}  // namespace

double lp_norm(const PointFn& fn, const NormSpec& spec, int cells_per_axis) {
    return lp_norm_lattice(Lattice(spec.region, cells_per_axis), fn, spec.s);
}

double lp_norm(const GridField& field, const NormSpec& spec) {
    if (!field.box().contains_box(spec.region, 1e-12))
        throw std::invalid_argument("lp_norm: region escapes the field's box");
    // lattice resolution follows the field's own spacing
    std::array<int, kMaxDim> cells{};
    for (int k = 0; k < field.dim(); ++k)
        cells[k] = std::max(1, static_cast<int>(std::lround(spec.region.extent(k) / field.spacing(k))));
    Lattice lat(spec.region, std::span<const int>(cells.data(), field.dim()));
    return lp_norm_lattice(lat, [&](const HPoint& p) { return field(p); }, spec.s);
}

double lp_norm(const ScalarField& field, const NormSpec& spec, int cells_per_axis) {
    return lp_norm(PointFn([&](const HPoint& p) { return field(p); }), spec, cells_per_axis);
}

namespace {

template <class Field>
double sobolev_impl(const Field& f, int k, const NormSpec& spec, const Lattice& lat) {
    if (k < 1 || k > 2) throw std::invalid_argument("sobolev_h_norm: order k must be 1 or 2");
    const int m = 2 * spec.region.n();
    double total = lp_norm_lattice(lat, [&](const HPoint& p) { return f(p); }, spec.s);
    for (int j = 0; j < m; ++j)
        total += lp_norm_lattice(lat, [&](const HPoint& p) { return z_derivative(f, j, p); }, spec.s);
    if (k == 2) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                total += lp_norm_lattice(lat, [&](const HPoint& p) { return zz_derivative(f, i, j, p); }, spec.s);
    }
    return total;
}

}  // namespace

double sobolev_h_norm(const ScalarField& field, int k, const NormSpec& spec, int cells_per_axis) {
    return sobolev_impl(field, k, spec, Lattice(spec.region, cells_per_axis));
}

double sobolev_h_norm(const GridField& field, int k, const NormSpec& spec) {
    if (!field.box().contains_box(spec.region, 1e-12))
        throw std::invalid_argument("sobolev_h_norm: region escapes the field's box");
    std::array<int, kMaxDim> cells{};
    for (int kk = 0; kk < field.dim(); ++kk)
        cells[kk] = std::max(1, static_cast<int>(std::lround(spec.region.extent(kk) / field.spacing(kk))));
    Lattice lat(spec.region, std::span<const int>(cells.data(), field.dim()));
    return sobolev_impl(field, k, spec, lat);
}

double chain_rule_residual(const ScalarField& u, const Profile1D& beta, int j, const Box& K,
                           int cells_per_axis, double grid_h) {
    const NormSpec one(1.0, K);
    if (grid_h <= 0.0) {
        const ScalarField w = compose(beta, u);
        return lp_norm(PointFn([&](const HPoint& p) {
                           return z_derivative(w, j, p) - beta.d(u(p), 1) * z_derivative(u, j, p);
                       }),
                       one, cells_per_axis);
    }
    // pad so the central stencils fit inside the sampled box
    HPoint lo = K.lo, hi = K.hi;
    for (int k = 0; k < K.dim(); ++k) {
        lo[k] -= 3.0 * grid_h;
        hi[k] += 3.0 * grid_h;
    }
    const Box padded(lo, hi);
    const GridField gu = GridField::sample(u, padded, grid_h);
    const GridField gw = GridField::sample(compose(beta, u), padded, grid_h);
    return lp_norm(PointFn([&](const HPoint& p) {
                       return z_derivative(gw, j, p) - beta.d(gu(p), 1) * z_derivative(gu, j, p);
                   }),
                   one, cells_per_axis);
}

}  // namespace heis
