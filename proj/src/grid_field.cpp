#include "heis/grid_field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "heis/parallel.hpp"

namespace heis {

namespace {
std::array<int, kMaxDim> cells_for_spacing(const Box& box, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("GridField: spacing must be positive");
    std::array<int, kMaxDim> c{};
    for (int k = 0; k < box.dim(); ++k) c[k] = std::max(1, static_cast<int>(std::ceil(box.extent(k) / h - 1e-12)));
    return c;
}
}  // namespace

GridField GridField::sample(const ScalarField& f, const Box& box, double h, Extension ext) {
    auto c = cells_for_spacing(box, h);
    return sample(f, box, std::span<const int>(c.data(), box.dim()), ext);
}

GridField GridField::sample(const ScalarField& f, const Box& box, std::span<const int> cells, Extension ext) {
    GridField g;
    g.box_ = box;
    g.ext_ = ext;
    const int N = box.dim();
    if (static_cast<int>(cells.size()) != N) throw std::invalid_argument("GridField::sample: cells size mismatch");
    size_t total = 1;
    for (int k = 0; k < N; ++k) {
        if (cells[k] < 1) throw std::invalid_argument("GridField::sample: cells must be positive");
        g.cells_[k] = cells[k];
        g.h_[k] = box.extent(k) / cells[k];
        total *= static_cast<size_t>(cells[k] + 1);
    }
    g.values_.resize(total);
    parallel_for(total, [&](size_t flat) {
        size_t rem = flat;
        HPoint p(box.n());
        for (int k = 0; k < N; ++k) {
            const size_t nk = static_cast<size_t>(g.cells_[k] + 1);
            p[k] = g.node_coord(k, static_cast<int>(rem % nk));
            rem /= nk;
        }
        g.values_[flat] = f(p);
    });
    return g;
}

GridField GridField::from_values(const Box& box, std::span<const int> cells, std::vector<double> values,
                                 Extension ext) {
    GridField g;
    g.box_ = box;
    g.ext_ = ext;
    const int N = box.dim();
    size_t total = 1;
    for (int k = 0; k < N; ++k) {
        g.cells_[k] = cells[k];
        g.h_[k] = box.extent(k) / cells[k];
        total *= static_cast<size_t>(cells[k] + 1);
    }
    if (values.size() != total) throw std::invalid_argument("GridField::from_values: value count mismatch");
    g.values_ = std::move(values);
    return g;
}

double GridField::max_spacing() const {
    double m = 0.0;
    for (int k = 0; k < dim(); ++k) m = std::max(m, h_[k]);
    return m;
}

double GridField::at(std::span<const int> idx) const {
    size_t flat = 0, stride = 1;
    for (int k = 0; k < dim(); ++k) {
        flat += stride * static_cast<size_t>(idx[k]);
        stride *= static_cast<size_t>(cells_[k] + 1);
    }
    return values_[flat];
}

double GridField::interp_impl(const HPoint& p, bool* outside) const {
    const int N = dim();
    int base[kMaxDim];
    double frac[kMaxDim];
    *outside = false;
    for (int k = 0; k < N; ++k) {
        const double s = (p[k] - box_.lo[k]) / h_[k];
        if (s < -1e-12 || s > cells_[k] + 1e-12) {
            *outside = true;
            return 0.0;
        }
        int i = static_cast<int>(std::floor(s));
        if (i < 0) i = 0;
        if (i > cells_[k] - 1) i = cells_[k] - 1;
        base[k] = i;
        frac[k] = s - i;
    }
    double acc = 0.0;
    const size_t corners = size_t(1) << N;
    for (size_t mask = 0; mask < corners; ++mask) {
        double w = 1.0;
        size_t flat = 0, stride = 1;
        for (int k = 0; k < N; ++k) {
            const int bit = (mask >> k) & 1;
            w *= bit ? frac[k] : 1.0 - frac[k];
            flat += stride * static_cast<size_t>(base[k] + bit);
            stride *= static_cast<size_t>(cells_[k] + 1);
        }
        acc += w * values_[flat];
    }
    return acc;
}

double GridField::operator()(const HPoint& p) const {
    bool outside = false;
    const double v = interp_impl(p, &outside);
    if (outside) {
        if (ext_ == Extension::error) {
            std::ostringstream err;
            err << "GridField: evaluation outside the box (extension policy = error)";
            throw std::domain_error(err.str());
        }
        return 0.0;
    }
    return v;
}

double GridField::partial(int a, const HPoint& p) const {
    const double h = h_[a];
    HPoint q = p;
    // central where the stencil fits, one-sided second order at the faces
    if (p[a] - h >= box_.lo[a] - 1e-12 && p[a] + h <= box_.hi[a] + 1e-12) {
        q[a] = p[a] + h;
        const double fp = (*this)(q);
        q[a] = p[a] - h;
        const double fm = (*this)(q);
        return (fp - fm) / (2.0 * h);
    }
    const double dir = (p[a] - h < box_.lo[a]) ? 1.0 : -1.0;
    if (p[a] + dir * 2.0 * h < box_.lo[a] - 1e-12 || p[a] + dir * 2.0 * h > box_.hi[a] + 1e-12)
        throw std::domain_error("GridField::partial: stencil does not fit inside the box");
    const double f0 = (*this)(p);
    q[a] = p[a] + dir * h;
    const double f1 = (*this)(q);
    q[a] = p[a] + dir * 2.0 * h;
    const double f2 = (*this)(q);
    return dir * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
}

double GridField::partial(int a, int b, const HPoint& p) const {
    if (a == b) {
        const double h = h_[a];
        HPoint q = p;
        if (p[a] - h >= box_.lo[a] - 1e-12 && p[a] + h <= box_.hi[a] + 1e-12) {
            q[a] = p[a] + h;
            const double fp = (*this)(q);
            q[a] = p[a] - h;
            const double fm = (*this)(q);
            return (fp - 2.0 * (*this)(p) + fm) / (h * h);
        }
        const double dir = (p[a] - h < box_.lo[a]) ? 1.0 : -1.0;
        if (p[a] + dir * 3.0 * h < box_.lo[a] - 1e-12 || p[a] + dir * 3.0 * h > box_.hi[a] + 1e-12)
            throw std::domain_error("GridField::partial: stencil does not fit inside the box");
        const double f0 = (*this)(p);
        q[a] = p[a] + dir * h;
        const double f1 = (*this)(q);
        q[a] = p[a] + dir * 2.0 * h;
        const double f2 = (*this)(q);
        q[a] = p[a] + dir * 3.0 * h;
        const double f3 = (*this)(q);
        return (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3) / (h * h);
    }
    // nested first-derivative stencil along axis a of the axis-b derivative
    const double h = h_[a];
    HPoint q = p;
    if (p[a] - h >= box_.lo[a] - 1e-12 && p[a] + h <= box_.hi[a] + 1e-12) {
        q[a] = p[a] + h;
        const double fp = partial(b, q);
        q[a] = p[a] - h;
        const double fm = partial(b, q);
        return (fp - fm) / (2.0 * h);
    }
    const double dir = (p[a] - h < box_.lo[a]) ? 1.0 : -1.0;
    const double f0 = partial(b, p);
    q[a] = p[a] + dir * h;
    const double f1 = partial(b, q);
    q[a] = p[a] + dir * 2.0 * h;
    const double f2 = partial(b, q);
    return dir * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
}

ScalarField GridField::as_field() const {
    auto self = std::make_shared<GridField>(*this);
    return ScalarField([self](const HPoint& p) { return (*self)(p); },
                       [self](const HPoint& p, std::span<const int> ax) {
                           if (ax.size() == 1) return self->partial(ax[0], p);
                           if (ax.size() == 2) return self->partial(ax[0], ax[1], p);
                           throw std::invalid_argument("GridField: stencil partials supported up to order 2");
                       });
}

void GridField::save(std::ostream& os) const {
    os << "heisgrid 1\n" << n() << "\n";
    char buf[64];
    for (int k = 0; k < dim(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %d\n", box_.lo[k], box_.hi[k], cells_[k]);
        os << buf;
    }
    os << (ext_ == Extension::zero ? "zero" : "error") << "\n";
    for (double v : values_) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        os << buf;
    }
}

GridField GridField::load(std::istream& is) {
    std::string magic;
    int version = 0;
    is >> magic >> version;
    if (magic != "heisgrid" || version != 1) throw std::runtime_error("GridField::load: unrecognized format");
    int n = 0;
    is >> n;
    HPoint lo(n), hi(n);
    std::array<int, kMaxDim> cells{};
    for (int k = 0; k < 2 * n + 1; ++k) is >> lo[k] >> hi[k] >> cells[k];
    std::string ext;
    is >> ext;
    Box box(lo, hi);
    size_t total = 1;
    for (int k = 0; k < box.dim(); ++k) total *= static_cast<size_t>(cells[k] + 1);
    std::vector<double> vals(total);
    for (size_t i = 0; i < total; ++i) is >> vals[i];
    if (!is) throw std::runtime_error("GridField::load: truncated value stream");
    return from_values(box, std::span<const int>(cells.data(), box.dim()), std::move(vals),
                       ext == "error" ? Extension::error : Extension::zero);
}

void GridField::save_file(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("GridField::save_file: cannot open " + path);
    save(os);
}

GridField GridField::load_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("GridField::load_file: cannot open " + path);
    return load(is);
}

}  // namespace heis
