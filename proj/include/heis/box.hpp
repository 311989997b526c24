#ifndef HEIS_BOX_HPP
#define HEIS_BOX_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "heis/point.hpp"

namespace heis {

// Axis-aligned coordinate box in R^{2n+1}.
struct Box {
    HPoint lo, hi;

    Box() = default;
    Box(const HPoint& lo_, const HPoint& hi_) : lo(lo_), hi(hi_) {
        require_same_group(lo, hi, "Box");
        for (int k = 0; k < lo.dim(); ++k)
            if (!(lo[k] < hi[k])) throw std::invalid_argument("Box: lower corner must be strictly below upper");
    }
    static Box cube(int n, double a, double b) {
        HPoint lo(n), hi(n);
        for (int k = 0; k < lo.dim(); ++k) {
            lo[k] = a;
            hi[k] = b;
        }
        return Box(lo, hi);
    }

    int n() const { return lo.n(); }
    int dim() const { return lo.dim(); }

    bool contains(const HPoint& p, double tol = 0.0) const {
        for (int k = 0; k < dim(); ++k)
            if (p[k] < lo[k] - tol || p[k] > hi[k] + tol) return false;
        return true;
    }
    bool contains_box(const Box& inner, double tol = 0.0) const {
        return contains(inner.lo, tol) && contains(inner.hi, tol);
    }

    double extent(int k) const { return hi[k] - lo[k]; }
    double volume() const {
        double v = 1.0;
        for (int k = 0; k < dim(); ++k) v *= extent(k);
        return v;
    }
    HPoint center() const {
        HPoint c(n());
        for (int k = 0; k < dim(); ++k) c[k] = 0.5 * (lo[k] + hi[k]);
        return c;
    }
    Box shrunk(std::span<const double> margin) const {
        HPoint l(n()), h(n());
        for (int k = 0; k < dim(); ++k) {
            l[k] = lo[k] + margin[k];
            h[k] = hi[k] - margin[k];
            if (!(l[k] < h[k])) throw std::runtime_error("Box::shrunk: margins leave an empty region");
        }
        return Box(l, h);
    }
};

// Midpoint-rule lattice over a box: dims[k] cells per axis, nodes at cell
// centers, all weights equal to the cell volume.  Symmetric boxes give node
// sets symmetric under w -> -w, which several kernel identities rely on.
class Lattice {
  public:
    Lattice(const Box& box, std::span<const int> dims) : box_(box) {
        const int N = box.dim();
        if (static_cast<int>(dims.size()) != N) throw std::invalid_argument("Lattice: dims size mismatch");
        total_ = 1;
        cell_vol_ = 1.0;
        for (int k = 0; k < N; ++k) {
            if (dims[k] < 1) throw std::invalid_argument("Lattice: dims must be positive");
            dims_[k] = dims[k];
            h_[k] = box.extent(k) / dims[k];
            cell_vol_ *= h_[k];
            total_ *= static_cast<size_t>(dims[k]);
        }
    }
    Lattice(const Box& box, int dims_all) : Lattice(box, uniform_dims(box.dim(), dims_all)) {}

    size_t size() const { return total_; }
    double cell_volume() const { return cell_vol_; }
    double spacing(int k) const { return h_[k]; }
    const Box& box() const { return box_; }

    HPoint node(size_t idx) const {
        HPoint p(box_.n());
        const int N = box_.dim();
        for (int k = 0; k < N; ++k) {
            const size_t i = idx % static_cast<size_t>(dims_[k]);
            idx /= static_cast<size_t>(dims_[k]);
            p[k] = box_.lo[k] + (static_cast<double>(i) + 0.5) * h_[k];
        }
        return p;
    }

  private:
    static std::array<int, kMaxDim> uniform_dims(int N, int m) {
        std::array<int, kMaxDim> d{};
        for (int k = 0; k < N; ++k) d[k] = m;
        return d;
    }
    Lattice(const Box& box, const std::array<int, kMaxDim>& d)
        : Lattice(box, std::span<const int>(d.data(), box.dim())) {}

    Box box_;
    std::array<int, kMaxDim> dims_{};
    std::array<double, kMaxDim> h_{};
    double cell_vol_ = 0.0;
    size_t total_ = 0;
};

std::vector<HPoint> box_corners(const Box& box);

// Conservative proxy for the Carnot-Caratheodory distance between an inner
// region and the boundary of an enclosing box: horizontal coordinate margins
// bound d from below directly; a vertical margin m_t yields at least
// (sqrt(pi)/2)*sqrt(m_t), slightly deflated for safety.
double gauge_margin(const Box& inner, const Box& outer);

// True when p*delta_sigma(move) stays inside `outer` for every p in `inner`
// and every sigma in [0,eps] (exact corner check; the vertical coordinate is
// quadratic in sigma and is bounded by its extremes).
bool translations_stay_inside(const Box& inner, const Box& outer, const HPoint& move, double eps);

// Admissibility guard for difference quotients along dilated translations:
// requires eps*gauge(move) below the gauge margin and direct containment of
// every translated evaluation point (including the square-path corners used
// by the vertical splittings).  Throws with a descriptive message otherwise.
void require_admissible(const Box& inner, const Box& outer, const HPoint& move, double eps);

}  // namespace heis

#endif
