#ifndef HEIS_POINT_HPP
#define HEIS_POINT_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace heis {

// Points of the n-th Heisenberg group live in R^N, N = 2n+1, with coordinates
// (x_1..x_n, y_1..y_n, t).  Everything below is exact coordinate algebra; the
// left-invariant frame is derived on demand.
inline constexpr int kMaxGroupN = 4;
inline constexpr int kMaxDim = 2 * kMaxGroupN + 1;

struct GroupParams {
    int n = 1;
    int dim() const { return 2 * n + 1; }
    // homogeneous dimension: dilations scale volume by lambda^Q
    int hom_dim() const { return 2 * n + 2; }
};

class HPoint {
  public:
    HPoint() : n_(1) { v_.fill(0.0); }
    explicit HPoint(int n) : n_(n) {
        if (n < 1 || n > kMaxGroupN)
            throw std::invalid_argument("HPoint: group index n out of supported range [1," +
                                        std::to_string(kMaxGroupN) + "]");
        v_.fill(0.0);
    }
    HPoint(double x, double y, double t) : n_(1) {
        v_.fill(0.0);
        v_[0] = x;
        v_[1] = y;
        v_[2] = t;
    }
    static HPoint zero(int n) { return HPoint(n); }
    static HPoint from(int n, std::span<const double> coords) {
        HPoint p(n);
        if (static_cast<int>(coords.size()) != p.dim())
            throw std::invalid_argument("HPoint::from: coordinate count does not match 2n+1");
        for (int k = 0; k < p.dim(); ++k) p.v_[k] = coords[k];
        return p;
    }

    int n() const { return n_; }
    int dim() const { return 2 * n_ + 1; }

    double operator[](int k) const { return v_[k]; }
    double& operator[](int k) { return v_[k]; }

    double x(int j) const { return v_[j]; }          // j in [0,n)
    double y(int j) const { return v_[n_ + j]; }     // j in [0,n)
    double t() const { return v_[2 * n_]; }
    double& t() { return v_[2 * n_]; }

    std::span<const double> coords() const { return {v_.data(), static_cast<size_t>(dim())}; }

    bool same_shape(const HPoint& q) const { return n_ == q.n_; }

  private:
    int n_;
    std::array<double, kMaxDim> v_;
};

inline void require_same_group(const HPoint& p, const HPoint& q, const char* op) {
    if (!p.same_shape(q))
        throw std::invalid_argument(std::string(op) + ": points belong to different groups");
}

// group law: (x,y,t)*(x',y',t') = (x+x', y+y', t+t'+2*sum(x'_j y_j - x_j y'_j))
inline HPoint mul(const HPoint& p, const HPoint& q) {
    require_same_group(p, q, "mul");
    const int n = p.n();
    HPoint r(n);
    double twist = 0.0;
    for (int j = 0; j < n; ++j) {
        r[j] = p.x(j) + q.x(j);
        r[n + j] = p.y(j) + q.y(j);
        twist += q.x(j) * p.y(j) - p.x(j) * q.y(j);
    }
    r.t() = p.t() + q.t() + 2.0 * twist;
    return r;
}

inline HPoint inverse(const HPoint& p) {
    HPoint r(p.n());
    for (int k = 0; k < p.dim(); ++k) r[k] = -p[k];
    return r;
}

// intrinsic dilation (x,y,t) -> (lx, ly, l^2 t); group homomorphism for l > 0
inline HPoint dilate(double lambda, const HPoint& p) {
    if (lambda < 0.0) throw std::invalid_argument("dilate: negative scale");
    HPoint r(p.n());
    for (int k = 0; k < 2 * p.n(); ++k) r[k] = lambda * p[k];
    r.t() = lambda * lambda * p.t();
    return r;
}

// ninety-degree horizontal rotation (x,y,t) -> (-y, x, 0)
inline HPoint jmap(const HPoint& p) {
    const int n = p.n();
    HPoint r(n);
    for (int j = 0; j < n; ++j) {
        r[j] = -p.y(j);
        r[n + j] = p.x(j);
    }
    r.t() = 0.0;
    return r;
}

inline double dot(const HPoint& p, const HPoint& q) {
    require_same_group(p, q, "dot");
    double s = 0.0;
    for (int k = 0; k < p.dim(); ++k) s += p[k] * q[k];
    return s;
}

inline double horizontal_norm(const HPoint& w) {
    double s = 0.0;
    for (int k = 0; k < 2 * w.n(); ++k) s += w[k] * w[k];
    return std::sqrt(s);
}

// anisotropic gauge |w_H| + 2*sqrt(|w_N|); an upper bound for the
// Carnot-Caratheodory distance from the origin (horizontal segment plus a
// square loop realising the vertical displacement)
inline double gauge(const HPoint& w) { return horizontal_norm(w) + 2.0 * std::sqrt(std::fabs(w.t())); }

// U(p,q) = gauge(p^{-1} q); left-invariant and 1-homogeneous under dilations,
// dominates d(p,q).  Not a metric (no symmetry/triangle guarantees asserted).
inline double cc_distance_upper(const HPoint& p, const HPoint& q) { return gauge(mul(inverse(p), q)); }

enum class FrameKind { left, right };

// frame index convention: j in [0,n) -> X_j, j in [n,2n) -> Y_{j-n}, j = 2n -> T
inline HPoint frame_vector(FrameKind kind, int j, const HPoint& p) {
    const int n = p.n();
    const int N = p.dim();
    if (j < 0 || j >= N) throw std::out_of_range("frame_vector: index out of range");
    HPoint v(n);
    const double sgn = (kind == FrameKind::left) ? 1.0 : -1.0;
    if (j == N - 1) {
        v.t() = 1.0;
    } else if (j < n) {
        v[j] = 1.0;
        v.t() = sgn * 2.0 * p.y(j);   // X_j = e_x + 2 y_j e_t, X_j^r = e_x - 2 y_j e_t
    } else {
        v[j] = 1.0;
        v.t() = -sgn * 2.0 * p.x(j - n);  // Y_j = e_y - 2 x_j e_t, Y_j^r = e_y + 2 x_j e_t
    }
    return v;
}

// coefficients of a coordinate vector v (based at p) in the left-invariant frame
inline void frame_coefficients(const HPoint& p, const HPoint& v, double* out) {
    const int n = p.n();
    double tcoef = v.t();
    for (int j = 0; j < n; ++j) {
        out[j] = v[j];
        out[n + j] = v[n + j];
        tcoef -= 2.0 * p.y(j) * v[j] - 2.0 * p.x(j) * v[n + j];
    }
    out[2 * n] = tcoef;
}

// Square path realising a pure vertical displacement (0,0,eps^2 w_N) by four
// horizontal legs of time (eps/2)*sqrt(|w_N|) along Y_1, X_1, -Y_1, -X_1
// (order swapped for w_N < 0).  Returns the five corner points starting at p.
inline std::array<HPoint, 5> bch_square_path(const HPoint& p, double w_N, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("bch_square_path: eps must be positive");
    const int n = p.n();
    const double tau = 0.5 * eps * std::sqrt(std::fabs(w_N));
    HPoint ex(n), ey(n);
    ex[0] = tau;
    ey[n] = tau;
    // flowing a left-invariant horizontal field from r for time s lands at r*exp(s Z)
    std::array<HPoint, 5> path;
    path[0] = p;
    const HPoint& a = (w_N >= 0.0) ? ey : ex;
    const HPoint& b = (w_N >= 0.0) ? ex : ey;
    path[1] = mul(path[0], a);
    path[2] = mul(path[1], b);
    path[3] = mul(path[2], inverse(a));
    path[4] = mul(path[3], inverse(b));
    return path;
}

}  // namespace heis

#endif
