#ifndef HEIS_SCALAR_FIELD_HPP
#define HEIS_SCALAR_FIELD_HPP

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "heis/point.hpp"
#include "heis/poly.hpp"

namespace heis {

// A closed-form scalar function on the group, optionally carrying analytic
// Euclidean partials up to third order.  Mixed partials are requested as a
// list of coordinate axes (repetitions allowed), e.g. {0,2} = d^2/dx dt.
// value together with all first-order Euclidean partials
struct Jet1 {
    double v = 0.0;
    std::array<double, kMaxDim> d{};
};

class ScalarField {
  public:
    using Eval = std::function<double(const HPoint&)>;
    using PartialFn = std::function<double(const HPoint&, std::span<const int>)>;
    using Jet1Fn = std::function<Jet1(const HPoint&)>;

    ScalarField() = default;
    ScalarField(Eval f, PartialFn df = nullptr) : f_(std::move(f)), df_(std::move(df)) {}

    bool valid() const { return static_cast<bool>(f_); }
    bool has_partials() const { return static_cast<bool>(df_); }

    // batched first-order data; falls back to per-axis partial calls
    Jet1 jet1(const HPoint& p) const;
    void set_jet1(Jet1Fn fn) { jet_ = std::move(fn); }

    double operator()(const HPoint& p) const { return f_(p); }
    double partial(std::span<const int> axes, const HPoint& p) const;
    double partial(int a, const HPoint& p) const {
        const int ax[1] = {a};
        return partial(std::span<const int>(ax, 1), p);
    }
    double partial(int a, int b, const HPoint& p) const {
        const int ax[2] = {a, b};
        return partial(std::span<const int>(ax, 2), p);
    }
    double partial(int a, int b, int c, const HPoint& p) const {
        const int ax[3] = {a, b, c};
        return partial(std::span<const int>(ax, 3), p);
    }

    static ScalarField constant(double c);
    static ScalarField coordinate(int axis);
    static ScalarField from_poly(const Poly& p);

    ScalarField scaled(double c) const;
    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b);  // Leibniz to order 3

  private:
    Eval f_;
    PartialFn df_;
    Jet1Fn jet_;
};

// 1D profile with derivatives: d(s, k) returns the k-th derivative, k <= 3.
struct Profile1D {
    std::function<double(double, int)> d;
    double operator()(double s) const { return d(s, 0); }
};

Profile1D smooth_bump_profile();          // exp(1 - 1/(1-s^2)) on (-1,1), C^inf
Profile1D poly_bump_profile(int power = 3);  // (1-s^2)^power on (-1,1), C^{power-1}
Profile1D sin_profile(double freq, double phase);
Profile1D constant_profile(double c);
Profile1D identity_profile();
Profile1D square_profile();               // s^2
Profile1D cubic_profile(double a3, double a2, double a1, double a0);

// per-axis factor f((coord - shift)/scale)
struct AxisFactor {
    Profile1D profile;
    double shift = 0.0;
    double scale = 1.0;
};

// product over all axes of the given factors (one per coordinate)
ScalarField separable_field(int n, std::vector<AxisFactor> factors);

// smooth bump centered at c with semi-axes r (value 1 at center, support the
// coordinate box c +- r)
ScalarField bump_field(const HPoint& center, std::span<const double> radii);

// composition beta(u) for 1D beta with derivatives (partials to order 2)
ScalarField compose(const Profile1D& beta, const ScalarField& u);

// time-dependent scalar snapshots with piecewise-linear blending in tau
class TimeDependentField {
  public:
    TimeDependentField() = default;
    TimeDependentField(std::vector<double> taus, std::vector<ScalarField> snaps);
    ScalarField at(double tau) const;
    const std::vector<double>& times() const { return taus_; }

  private:
    std::vector<double> taus_;
    std::vector<ScalarField> snaps_;
};

}  // namespace heis

#endif
