#include "heis/scalar_field.hpp"

#include <cmath>
#include <stdexcept>

namespace heis {

double ScalarField::partial(std::span<const int> axes, const HPoint& p) const {
    if (!df_) throw std::runtime_error("ScalarField: analytic partials not available");
    if (axes.size() > 3) throw std::invalid_argument("ScalarField: partials supported up to order 3");
    if (axes.empty()) return f_(p);
    return df_(p, axes);
}

Jet1 ScalarField::jet1(const HPoint& p) const {
    if (jet_) return jet_(p);
    Jet1 j;
    j.v = f_(p);
    for (int k = 0; k < p.dim(); ++k) {
        const int ax[1] = {k};
        j.d[k] = df_(p, std::span<const int>(ax, 1));
    }
    return j;
}

ScalarField ScalarField::constant(double c) {
    return ScalarField([c](const HPoint&) { return c; },
                       [](const HPoint&, std::span<const int>) { return 0.0; });
}

ScalarField ScalarField::coordinate(int axis) {
    return ScalarField([axis](const HPoint& p) { return p[axis]; },
                       [axis](const HPoint& p, std::span<const int> ax) {
                           (void)p;
                           return ax.size() == 1 && ax[0] == axis ? 1.0 : 0.0;
                       });
}

ScalarField ScalarField::from_poly(const Poly& poly) {
    auto shared = std::make_shared<Poly>(poly);
    return ScalarField([shared](const HPoint& p) { return shared->eval(p); },
                       [shared](const HPoint& p, std::span<const int> ax) {
                           Poly d = *shared;
                           for (int a : ax) d = d.partial(a);
                           return d.eval(p);
                       });
}

ScalarField ScalarField::scaled(double c) const {
    ScalarField self = *this;
    PartialFn dp;
    if (df_) {
        dp = [self, c](const HPoint& p, std::span<const int> ax) { return c * self.df_(p, ax); };
    }
    return ScalarField([self, c](const HPoint& p) { return c * self.f_(p); }, dp);
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    ScalarField::PartialFn dp;
    if (a.df_ && b.df_) {
        ScalarField ca = a, cb = b;
        dp = [ca, cb](const HPoint& p, std::span<const int> ax) { return ca.df_(p, ax) + cb.df_(p, ax); };
    }
    ScalarField ca = a, cb = b;
    return ScalarField([ca, cb](const HPoint& p) { return ca.f_(p) + cb.f_(p); }, dp);
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) { return a + b.scaled(-1.0); }

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    ScalarField ca = a, cb = b;
    ScalarField::PartialFn dp;
    if (a.df_ && b.df_) {
        dp = [ca, cb](const HPoint& p, std::span<const int> ax) {
            // Leibniz over position subsets of the axis list (order <= 3)
            const size_t m = ax.size();
            double sum = 0.0;
            for (size_t mask = 0; mask < (size_t(1) << m); ++mask) {
                int left[3], right[3];
                size_t nl = 0, nr = 0;
                for (size_t i = 0; i < m; ++i) {
                    if ((mask >> i) & 1)
                        left[nl++] = ax[i];
                    else
                        right[nr++] = ax[i];
                }
                const double fa = nl ? ca.df_(p, std::span<const int>(left, nl)) : ca.f_(p);
                const double fb = nr ? cb.df_(p, std::span<const int>(right, nr)) : cb.f_(p);
                sum += fa * fb;
            }
            return sum;
        };
    }
    return ScalarField([ca, cb](const HPoint& p) { return ca.f_(p) * cb.f_(p); }, dp);
}

Profile1D smooth_bump_profile() {
    // q(s) = exp(1 - 1/(1-s^2)) inside (-1,1); with sig = 1/(1-s^2):
    //   q'   = q * A,             A  = -2 s sig^2
    //   q''  = q * (A^2 + A'),    A' = -2 sig^2 - 8 s^2 sig^3
    //   q''' = q * (A^3 + 3 A A' + A''), A'' = -24 s sig^3 - 48 s^3 sig^4
    return Profile1D{[](double s, int k) {
        const double u = 1.0 - s * s;
        if (u <= 0.0) return 0.0;
        const double sig = 1.0 / u;
        const double q = std::exp(1.0 - sig);
        if (k == 0) return q;
        const double A = -2.0 * s * sig * sig;
        if (k == 1) return q * A;
        const double Ap = -2.0 * sig * sig - 8.0 * s * s * sig * sig * sig;
        if (k == 2) return q * (A * A + Ap);
        const double App = -24.0 * s * sig * sig * sig - 48.0 * s * s * s * sig * sig * sig * sig;
        if (k == 3) return q * (A * A * A + 3.0 * A * Ap + App);
        throw std::invalid_argument("smooth_bump_profile: derivative order > 3");
    }};
}

Profile1D poly_bump_profile(int power) {
    if (power < 3) throw std::invalid_argument("poly_bump_profile: power must be at least 3");
    const double k = power;
    return Profile1D{[power, k](double s, int ord) {
        const double u = 1.0 - s * s;
        if (u <= 0.0) return 0.0;
        auto up = [&](int e) { return std::pow(u, e); };
        switch (ord) {
            case 0: return up(power);
            case 1: return -2.0 * k * s * up(power - 1);
            case 2: return -2.0 * k * up(power - 1) + 4.0 * k * (k - 1.0) * s * s * up(power - 2);
            case 3:
                return 12.0 * k * (k - 1.0) * s * up(power - 2) -
                       8.0 * k * (k - 1.0) * (k - 2.0) * s * s * s * up(power - 3);
            default: throw std::invalid_argument("poly_bump_profile: derivative order > 3");
        }
    }};
}

Profile1D sin_profile(double freq, double phase) {
    return Profile1D{[freq, phase](double s, int k) {
        const double arg = freq * s + phase;
        double v;
        switch (k % 4) {
            case 0: v = std::sin(arg); break;
            case 1: v = std::cos(arg); break;
            case 2: v = -std::sin(arg); break;
            default: v = -std::cos(arg); break;
        }
        return v * std::pow(freq, k);
    }};
}

Profile1D constant_profile(double c) {
    return Profile1D{[c](double, int k) { return k == 0 ? c : 0.0; }};
}

Profile1D identity_profile() {
    return Profile1D{[](double s, int k) {
        if (k == 0) return s;
        if (k == 1) return 1.0;
        return 0.0;
    }};
}

Profile1D square_profile() {
    return Profile1D{[](double s, int k) {
        if (k == 0) return s * s;
        if (k == 1) return 2.0 * s;
        if (k == 2) return 2.0;
        return 0.0;
    }};
}

Profile1D cubic_profile(double a3, double a2, double a1, double a0) {
    return Profile1D{[=](double s, int k) {
        switch (k) {
            case 0: return ((a3 * s + a2) * s + a1) * s + a0;
            case 1: return (3.0 * a3 * s + 2.0 * a2) * s + a1;
            case 2: return 6.0 * a3 * s + 2.0 * a2;
            case 3: return 6.0 * a3;
            default: return 0.0;
        }
    }};
}

ScalarField separable_field(int n, std::vector<AxisFactor> factors) {
    const int N = 2 * n + 1;
    if (static_cast<int>(factors.size()) != N)
        throw std::invalid_argument("separable_field: need one factor per coordinate");
    auto fac = std::make_shared<std::vector<AxisFactor>>(std::move(factors));
    auto eval = [fac, N](const HPoint& p) {
        double v = 1.0;
        for (int k = 0; k < N; ++k) {
            const AxisFactor& a = (*fac)[k];
            v *= a.profile.d((p[k] - a.shift) / a.scale, 0);
            if (v == 0.0) return 0.0;
        }
        return v;
    };
    auto dpart = [fac, N](const HPoint& p, std::span<const int> ax) {
        int order[kMaxDim] = {0};
        for (int a : ax) order[a] += 1;
        double v = 1.0;
        for (int k = 0; k < N; ++k) {
            const AxisFactor& a = (*fac)[k];
            double g = a.profile.d((p[k] - a.shift) / a.scale, order[k]);
            for (int r = 0; r < order[k]; ++r) g /= a.scale;
            v *= g;
            if (v == 0.0) return 0.0;
        }
        return v;
    };
    ScalarField out(eval, dpart);
    out.set_jet1([fac, N](const HPoint& p) {
        Jet1 j;
        double vals[kMaxDim], ders[kMaxDim];
        for (int k = 0; k < N; ++k) {
            const AxisFactor& a = (*fac)[k];
            const double s = (p[k] - a.shift) / a.scale;
            vals[k] = a.profile.d(s, 0);
            ders[k] = a.profile.d(s, 1) / a.scale;
        }
        double prod = 1.0;
        for (int k = 0; k < N; ++k) prod *= vals[k];
        j.v = prod;
        for (int k = 0; k < N; ++k) {
            double g = ders[k];
            for (int m = 0; m < N; ++m)
                if (m != k) g *= vals[m];
            j.d[k] = g;
        }
        return j;
    });
    return out;
}

ScalarField bump_field(const HPoint& center, std::span<const double> radii) {
    const int N = center.dim();
    if (static_cast<int>(radii.size()) != N) throw std::invalid_argument("bump_field: need one radius per axis");
    std::vector<AxisFactor> factors(N);
    for (int k = 0; k < N; ++k) factors[k] = AxisFactor{smooth_bump_profile(), center[k], radii[k]};
    return separable_field(center.n(), std::move(factors));
}

ScalarField compose(const Profile1D& beta, const ScalarField& u) {
    ScalarField cu = u;
    Profile1D cb = beta;
    auto eval = [cb, cu](const HPoint& p) { return cb.d(cu(p), 0); };
    ScalarField::PartialFn dp;
    if (u.has_partials()) {
        dp = [cb, cu](const HPoint& p, std::span<const int> ax) {
            const double uv = cu(p);
            if (ax.size() == 1) return cb.d(uv, 1) * cu.partial(ax[0], p);
            if (ax.size() == 2) {
                return cb.d(uv, 2) * cu.partial(ax[0], p) * cu.partial(ax[1], p) +
                       cb.d(uv, 1) * cu.partial(ax[0], ax[1], p);
            }
            throw std::invalid_argument("compose: partials supported up to order 2");
        };
    }
    return ScalarField(eval, dp);
}

TimeDependentField::TimeDependentField(std::vector<double> taus, std::vector<ScalarField> snaps)
    : taus_(std::move(taus)), snaps_(std::move(snaps)) {
    if (taus_.size() != snaps_.size() || taus_.empty())
        throw std::invalid_argument("TimeDependentField: need matching non-empty snapshot lists");
    for (size_t i = 1; i < taus_.size(); ++i)
        if (!(taus_[i] > taus_[i - 1]))
            throw std::invalid_argument("TimeDependentField: times must be strictly increasing");
}

ScalarField TimeDependentField::at(double tau) const {
    if (taus_.size() == 1 || tau <= taus_.front()) return snaps_.front();
    if (tau >= taus_.back()) return snaps_.back();
    size_t i = 0;
    while (i + 1 < taus_.size() && taus_[i + 1] < tau) ++i;
    const double th = (tau - taus_[i]) / (taus_[i + 1] - taus_[i]);
    return snaps_[i].scaled(1.0 - th) + snaps_[i + 1].scaled(th);
}

}  // namespace heis
