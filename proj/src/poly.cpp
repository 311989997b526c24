#include "heis/poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace heis {

Poly Poly::constant(int nvars, double c) {
    Poly p(nvars);
    if (c != 0.0) p.terms_.push_back({Exps{}, c});
    return p;
}

Poly Poly::var(int nvars, int axis) {
    if (axis < 0 || axis >= nvars) throw std::out_of_range("Poly::var: axis out of range");
    Poly p(nvars);
    Exps e{};
    e[axis] = 1;
    p.terms_.push_back({e, 1.0});
    return p;
}

void Poly::add_term(const Exps& e, double c) {
    terms_.push_back({e, c});
    normalize();
}

void Poly::normalize() {
    std::map<Exps, double> acc;
    for (const auto& [e, c] : terms_) acc[e] += c;
    terms_.clear();
    for (const auto& [e, c] : acc)
        if (c != 0.0) terms_.push_back({e, c});
}

double Poly::eval(const HPoint& p) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
        double m = c;
        for (int k = 0; k < nvars_; ++k)
            for (int r = 0; r < e[k]; ++r) m *= p[k];
        s += m;
    }
    return s;
}

Poly Poly::partial(int axis) const {
    Poly out(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[axis] == 0) continue;
        Exps d = e;
        d[axis] -= 1;
        out.terms_.push_back({d, c * e[axis]});
    }
    out.normalize();
    return out;
}

int Poly::degree() const {
    int deg = 0;
    for (const auto& [e, c] : terms_) {
        int d = 0;
        for (int k = 0; k < nvars_; ++k) d += e[k];
        deg = std::max(deg, d);
    }
    return deg;
}

Poly Poly::operator+(const Poly& o) const {
    Poly out = *this;
    for (const auto& t : o.terms_) out.terms_.push_back(t);
    out.normalize();
    return out;
}

Poly Poly::operator-(const Poly& o) const { return *this + o.scaled(-1.0); }

Poly Poly::operator*(const Poly& o) const {
    Poly out(nvars_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            Exps e{};
            for (int k = 0; k < nvars_; ++k) e[k] = static_cast<uint8_t>(ea[k] + eb[k]);
            out.terms_.push_back({e, ca * cb});
        }
    out.normalize();
    return out;
}

Poly Poly::scaled(double c) const {
    Poly out(nvars_);
    for (const auto& [e, a] : terms_) out.terms_.push_back({e, a * c});
    out.normalize();
    return out;
}

Poly Poly::random(int nvars, int deg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    Poly out(nvars);
    // enumerate all exponent tuples with total degree <= deg
    Exps e{};
    std::function<void(int, int)> rec = [&](int axis, int remaining) {
        if (axis == nvars) {
            out.terms_.push_back({e, coef(rng)});
            return;
        }
        for (int r = 0; r <= remaining; ++r) {
            e[axis] = static_cast<uint8_t>(r);
            rec(axis + 1, remaining - r);
        }
        e[axis] = 0;
    };
    rec(0, deg);
    out.normalize();
    return out;
}

}  // namespace heis
