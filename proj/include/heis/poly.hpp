#ifndef HEIS_POLY_HPP
#define HEIS_POLY_HPP

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "heis/point.hpp"

namespace heis {

// Sparse multivariate polynomial over the 2n+1 coordinates.  Used for exact
// derivative oracles and randomized identity batteries.
class Poly {
  public:
    using Exps = std::array<uint8_t, kMaxDim>;

    explicit Poly(int nvars = 3) : nvars_(nvars) {}

    static Poly constant(int nvars, double c);
    static Poly var(int nvars, int axis);

    int nvars() const { return nvars_; }
    bool empty() const { return terms_.empty(); }

    void add_term(const Exps& e, double c);

    double eval(const HPoint& p) const;
    Poly partial(int axis) const;
    int degree() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly scaled(double c) const;

    // dense random polynomial with all monomials of total degree <= deg,
    // coefficients uniform in [-1,1]
    static Poly random(int nvars, int deg, std::mt19937_64& rng);

    const std::vector<std::pair<Exps, double>>& terms() const { return terms_; }

  private:
    void normalize();
    int nvars_;
    std::vector<std::pair<Exps, double>> terms_;
};

}  // namespace heis

#endif
