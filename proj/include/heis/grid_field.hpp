#ifndef HEIS_GRID_FIELD_HPP
#define HEIS_GRID_FIELD_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "heis/box.hpp"
#include "heis/scalar_field.hpp"

namespace heis {

enum class Extension { zero, error };

// Dense vertex lattice over a box with multilinear interpolation in between.
// Immutable after construction.  Euclidean partials come from second-order
// central differences of the interpolant (one-sided at the faces), which are
// exact on polynomials of degree <= 2.
class GridField {
  public:
    GridField() = default;

    static GridField sample(const ScalarField& f, const Box& box, double h, Extension ext = Extension::zero);
    static GridField sample(const ScalarField& f, const Box& box, std::span<const int> cells,
                            Extension ext = Extension::zero);
    static GridField from_values(const Box& box, std::span<const int> cells, std::vector<double> values,
                                 Extension ext = Extension::zero);

    bool valid() const { return !values_.empty(); }
    const Box& box() const { return box_; }
    int n() const { return box_.n(); }
    int dim() const { return box_.dim(); }
    int cells(int k) const { return cells_[k]; }
    int nodes(int k) const { return cells_[k] + 1; }
    double spacing(int k) const { return h_[k]; }
    double max_spacing() const;
    Extension extension() const { return ext_; }
    size_t value_count() const { return values_.size(); }

    double at(std::span<const int> idx) const;
    double operator()(const HPoint& p) const;  // multilinear interpolation

    double partial(int a, const HPoint& p) const;
    double partial(int a, int b, const HPoint& p) const;

    // closed-form view (interpolation + stencil partials up to order 2)
    ScalarField as_field() const;

    // versioned text serialization
    void save(std::ostream& os) const;
    static GridField load(std::istream& is);
    void save_file(const std::string& path) const;
    static GridField load_file(const std::string& path);

  private:
    double node_coord(int k, int i) const { return box_.lo[k] + h_[k] * i; }
    double interp_impl(const HPoint& p, bool* outside) const;

    Box box_;
    std::array<int, kMaxDim> cells_{};
    std::array<double, kMaxDim> h_{};
    std::vector<double> values_;
    Extension ext_ = Extension::zero;
};

}  // namespace heis

#endif
