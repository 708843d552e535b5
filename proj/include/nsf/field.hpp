#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nsf/grid.hpp"

namespace nsf {

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One real value per grid node, row-major with x fastest.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double fill = 0.0)
      : grid_(grid), values_(grid.size(), fill) {}
  /// Takes ownership of `values`; rejects a size mismatch or non-finite entries.
  ScalarField(const Grid& grid, std::vector<double> values);

  /// Samples f(x, y) at every node.
  template <class F>
  static ScalarField sample(const Grid& grid, F&& f) {
    ScalarField out(grid);
    for (std::size_t n = 0; n < grid.size(); ++n) out.values_[n] = f(grid.x(n), grid.y(n));
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t n) const { return values_[n]; }
  double& operator[](std::size_t n) { return values_[n]; }
  double at(int i, int j = 0) const { return values_[grid_.index(i, j)]; }

  double min() const;
  double max() const;
  double max_abs() const;
  bool all_finite() const;
  /// Throws FieldError naming `what` and the first offending node.
  void require_finite(std::string_view what) const;
  void require_positive(std::string_view what) const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }
  friend ScalarField operator*(ScalarField a, double s) { return a *= s; }

  template <class F>
  ScalarField map(F&& f) const {
    ScalarField out(grid_);
    for (std::size_t n = 0; n < values_.size(); ++n) out.values_[n] = f(values_[n]);
    return out;
  }

 private:
  void check_same_grid(const ScalarField& o) const;

  Grid grid_{};
  std::vector<double> values_;
};

/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

/// `dim` components per node, stored as one ScalarField per component.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Grid& grid, double fill = 0.0);
  VectorField(const Grid& grid, std::vector<ScalarField> components);

  template <class F>
  static VectorField sample(const Grid& grid, F&& f) {
    VectorField out(grid);
    for (std::size_t n = 0; n < grid.size(); ++n) {
      const auto v = f(grid.x(n), grid.y(n));
      for (int a = 0; a < grid.dim(); ++a) out.c_[a][n] = v[a];
    }
    return out;
  }

  const Grid& grid() const { return grid_; }
  int dim() const { return static_cast<int>(c_.size()); }
  const ScalarField& operator[](int a) const { return c_[static_cast<std::size_t>(a)]; }
  ScalarField& operator[](int a) { return c_[static_cast<std::size_t>(a)]; }
  /// Euclidean magnitude per node.
  ScalarField magnitude() const;
  double max_abs() const;
  bool all_finite() const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(double s, VectorField a) { return a *= s; }

 private:
  Grid grid_{};
  std::vector<ScalarField> c_;
};

/// Pointwise dot product of two vector fields.
ScalarField dot(const VectorField& a, const VectorField& b);

/// d x d components per node; component (a, b) holds row a, column b.
class TensorField {
 public:
  TensorField() = default;
  explicit TensorField(const Grid& grid, bool symmetric = false);

  const Grid& grid() const { return grid_; }
  int dim() const { return dim_; }
  bool tagged_symmetric() const { return symmetric_; }
  void tag_symmetric(bool s) { symmetric_ = s; }
  const ScalarField& operator()(int a, int b) const { return c_[idx(a, b)]; }
  ScalarField& operator()(int a, int b) { return c_[idx(a, b)]; }
  ScalarField trace() const;
  TensorField transpose() const;
  /// Largest |T_ab - T_ba| over all nodes.
  double asymmetry() const;

 private:
  std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a * dim_ + b); }

  Grid grid_{};
  int dim_ = 0;
  bool symmetric_ = false;
  std::vector<ScalarField> c_;
};

/// Pointwise double contraction A : B.
ScalarField contract(const TensorField& a, const TensorField& b);

}  // namespace nsf
