#include "nsf/field.hpp"

#include <algorithm>
#include <cmath>

namespace nsf {

namespace {

std::string node_label(const Grid& g, std::size_t n) {
  return "node (" + std::to_string(g.ix(n)) + ", " + std::to_string(g.iy(n)) + ")";
}

}  // namespace

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw FieldError("field has " + std::to_string(values_.size()) + " values, grid has " +
                     std::to_string(grid_.size()) + " nodes");
  }
  require_finite("field");
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void ScalarField::require_finite(std::string_view what) const {
  for (std::size_t n = 0; n < values_.size(); ++n) {
    if (!std::isfinite(values_[n])) {
      throw FieldError(std::string(what) + " is not finite at " + node_label(grid_, n));
    }
  }
}

void ScalarField::require_positive(std::string_view what) const {
  for (std::size_t n = 0; n < values_.size(); ++n) {
    if (!(values_[n] > 0.0)) {
      throw FieldError(std::string(what) + " is not positive at " + node_label(grid_, n) +
                       " (value " + std::to_string(values_[n]) + ")");
    }
  }
}

void ScalarField::check_same_grid(const ScalarField& o) const {
  if (values_.size() != o.values_.size()) throw FieldError("field grids differ");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  check_same_grid(o);
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += o.values_[n];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  check_same_grid(o);
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= o.values_[n];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid());
  for (std::size_t n = 0; n < a.size(); ++n) out[n] = a[n] * b[n];
  return out;
}

VectorField::VectorField(const Grid& grid, double fill)
    : grid_(grid), c_(static_cast<std::size_t>(grid.dim()), ScalarField(grid, fill)) {}

VectorField::VectorField(const Grid& grid, std::vector<ScalarField> components)
    : grid_(grid), c_(std::move(components)) {
  if (static_cast<int>(c_.size()) != grid.dim()) {
    throw FieldError("vector field needs " + std::to_string(grid.dim()) + " components");
  }
}

ScalarField VectorField::magnitude() const {
  ScalarField out(grid_);
  for (std::size_t n = 0; n < grid_.size(); ++n) {
    double s = 0.0;
    for (const auto& c : c_) s += c[n] * c[n];
    out[n] = std::sqrt(s);
  }
  return out;
}

double VectorField::max_abs() const {
  double m = 0.0;
  for (const auto& c : c_) m = std::max(m, c.max_abs());
  return m;
}

bool VectorField::all_finite() const {
  return std::all_of(c_.begin(), c_.end(), [](const ScalarField& c) { return c.all_finite(); });
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (std::size_t a = 0; a < c_.size(); ++a) c_[a] += o.c_[a];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  for (std::size_t a = 0; a < c_.size(); ++a) c_[a] -= o.c_[a];
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (auto& c : c_) c *= s;
  return *this;
}

ScalarField dot(const VectorField& a, const VectorField& b) {
  ScalarField out(a.grid());
  for (int k = 0; k < a.dim(); ++k) out += hadamard(a[k], b[k]);
  return out;
}

TensorField::TensorField(const Grid& grid, bool symmetric)
    : grid_(grid),
      dim_(grid.dim()),
      symmetric_(symmetric),
      c_(static_cast<std::size_t>(grid.dim() * grid.dim()), ScalarField(grid)) {}

ScalarField TensorField::trace() const {
  ScalarField out(grid_);
  for (int a = 0; a < dim_; ++a) out += (*this)(a, a);
  return out;
}

TensorField TensorField::transpose() const {
  TensorField out(grid_, symmetric_);
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b) out(a, b) = (*this)(b, a);
  return out;
}

double TensorField::asymmetry() const {
  double m = 0.0;
  for (int a = 0; a < dim_; ++a)
    for (int b = a + 1; b < dim_; ++b)
      for (std::size_t n = 0; n < grid_.size(); ++n)
        m = std::max(m, std::abs((*this)(a, b)[n] - (*this)(b, a)[n]));
  return m;
}

ScalarField contract(const TensorField& a, const TensorField& b) {
  ScalarField out(a.grid());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) out += hadamard(a(i, j), b(i, j));
  return out;
}

}  // namespace nsf
