#include "savns/field.hpp"

#include <string>

#include "savns/errors.hpp"

namespace savns {

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
  if (a != b) throw ConfigError(std::string(where) + ": grid mismatch");
}

ScalarField::ScalarField(const Grid& grid) : grid_(grid), data_(grid.size(), 0.0) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> data)
    : grid_(grid), data_(std::move(data)) {
  if (data_.size() != grid_.size())
    throw ConfigError("scalar field length does not match grid");
}

ScalarField ScalarField::sample(const Grid& grid,
                                const std::function<double(double, double)>& f) {
  ScalarField out(grid);
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) out(i, j) = f(grid.x(i), grid.y(j));
  return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_, "ScalarField -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  for (double& v : data_) v *= a;
  return *this;
}

ScalarField& ScalarField::axpy(double a, const ScalarField& x) {
  require_same_grid(grid_, x.grid_, "ScalarField::axpy");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += a * x.data_[k];
  return *this;
}

VectorField::VectorField(const Grid& grid) : grid_(grid), data_(2 * grid.size(), 0.0) {}

VectorField::VectorField(const Grid& grid, std::vector<double> data)
    : grid_(grid), data_(std::move(data)) {
  if (data_.size() != 2 * grid_.size())
    throw ConfigError("vector field length does not match grid");
}

VectorField::VectorField(const ScalarField& c0, const ScalarField& c1)
    : grid_(c0.grid()), data_(2 * c0.grid().size()) {
  require_same_grid(c0.grid(), c1.grid(), "VectorField(c0, c1)");
  auto a = component(0);
  auto b = component(1);
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    a[k] = c0.values()[k];
    b[k] = c1.values()[k];
  }
}

VectorField VectorField::sample(
    const Grid& grid,
    const std::function<std::pair<double, double>(double, double)>& f) {
  VectorField out(grid);
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      auto [a, b] = f(grid.x(i), grid.y(j));
      out(0, i, j) = a;
      out(1, i, j) = b;
    }
  return out;
}

ScalarField VectorField::component_field(int c) const {
  auto s = component(c);
  return ScalarField(grid_, std::vector<double>(s.begin(), s.end()));
}

void VectorField::clamp_boundary() {
  if (grid_.periodic()) return;
  for (int c = 0; c < 2; ++c)
    for (int j = 0; j < grid_.ny(); ++j)
      for (int i = 0; i < grid_.nx(); ++i)
        if (grid_.on_boundary(i, j)) (*this)(c, i, j) = 0.0;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  require_same_grid(grid_, o.grid_, "VectorField +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  require_same_grid(grid_, o.grid_, "VectorField -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

VectorField& VectorField::operator*=(double a) {
  for (double& v : data_) v *= a;
  return *this;
}

VectorField& VectorField::axpy(double a, const VectorField& x) {
  require_same_grid(grid_, x.grid_, "VectorField::axpy");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += a * x.data_[k];
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

}  // namespace savns
