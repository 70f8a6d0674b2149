#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "savns/grid.hpp"

namespace savns {

/// One real sample per grid node.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid);
  ScalarField(const Grid& grid, std::vector<double> data);

  static ScalarField sample(const Grid& grid,
                            const std::function<double(double, double)>& f);

  const Grid& grid() const { return grid_; }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  double& operator()(int i, int j) { return data_[grid_.index(i, j)]; }
  double operator()(int i, int j) const { return data_[grid_.index(i, j)]; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);
  /// this += a * x
  ScalarField& axpy(double a, const ScalarField& x);

 private:
  Grid grid_;
  std::vector<double> data_;
};

/// Two components per node, stored component-major: [u1 | u2].
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Grid& grid);
  VectorField(const Grid& grid, std::vector<double> data);
  VectorField(const ScalarField& c0, const ScalarField& c1);

  static VectorField sample(
      const Grid& grid,
      const std::function<std::pair<double, double>(double, double)>& f);

  const Grid& grid() const { return grid_; }
  std::span<double> component(int c) {
    return std::span<double>(data_).subspan(c * grid_.size(), grid_.size());
  }
  std::span<const double> component(int c) const {
    return std::span<const double>(data_).subspan(c * grid_.size(),
                                                  grid_.size());
  }
  ScalarField component_field(int c) const;

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  double& operator()(int c, int i, int j) {
    return data_[c * grid_.size() + grid_.index(i, j)];
  }
  double operator()(int c, int i, int j) const {
    return data_[c * grid_.size() + grid_.index(i, j)];
  }

  /// Zero both components on Dirichlet boundary nodes (no-op when periodic).
  void clamp_boundary();

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double a);
  /// this += a * x
  VectorField& axpy(double a, const VectorField& x);

 private:
  Grid grid_;
  std::vector<double> data_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

/// Throws ConfigError when the grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace savns
