#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "savns/field.hpp"

namespace testing {

inline constexpr double pi = std::numbers::pi;

inline savns::Grid periodic(int n, savns::Discretization d = savns::Discretization::Spectral,
                            int fd_order = 4) {
  return savns::Grid(n, n, 0, 2 * pi, 0, 2 * pi, savns::Boundary::Periodic, d, fd_order);
}

inline savns::Grid dirichlet(int n, int fd_order = 4) {
  return savns::Grid(n, n, 0, 1, 0, 1, savns::Boundary::Dirichlet,
                     savns::Discretization::FiniteDifference, fd_order);
}

inline savns::ScalarField random_scalar(const savns::Grid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1, 1);
  savns::ScalarField f(g);
  for (auto& v : f.values()) v = d(rng);
  return f;
}

/// Random field; zero on Dirichlet boundary nodes.
inline savns::VectorField random_vector(const savns::Grid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1, 1);
  savns::VectorField f(g);
  for (auto& v : f.values()) v = d(rng);
  f.clamp_boundary();
  return f;
}

/// Smooth periodic field with a handful of low modes.
inline savns::VectorField smooth_periodic(const savns::Grid& g, double shift = 0.0) {
  return savns::VectorField::sample(g, [shift](double x, double y) {
    return std::pair{std::sin(x + shift) * std::cos(2 * y) + 0.3 * std::cos(3 * x - y),
                     std::cos(x) * std::sin(y - shift) - 0.2 * std::sin(2 * x + 2 * y)};
  });
}

inline double order(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

}  // namespace testing
