#include "stencils.hpp"

#include <algorithm>

namespace savns::detail {

namespace {
Stencil scaled(int start, std::vector<double> c, double s) {
  for (double& v : c) v *= s;
  return {start, std::move(c)};
}

Stencil reversed(int k_mirror_start, std::vector<double> c, double s) {
  std::reverse(c.begin(), c.end());
  return scaled(k_mirror_start, std::move(c), s);
}
}  // namespace

Stencil first_derivative(int k, int n, double h, int order, bool periodic) {
  if (order == 2) {
    if (periodic || (k > 0 && k < n - 1)) return scaled(k - 1, {-0.5, 0.0, 0.5}, 1 / h);
    if (k == 0) return scaled(0, {-1.5, 2.0, -0.5}, 1 / h);
    return reversed(n - 3, {-1.5, 2.0, -0.5}, -1 / h);
  }
  const double s = 1 / (12 * h);
  if (periodic || (k > 1 && k < n - 2)) return scaled(k - 2, {1, -8, 0, 8, -1}, s);
  // The right end mirrors the left one with the sign flipped.
  if (k == 0) return scaled(0, {-25, 48, -36, 16, -3}, s);
  if (k == 1) return scaled(0, {-3, -10, 18, -6, 1}, s);
  if (k == n - 1) return reversed(n - 5, {-25, 48, -36, 16, -3}, -s);
  return reversed(n - 5, {-3, -10, 18, -6, 1}, -s);
}

Stencil second_derivative(int k, int n, double h, int order, bool periodic) {
  const double h2 = h * h;
  if (order == 2) return scaled(k - 1, {1.0, -2.0, 1.0}, 1 / h2);
  const double s = 1 / (12 * h2);
  if (periodic || (k > 1 && k < n - 2)) return scaled(k - 2, {-1, 16, -30, 16, -1}, s);
  if (k == 1) return scaled(0, {10, -15, -4, 14, -6, 1}, s);
  return reversed(n - 6, {10, -15, -4, 14, -6, 1}, s);
}

namespace {
template <class F>
std::vector<Stencil> table(const Grid& g, int axis, F make) {
  const int n = axis == 0 ? g.nx() : g.ny();
  const double h = axis == 0 ? g.hx() : g.hy();
  std::vector<Stencil> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) out.push_back(make(k, n, h, g.fd_order(), g.periodic()));
  return out;
}
}  // namespace

std::vector<Stencil> first_derivative_table(const Grid& g, int axis) {
  return table(g, axis, first_derivative);
}

std::vector<Stencil> second_derivative_table(const Grid& g, int axis) {
  return table(g, axis, [&](int k, int n, double h, int order, bool periodic) {
    // Boundary rows of a Dirichlet axis are never used.
    if (!periodic && (k == 0 || k == n - 1)) return Stencil{};
    return second_derivative(k, n, h, order, periodic);
  });
}

}  // namespace savns::detail
