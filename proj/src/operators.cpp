#include "savns/operators.hpp"

#include <algorithm>
#include <cmath>

#include "spectral.hpp"
#include "stencils.hpp"

namespace savns {

using detail::Complex;
using detail::Fourier;
using detail::Wavenumbers;

namespace {

enum class Axis { X, Y };

int wrap(int k, int n) { return ((k % n) + n) % n; }

ScalarField fd_derivative(const ScalarField& p, Axis axis) {
  const Grid& g = p.grid();
  const auto table = detail::first_derivative_table(g, axis == Axis::X ? 0 : 1);
  ScalarField out(g);
  const int nx = g.nx(), ny = g.ny();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const detail::Stencil& s = table[axis == Axis::X ? i : j];
      double acc = 0.0;
      for (std::size_t q = 0; q < s.c.size(); ++q) {
        const int k = s.start + static_cast<int>(q);
        acc += s.c[q] * (axis == Axis::X ? p(wrap(k, nx), j) : p(i, wrap(k, ny)));
      }
      out(i, j) = acc;
    }
  return out;
}

std::vector<double> fd_laplacian(const Grid& g, std::span<const double> v) {
  const int nx = g.nx(), ny = g.ny();
  const auto tx = detail::second_derivative_table(g, 0);
  const auto ty = detail::second_derivative_table(g, 1);
  std::vector<double> out(g.size(), 0.0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (g.on_boundary(i, j)) continue;
      double acc = 0.0;
      for (std::size_t q = 0; q < tx[i].c.size(); ++q)
        acc += tx[i].c[q] * v[g.index(wrap(tx[i].start + static_cast<int>(q), nx), j)];
      for (std::size_t q = 0; q < ty[j].c.size(); ++q)
        acc += ty[j].c[q] * v[g.index(i, wrap(ty[j].start + static_cast<int>(q), ny))];
      out[g.index(i, j)] = acc;
    }
  return out;
}

ScalarField spectral_derivative(const ScalarField& p, Axis axis) {
  const Grid& g = p.grid();
  auto fft = Fourier::for_grid(g);
  Wavenumbers k(g);
  auto s = fft->forward(p.data());
  for (int j = 0; j < g.ny(); ++j)
    for (int m = 0; m < fft->ncx(); ++m) {
      const double kk = axis == Axis::X ? k.dx(m) : k.dy(j);
      s[static_cast<std::size_t>(j) * fft->ncx() + m] *= Complex(0.0, kk);
    }
  return ScalarField(g, fft->inverse(std::move(s)));
}

}  // namespace

ScalarField partial_x(const ScalarField& p) {
  return p.grid().spectral() ? spectral_derivative(p, Axis::X)
                             : fd_derivative(p, Axis::X);
}

ScalarField partial_y(const ScalarField& p) {
  return p.grid().spectral() ? spectral_derivative(p, Axis::Y)
                             : fd_derivative(p, Axis::Y);
}

VectorField gradient(const ScalarField& p) {
  if (!p.grid().spectral()) return VectorField(partial_x(p), partial_y(p));
  const Grid& g = p.grid();
  auto fft = Fourier::for_grid(g);
  Wavenumbers k(g);
  auto s = fft->forward(p.data());
  auto sx = s, sy = s;
  for (int j = 0; j < g.ny(); ++j)
    for (int m = 0; m < fft->ncx(); ++m) {
      const auto idx = static_cast<std::size_t>(j) * fft->ncx() + m;
      sx[idx] *= Complex(0.0, k.dx(m));
      sy[idx] *= Complex(0.0, k.dy(j));
    }
  return VectorField(ScalarField(g, fft->inverse(std::move(sx))),
                     ScalarField(g, fft->inverse(std::move(sy))));
}

ScalarField divergence(const VectorField& u) {
  const Grid& g = u.grid();
  if (!g.spectral()) {
    ScalarField out = partial_x(u.component_field(0));
    out += partial_y(u.component_field(1));
    return out;
  }
  auto fft = Fourier::for_grid(g);
  Wavenumbers k(g);
  auto s0 = fft->forward(u.component(0));
  auto s1 = fft->forward(u.component(1));
  for (int j = 0; j < g.ny(); ++j)
    for (int m = 0; m < fft->ncx(); ++m) {
      const auto idx = static_cast<std::size_t>(j) * fft->ncx() + m;
      s0[idx] = Complex(0.0, k.dx(m)) * s0[idx] + Complex(0.0, k.dy(j)) * s1[idx];
    }
  return ScalarField(g, fft->inverse(std::move(s0)));
}

VectorField laplacian(const VectorField& u) {
  const Grid& g = u.grid();
  VectorField out(g);
  for (int c = 0; c < 2; ++c) {
    std::vector<double> lap;
    if (g.spectral()) {
      auto fft = Fourier::for_grid(g);
      Wavenumbers k(g);
      auto s = fft->forward(u.component(c));
      for (int j = 0; j < g.ny(); ++j)
        for (int m = 0; m < fft->ncx(); ++m)
          s[static_cast<std::size_t>(j) * fft->ncx() + m] *= -k.k2(m, j);
      lap = fft->inverse(std::move(s));
    } else {
      lap = fd_laplacian(g, u.component(c));
    }
    std::copy(lap.begin(), lap.end(), out.component(c).begin());
  }
  return out;
}

VectorField grad_div(const VectorField& u) { return gradient(divergence(u)); }

double inner_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  const Grid& g = a.grid();
  double sum = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) sum += g.weight(i, j) * a(i, j) * b(i, j);
  return sum;
}

double inner_product(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "inner_product");
  const Grid& g = a.grid();
  double sum = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      sum += g.weight(i, j) *
             (a(0, i, j) * b(0, i, j) + a(1, i, j) * b(1, i, j));
  return sum;
}

double linf(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.data()) m = std::max(m, std::abs(v));
  return m;
}

double linf(const VectorField& u) {
  double m = 0.0;
  for (double v : u.data()) m = std::max(m, std::abs(v));
  return m;
}

double l2(const ScalarField& f) { return std::sqrt(inner_product(f, f)); }
double l2(const VectorField& u) { return std::sqrt(inner_product(u, u)); }

Norms norms(const ScalarField& f) {
  return {l2(f), linf(f), l2(gradient(f))};
}

Norms norms(const VectorField& u) {
  const double g0 = l2(gradient(u.component_field(0)));
  const double g1 = l2(gradient(u.component_field(1)));
  return {l2(u), linf(u), std::sqrt(g0 * g0 + g1 * g1)};
}

double viscous_dissipation(const VectorField& u) {
  return -inner_product(laplacian(u), u);
}

VectorField dealias(const VectorField& u) {
  const Grid& g = u.grid();
  if (!g.spectral()) return u;
  auto fft = Fourier::for_grid(g);
  VectorField out(g);
  for (int c = 0; c < 2; ++c) {
    auto s = fft->forward(u.component(c));
    for (int j = 0; j < g.ny(); ++j)
      for (int m = 0; m < fft->ncx(); ++m)
        if (!fft->resolved(m, j))
          s[static_cast<std::size_t>(j) * fft->ncx() + m] = 0.0;
    auto v = fft->inverse(std::move(s));
    std::copy(v.begin(), v.end(), out.component(c).begin());
  }
  return out;
}

}  // namespace savns
