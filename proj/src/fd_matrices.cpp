#include "fd_matrices.hpp"

#include <span>

#include "stencils.hpp"

namespace savns::detail {

namespace {
using Triplet = Eigen::Triplet<double>;
}

namespace {
int wrap(int k, int n) { return ((k % n) + n) % n; }
}  // namespace

SpMat derivative_matrix(const Grid& g, int axis) {
  const auto table = first_derivative_table(g, axis);
  const int nx = g.nx(), ny = g.ny();
  std::vector<Triplet> t;
  t.reserve(5 * g.size());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const Stencil& s = table[axis == 0 ? i : j];
      const int row = static_cast<int>(g.index(i, j));
      for (std::size_t q = 0; q < s.c.size(); ++q) {
        const int k = s.start + static_cast<int>(q);
        const auto col = axis == 0 ? g.index(wrap(k, nx), j) : g.index(i, wrap(k, ny));
        t.emplace_back(row, static_cast<int>(col), s.c[q]);
      }
    }
  SpMat d(g.size(), g.size());
  d.setFromTriplets(t.begin(), t.end());
  return d;
}

SpMat laplacian_matrix(const Grid& g) {
  const auto tx = second_derivative_table(g, 0);
  const auto ty = second_derivative_table(g, 1);
  const int nx = g.nx(), ny = g.ny();
  std::vector<Triplet> t;
  t.reserve(11 * g.size());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (g.on_boundary(i, j)) continue;
      const int row = static_cast<int>(g.index(i, j));
      for (std::size_t q = 0; q < tx[i].c.size(); ++q)
        t.emplace_back(row, g.index(wrap(tx[i].start + static_cast<int>(q), nx), j),
                       tx[i].c[q]);
      for (std::size_t q = 0; q < ty[j].c.size(); ++q)
        t.emplace_back(row, g.index(i, wrap(ty[j].start + static_cast<int>(q), ny)),
                       ty[j].c[q]);
    }
  SpMat l(g.size(), g.size());
  l.setFromTriplets(t.begin(), t.end());
  return l;
}

SpMat neumann_laplacian_matrix(const Grid& g) {
  const int nx = g.nx(), ny = g.ny();
  const double ax = 1.0 / (g.hx() * g.hx());
  const double ay = 1.0 / (g.hy() * g.hy());
  std::vector<Triplet> t;
  t.reserve(5 * g.size());
  // Ghost reflection p[-1] = p[1] doubles the inward neighbour.
  auto add_axis = [&](int row, int k, int n, double a, auto node) {
    if (g.periodic()) {
      t.emplace_back(row, node((k + 1) % n), a);
      t.emplace_back(row, node((k + n - 1) % n), a);
    } else if (k == 0) {
      t.emplace_back(row, node(1), 2 * a);
    } else if (k == n - 1) {
      t.emplace_back(row, node(n - 2), 2 * a);
    } else {
      t.emplace_back(row, node(k + 1), a);
      t.emplace_back(row, node(k - 1), a);
    }
    t.emplace_back(row, row, -2 * a);
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int row = static_cast<int>(g.index(i, j));
      add_axis(row, i, nx, ax, [&](int ii) { return static_cast<int>(g.index(ii, j)); });
      add_axis(row, j, ny, ay, [&](int jj) { return static_cast<int>(g.index(i, jj)); });
    }
  SpMat l(g.size(), g.size());
  l.setFromTriplets(t.begin(), t.end());
  return l;
}

SpMat identity_matrix(int n) {
  SpMat id(n, n);
  id.setIdentity();
  return id;
}

namespace {
void append(std::vector<Triplet>& t, const SpMat& m, int r0, int c0) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it)
      t.emplace_back(it.row() + r0, it.col() + c0, it.value());
}
}  // namespace

SpMat block_diag(const SpMat& a, const SpMat& b) {
  std::vector<Triplet> t;
  append(t, a, 0, 0);
  append(t, b, a.rows(), a.cols());
  SpMat out(a.rows() + b.rows(), a.cols() + b.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SpMat hstack(const SpMat& a, const SpMat& b) {
  std::vector<Triplet> t;
  append(t, a, 0, 0);
  append(t, b, 0, a.cols());
  SpMat out(a.rows(), a.cols() + b.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SpMat vstack(const SpMat& a, const SpMat& b) {
  std::vector<Triplet> t;
  append(t, a, 0, 0);
  append(t, b, a.rows(), 0);
  SpMat out(a.rows() + b.rows(), a.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

std::vector<int> velocity_unknowns(const Grid& g) {
  std::vector<int> keep;
  keep.reserve(2 * g.size());
  for (int c = 0; c < 2; ++c)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        if (!g.on_boundary(i, j))
          keep.push_back(static_cast<int>(c * g.size() + g.index(i, j)));
  return keep;
}

SpMat restrict_to(const SpMat& full, const std::vector<int>& keep) {
  std::vector<int> pos(full.rows(), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) pos[keep[k]] = static_cast<int>(k);
  std::vector<Triplet> t;
  t.reserve(full.nonZeros());
  for (int k = 0; k < full.outerSize(); ++k)
    for (SpMat::InnerIterator it(full, k); it; ++it) {
      const int r = pos[it.row()], c = pos[it.col()];
      if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
    }
  SpMat out(keep.size(), keep.size());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

Vec gather(std::span<const double> full, const std::vector<int>& keep) {
  Vec v(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) v[k] = full[keep[k]];
  return v;
}

void scatter(const Vec& v, const std::vector<int>& keep, std::span<double> full) {
  for (std::size_t k = 0; k < keep.size(); ++k) full[keep[k]] = v[k];
}

}  // namespace savns::detail
