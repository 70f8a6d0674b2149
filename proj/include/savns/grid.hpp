#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace savns {

enum class Boundary { Periodic, Dirichlet };

/// How spatial derivatives are evaluated. Dirichlet grids are always finite
/// difference; periodic grids default to the pseudo-spectral backend.
enum class Discretization { Spectral, FiniteDifference };

std::string_view to_string(Boundary bc);
Boundary boundary_from_string(std::string_view name);

/// Uniform node-centred grid on [x0,x1] x [y0,y1].
///
/// Finite-difference grids use fourth-order stencils unless constructed with
/// fd_order = 2 (3-point first derivatives, 5-point Laplacian).
///
/// Periodic grids omit the duplicate right/top edge, so h = L/n. Dirichlet
/// grids include both boundary rows, so h = L/(n-1), and velocity samples on
/// the boundary nodes are fixed to zero. Node (i, j) lives at flat index
/// j * nx + i (row-major, y outer).
class Grid {
 public:
  Grid() = default;
  Grid(int nx, int ny, double x0, double x1, double y0, double y1, Boundary bc);
  Grid(int nx, int ny, double x0, double x1, double y0, double y1, Boundary bc,
       Discretization disc, int fd_order = 4);

  /// [0,2pi]^2 periodic, spectral.
  static Grid periodic_box(int n, double length);
  /// [0,1]^2 homogeneous Dirichlet, finite difference.
  static Grid unit_square_dirichlet(int n);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double x0() const { return x0_; }
  double x1() const { return x1_; }
  double y0() const { return y0_; }
  double y1() const { return y1_; }
  Boundary bc() const { return bc_; }
  Discretization discretization() const { return disc_; }
  bool spectral() const { return disc_ == Discretization::Spectral; }
  /// Accuracy order of the finite-difference stencils, 2 or 4. Ignored by
  /// the spectral backend.
  int fd_order() const { return fd_order_; }
  Grid with_fd_order(int order) const;
  bool periodic() const { return bc_ == Boundary::Periodic; }

  double hx() const { return hx_; }
  double hy() const { return hy_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * nx_ + i;
  }
  double x(int i) const { return x0_ + i * hx_; }
  double y(int j) const { return y0_ + j * hy_; }

  bool on_boundary(int i, int j) const {
    return bc_ == Boundary::Dirichlet &&
           (i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1);
  }

  /// Quadrature weight of node (i, j): hx*hy, halved per boundary axis on
  /// Dirichlet grids (tensor trapezoidal rule).
  double weight(int i, int j) const;

  bool operator==(const Grid& other) const;
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  int nx_ = 0;
  int ny_ = 0;
  double x0_ = 0, x1_ = 1, y0_ = 0, y1_ = 1;
  Boundary bc_ = Boundary::Periodic;
  Discretization disc_ = Discretization::Spectral;
  int fd_order_ = 4;
  double hx_ = 0, hy_ = 0;
};

}  // namespace savns
