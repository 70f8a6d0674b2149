#include "savns/grid.hpp"

#include <cmath>
#include <numbers>

#include "savns/errors.hpp"

namespace savns {

std::string_view to_string(Boundary bc) {
  return bc == Boundary::Periodic ? "periodic" : "dirichlet";
}

Boundary boundary_from_string(std::string_view name) {
  if (name == "periodic") return Boundary::Periodic;
  if (name == "dirichlet") return Boundary::Dirichlet;
  throw ConfigError("unknown boundary condition '" + std::string(name) + "'");
}

Grid::Grid(int nx, int ny, double x0, double x1, double y0, double y1,
           Boundary bc)
    : Grid(nx, ny, x0, x1, y0, y1, bc,
           bc == Boundary::Periodic ? Discretization::Spectral
                                    : Discretization::FiniteDifference) {}

Grid::Grid(int nx, int ny, double x0, double x1, double y0, double y1,
           Boundary bc, Discretization disc, int fd_order)
    : nx_(nx), ny_(ny), x0_(x0), x1_(x1), y0_(y0), y1_(y1), bc_(bc),
      disc_(disc), fd_order_(fd_order) {
  if (fd_order != 2 && fd_order != 4) throw ConfigError("fd_order must be 2 or 4");
  const int min_nodes = disc == Discretization::Spectral || fd_order == 2 ? 4 : 7;
  if (nx < min_nodes || ny < min_nodes)
    throw ConfigError("grid needs at least " + std::to_string(min_nodes) +
                      " nodes per axis");
  if (!(x1 > x0) || !(y1 > y0)) throw ConfigError("grid extents must be increasing");
  if (bc == Boundary::Dirichlet && disc == Discretization::Spectral)
    throw ConfigError("spectral discretization requires a periodic grid");
  if (disc == Discretization::Spectral && (nx % 2 != 0 || ny % 2 != 0))
    throw ConfigError("spectral grids need even node counts");
  if (bc == Boundary::Periodic) {
    hx_ = (x1 - x0) / nx;
    hy_ = (y1 - y0) / ny;
  } else {
    hx_ = (x1 - x0) / (nx - 1);
    hy_ = (y1 - y0) / (ny - 1);
  }
}

Grid Grid::periodic_box(int n, double length) {
  return Grid(n, n, 0.0, length, 0.0, length, Boundary::Periodic);
}

Grid Grid::unit_square_dirichlet(int n) {
  return Grid(n, n, 0.0, 1.0, 0.0, 1.0, Boundary::Dirichlet);
}

Grid Grid::with_fd_order(int order) const {
  return Grid(nx_, ny_, x0_, x1_, y0_, y1_, bc_, disc_, order);
}

double Grid::weight(int i, int j) const {
  double w = hx_ * hy_;
  if (bc_ == Boundary::Dirichlet) {
    if (i == 0 || i == nx_ - 1) w *= 0.5;
    if (j == 0 || j == ny_ - 1) w *= 0.5;
  }
  return w;
}

bool Grid::operator==(const Grid& o) const {
  return nx_ == o.nx_ && ny_ == o.ny_ && x0_ == o.x0_ && x1_ == o.x1_ &&
         y0_ == o.y0_ && y1_ == o.y1_ && bc_ == o.bc_ && disc_ == o.disc_ &&
         (disc_ == Discretization::Spectral || fd_order_ == o.fd_order_);
}

}  // namespace savns
