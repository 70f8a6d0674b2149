#include "savns/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "savns/errors.hpp"

namespace savns {

namespace {

void write_header(std::ostream& out, const Grid& g) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d %d %.17g %.17g %.17g %.17g %s\n", g.nx(), g.ny(),
                g.x0(), g.x1(), g.y0(), g.y1(), std::string(to_string(g.bc())).c_str());
  out << buf;
}

void write_rows(std::ostream& out, const Grid& g, std::span<const double> v) {
  char buf[32];
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", v[g.index(i, j)]);
      out << (i ? " " : "") << buf;
    }
    out << '\n';
  }
}

Grid read_header(std::istream& in, Discretization periodic_disc, int fd_order) {
  std::string line;
  while (std::getline(in, line) && line.empty()) {
  }
  std::istringstream h(line);
  int nx = 0, ny = 0;
  double x0, x1, y0, y1;
  std::string bc;
  if (!(h >> nx >> ny >> x0 >> x1 >> y0 >> y1 >> bc))
    throw ConfigError("field dump: bad header '" + line + "'");
  const Boundary b = boundary_from_string(bc);
  const Discretization d =
      b == Boundary::Periodic ? periodic_disc : Discretization::FiniteDifference;
  return Grid(nx, ny, x0, x1, y0, y1, b, d, fd_order);
}

std::vector<double> read_values(std::istream& in, std::size_t count) {
  std::vector<double> v(count);
  std::string tok;
  for (std::size_t k = 0; k < count; ++k) {
    if (!(in >> tok))
      throw ConfigError("field dump: expected " + std::to_string(count) +
                        " values, found " + std::to_string(k));
    char* end = nullptr;
    v[k] = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw ConfigError("field dump: bad value '" + tok + "'");
  }
  std::string rest;
  std::getline(in, rest);
  if (rest.find_first_not_of(" \t\r") != std::string::npos)
    throw ConfigError("field dump: more values than the header allows");
  return v;
}

}  // namespace

void write_field(std::ostream& out, const ScalarField& f) {
  write_header(out, f.grid());
  write_rows(out, f.grid(), f.data());
}

void write_field(std::ostream& out, const VectorField& f) {
  write_header(out, f.grid());
  write_rows(out, f.grid(), f.component(0));
  write_rows(out, f.grid(), f.component(1));
}

ScalarField read_scalar_field(std::istream& in, Discretization periodic_disc,
                              int fd_order) {
  const Grid g = read_header(in, periodic_disc, fd_order);
  return ScalarField(g, read_values(in, g.size()));
}

VectorField read_vector_field(std::istream& in, Discretization periodic_disc,
                              int fd_order) {
  const Grid g = read_header(in, periodic_disc, fd_order);
  return VectorField(g, read_values(in, 2 * g.size()));
}

void write_checkpoint(std::ostream& out, const Checkpoint& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "savns-checkpoint %lld %.17g %.17g %llu %d\n",
                static_cast<long long>(c.state.step), c.state.t, c.state.q,
                static_cast<unsigned long long>(c.config_hash), c.s);
  out << buf;
  write_field(out, c.state.u);
  write_field(out, c.state.p);
}

Checkpoint read_checkpoint(std::istream& in, Discretization periodic_disc, int fd_order) {
  std::string line;
  std::getline(in, line);
  std::istringstream h(line);
  std::string magic;
  long long step = 0;
  unsigned long long hash = 0;
  Checkpoint c;
  if (!(h >> magic >> step >> c.state.t >> c.state.q >> hash >> c.s) ||
      magic != "savns-checkpoint")
    throw ConfigError("checkpoint: bad header '" + line + "'");
  c.state.step = step;
  c.config_hash = hash;
  c.state.u = read_vector_field(in, periodic_disc, fd_order);
  c.state.p = read_scalar_field(in, periodic_disc, fd_order);
  if (c.state.u.grid() != c.state.p.grid())
    throw ConfigError("checkpoint: u and p live on different grids");
  return c;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace savns
