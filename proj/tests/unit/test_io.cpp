#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "savns/errors.hpp"
#include "savns/io.hpp"
#include "savns/operators.hpp"

using namespace savns;
using namespace testing;

TEST_SUITE("io") {
  TEST_CASE("field dump header and layout") {
    const Grid g = dirichlet(4, 2);
    ScalarField f(g);
    f(1, 0) = 2.5;
    f(0, 3) = -1;
    std::ostringstream out;
    write_field(out, f);
    CHECK(out.str() == "4 4 0 1 0 1 dirichlet\n0 2.5 0 0\n0 0 0 0\n0 0 0 0\n-1 0 0 0\n");
  }

  TEST_CASE("vector and scalar dumps round trip exactly") {
    for (const Grid& g : {periodic(8), dirichlet(7, 2)}) {
      const VectorField u = random_vector(g, 5);
      const ScalarField p = random_scalar(g, 6);
      std::stringstream s;
      write_field(s, u);
      write_field(s, p);
      const VectorField u2 = read_vector_field(s, g.discretization(), g.fd_order());
      const ScalarField p2 = read_scalar_field(s, g.discretization(), g.fd_order());
      CHECK(u2.grid() == g);
      CHECK(u2.values() == u.values());
      CHECK(p2.values() == p.values());
    }
  }

  TEST_CASE("malformed dumps are rejected") {
    std::istringstream short_data("2 2 0 1 0 1 periodic\n1 2 3\n");
    CHECK_THROWS_AS(read_scalar_field(short_data), ConfigError);
    std::istringstream long_data("2 2 0 1 0 1 periodic\n1 2 3 4 5\n");
    CHECK_THROWS_AS(read_scalar_field(long_data), ConfigError);
    std::istringstream bad_header("2 2 0 1 periodic\n");
    CHECK_THROWS_AS(read_scalar_field(bad_header), ConfigError);
    std::istringstream bad_value("2 2 0 1 0 1 periodic\n1 x 3 4\n");
    CHECK_THROWS_AS(read_scalar_field(bad_value), ConfigError);
  }

  TEST_CASE("checkpoint round trip keeps q to full precision") {
    const Grid g = periodic(8);
    Checkpoint c;
    c.state = FlowState::initial(random_vector(g, 1), random_scalar(g, 2), 0.0);
    c.state.q = 1.0 - 1.0 / 3.0 * 1e-7;
    c.state.t = 0.1 * 7;
    c.state.step = 7;
    c.config_hash = fnv1a("psav1 dt=0.1");
    c.s = 2;
    std::stringstream s;
    write_checkpoint(s, c);
    const Checkpoint b = read_checkpoint(s);
    CHECK(b.state.q == c.state.q);
    CHECK(b.state.t == c.state.t);
    CHECK(b.state.step == 7);
    CHECK(b.config_hash == c.config_hash);
    CHECK(b.s == 2);
    CHECK(b.state.u.values() == c.state.u.values());
    CHECK(b.state.p.values() == c.state.p.values());
  }

  TEST_CASE("fnv1a reference values") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  }
}
