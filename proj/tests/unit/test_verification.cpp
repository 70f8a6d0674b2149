#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "savns/errors.hpp"
#include "savns/operators.hpp"
#include "savns/verification.hpp"

using namespace savns;
using namespace testing;

namespace {

// Fourth-order central differences.
template <class F>
double d1(const F& f, double z, double h) {
  return (-f(z + 2 * h) + 8 * f(z + h) - 8 * f(z - h) + f(z - 2 * h)) / (12 * h);
}
template <class F>
double d2(const F& f, double z, double h) {
  return (-f(z + 2 * h) + 16 * f(z + h) - 30 * f(z) + 16 * f(z - h) - f(z - 2 * h)) / (12 * h * h);
}
// Sixth-order first derivative.
template <class F>
double d1_6(const F& f, double z, double h) {
  return (f(z + 3 * h) - 9 * f(z + 2 * h) + 45 * f(z + h) - 45 * f(z - h) + 9 * f(z - 2 * h) -
          f(z - 3 * h)) /
         (60 * h);
}

std::pair<double, double> residual_forcing(const ManufacturedCase& c, double t, double x, double y) {
  const double h = 1e-3;
  auto comp = [&](int k) {
    return [&, k](double tt, double xx, double yy) {
      auto v = c.exact_u(tt, xx, yy);
      return k == 0 ? v.first : v.second;
    };
  };
  const auto [u0, u1] = c.exact_u(t, x, y);
  double out[2];
  for (int k = 0; k < 2; ++k) {
    auto uk = comp(k);
    const double ut = d1([&](double s) { return uk(s, x, y); }, t, h);
    const double ux = d1([&](double s) { return uk(t, s, y); }, x, h);
    const double uy = d1([&](double s) { return uk(t, x, s); }, y, h);
    const double lap = d2([&](double s) { return uk(t, s, y); }, x, h) +
                       d2([&](double s) { return uk(t, x, s); }, y, h);
    const double dp = k == 0 ? d1([&](double s) { return c.exact_p(t, s, y); }, x, h)
                             : d1([&](double s) { return c.exact_p(t, x, s); }, y, h);
    out[k] = ut + u0 * ux + u1 * uy - c.nu * lap + dp;
  }
  return {out[0], out[1]};
}

ConvergenceReport sample_report() {
  ConvergenceReport r;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.rows = {{0.25, 1.234567e-2, 3.5e-1, 1.0e-6, 2.0e-3, nan, nan, 0.5, ""},
            {0.125, 6.1e-3, 1.8e-1, 5.0e-7, 1.0e-3, 0, 0, 0.75, ""},
            {0.0625, nan, nan, nan, nan, 0, 0, nan, "failed"}};
  fill_orders(r.rows);
  return r;
}

}  // namespace

TEST_SUITE("verification") {
  TEST_CASE("case values at known points") {
    const ManufacturedCase tg = make_case(CaseId::Example2);
    auto [a, b] = tg.exact_u(0, 0, 0);
    CHECK(a == doctest::Approx(0.0));
    CHECK(b == doctest::Approx(0.0));
    CHECK(tg.exact_p(0, 0, 0) == doctest::Approx(-0.5));
    const ManufacturedCase e1 = make_case(CaseId::Example1);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> d(0, 1);
    for (int k = 0; k < 10; ++k) {
      const double x = d(rng), y = d(rng);
      CHECK(e1.exact_u(0, x, y).first == 0.0);
      CHECK(e1.exact_u(0, x, y).second == 0.0);
      CHECK(e1.exact_p(0, x, y) == 0.0);
    }
  }

  TEST_CASE("forcing matches a finite-difference evaluation of the equations") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> d(0, 1);
    for (double nu : {1.0, 0.3})
      for (CaseId id : {CaseId::Example1, CaseId::Example2}) {
        const ManufacturedCase c = make_case(id, nu);
        const double scale = id == CaseId::Example1 ? 1.0 : 2 * pi;
        for (int k = 0; k < 20; ++k) {
          const double t = d(rng), x = scale * d(rng), y = scale * d(rng);
          const auto [f0, f1] = c.forcing(t, x, y);
          const auto [r0, r1] = residual_forcing(c, t, x, y);
          CHECK(std::abs(f0 - r0) < 1e-6);
          CHECK(std::abs(f1 - r1) < 1e-6);
        }
      }
  }

  TEST_CASE("exact velocities are solenoidal") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(0, 1);
    for (CaseId id : {CaseId::Example1, CaseId::Example2}) {
      const ManufacturedCase c = make_case(id);
      const double scale = id == CaseId::Example1 ? 1.0 : 2 * pi;
      for (int k = 0; k < 100; ++k) {
        const double t = d(rng), x = scale * d(rng), y = scale * d(rng);
        const double div =
            d1_6([&](double s) { return c.exact_u(t, s, y).first; }, x, 1e-3) +
            d1_6([&](double s) { return c.exact_u(t, x, s).second; }, y, 1e-3);
        CHECK(std::abs(div) < 1e-10);
      }
    }
  }

  TEST_CASE("parse_number") {
    CHECK(parse_number("1/32") == 0.03125);
    CHECK(parse_number("1/3") == 1.0 / 3.0);
    CHECK(parse_number("0.25") == 0.25);
    CHECK(parse_number("1e-3") == 1e-3);
    CHECK(parse_number_list("1/4,1/8,1/16,1/32") == std::vector<double>{0.25, 0.125, 0.0625, 0.03125});
    for (const char* bad : {"", "abc", "1/", "/2", "1/0", "1/2/3", "0.1x", "1,"})
      CHECK_THROWS_AS(parse_number_list(bad), ConfigError);
  }

  TEST_CASE("pairwise and fitted orders") {
    ConvergenceReport r;
    for (double dt : {0.25, 0.125, 0.0625, 0.03125}) {
      ConvergenceRow row;
      row.param = dt;
      row.err_u_linf = 3.0 * dt * dt;
      row.err_p_l2 = 0.5 * dt;
      row.div_linf = 1e-3 * std::pow(dt, 1.5);
      r.rows.push_back(row);
    }
    fill_orders(r.rows);
    CHECK(std::isnan(r.rows[0].order_u));
    for (std::size_t k = 1; k < r.rows.size(); ++k) {
      CHECK(r.rows[k].order_u == doctest::Approx(2.0).epsilon(1e-12));
      CHECK(r.rows[k].order_p == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(r.fitted_order_u() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.fitted_order_p() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.fitted_order_div() == doctest::Approx(1.5).epsilon(1e-12));

    ConvergenceReport single;
    single.rows = {r.rows[0]};
    fill_orders(single.rows);
    CHECK(std::isnan(single.rows[0].order_u));
    CHECK(std::isnan(single.fitted_order_u()));
  }

  TEST_CASE("CSV round trip is byte identical") {
    std::ostringstream a;
    sample_report().write_csv(a);
    CHECK(a.str().rfind("param,err_u_linf,err_p_l2,div_linf,q_drift,order_u,order_p,seconds\n", 0) == 0);
    std::istringstream in(a.str());
    const ConvergenceReport back = ConvergenceReport::read_csv(in);
    std::ostringstream b;
    back.write_csv(b);
    CHECK(a.str() == b.str());
    CHECK(back.rows.size() == 3);
    CHECK(std::isnan(back.rows[2].err_u_linf));
    std::istringstream bad("x,y\n1,2\n");
    CHECK_THROWS_AS(ConvergenceReport::read_csv(bad), ConfigError);
  }

  TEST_CASE("run specs name the offending field") {
    RunSpec s;
    s.dt = -1;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("dt"), ConfigError);
    s = RunSpec{};
    s.dt = 0.3;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("dt"), ConfigError);
    s = RunSpec{};
    s.s = 0;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("s:"), ConfigError);
    s = RunSpec{};
    s.eps = 0;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("eps"), ConfigError);
    CHECK_THROWS_AS(scheme_from_string("rk4"), ConfigError);
    CHECK(scheme_from_string("srsav2") == SchemeKind::Srsav2);
    CHECK(s.steps() == 32);
  }

  TEST_CASE("zero initial data with no forcing stays zero") {
    RunSpec s;
    s.case_id = CaseId::Example2;
    s.n = 16;
    s.dt = 0.25;
    s.T = 0.5;
    s.initial_velocity = std::make_shared<const VectorField>(s.grid());
    for (SchemeKind k : {SchemeKind::Psav1, SchemeKind::Psav2, SchemeKind::Srsav1,
                         SchemeKind::Srsav2, SchemeKind::Projection}) {
      s.scheme = k;
      const RunResult r = run(s);
      CHECK(linf(r.final_state.u) == 0.0);
      CHECK(linf(r.final_state.p) == 0.0);
      CHECK(r.final_state.q == 1.0);
      CHECK(std::isnan(r.err_u_linf));
    }
  }

  TEST_CASE("observer sees every step") {
    RunSpec s;
    s.case_id = CaseId::Example2;
    s.scheme = SchemeKind::Psav2;
    s.n = 16;
    s.dt = 0.125;
    int calls = 0;
    double last_t = 0;
    run(s, [&](const FlowState& st, const StepDiagnostics&) {
      ++calls;
      last_t = st.t;
    });
    CHECK(calls == 8);
    CHECK(last_t == doctest::Approx(1.0));
  }

  TEST_CASE("Taylor-Green first-order sweep") {
    RunSpec s;
    s.case_id = CaseId::Example2;
    s.n = 32;
    const ConvergenceReport r = run_convergence(s, {0.25, 0.125, 0.0625}, 2);
    CHECK(r.rows.size() == 3);
    for (std::size_t k = 1; k < r.rows.size(); ++k)
      CHECK(r.rows[k].order_u == doctest::Approx(1.0).epsilon(0.15));
    CHECK(r.backend == "spectral 32x32");
  }

  TEST_CASE("eps sweep of length one has no orders") {
    RunSpec s;
    s.case_id = CaseId::Example2;
    s.n = 16;
    s.dt = 0.25;
    const auto reps = run_eps_sweep(s, {SchemeKind::Psav2}, {0.1});
    REQUIRE(reps.size() == 1);
    CHECK(reps[0].parameter == "eps");
    CHECK(std::isnan(reps[0].rows[0].order_u));
  }

  TEST_CASE("energy series") {
    RunSpec s;
    s.case_id = CaseId::Example2;
    s.scheme = SchemeKind::Psav2;
    s.n = 64;
    s.dt = 1.0 / 64;
    const auto e = energy_series(s);
    REQUIRE(e.size() == 65);
    CHECK(e.back().original == doctest::Approx(std::exp(-4.0) * e.front().original).epsilon(0.05));
    for (std::size_t k = 1; k < e.size(); ++k) CHECK(e[k].modified <= e[k - 1].modified);

    s.initial_velocity = std::make_shared<const VectorField>(periodic(16));
    s.dt = 0.25;
    const auto z = energy_series(s);
    for (const auto& v : z) {
      CHECK(v.original == 0.0);
      CHECK(v.modified == 0.0);
    }
    CHECK(max_energy_gap(z) == 0.0);
  }
}
