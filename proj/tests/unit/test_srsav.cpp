#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "savns/cases.hpp"
#include "savns/operators.hpp"
#include "savns/srsav.hpp"

using namespace savns;
using namespace testing;

namespace {

SrConfig sr(double dt, double eps, int order, int s = 2) {
  SrConfig c;
  c.base.dt = dt;
  c.base.eps = eps;
  c.base.order = order;
  c.s = s;
  return c;
}

// Runs `steps` steps and returns the final state.
FlowState advance(const Grid& g, const SrConfig& cfg, const FlowState& s0, int steps) {
  SrSavStepper st(g, cfg);
  SrState s = SrState::from(s0);
  SrState prev = cfg.base.order == 2 ? st.start_second_order(s) : s;
  for (int k = 0; k < steps; ++k) {
    SrState n = cfg.base.order == 1 ? st.step_first_order(s).first : st.step_second_order(s, prev).first;
    prev = std::move(s);
    s = std::move(n);
  }
  return s.flow;
}

}  // namespace

TEST_SUITE("srsav") {
  TEST_CASE("zero data stays zero") {
    for (const Grid& g : {periodic(16), dirichlet(10)})
      for (int order : {1, 2}) {
        SrSavStepper st(g, sr(0.1, 1e-5, order));
        SrState s = SrState::from(FlowState::initial(VectorField(g)));
        SrState prev = order == 2 ? st.start_second_order(s) : s;
        for (int k = 0; k < 3; ++k) {
          SrState n = order == 1 ? st.step_first_order(s).first : st.step_second_order(s, prev).first;
          for (const auto& p : n.pressure_history) CHECK(linf(p) == 0.0);
          prev = s;
          s = n;
        }
        CHECK(linf(s.flow.u) == 0.0);
        CHECK(linf(s.flow.p) == 0.0);
        CHECK(s.flow.q == 1.0);
      }
  }

  TEST_CASE("constraint identity holds for every committed step") {
    for (const Grid& g : {periodic(24), dirichlet(14)}) {
      const ManufacturedCase c = make_case(g.periodic() ? CaseId::Example2 : CaseId::Example1);
      for (auto history : {SrHistory::PerSequence, SrHistory::Committed})
        for (int order : {1, 2}) {
          SrConfig cfg = sr(0.125, 1e-5, order);
          cfg.history = history;
          cfg.base.forcing = c.forcing;
          SrSavStepper st(g, cfg);
          SrState s = SrState::from(c.initial_state(g));
          SrState prev = order == 2 ? st.start_second_order(s) : s;
          for (int k = 0; k < 4; ++k) {
            auto [n, d] = order == 1 ? st.step_first_order(s) : st.step_second_order(s, prev);
            CHECK(d.constraint_residual <= 8 * std::numeric_limits<double>::epsilon() * d.constraint_scale);
            CHECK(n.pressure_history.size() == 3);
            prev = std::move(s);
            s = std::move(n);
          }
        }
    }
  }

  TEST_CASE("first-order constraint recomputed by hand") {
    const Grid g = periodic(24);
    const ManufacturedCase c = make_case(CaseId::Example2);
    SrConfig cfg = sr(0.1, 1e-3, 1, 1);
    cfg.history = SrHistory::Committed;
    SrSavStepper st(g, cfg);
    const SrState s0 = SrState::from(c.initial_state(g));
    const SrState s1 = st.step_first_order(s0).first;
    // s = 1: (div u1 - div u0)/dt + beta div u1 = -eps (p1 - p0), p0 = 0.
    const ScalarField lhs = (1 / cfg.base.dt) * (divergence(s1.flow.u) - divergence(s0.flow.u)) +
                            cfg.beta * divergence(s1.flow.u);
    const ScalarField rhs = -cfg.base.eps * s1.flow.p;
    CHECK(linf(lhs - rhs) <= 1e-12 * (linf(lhs) + 1e-300));
  }

  TEST_CASE("a second inner iteration reduces the error") {
    const Grid g = dirichlet(24);
    const ManufacturedCase c = make_case(CaseId::Example1);
    const double dt = 1.0 / 16;
    double err[2];
    for (int s : {1, 2}) {
      SrConfig cfg = sr(dt, 0.05, 2, s);
      cfg.base.forcing = c.forcing;
      const FlowState fin = advance(g, cfg, c.initial_state(g), 16);
      err[s - 1] = linf(fin.u - sample_velocity(c.exact_u, g, fin.t));
    }
    CHECK(err[1] < err[0]);
  }

  TEST_CASE("SR divergence is far below P-SAV at the same eps") {
    const Grid g = dirichlet(20);
    const ManufacturedCase c = make_case(CaseId::Example1);
    SrConfig cfg = sr(1.0 / 8, 1e-5, 1);
    cfg.base.forcing = c.forcing;
    const FlowState a = advance(g, cfg, c.initial_state(g), 8);
    PenaltySavStepper p(g, cfg.base);
    FlowState b = c.initial_state(g);
    for (int k = 0; k < 8; ++k) b = p.step_first_order(b).first;
    CHECK(linf(divergence(a.u)) < 1e-2 * linf(divergence(b.u)));
  }

  TEST_CASE("SR-SAV is first order in time with one iteration") {
    const Grid g = periodic(32);
    const ManufacturedCase c = make_case(CaseId::Example2);
    double e[2];
    for (int k = 0; k < 2; ++k) {
      const double dt = k == 0 ? 1.0 / 8 : 1.0 / 16;
      const FlowState fin = advance(g, sr(dt, 1e-5, 1, 1), c.initial_state(g), static_cast<int>(1 / dt));
      e[k] = linf(fin.u - sample_velocity(c.exact_u, g, fin.t));
    }
    CHECK(order(e[0], e[1]) == doctest::Approx(1.0).epsilon(0.15));
  }

  TEST_CASE("divergence does not accumulate over a long free decay") {
    const Grid g = dirichlet(16);
    SrConfig cfg = sr(0.1, 1e-5, 1);
    SrSavStepper st(g, cfg);
    VectorField u0 = random_vector(g, 17);
    SrState s = SrState::from(FlowState::initial(u0));
    double prev = linf(divergence(s.flow.u));
    int growth = 0;
    for (int k = 0; k < 100; ++k) {
      s = st.step_first_order(s).first;
      const double d = linf(divergence(s.flow.u));
      growth += d > prev;
      prev = d;
    }
    CHECK(growth < 100);
    CHECK(std::isfinite(prev));
  }

  TEST_CASE("bad configurations") {
    const Grid g = periodic(16);
    CHECK_THROWS(SrSavStepper{g, sr(0.1, 1e-5, 1, 0)});
    SrConfig c = sr(0.1, 1e-5, 1);
    c.beta = -1;
    CHECK_THROWS(SrSavStepper{g, c});
  }
}
