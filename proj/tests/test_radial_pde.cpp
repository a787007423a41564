#include <doctest.h>

#include <cmath>
#include <vector>

#include "hypac/diagnostics.hpp"
#include "hypac/initial_data.hpp"
#include "hypac/interface_ode.hpp"
#include "hypac/radial_pde.hpp"

using namespace hypac;

namespace {

PdeParams base_params(double eps, double tau = 1.0) {
  PdeParams p;
  p.n = 2;
  p.eps = eps;
  p.tau = tau;
  p.potential = quartic_potential();
  p.damping = damping_from_spec("const:1");
  p.t_end = 0.01;
  return p;
}

FieldState tanh_layer(const PdeParams& p, const RadialGrid& g,
                      double rho0 = 0.6) {
  static const WaveProfile profile = standing_wave(quartic_potential(), 20.0,
                                                   4001);
  return layer_initial_data(g, p.eps, rho0, profile);
}

}  // namespace

TEST_CASE("grid construction and guards") {
  RadialGrid g = build_grid(0.02, 10);
  CHECK(g.n_cells == 500);
  CHECK(g.dr == doctest::Approx(0.002).epsilon(1e-15));
  CHECK(g.r.front() == 0.0);
  CHECK(g.r.back() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK(build_grid(0.01, 10).n_cells == 1000);
  CHECK_THROWS(build_grid(0.02, 7));     // too few points per eps
  CHECK_THROWS(build_grid(1e-6, 20));    // resource guard
}

TEST_CASE("stable step size formula") {
  PdeParams p = base_params(0.02);
  RadialGrid g = build_grid(0.02, 10);
  // CFL term dominates: 0.5 * 0.02 * 0.002
  CHECK(stable_dt(p, g, 0.5) == doctest::Approx(2e-5).epsilon(1e-12));
  CHECK(stable_dt(p, g, 1.0) == doctest::Approx(4e-5).epsilon(1e-12));
  CHECK_THROWS(stable_dt(p, g, 0.0));
  CHECK_THROWS(stable_dt(p, g, 1.5));

  // with a heavier damping ceiling the relaxation term can take over
  PdeParams pg = base_params(0.02);
  pg.damping = damping_from_spec("const:25");
  const double dt = stable_dt(pg, g, 1.0);
  CHECK(dt == doctest::Approx(0.02 * 0.02 / 25.0).epsilon(1e-12));
}

TEST_CASE("uniform well state is a fixed point") {
  PdeParams p = base_params(0.02);
  RadialGrid g = build_grid(0.02, 10);
  FieldState s;
  s.u.assign(g.r.size(), 1.0);
  s.w.assign(g.r.size(), 0.0);
  FieldState out = step(p, g, s, stable_dt(p, g, 0.5));
  for (size_t i = 0; i < out.u.size(); ++i) {
    CHECK(out.u[i] == 1.0);
    CHECK(out.w[i] == 0.0);
  }
}

TEST_CASE("opposite well is stationary away from the boundary stencil") {
  PdeParams p = base_params(0.02);
  RadialGrid g = build_grid(0.02, 10);
  FieldState s;
  s.u.assign(g.r.size(), -1.0);
  s.u.back() = 1.0;
  s.w.assign(g.r.size(), 0.0);
  FieldState out = step(p, g, s, stable_dt(p, g, 0.5));
  for (size_t i = 0; i + 8 < out.u.size(); ++i) {
    CHECK(out.u[i] == -1.0);
    CHECK(out.w[i] == 0.0);
  }
  CHECK(out.u.back() == 1.0);  // Dirichlet pinned
}

TEST_CASE("negative Dirichlet variant pins the other well") {
  PdeParams p = base_params(0.02);
  p.boundary = -1.0;
  RadialGrid g = build_grid(0.02, 10);
  FieldState s;
  s.u.assign(g.r.size(), -1.0);
  s.w.assign(g.r.size(), 0.0);
  FieldState out = step(p, g, s, stable_dt(p, g, 0.5));
  for (size_t i = 0; i < out.u.size(); ++i) CHECK(out.u[i] == -1.0);
  p.boundary = 0.5;
  CHECK_THROWS(validate(p));
}

TEST_CASE("step rejects unstable step sizes") {
  PdeParams p = base_params(0.02);
  RadialGrid g = build_grid(0.02, 10);
  FieldState s;
  s.u.assign(g.r.size(), 1.0);
  s.w.assign(g.r.size(), 0.0);
  CHECK_THROWS(step(p, g, s, 10.0 * stable_dt(p, g, 1.0)));
}

TEST_CASE("unstable stepping trips the blow-up guard") {
  PdeParams p = base_params(0.02);
  RadialGrid g = build_grid(0.02, 10);
  Stepper st(p, g);  // bypasses the step-size precondition
  FieldState s = tanh_layer(p, g);
  s.t = 0.0;
  bool blew = false;
  try {
    for (int k = 0; k < 500; ++k) st.advance(s, 8.0 * stable_dt(p, g, 1.0));
  } catch (const BlowUpError& e) {
    blew = true;
    CHECK(e.time > 0.0);
  }
  CHECK(blew);
}

TEST_CASE("layer moves inward: the field rises at the interface") {
  PdeParams p = base_params(0.02);
  p.t_end = 6.0 * p.eps * p.eps * p.tau;  // past the velocity transient
  RadialGrid g = build_grid(0.02, 10);
  FieldState init = tanh_layer(p, g);
  RunResult rr = run(p, g, std::move(init), {});
  const int i0 = static_cast<int>(std::round(0.6 / g.dr));
  CHECK(rr.final.w[i0] > 0.0);
  CHECK(rr.final.w[i0 - 2] > 0.0);
  CHECK(rr.final.w[i0 + 2] > 0.0);
}

TEST_CASE("step halving converges at fourth order") {
  PdeParams p = base_params(0.04);
  RadialGrid g = build_grid(0.04, 10);
  const double t_end = 2e-3;
  auto run_dt = [&](double dt) {
    Stepper st(p, g);
    FieldState s = tanh_layer(p, g);
    s.t = 0.0;
    long n = std::lround(t_end / dt);
    for (long k = 0; k < n; ++k) st.advance(s, dt);
    return s;
  };
  // a step that divides the horizon exactly, below the stability bound
  const double dt0 = t_end / 32.0;
  REQUIRE(dt0 < stable_dt(p, g, 1.0));
  FieldState a = run_dt(dt0), b = run_dt(dt0 / 2), c = run_dt(dt0 / 4);
  double d_ab = 0.0, d_bc = 0.0;
  for (size_t i = 0; i < a.u.size(); ++i) {
    d_ab = std::max(d_ab, std::abs(a.u[i] - b.u[i]));
    d_bc = std::max(d_bc, std::abs(b.u[i] - c.u[i]));
  }
  const double ratio = d_ab / d_bc;
  CHECK(ratio >= 10.0);
  CHECK(ratio <= 24.0);
}

TEST_CASE("mesh halving converges at second order") {
  const double t_end = 2e-3;
  auto run_grid = [&](int ppe, double dt) {
    PdeParams p = base_params(0.04);
    RadialGrid g = build_grid(0.04, ppe);
    Stepper st(p, g);
    FieldState s = tanh_layer(p, g);
    s.t = 0.0;
    long n = std::lround(t_end / dt);
    for (long k = 0; k < n; ++k) st.advance(s, dt);
    return std::pair{g, s};
  };
  // one time step small enough for the finest grid, shared by all
  const double dt = stable_dt(base_params(0.04), build_grid(0.04, 40), 0.4);
  auto [g1, s1] = run_grid(10, dt);
  auto [g2, s2] = run_grid(20, dt);
  auto [g3, s3] = run_grid(40, dt);
  double d12 = 0.0, d23 = 0.0;
  for (int i = 0; i <= g1.n_cells; ++i) {
    d12 = std::max(d12, std::abs(s1.u[i] - s2.u[2 * i]));
    d23 = std::max(d23, std::abs(s2.u[2 * i] - s3.u[4 * i]));
  }
  const double ratio = d12 / d23;
  CHECK(ratio >= 2.5);
  CHECK(ratio <= 6.5);
}

TEST_CASE("run bookkeeping: empty runs, snapshots, exact end times") {
  PdeParams p = base_params(0.02);
  RadialGrid g = build_grid(0.02, 10);
  FieldState init = tanh_layer(p, g);

  SUBCASE("zero horizon returns the initial state") {
    p.t_end = 0.0;
    RunResult rr = run(p, g, init, {});
    CHECK(rr.final.t == 0.0);
    CHECK(rr.final.u == init.u);
  }
  SUBCASE("snapshot at the end matches the final state") {
    p.t_end = 1e-3;
    RunResult rr = run(p, g, init, {5e-4, 1e-3});
    REQUIRE(rr.snapshots.size() == 2);
    CHECK(rr.snapshots[0].t == 5e-4);
    CHECK(rr.snapshots[1].t == 1e-3);
    CHECK(rr.final.t == 1e-3);
    CHECK(rr.snapshots[1].u == rr.final.u);
  }
  SUBCASE("snapshots must increase and stay within the horizon") {
    p.t_end = 1e-3;
    CHECK_THROWS(run(p, g, init, {5e-4, 5e-4}));
    CHECK_THROWS(run(p, g, init, {2e-3}));
  }
}

TEST_CASE("hook fires at start, stride, snapshots, and end") {
  PdeParams p = base_params(0.02);
  p.t_end = 1e-3;
  RadialGrid g = build_grid(0.02, 10);
  std::vector<double> seen;
  run(p, g, tanh_layer(p, g), {4e-4},
      [&](const FieldState& s) { seen.push_back(s.t); }, 10);
  REQUIRE(!seen.empty());
  CHECK(seen.front() == 0.0);
  CHECK(seen.back() == 1e-3);
  bool hit_snapshot = false;
  for (double t : seen) hit_snapshot = hit_snapshot || t == 4e-4;
  CHECK(hit_snapshot);
}

TEST_CASE("three-dimensional run: faster collapse, energy still falls") {
  PdeParams p2 = base_params(0.04), p3 = base_params(0.04);
  p3.n = 3;
  p2.t_end = p3.t_end = 0.04;
  RadialGrid g = build_grid(0.04, 10);
  WaveProfile prof = standing_wave(quartic_potential(), 20.0, 4001);
  auto radius_drop = [&](PdeParams& p) {
    FieldState init = layer_initial_data(g, p.eps, 0.6, prof);
    RunResult rr = run(p, g, std::move(init), {});
    // locate the zero crossing of the final state
    double rho = 0.0;
    for (size_t i = 0; i + 1 < rr.final.u.size(); ++i)
      if (rr.final.u[i] < 0.0 && rr.final.u[i + 1] >= 0.0)
        rho = g.r[i] + g.dr * (-rr.final.u[i]) /
                           (rr.final.u[i + 1] - rr.final.u[i]);
    return 0.6 - rho;
  };
  const double drop2 = radius_drop(p2);
  const double drop3 = radius_drop(p3);
  CHECK(drop2 > 0.0);
  // curvature doubles in three dimensions; the early-time drop follows
  CHECK(drop3 > 1.6 * drop2);
  CHECK(drop3 < 2.4 * drop2);
}

TEST_CASE("lighter inertia tracks the classical radius more closely") {
  // tau = eps shrinks eta = eps^2 tau; the field interface then hugs the
  // classical shrinking sphere better than at tau = 1.
  const double eps = 0.04, T = 0.1;
  WaveProfile prof = standing_wave(quartic_potential(), 20.0, 4001);
  auto l1_vs_classical = [&](double tau) {
    PdeParams p = base_params(eps, tau);
    p.t_end = T;
    RadialGrid g = build_grid(eps, 10);
    std::vector<double> snaps;
    for (int k = 0; k <= 10; ++k) snaps.push_back(T * k / 10.0);
    FieldState init = layer_initial_data(g, eps, 0.6, prof);
    RunResult rr = run(p, g, std::move(init), snaps);
    double acc = 0.0;
    for (size_t k = 0; k + 1 < snaps.size(); ++k) {
      const double d0 = l1_step_distance(rr.snapshots[k], g, 2,
                                         mcf_exact(2, 0.6, snaps[k]));
      const double d1 = l1_step_distance(rr.snapshots[k + 1], g, 2,
                                         mcf_exact(2, 0.6, snaps[k + 1]));
      acc += 0.5 * (d0 + d1) * (snaps[k + 1] - snaps[k]);
    }
    return acc;
  };
  const double gap_heavy = l1_vs_classical(1.0);
  const double gap_light = l1_vs_classical(eps);
  CHECK(gap_light < gap_heavy);
}

TEST_CASE("time relabeling between the scales") {
  CHECK(to_slow_time(0.18, 0.02) == doctest::Approx(450.0).epsilon(1e-14));
  CHECK(to_slow_time(0.0, 0.05) == 0.0);
  CHECK(to_slow_time(0.18, 0.01) == doctest::Approx(1800.0).epsilon(1e-13));
}
