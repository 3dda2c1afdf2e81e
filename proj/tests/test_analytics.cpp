#include <doctest.h>

#include <cmath>
#include <numbers>

#include "squeeze/analytics.hpp"
#include "squeeze/error.hpp"
#include "squeeze/moment_oracle.hpp"

using namespace squeeze;
using namespace squeeze::analytics;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<double> grid(double hi, int n) {
  std::vector<double> t(n + 1);
  for (int i = 0; i <= n; ++i) t[i] = hi * i / n;
  return t;
}

// Worst relative deviation of the closed form from the reduced moment ODE.
double ode_deviation(double sigma, double gamma, double n_th, double n_m, double t_end) {
  const oracle::ReducedModel model{sigma, 1.0, gamma, n_m};
  const auto times = grid(t_end, 40);
  const auto num = oracle::integrate_reduced({n_th, {}}, model, times, 1e-4);
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto ex = exact_dissipative_solution(sigma, 1.0, gamma, n_th, n_m, times[i]);
    worst = std::max({worst, rel(ex.var_XM(), num[i].var_XM()), rel(ex.var_PM(), num[i].var_PM()),
                      rel(ex.var_YM(), num[i].var_YM())});
  }
  return worst;
}

}  // namespace

TEST_CASE("effective sigma and model") {
  CHECK(effective_sigma(5, 0.01, 0) == 0.0);
  CHECK(effective_sigma(27.386, 0.01, pi / 2) == doctest::Approx(3.75).epsilon(1e-4));
  CHECK(effective_sigma(8, 0.005, -pi / 2) == doctest::Approx(-0.16));

  SystemParams p;
  p.G = 0;
  auto m = effective_model(p);
  CHECK(m.regime == Regime::Stable);
  CHECK(*m.omega_s == doctest::Approx(1.0));
  CHECK(*m.t_s == doctest::Approx(pi / 2));
  CHECK_FALSE(m.epsilon);

  p = load_preset("fig2");
  m = effective_model(p);
  CHECK(*m.omega_s == doctest::Approx(4.0));
  CHECK(m.omega_s_prime == doctest::Approx(16.0));
  CHECK(std::abs(m.mu - 0.25 * p.G * p.t0 * (1.0 + std::polar(1.0, p.phi))) < 1e-15);

  p.phi = -pi / 2;
  p.t0 = 0.005;
  p.G = std::sqrt(200.0);  // sigma = -0.5
  m = effective_model(p);
  CHECK(m.regime == Regime::Unstable);
  CHECK(*m.epsilon == doctest::Approx(1.0));
  CHECK_FALSE(m.omega_s);
  CHECK_FALSE(m.t_prime);

  CHECK(classify(-0.25, 1.0) == Regime::Threshold);
  CHECK(classify(-0.25 + 1e-9, 1.0) == Regime::Stable);
  CHECK(classify(-0.25 - 1e-9, 1.0) == Regime::Unstable);
}

TEST_CASE("lossless variance evolution") {
  for (double sigma : {3.75, -0.16, -0.25, -0.5}) {
    const auto v = variance_evolution(sigma, 1.0, 2.0, 0.0);
    CHECK(v.var_YM == doctest::Approx(5.0));
    CHECK(v.var_XM == doctest::Approx(5.0));
    CHECK(v.var_PM == doctest::Approx(5.0));
  }
  CHECK(variance_evolution(3.75, 1.0, 0.0, pi / 8).var_YM == doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(variance_evolution(-0.25, 1.0, 0.0, 2.0).var_YM == doctest::Approx(3 - 2 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(variance_evolution(1.0, 1.0, 0.0, -1.0), Error);

  // Singular points of the cot^2 form (omega_s t = k pi) evaluate cleanly.
  const auto at_pi = variance_evolution(3.75, 1.0, 0.0, pi / 4);
  CHECK(std::isfinite(at_pi.var_YM));
  CHECK(at_pi.var_YM == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("regime branches are continuous across threshold") {
  for (double t = 0.0; t <= 5.0; t += 0.25) {
    const double th = variance_evolution(-0.25, 1.0, 0.0, t).var_YM;
    CHECK(variance_evolution(-0.25 + 1e-8, 1.0, 0.0, t).var_YM == doctest::Approx(th).epsilon(1e-6));
    CHECK(variance_evolution(-0.25 - 1e-8, 1.0, 0.0, t).var_YM == doctest::Approx(th).epsilon(1e-6));
  }
}

TEST_CASE("unstable squeezed variance decreases toward zero") {
  double prev = 2.0;
  for (double t = 0.0; t <= 40.0; t += 0.1) {
    const double v = variance_evolution(-0.5, 1.0, 0.0, t).var_YM;
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("transposed closed form misses the pinned values") {
  const double sigma = 3.75;
  const double ts = pi / 8;
  const double reference = variance_evolution(sigma, 1.0, 0.0, ts).var_YM;
  const double transposed = transposed_form_var_YM(sigma, 1.0, 0.0, ts);
  CHECK(reference == doctest::Approx(squeezing_limit(sigma, 1.0, 0.0)));
  CHECK(transposed == doctest::Approx(1.0));
  CHECK(transposed_form_var_YM(sigma, 1.0, 0.0, 0.0) != doctest::Approx(1.0));
}

TEST_CASE("squeezing limit") {
  CHECK(squeezing_limit(0.0, 1.0, 1.5) == doctest::Approx(4.0));
  CHECK(squeezing_limit(-0.16, 1.0, 0.0) == doctest::Approx(0.36));
  CHECK(squeezing_limit(0.16, 1.0, 0.0) == doctest::Approx(1 / 1.64));
  CHECK_THROWS_AS(squeezing_limit(-0.3, 1.0, 0.0), Error);
}

TEST_CASE("exact dissipative solution") {
  SUBCASE("initial condition") {
    for (double sigma : {0.5, -0.25, -0.5}) {
      const auto m = exact_dissipative_solution(sigma, 1.0, 0.05, 2.0, 1.0, 0.0);
      CHECK(m.n_b == doctest::Approx(2.0).epsilon(1e-12));
      CHECK(std::abs(m.re_b2) < 1e-12);
      CHECK(std::abs(m.im_b2) < 1e-12);
    }
  }
  SUBCASE("matches the reduced moment ODE") {
    CHECK(ode_deviation(0.5, 0.05, 2.0, 1.0, 4 * pi / (2 * std::sqrt(3.0))) < 1e-6);
    CHECK(ode_deviation(-0.25, 0.05, 2.0, 1.0, 8.0) < 1e-6);
    CHECK(ode_deviation(-0.5, 0.05, 2.0, 1.0, 4.0) < 1e-6);
    CHECK(ode_deviation(-0.5, 1.0, 0.0, 0.0, 4.0) < 1e-6);  // gamma = epsilon
  }
  SUBCASE("gamma -> 0 reproduces the lossless family") {
    for (double sigma : {3.75, -0.16, -0.25}) {
      const double ts = sigma > -0.25 ? pi / (2 * std::sqrt(1 + 4 * sigma)) : 2.0;
      for (const double t : grid(4 * ts, 40)) {
        const auto ex = exact_dissipative_solution(sigma, 1.0, 1e-9, 0.0, 0.0, t);
        CHECK(ex.var_YM() == doctest::Approx(variance_evolution(sigma, 1.0, 0.0, t).var_YM).epsilon(1e-6));
      }
    }
  }
  SUBCASE("degenerate branch") {
    CHECK_THROWS_AS(exact_dissipative_solution(-0.5, 1.0, 2.0, 0.0, 0.0, 1.0), Error);
  }
  SUBCASE("long times approach the steady state") {
    for (double sigma : {0.0, 0.25, 3.0}) {
      const auto ex = exact_dissipative_solution(sigma, 1.0, 0.5, 0.0, 0.0, 200.0);
      const auto ss = steady_state_variances(sigma, 1.0, 0.5, 0.0);
      CHECK(ex.var_XM() == doctest::Approx(ss.var_XM).epsilon(1e-9));
      CHECK(ex.var_PM() == doctest::Approx(ss.var_PM).epsilon(1e-9));
    }
  }
}

TEST_CASE("steady state") {
  const auto zero = steady_state_variances(0.0, 1.0, 0.1, 3.0);
  CHECK(zero.var_XM == doctest::Approx(7.0));
  CHECK(zero.var_PM == doctest::Approx(7.0));
  CHECK(steady_state_variances(0.25, 1.0, 0.0, 0.0).var_XM == doctest::Approx(0.75));
  CHECK(steady_state_variances(1e8, 1.0, 0.0, 0.0).var_XM == doctest::Approx(0.5).epsilon(1e-6));
  for (double sigma = -0.24; sigma <= 100.0; sigma += 0.37)
    for (double n_m : {0.0, 5.0}) CHECK(steady_state_variances(sigma, 1.0, 0.05, n_m).var_XM >= 0.5 * (1 + 2 * n_m));
  CHECK_THROWS_AS(steady_state_variances(-0.3, 1.0, 0.1, 0.0), Error);
}

TEST_CASE("parametric theory") {
  CHECK(parametric_theory(0.04, 0.02, 3.0, 0.0) == doctest::Approx(1.0));
  CHECK(parametric_theory(0.04, 0.0, 3.0, 10.0) == doctest::Approx(std::exp(-0.4)));
  CHECK(parametric_theory(0.04, 0.02, 3.0, 1e6) == doctest::Approx(0.02 * 7 / 0.06));
  CHECK_THROWS_AS(parametric_theory(-1.0, 0.0, 0.0, 1.0), Error);
}

TEST_CASE("drive matching across the switch") {
  CavitySwitchSpec spec;
  spec.kappa = 1.0;
  spec.A1 = {0.3, -0.2};
  spec.omega0 = 5.0;
  spec.omega1 = spec.omega2 = 7.0;
  CHECK(std::abs(required_drive_for_switch(spec) - spec.A1) < 1e-15);

  spec.A1 = 1.0;
  spec.omega1 = spec.omega0;
  spec.omega2 = spec.omega0 + 10.0;
  const auto ratio = required_drive_for_switch(spec);
  CHECK(std::abs(ratio) == doctest::Approx(std::sqrt(100.25) / 0.5));
  CHECK(std::arg(ratio) == doctest::Approx(std::atan(20.0)));
  CHECK(std::arg(ratio) == doctest::Approx(1.521).epsilon(1e-3));
  spec.kappa = 0.0;
  CHECK_THROWS_AS(required_drive_for_switch(spec), Error);
}

TEST_CASE("switch timescales") {
  CavitySwitchSpec spec;
  spec.kappa = 0.1;
  spec.tau_roundtrip = 1e-5;
  const double G = 10.0;
  spec.tau_switch = 2e-5;
  CHECK(2e-5 <= 0.01 / G);
  CHECK(validate_switch_timescales(spec, G, 1.0).passed());

  spec.tau_switch = 5e-6;
  auto r = validate_switch_timescales(spec, G, 1.0);
  CHECK_FALSE(r.passed());
  CHECK(r.checks[0].detail == "faster than round trip");

  spec.tau_switch = 1.0;
  r = validate_switch_timescales(spec, 0.0, 1.0);
  CHECK(r.checks.back().name == "fast_vs_mechanical");
  CHECK_FALSE(r.checks.back().passed);
  CHECK(r.checks.back().detail == "not fast vs mechanical period");
}

TEST_CASE("photon numbers") {
  const double n = intracavity_photons(136e-6, 6.5e9, 1e6, 96.96e6);
  CHECK(n == doctest::Approx(3.37e9).epsilon(0.02));
  CHECK(intracavity_photons(272e-6, 6.5e9, 1e6, 96.96e6) == doctest::Approx(2 * n));
  CHECK(intracavity_photons(136e-6, 6.5e9, 1e6, 1e15) < 1e-3);
  CHECK(power_for_photons(n, 6.5e9, 1e6, 96.96e6) == doctest::Approx(136e-6));
  const double angular = power_for_photons(3.37e9, 6.5e9, 1e6, 96.96e6, FrequencyConvention::Angular);
  CHECK(angular == doctest::Approx(857e-6).epsilon(0.01));
  CHECK(strong_coupling_photons(9.696e6, 167.0) == doctest::Approx(3.371e9).epsilon(1e-3));
  CHECK_THROWS_AS(intracavity_photons(-1.0, 6.5e9, 1e6, 1e6), Error);
}
