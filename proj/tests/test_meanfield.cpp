#include <doctest.h>

#include <cmath>
#include <numbers>

#include "squeeze/analytics.hpp"
#include "squeeze/error.hpp"
#include "squeeze/experiments.hpp"
#include "squeeze/meanfield.hpp"

using namespace squeeze;
using namespace squeeze::meanfield;
using std::numbers::pi;

namespace {

DriveFn constant(cplx omega) {
  return [omega](double) { return omega; };
}

}  // namespace

TEST_CASE("undriven vacuum stays at zero") {
  SystemParams p;
  p.kappa = 1.0;
  p.g = 0.1;
  const auto states = integrate_meanfield({}, p, nullptr, nullptr, 5.0, 0.01);
  for (const auto& s : states) {
    CHECK(s.alpha == cplx{});
    CHECK(s.beta == cplx{});
  }
}

TEST_CASE("linear cavity steady state") {
  SystemParams p;
  p.kappa = 2.0;
  const auto states = integrate_meanfield({}, p, constant(3.0), nullptr, 10.0 / p.kappa, 0.001);
  const cplx expected = -2.0 * cplx(0, 1) * 3.0 / p.kappa;
  CHECK(std::abs(states.back().alpha - expected) < 0.01 * std::abs(expected));
}

TEST_CASE("detuned steady population matches the photon-number formula") {
  // |Omega|^2 = kappa * (photon flux) maps the cavity equation onto the
  // photon-number expression in the same frequency units.
  SystemParams p;
  p.kappa = 1.0;
  p.delta0_prime = 2.5;
  const double flux = 40.0;
  const auto states = integrate_meanfield({}, p, constant(std::sqrt(p.kappa * flux)), nullptr, 40.0, 0.002);
  const double n = analytics::intracavity_photons(flux * analytics::kPlanck, 1.0, p.kappa, p.delta0_prime);
  CHECK(std::norm(states.back().alpha) == doctest::Approx(n).epsilon(0.01));
}

TEST_CASE("free decay") {
  SystemParams p;
  p.kappa = 0.8;
  p.gamma = 0.6;
  p.g = 0.01;
  const auto states = integrate_meanfield({{1.0, 0.5}, {0.3, -0.2}, 0.0}, p, nullptr, nullptr, 30.0, 0.01);
  double prev = 1e300;
  for (std::size_t i = 0; i < states.size(); i += 100) {
    const double e = std::norm(states[i].alpha) + std::norm(states[i].beta);
    CHECK(e <= prev);
    prev = e;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("step halving converges") {
  SystemParams p;
  p.kappa = 1.0;
  p.gamma = 0.1;
  p.g = 0.05;
  p.delta0_prime = -0.5;
  const auto drive = [](double t) { return cplx(2.0 * std::sin(1.3 * t), 0.0); };
  const auto a = integrate_meanfield({}, p, drive, nullptr, 10.0, 0.002).back();
  const auto b = integrate_meanfield({}, p, drive, nullptr, 10.0, 0.001).back();
  CHECK(std::abs(a.alpha - b.alpha) / std::abs(b.alpha) < 1e-8);
  CHECK(std::abs(a.beta - b.beta) / std::abs(b.beta) < 1e-8);
}

TEST_CASE("pulses rotate the cavity amplitude") {
  SystemParams p;
  const auto sched = four_pulse_schedule(pi / 2, 0.5, 1);
  MeanFieldOptions opts;
  opts.schedule = &sched;
  const auto states = integrate_meanfield({{1.0, 0.0}, {}, 0.0}, p, nullptr, nullptr, 0.6, 0.01, opts);
  CHECK(std::abs(states.back().alpha - cplx(0, 1)) < 1e-12);
}

TEST_CASE("parametric resonance") {
  for (double n_m : {0.0, 50.0}) {
    const auto sc = experiments::parametric_scenario(n_m);
    const auto r = parametric_simulation(sc.params, sc.spec, sc.t_end);
    CHECK(r.fit_constant == doctest::Approx(0.45).epsilon(0.05 / 0.45));
    CHECK(r.max_rel_deviation < 0.1);
    CHECK(r.xi0 == doctest::Approx(std::abs(r.omega_s - sc.params.omega_m)));
    const double floor = sc.params.gamma * (2 * n_m + 1) / (sc.params.gamma + r.xi0);
    CHECK(r.samples.back().var_YM == doctest::Approx(floor).epsilon(0.1));
    CHECK(parametric_csv(r).rfind("# squeeze-sim schema v1\nt,re_alpha", 0) == 0);
  }
  auto sc = experiments::parametric_scenario(0.0);
  sc.params.phi = 0.0;
  CHECK_THROWS_AS(parametric_simulation(sc.params, sc.spec, sc.t_end), Error);
}
