#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "squeeze/analytics.hpp"
#include "squeeze/error.hpp"
#include "squeeze/schedule.hpp"

using namespace squeeze;
using std::numbers::pi;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

void check_contiguous(const PulseSchedule& s) {
  double t = 0.0;
  for (const auto& e : s.events) {
    CHECK(e.start_time == doctest::Approx(t).epsilon(1e-12));
    if (!e.is_pulse()) CHECK(e.duration > 0.0);
    t = e.end_time();
  }
  CHECK(s.total_time == doctest::Approx(t).epsilon(1e-12));
}

}  // namespace

TEST_CASE("four-pulse angle patterns") {
  const auto a = four_pulse_schedule(pi / 2, 0.01, 1).pulse_angles();
  REQUIRE(a.size() == 4);
  for (double x : a) CHECK(x == doctest::Approx(pi / 2));
  CHECK(sum(a) == doctest::Approx(2 * pi));

  const auto z = four_pulse_schedule(0.0, 0.01, 1).pulse_angles();
  CHECK(z == std::vector<double>{0.0, pi, 0.0, pi});

  const auto n = four_pulse_schedule(-pi / 2, 0.01, 1).pulse_angles();
  for (double x : n) CHECK(x == doctest::Approx(-pi / 2));
  CHECK(sum(n) == doctest::Approx(-2 * pi));

  const auto s = four_pulse_schedule(0.7, 0.02, 3);
  CHECK(s.pulse_count() == 12);
  CHECK(s.total_time == doctest::Approx(0.24));
  check_contiguous(s);
  for (const auto& e : s.events)
    if (!e.is_pulse()) CHECK(e.duration == 0.02);
  const auto angles = s.pulse_angles();
  for (std::size_t i = 0; i + 4 <= angles.size(); ++i) {
    const double quad = angles[i] + angles[i + 1] + angles[i + 2] + angles[i + 3];
    CHECK(std::remainder(quad, 2 * pi) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("four-pulse preconditions") {
  CHECK_THROWS_AS(four_pulse_schedule(4.0, 0.01, 1), Error);
  CHECK_THROWS_AS(four_pulse_schedule(0.1, 0.0, 1), Error);
  CHECK_THROWS_AS(four_pulse_schedule(0.1, 0.01, 0), Error);
  CHECK(periods_for(0.04, 0.01) == 1);
  CHECK(periods_for(0.041, 0.01) == 2);
}

TEST_CASE("splitting periods matches concatenation") {
  const auto whole = four_pulse_schedule(pi / 3, 0.01, 5);
  const auto joined = concatenate(four_pulse_schedule(pi / 3, 0.01, 2), four_pulse_schedule(pi / 3, 0.01, 3));
  REQUIRE(joined.events.size() == whole.events.size());
  for (std::size_t i = 0; i < whole.events.size(); ++i) {
    CHECK(joined.events[i].kind == whole.events[i].kind);
    CHECK(joined.events[i].angle == whole.events[i].angle);
    CHECK(joined.events[i].duration == whole.events[i].duration);
    CHECK(joined.events[i].start_time == doctest::Approx(whole.events[i].start_time).epsilon(1e-12));
  }
  CHECK(joined.total_time == doctest::Approx(whole.total_time));
}

TEST_CASE("freeze intervals") {
  const auto neg = freeze_schedule(load_preset("fig3_neg"), {});
  CHECK(*neg.t_prime == doctest::Approx(0.0068).epsilon(1e-12));
  const auto fig4 = freeze_schedule(load_preset("fig4"), {});
  CHECK(*fig4.t_prime == doctest::Approx(0.17).epsilon(1e-12));
  auto flat = load_preset("fig4");
  flat.phi = 0.0;
  CHECK(*freeze_schedule(flat, {}).t_prime == doctest::Approx(2 * flat.t0));

  auto unstable = load_preset("fig3_neg");
  unstable.G = 20.0;
  CHECK_THROWS_AS(freeze_schedule(unstable, {}), Error);
}

TEST_CASE("freeze switches at the period boundary nearest t_s") {
  const auto p = load_preset("fig3_neg");
  const double ts = *analytics::effective_model(p).t_s;
  const auto s = freeze_schedule(p, {.n_pre_periods = std::nullopt, .n_post_periods = 3});
  REQUIRE(s.switch_time);
  const double T = 4 * p.t0;
  CHECK(std::abs(*s.switch_time - ts) <= T / 2 + 1e-12);
  CHECK(std::remainder(*s.switch_time, T) == doctest::Approx(0.0).epsilon(1e-9));
  check_contiguous(s);

  const int n_pre = static_cast<int>(std::lround(*s.switch_time / T));
  const auto pre = four_pulse_schedule(p.phi, p.t0, n_pre);
  for (std::size_t i = 0; i < pre.events.size(); ++i) CHECK(s.events[i] == pre.events[i]);
  CHECK(*s.switch_index == pre.events.size());
  for (std::size_t i = *s.switch_index; i < s.events.size(); ++i)
    if (!s.events[i].is_pulse()) CHECK(s.events[i].duration == doctest::Approx(*s.t_prime));
  CHECK(s.pulse_count() == pre.pulse_count() + 12);
}

TEST_CASE("perturbation") {
  const auto base = four_pulse_schedule(pi / 2, 0.01, 100);
  CHECK(perturb_schedule(base, 0.0, 0.0, 7) == base);
  CHECK(perturb_schedule(base, 0.1, 0.1, 7) == perturb_schedule(base, 0.1, 0.1, 7));
  CHECK_FALSE(perturb_schedule(base, 0.1, 0.0, 7) == perturb_schedule(base, 0.1, 0.0, 8));

  const auto angles = perturb_schedule(base, 0.1, 0.0, 11).pulse_angles();
  REQUIRE(angles.size() == 400);
  const double mean = sum(angles) / 400;
  CHECK(std::abs(mean - pi / 2) < 3 * (0.1 * pi / 2) / 20);

  const auto timed = perturb_schedule(base, 0.0, 0.1, 11);
  check_contiguous(timed);
  CHECK(timed.pulse_angles() == base.pulse_angles());
  double dsum = 0.0;
  int n = 0;
  for (const auto& e : timed.events)
    if (!e.is_pulse()) dsum += e.duration, ++n;
  CHECK(std::abs(dsum / n - 0.01) < 3 * 0.001 / std::sqrt(n));

  // Huge spread forces redraws; every interval must still be positive.
  for (const auto& e : perturb_schedule(base, 0.0, 2.0, 3).events)
    if (!e.is_pulse()) CHECK(e.duration > 0.0);
}

TEST_CASE("text round trip") {
  const auto s = perturb_schedule(freeze_schedule(load_preset("fig3_pos"), {}), 0.1, 0.1, 5);
  const auto text = format_schedule(s);
  CHECK(text.rfind("# squeeze-sim schedule v1", 0) == 0);
  CHECK(parse_schedule(text) == s);
  CHECK_THROWS_AS(parse_schedule("not a schedule"), Error);
}
