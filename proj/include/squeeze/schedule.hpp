#pragma once

// Pulse schedules: ordered timelines of free-evolution intervals and
// instantaneous optical rotation pulses.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "squeeze/model.hpp"

namespace squeeze {

struct ScheduleEvent {
  enum class Kind { FreeEvolution, Pulse };

  Kind kind = Kind::FreeEvolution;
  double start_time = 0.0;
  double duration = 0.0;  // zero for pulses
  double angle = 0.0;     // rotation angle for pulses

  bool is_pulse() const { return kind == Kind::Pulse; }
  double end_time() const { return start_time + duration; }

  static ScheduleEvent evolve(double start, double duration) { return {Kind::FreeEvolution, start, duration, 0.0}; }
  static ScheduleEvent pulse(double start, double angle) { return {Kind::Pulse, start, 0.0, angle}; }

  friend bool operator==(const ScheduleEvent&, const ScheduleEvent&) = default;
};

struct PulseSchedule {
  std::vector<ScheduleEvent> events;
  std::optional<double> switch_time;
  // Index of the first event after the switch, when switch_time is set.
  std::optional<std::size_t> switch_index;
  double total_time = 0.0;
  double t0 = 0.0;
  std::optional<double> t_prime;
  std::string label;

  std::size_t pulse_count() const;
  std::vector<double> pulse_angles() const;

  friend bool operator==(const PulseSchedule&, const PulseSchedule&) = default;
};

// The two pulse angles of one half-period: phi and s*pi - phi with
// s = sign(phi) (s = +1 at phi = 0).
double complementary_angle(double phi);

// [evolve t0, pulse phi, evolve t0, pulse s*pi - phi] x 2 per period.
PulseSchedule four_pulse_schedule(double phi, double t0, int n_periods);

// Number of four-pulse periods needed to reach `horizon`.
int periods_for(double horizon, double t0);

struct FreezeOptions {
  std::optional<int> n_pre_periods;  // nullopt: nearest period boundary to t_s
  int n_post_periods = 1;
};

// Four-pulse squeezing phase with interval t0 followed by the frozen phase
// with interval t'. Requires the Stable regime.
PulseSchedule freeze_schedule(const SystemParams& params, const FreezeOptions& opts);

// Post-switch periods covering `n_mech_periods` bare mechanical periods.
int post_periods_for_mechanical_periods(const SystemParams& params, double n_mech_periods);

// Gaussian errors on pulse angles (sd = angle_frac*|nominal|) and/or
// intervals (sd = interval_frac*nominal, non-positive draws are redrawn).
// Deterministic given the seed; zero fractions return the input unchanged.
PulseSchedule perturb_schedule(const PulseSchedule& schedule, double angle_sigma_frac, double interval_sigma_frac,
                               std::uint64_t seed);

// Time-shifted concatenation (used to build schedules piecewise).
PulseSchedule concatenate(const PulseSchedule& a, const PulseSchedule& b);

// Audit format: one event per line, versioned header.
std::string format_schedule(const PulseSchedule& s);
PulseSchedule parse_schedule(const std::string& text);

}  // namespace squeeze
