#include "squeeze/schedule.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "squeeze/analytics.hpp"
#include "squeeze/error.hpp"

namespace squeeze {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char* kScheduleHeader = "# squeeze-sim schedule v1";

// Appends `n_periods` four-pulse periods with interval `dt` starting at `t`.
double append_periods(std::vector<ScheduleEvent>& events, double phi, double dt, int n_periods, double t) {
  const double angles[2] = {phi, complementary_angle(phi)};
  for (int p = 0; p < n_periods; ++p) {
    for (int k = 0; k < 4; ++k) {
      events.push_back(ScheduleEvent::evolve(t, dt));
      t += dt;
      events.push_back(ScheduleEvent::pulse(t, angles[k % 2]));
    }
  }
  return t;
}

void check_phi(double phi) {
  if (!(phi >= -kPi && phi <= kPi)) throw Error(ErrorCode::PhiOutOfRange, std::to_string(phi));
}

void retime(PulseSchedule& s) {
  double t = 0.0;
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    auto& e = s.events[i];
    if (s.switch_index && *s.switch_index == i) s.switch_time = t;
    e.start_time = t;
    t += e.duration;
  }
  s.total_time = t;
}

}  // namespace

std::size_t PulseSchedule::pulse_count() const {
  std::size_t n = 0;
  for (const auto& e : events) n += e.is_pulse();
  return n;
}

std::vector<double> PulseSchedule::pulse_angles() const {
  std::vector<double> out;
  for (const auto& e : events) {
    if (e.is_pulse()) out.push_back(e.angle);
  }
  return out;
}

double complementary_angle(double phi) { return (phi >= 0.0 ? kPi : -kPi) - phi; }

PulseSchedule four_pulse_schedule(double phi, double t0, int n_periods) {
  check_phi(phi);
  if (!(t0 > 0.0)) throw Error(ErrorCode::NonPositive, "t0");
  if (n_periods < 1) throw Error(ErrorCode::InvalidArgument, "n_periods < 1");
  PulseSchedule s;
  s.t0 = t0;
  s.total_time = append_periods(s.events, phi, t0, n_periods, 0.0);
  s.label = "four_pulse";
  return s;
}

int periods_for(double horizon, double t0) {
  if (!(t0 > 0.0)) throw Error(ErrorCode::NonPositive, "t0");
  if (!(horizon >= 0.0)) throw Error(ErrorCode::NegativeTime, "horizon");
  return std::max(1, static_cast<int>(std::ceil(horizon / (4 * t0) - 1e-9)));
}

PulseSchedule freeze_schedule(const SystemParams& params, const FreezeOptions& opts) {
  const auto p = validate_params(params).params;
  const auto model = analytics::effective_model(p);
  if (model.regime != Regime::Stable) throw Error(ErrorCode::UnstableRegime, "sigma <= -omega_m/4");
  if (opts.n_post_periods < 0) throw Error(ErrorCode::InvalidArgument, "n_post_periods < 0");
  const int n_pre = opts.n_pre_periods.value_or(
      std::max(1, static_cast<int>(std::lround(*model.t_s / (4 * p.t0)))));
  auto s = four_pulse_schedule(p.phi, p.t0, n_pre);
  s.switch_time = s.total_time;
  s.switch_index = s.events.size();
  s.t_prime = model.t_prime;
  s.total_time = append_periods(s.events, p.phi, *model.t_prime, opts.n_post_periods, s.total_time);
  s.label = "freeze";
  return s;
}

int post_periods_for_mechanical_periods(const SystemParams& params, double n_mech_periods) {
  const auto model = analytics::effective_model(validate_params(params).params);
  if (model.regime != Regime::Stable) throw Error(ErrorCode::UnstableRegime, "sigma <= -omega_m/4");
  const double span = n_mech_periods * 2 * kPi / params.omega_m;
  return std::max(1, static_cast<int>(std::ceil(span / (4 * *model.t_prime) - 1e-9)));
}

PulseSchedule perturb_schedule(const PulseSchedule& schedule, double angle_sigma_frac, double interval_sigma_frac,
                               std::uint64_t seed) {
  if (!(angle_sigma_frac >= 0.0)) throw Error(ErrorCode::InvalidArgument, "angle_sigma_frac < 0");
  if (!(interval_sigma_frac >= 0.0)) throw Error(ErrorCode::InvalidArgument, "interval_sigma_frac < 0");
  PulseSchedule out = schedule;
  if (angle_sigma_frac == 0.0 && interval_sigma_frac == 0.0) return out;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (auto& e : out.events) {
    if (e.is_pulse()) {
      if (angle_sigma_frac > 0.0) e.angle += angle_sigma_frac * std::abs(e.angle) * unit(rng);
    } else if (interval_sigma_frac > 0.0) {
      const double nominal = e.duration;
      double d;
      do {
        d = nominal + interval_sigma_frac * nominal * unit(rng);
      } while (!(d > 0.0));
      e.duration = d;
    }
  }
  if (interval_sigma_frac > 0.0) retime(out);
  out.label = schedule.label + "+perturbed";
  return out;
}

PulseSchedule concatenate(const PulseSchedule& a, const PulseSchedule& b) {
  PulseSchedule out = a;
  const double shift = a.total_time;
  for (auto e : b.events) {
    e.start_time += shift;
    out.events.push_back(e);
  }
  if (!a.switch_time && b.switch_time) {
    out.switch_time = *b.switch_time + shift;
    out.switch_index = *b.switch_index + a.events.size();
    out.t_prime = b.t_prime;
  }
  out.total_time = a.total_time + b.total_time;
  return out;
}

std::string format_schedule(const PulseSchedule& s) {
  std::ostringstream out;
  out.precision(17);
  out << kScheduleHeader << "\n";
  if (!s.label.empty()) out << "label " << s.label << "\n";
  out << "t0 " << s.t0 << "\n";
  if (s.t_prime) out << "t_prime " << *s.t_prime << "\n";
  if (s.switch_time) out << "switch " << *s.switch_time << " " << *s.switch_index << "\n";
  out << "total_time " << s.total_time << "\n";
  for (const auto& e : s.events) {
    if (e.is_pulse()) {
      out << "pulse " << e.start_time << " " << e.angle << "\n";
    } else {
      out << "evolve " << e.start_time << " " << e.duration << "\n";
    }
  }
  return out.str();
}

PulseSchedule parse_schedule(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kScheduleHeader) throw Error(ErrorCode::Parse, "missing schedule header");
  PulseSchedule s;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    auto fail = [&] { throw Error(ErrorCode::Parse, "schedule line " + std::to_string(line_no)); };
    if (key == "label") {
      std::getline(ls >> std::ws, s.label);
    } else if (key == "t0") {
      if (!(ls >> s.t0)) fail();
    } else if (key == "t_prime") {
      double v;
      if (!(ls >> v)) fail();
      s.t_prime = v;
    } else if (key == "switch") {
      double t;
      std::size_t idx;
      if (!(ls >> t >> idx)) fail();
      s.switch_time = t;
      s.switch_index = idx;
    } else if (key == "total_time") {
      if (!(ls >> s.total_time)) fail();
    } else if (key == "evolve" || key == "pulse") {
      double start, value;
      if (!(ls >> start >> value)) fail();
      s.events.push_back(key == "pulse" ? ScheduleEvent::pulse(start, value) : ScheduleEvent::evolve(start, value));
    } else {
      fail();
    }
  }
  return s;
}

}  // namespace squeeze
