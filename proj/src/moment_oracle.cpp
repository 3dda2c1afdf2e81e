#include "squeeze/moment_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "squeeze/error.hpp"

namespace squeeze::oracle {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kStepTolerance = 1e-9;

MomentVector operator+(const MomentVector& x, const MomentVector& y) {
  return {x.n_a + y.n_a, x.n_b + y.n_b, x.a2 + y.a2, x.b2 + y.b2, x.ab + y.ab, x.ab_dag + y.ab_dag};
}

MomentVector operator*(double h, const MomentVector& x) {
  return {h * x.n_a, h * x.n_b, h * x.a2, h * x.b2, h * x.ab, h * x.ab_dag};
}

double max_abs(const MomentVector& x) {
  return std::max({std::abs(x.n_a), std::abs(x.n_b), std::abs(x.a2), std::abs(x.b2), std::abs(x.ab),
                   std::abs(x.ab_dag)});
}

template <typename State, typename Rhs>
State rk4_step(const State& y, double h, const Rhs& f) {
  const State k1 = f(y);
  const State k2 = f(y + (0.5 * h) * k1);
  const State k3 = f(y + (0.5 * h) * k2);
  const State k4 = f(y + h * k3);
  return y + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

// H = -D a^dag a + w b^dag b + G (a + a^dag)(b + b^dag), with cavity decay
// kappa into vacuum and mechanical damping gamma into a bath with n_m.
MomentVector moment_rhs(const MomentVector& m, const SystemParams& p, double delta_prime) {
  const double G = p.G;
  const double w = p.omega_m;
  const double k = p.kappa;
  const double y = p.gamma;
  const double D = delta_prime;
  const cplx C = m.ab;
  const cplx Dm = m.ab_dag;
  MomentVector d;
  d.n_a = -k * m.n_a - 2 * G * (C + Dm).imag();
  d.n_b = -y * m.n_b + y * p.n_m - 2 * G * C.imag() + 2 * G * Dm.imag();
  d.a2 = (2.0 * kI * D - k) * m.a2 - 2.0 * kI * G * (C + Dm);
  d.b2 = (-2.0 * kI * w - y) * m.b2 - 2.0 * kI * G * (C + std::conj(Dm));
  d.ab = (kI * (D - w) - 0.5 * (k + y)) * C - kI * G * (m.b2 + m.n_b) - kI * G * (m.a2 + m.n_a + 1.0);
  d.ab_dag = (kI * (D + w) - 0.5 * (k + y)) * Dm - kI * G * (m.n_b + 1.0 + std::conj(m.b2)) +
             kI * G * (m.a2 + m.n_a + 1.0);
  return d;
}

MomentVector apply_pulse(const MomentVector& m, double theta) {
  const cplx ph = std::polar(1.0, theta);
  MomentVector out = m;
  out.a2 = ph * ph * m.a2;
  out.ab = ph * m.ab;
  out.ab_dag = ph * m.ab_dag;
  return out;
}

Mat4 to_covariance(const MomentVector& m) {
  Mat4 v;
  v(kXL, kXL) = 1 + 2 * (m.n_a + m.a2.real());
  v(kPL, kPL) = 1 + 2 * (m.n_a - m.a2.real());
  v(kXL, kPL) = 2 * m.a2.imag();
  v(kXM, kXM) = 1 + 2 * (m.n_b + m.b2.real());
  v(kPM, kPM) = 1 + 2 * (m.n_b - m.b2.real());
  v(kXM, kPM) = 2 * m.b2.imag();
  v(kXL, kXM) = 2 * (m.ab + m.ab_dag).real();
  v(kXL, kPM) = 2 * (m.ab - m.ab_dag).imag();
  v(kPL, kXM) = 2 * (m.ab + m.ab_dag).imag();
  v(kPL, kPM) = 2 * (m.ab_dag - m.ab).real();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) v(i, j) = v(j, i);
  }
  return v;
}

MomentVector from_covariance(const Mat4& v) {
  MomentVector m;
  m.n_a = (v(kXL, kXL) + v(kPL, kPL) - 2) / 4;
  m.a2 = {(v(kXL, kXL) - v(kPL, kPL)) / 4, v(kXL, kPL) / 2};
  m.n_b = (v(kXM, kXM) + v(kPM, kPM) - 2) / 4;
  m.b2 = {(v(kXM, kXM) - v(kPM, kPM)) / 4, v(kXM, kPM) / 2};
  const double xx = v(kXL, kXM);
  const double xp = v(kXL, kPM);
  const double px = v(kPL, kXM);
  const double pp = v(kPL, kPM);
  m.ab = {(xx - pp) / 4, (px + xp) / 4};
  m.ab_dag = {(xx + pp) / 4, (px - xp) / 4};
  return m;
}

std::vector<MomentSample> integrate_moments(const MomentVector& initial, const SystemParams& params,
                                            const PulseSchedule& schedule, double step_fraction) {
  if (!(step_fraction > 0.0)) throw Error(ErrorCode::NonPositive, "step_fraction");
  const double max_step = step_fraction * params.t0;
  const auto f = [&](const MomentVector& m) { return moment_rhs(m, params, params.delta0_prime); };

  std::vector<MomentSample> out{{0.0, initial}};
  MomentVector m = initial;
  const auto& ev = schedule.events;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const auto& e = ev[i];
    if (e.is_pulse()) {
      m = apply_pulse(m, e.angle);
    } else if (e.duration > 0.0) {
      const int n = static_cast<int>(std::ceil(e.duration / max_step));
      const double h = e.duration / n;
      // Step doubling on the first step of each interval: RK4 error ~ (y_h - y_{h/2,h/2}) / 15.
      const MomentVector full = rk4_step(m, h, f);
      const MomentVector half = rk4_step(rk4_step(m, 0.5 * h, f), 0.5 * h, f);
      const double err = max_abs(full + (-1.0) * half) / 15 / std::max(1.0, max_abs(half));
      if (err > kStepTolerance) throw Error(ErrorCode::StepTooLarge, "local error " + std::to_string(err));
      m = half;
      for (int s = 1; s < n; ++s) m = rk4_step(m, h, f);
      if (!std::isfinite(max_abs(m))) throw Error(ErrorCode::NonFiniteResult, "moments overflow");
    }
    const bool pulse_follows = !e.is_pulse() && i + 1 < ev.size() && ev[i + 1].is_pulse();
    if (pulse_follows) continue;
    if (out.back().t >= e.end_time()) {
      out.back().m = m;
    } else {
      out.push_back({e.end_time(), m});
    }
  }
  return out;
}

namespace {

ReducedMoments operator+(const ReducedMoments& x, const ReducedMoments& y) { return {x.n_b + y.n_b, x.b2 + y.b2}; }
ReducedMoments operator*(double h, const ReducedMoments& x) { return {h * x.n_b, h * x.b2}; }

}  // namespace

ReducedMoments reduced_rhs(const ReducedMoments& m, const ReducedModel& r) {
  ReducedMoments d;
  d.n_b = -r.gamma * m.n_b - 4 * r.sigma * m.b2.imag() + r.gamma * r.n_m;
  d.b2 = (-r.gamma - 2.0 * kI * r.omega_m - 4.0 * kI * r.sigma) * m.b2 - 2.0 * kI * r.sigma * (2 * m.n_b + 1);
  return d;
}

std::vector<ReducedMoments> integrate_reduced(const ReducedMoments& initial, const ReducedModel& model,
                                              const std::vector<double>& times, double max_step) {
  if (!(max_step > 0.0)) throw Error(ErrorCode::NonPositive, "max_step");
  const auto f = [&](const ReducedMoments& m) { return reduced_rhs(m, model); };
  std::vector<ReducedMoments> out;
  out.reserve(times.size());
  ReducedMoments m = initial;
  double t = 0.0;
  for (double target : times) {
    if (target < t) throw Error(ErrorCode::InvalidArgument, "times must be non-decreasing from 0");
    if (target > t) {
      const int n = static_cast<int>(std::ceil((target - t) / max_step));
      const double h = (target - t) / n;
      for (int s = 0; s < n; ++s) m = rk4_step(m, h, f);
      t = target;
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace squeeze::oracle
