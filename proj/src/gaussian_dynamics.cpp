#include "squeeze/gaussian_dynamics.hpp"

#include <cmath>
#include <numbers>

#include "squeeze/error.hpp"
#include "squeeze/linalg.hpp"

namespace squeeze {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

GaussianState checked(GaussianState s) {
  if (!s.mean.allFinite() || !s.cov.allFinite()) throw Error(ErrorCode::NonFiniteResult, "state overflow");
  s.cov = linalg::symmetrized(s.cov);
  return s;
}

}  // namespace

Mat4 drift_matrix(const SystemParams& p, double delta_prime) { return drift_matrix(p, delta_prime, {p.G, 0.0}); }

Mat4 drift_matrix(const SystemParams& p, double delta_prime, std::complex<double> G) {
  const double gr = 2 * G.real();
  const double gi = 2 * G.imag();
  const double k = p.kappa / 2;
  const double y = p.gamma / 2;
  Mat4 A;
  // clang-format off
  A << -k,          -delta_prime, gi,         0.0,
       delta_prime, -k,           -gr,        0.0,
       0.0,         0.0,          -y,         p.omega_m,
       -gr,         -gi,          -p.omega_m, -y;
  // clang-format on
  return A;
}

Mat4 diffusion_matrix(const SystemParams& p) {
  const double mech = p.gamma * (2 * p.n_m + 1);
  return Eigen::Vector4d(p.kappa, p.kappa, mech, mech).asDiagonal();
}

DriftDiffusion drift_diffusion(const SystemParams& p, double delta_prime) {
  return {drift_matrix(p, delta_prime), diffusion_matrix(p)};
}

Propagator make_propagator(const DriftDiffusion& dd, double duration) {
  if (!(duration >= 0.0)) throw Error(ErrorCode::NegativeTime, "duration");
  if (duration == 0.0) return {};
  // Van Loan: exp([[-A, D], [0, A^T]] t) = [[., E12], [0, exp(A^T t)]],
  // Q = exp(A t) E12.
  linalg::Mat8 m = linalg::Mat8::Zero();
  m.topLeftCorner<4, 4>() = -dd.A * duration;
  m.topRightCorner<4, 4>() = dd.D * duration;
  m.bottomRightCorner<4, 4>() = dd.A.transpose() * duration;
  const linalg::Mat8 e = linalg::expm(m);
  Propagator p;
  p.phi = e.bottomRightCorner<4, 4>().transpose();
  p.q = linalg::symmetrized(Mat4(p.phi * e.topRightCorner<4, 4>()));
  return p;
}

GaussianState propagate(const GaussianState& s, const Propagator& p) {
  GaussianState out;
  out.mean = p.phi * s.mean;
  out.cov = p.phi * s.cov * p.phi.transpose() + p.q;
  return checked(std::move(out));
}

GaussianState evolve_interval(const GaussianState& s, const DriftDiffusion& dd, double duration) {
  if (duration == 0.0) return s;
  return propagate(s, make_propagator(dd, duration));
}

GaussianState evolve_interval_rk4(const GaussianState& s, const DriftDiffusion& dd, double duration,
                                  double max_step) {
  if (!(duration >= 0.0)) throw Error(ErrorCode::NegativeTime, "duration");
  if (!(max_step > 0.0)) throw Error(ErrorCode::NonPositive, "max_step");
  if (duration == 0.0) return s;
  const int n = static_cast<int>(std::ceil(duration / max_step));
  const double h = duration / n;
  const Mat4& A = dd.A;
  auto f = [&](const Mat4& v) -> Mat4 { return A * v + v * A.transpose() + dd.D; };
  Vec4 m = s.mean;
  Mat4 v = s.cov;
  for (int i = 0; i < n; ++i) {
    const Vec4 m1 = A * m;
    const Vec4 m2 = A * (m + 0.5 * h * m1);
    const Vec4 m3 = A * (m + 0.5 * h * m2);
    const Vec4 m4 = A * (m + h * m3);
    m += h / 6 * (m1 + 2 * m2 + 2 * m3 + m4);
    const Mat4 k1 = f(v);
    const Mat4 k2 = f(v + 0.5 * h * k1);
    const Mat4 k3 = f(v + 0.5 * h * k2);
    const Mat4 k4 = f(v + h * k3);
    v += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return checked({m, v});
}

GaussianState apply_pulse(const GaussianState& s, double theta) {
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  Mat4 S = Mat4::Identity();
  S(0, 0) = c;
  S(0, 1) = -sn;
  S(1, 0) = sn;
  S(1, 1) = c;
  GaussianState out;
  out.mean = S * s.mean;
  out.cov = linalg::symmetrized(Mat4(S * s.cov * S.transpose()));
  return out;
}

SqueezingReport squeezing_report(const GaussianState& s) {
  const double a = s.cov(kXM, kXM);
  const double c = s.cov(kPM, kPM);
  const double b = 0.5 * (s.cov(kXM, kPM) + s.cov(kPM, kXM));
  const double mid = 0.5 * (a + c);
  const double rad = std::hypot(0.5 * (a - c), b);
  SqueezingReport r;
  r.var_XM = a;
  r.var_PM = c;
  r.cov_XP = b;
  r.var_YM = mid - rad;
  r.var_anti = mid + rad;
  // Y_M = (b e^{-i theta/2} + h.c.) is the minimum-variance quadrature; the
  // pi offset maps the eigenvector orientation onto that convention.
  double theta = std::fmod(std::atan2(2 * b, a - c) + std::numbers::pi, kTwoPi);
  if (theta < 0) theta += kTwoPi;
  r.theta = theta;
  r.det_mech = a * c - b * b;
  return r;
}

TrajectorySample make_sample(double t, const GaussianState& s) {
  TrajectorySample out;
  out.t = t;
  out.mech = squeezing_report(s);
  out.var_XL = s.cov(kXL, kXL);
  out.var_PL = s.cov(kPL, kPL);
  out.cross_norm = s.cross_block().norm();
  out.mean = s.mean;
  return out;
}

const TrajectorySample& Trajectory::min_var_YM(double from, double to) const {
  const TrajectorySample* best = nullptr;
  for (const auto& s : samples) {
    if (s.t < from || s.t > to) continue;
    if (!best || s.mech.var_YM < best->mech.var_YM) best = &s;
  }
  if (!best) throw Error(ErrorCode::InvalidArgument, "no samples in window");
  return *best;
}

namespace {

class Stepper {
 public:
  Stepper(const SystemParams& p, const RunOptions& opts)
      : dd_(drift_diffusion(p, p.delta0_prime)), opts_(opts), rk4_step_(opts.rk4_step_fraction * p.t0) {}

  GaussianState advance(const GaussianState& s, double duration) {
    if (duration == 0.0) return s;
    if (opts_.integrator == Integrator::RK4) return evolve_interval_rk4(s, dd_, duration, rk4_step_);
    auto it = cache_.find(duration);
    if (it == cache_.end()) it = cache_.emplace(duration, make_propagator(dd_, duration)).first;
    return propagate(s, it->second);
  }

 private:
  DriftDiffusion dd_;
  RunOptions opts_;
  double rk4_step_;
  std::map<double, Propagator> cache_;
};

}  // namespace

Trajectory run_schedule(const GaussianState& initial, const SystemParams& params, const PulseSchedule& schedule,
                        const RunOptions& opts) {
  if (!(opts.record_every >= 0.0)) throw Error(ErrorCode::NonPositive, "record_every");
  Stepper step(params, opts);
  Trajectory traj;
  traj.schedule_label = schedule.label;
  traj.samples.push_back(make_sample(0.0, initial));
  auto record = [&](double t, const GaussianState& s) {
    if (traj.samples.back().t >= t) {
      traj.samples.back() = make_sample(traj.samples.back().t, s);
    } else {
      traj.samples.push_back(make_sample(t, s));
    }
  };

  GaussianState s = initial;
  const auto& ev = schedule.events;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const auto& e = ev[i];
    if (e.is_pulse()) {
      s = apply_pulse(s, e.angle);
      record(e.start_time, s);
      continue;
    }
    double t = e.start_time;
    if (opts.record_every > 0.0) {
      const double end = e.end_time();
      const double h = opts.record_every;
      for (auto k = static_cast<long long>(std::floor(t / h + 1e-9)) + 1; k * h < end - 1e-12 * std::max(1.0, end);
           ++k) {
        s = step.advance(s, k * h - t);
        t = k * h;
        record(t, s);
      }
    }
    s = step.advance(s, t == e.start_time ? e.duration : e.end_time() - t);
    const bool pulse_follows = i + 1 < ev.size() && ev[i + 1].is_pulse();
    if (!pulse_follows) record(e.end_time(), s);
  }
  traj.final_state = s;
  return traj;
}

GaussianState final_state(const GaussianState& initial, const SystemParams& params, const PulseSchedule& schedule) {
  Stepper step(params, {});
  GaussianState s = initial;
  for (const auto& e : schedule.events) s = e.is_pulse() ? apply_pulse(s, e.angle) : step.advance(s, e.duration);
  return s;
}

GaussianState state_at(const GaussianState& initial, const SystemParams& params, const PulseSchedule& schedule,
                       double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, "t");
  if (t > schedule.total_time * (1 + 1e-12)) throw Error(ErrorCode::InvalidArgument, "t beyond schedule end");
  Stepper step(params, {});
  GaussianState s = initial;
  for (const auto& e : schedule.events) {
    if (e.start_time > t) break;
    if (e.is_pulse()) {
      s = apply_pulse(s, e.angle);
    } else {
      s = step.advance(s, e.end_time() <= t ? e.duration : t - e.start_time);
    }
  }
  return s;
}

}  // namespace squeeze
