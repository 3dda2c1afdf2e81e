#include "squeeze/meanfield.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "squeeze/analytics.hpp"
#include "squeeze/error.hpp"
#include "squeeze/gaussian_dynamics.hpp"
#include "squeeze/linalg.hpp"

namespace squeeze::meanfield {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Deriv {
  cplx da;
  cplx db;
};

Deriv rhs(const MeanFieldState& s, const SystemParams& p, const DriveFn& drive, const DetuningFn& detuning,
          bool hold) {
  const double D = detuning ? detuning(s.t) : p.delta0_prime;
  const cplx omega = drive ? drive(s.t) : cplx{};
  cplx da = (-0.5 * p.kappa + kI * D) * s.alpha - kI * omega;
  if (!hold) da += kI * p.g * s.alpha * (s.beta + std::conj(s.beta));
  const cplx db = (-0.5 * p.gamma - kI * p.omega_m) * s.beta + kI * p.g * std::norm(s.alpha);
  return {da, db};
}

void require_finite(const MeanFieldState& s) {
  if (!std::isfinite(std::abs(s.alpha)) || !std::isfinite(std::abs(s.beta))) {
    throw Error(ErrorCode::NonFiniteResult, "mean field at t = " + std::to_string(s.t));
  }
}

}  // namespace

MeanFieldState rk4_step(const MeanFieldState& s, const SystemParams& p, const DriveFn& drive,
                        const DetuningFn& detuning, double h, bool hold) {
  auto at = [&](const Deriv& k, double c) {
    return MeanFieldState{s.alpha + c * k.da, s.beta + c * k.db, s.t + c};
  };
  const Deriv k1 = rhs(s, p, drive, detuning, hold);
  const Deriv k2 = rhs(at(k1, 0.5 * h), p, drive, detuning, hold);
  const Deriv k3 = rhs(at(k2, 0.5 * h), p, drive, detuning, hold);
  const Deriv k4 = rhs(at(k3, h), p, drive, detuning, hold);
  MeanFieldState out;
  out.alpha = s.alpha + h / 6 * (k1.da + 2.0 * k2.da + 2.0 * k3.da + k4.da);
  out.beta = s.beta + h / 6 * (k1.db + 2.0 * k2.db + 2.0 * k3.db + k4.db);
  out.t = s.t + h;
  return out;
}

std::vector<MeanFieldState> integrate_meanfield(const MeanFieldState& initial, const SystemParams& params,
                                                const DriveFn& drive, const DetuningFn& detuning, double t_end,
                                                double step, const MeanFieldOptions& opts) {
  if (!(step > 0.0)) throw Error(ErrorCode::NonPositive, "step");
  if (!(t_end >= initial.t)) throw Error(ErrorCode::NegativeTime, "t_end");

  // Segment boundaries: pulse times inside (t, t_end] and t_end itself.
  std::vector<std::pair<double, double>> pulses;
  if (opts.schedule) {
    for (const auto& e : opts.schedule->events) {
      if (e.is_pulse() && e.start_time > initial.t && e.start_time <= t_end) pulses.emplace_back(e.start_time, e.angle);
    }
  }

  std::vector<MeanFieldState> out{initial};
  MeanFieldState s = initial;
  auto advance_to = [&](double target) {
    const double span = target - s.t;
    if (span <= 0.0) return;
    const auto n = static_cast<long long>(std::ceil(span / step - 1e-9));
    const double h = span / static_cast<double>(n);
    const double start = s.t;
    for (long long i = 1; i <= n; ++i) {
      s = rk4_step(s, params, drive, detuning, h, opts.hold_effective_detuning);
      s.t = i == n ? target : start + static_cast<double>(i) * h;
      require_finite(s);
      out.push_back(s);
    }
  };
  for (const auto& [time, angle] : pulses) {
    advance_to(time);
    s.alpha *= std::polar(1.0, angle);
    out.back() = s;
  }
  advance_to(t_end);
  return out;
}

namespace {

struct DriveRun {
  std::vector<cplx> G_mid;  // g*alpha at every substep midpoint
  std::vector<MeanFieldState> period_ends;
};

DriveRun run_drive(const SystemParams& p, const ParametricSpec& spec, const PulseSchedule& schedule, double omega_s) {
  const double h = p.t0 / spec.substeps;
  const DriveFn drive = [&](double t) { return cplx{spec.Omega0 * std::sin(omega_s * t), 0.0}; };
  const DetuningFn detuning = [&](double) { return p.delta0_prime; };
  DriveRun run;
  MeanFieldState s;
  std::size_t intervals = 0;
  for (const auto& e : schedule.events) {
    if (e.is_pulse()) {
      s.alpha *= std::polar(1.0, e.angle);
      if (intervals % 4 == 0) run.period_ends.push_back(s);
      continue;
    }
    for (int j = 0; j < spec.substeps; ++j) {
      const MeanFieldState mid = rk4_step(s, p, drive, detuning, 0.5 * h, true);
      run.G_mid.push_back(p.g * mid.alpha);
      s = rk4_step(mid, p, drive, detuning, 0.5 * h, true);
    }
    require_finite(s);
    ++intervals;
  }
  return run;
}

Mat4 rotation(double theta) {
  Mat4 S = Mat4::Identity();
  S(0, 0) = S(1, 1) = std::cos(theta);
  S(1, 0) = std::sin(theta);
  S(0, 1) = -S(1, 0);
  return S;
}

struct Fit {
  double G2 = 0.0;
  double residual = 0.0;
};

// Least squares of omega_loc^2 - omega_m^2 = G^2 * 4 omega_m t0 sin(phi) sin^2(omega_s t)
// over four-pulse periods of the lossless fluctuation map.
Fit fit_coupling(const SystemParams& p, const ParametricSpec& spec, const PulseSchedule& schedule,
                 const DriveRun& run, double omega_s) {
  SystemParams lossless = p;
  lossless.kappa = 0.0;
  lossless.gamma = 0.0;
  const double h = p.t0 / spec.substeps;
  const double period = 4 * p.t0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  std::vector<std::pair<double, double>> points;
  Mat4 M = Mat4::Identity();
  std::size_t sub = 0, intervals = 0;
  for (const auto& e : schedule.events) {
    if (!e.is_pulse()) {
      for (int j = 0; j < spec.substeps; ++j) {
        M = linalg::expm(Mat4(drift_matrix(lossless, p.delta0_prime, run.G_mid[sub++]) * h)) * M;
      }
      ++intervals;
      continue;
    }
    M = rotation(e.angle) * M;
    if (intervals % 4 != 0) continue;
    const Eigen::EigenSolver<Mat4> es(M, false);
    double w = 0.0;
    for (int i = 0; i < 4; ++i) w = std::max(w, std::abs(std::arg(es.eigenvalues()[i])));
    w /= period;
    const double t_mid = e.start_time - 0.5 * period;
    const double x = 4 * p.omega_m * p.t0 * std::sin(p.phi) * std::pow(std::sin(omega_s * t_mid), 2);
    const double y = w * w - p.omega_m * p.omega_m;
    points.emplace_back(x, y);
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
    M = Mat4::Identity();
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::FitFailed, "degenerate fit design");
  Fit f;
  f.G2 = sxy / sxx;
  double ss = 0.0;
  for (const auto& [x, y] : points) ss += (y - f.G2 * x) * (y - f.G2 * x);
  f.residual = syy > 0.0 ? std::sqrt(ss / syy) : 0.0;
  return f;
}

double modulation_frequency(const SystemParams& p, double G2) {
  const double w2 = p.omega_m * (p.omega_m + 2 * G2 * p.t0 * std::sin(p.phi));
  if (!(w2 > 0.0)) throw Error(ErrorCode::FitFailed, "fitted coupling is above threshold");
  return std::sqrt(w2);
}

}  // namespace

ParametricResult parametric_simulation(const SystemParams& params, const ParametricSpec& spec, double t_end) {
  const auto p = validate_params(params).params;
  if (!(spec.Omega0 > 0.0)) throw Error(ErrorCode::NonPositive, "Omega0");
  if (!(p.g > 0.0)) throw Error(ErrorCode::NonPositive, "g");
  if (spec.substeps < 1) throw Error(ErrorCode::InvalidArgument, "substeps < 1");
  if (!(t_end > 0.0)) throw Error(ErrorCode::NonPositive, "t_end");
  if (std::abs(std::sin(p.phi)) < 1e-12) throw Error(ErrorCode::FitFailed, "sin(phi) = 0 gives no parametric gain");

  const auto schedule = four_pulse_schedule(p.phi, p.t0, periods_for(t_end, p.t0));
  const double scale = p.g * spec.Omega0 * p.t0;
  double omega_s = spec.omega_s_target.value_or(modulation_frequency(p, std::pow(0.45 * scale, 2)));

  ParametricResult r;
  DriveRun run;
  Fit fit;
  bool converged = false;
  for (r.iterations = 1; r.iterations <= spec.max_iterations; ++r.iterations) {
    run = run_drive(p, spec, schedule, omega_s);
    fit = fit_coupling(p, spec, schedule, run, omega_s);
    const double next = modulation_frequency(p, fit.G2);
    const bool done = std::abs(next - omega_s) <= spec.fit_tolerance * omega_s;
    omega_s = next;
    if (done) {
      converged = true;
      break;
    }
  }
  if (!converged) throw Error(ErrorCode::FitFailed, "modulation frequency did not converge");
  if (fit.residual > spec.max_residual) {
    throw Error(ErrorCode::FitFailed, "relative residual " + std::to_string(fit.residual));
  }
  run = run_drive(p, spec, schedule, omega_s);

  r.fitted_G = std::sqrt(fit.G2);
  r.fit_constant = r.fitted_G / scale;
  r.omega_s = omega_s;
  r.xi0 = std::abs(omega_s - p.omega_m);
  r.fit_residual = fit.residual;

  // Fluctuations with the actual losses and bath.
  const Mat4 D = diffusion_matrix(p);
  const double h = p.t0 / spec.substeps;
  GaussianState state = thermal_initial_state(0.0, p.n_th);
  std::size_t sub = 0, intervals = 0, period = 0;
  for (const auto& e : schedule.events) {
    if (!e.is_pulse()) {
      for (int j = 0; j < spec.substeps; ++j) {
        state = evolve_interval(state, {drift_matrix(p, p.delta0_prime, run.G_mid[sub++]), D}, h);
      }
      ++intervals;
      continue;
    }
    state = apply_pulse(state, e.angle);
    if (intervals % 4 != 0) continue;
    const auto& mf = run.period_ends[period++];
    ParametricSample sample;
    sample.t = e.start_time;
    sample.alpha = mf.alpha;
    sample.beta = mf.beta;
    sample.var_YM = squeezing_report(state).var_YM;
    sample.var_YM_theory = analytics::parametric_theory(r.xi0, p.gamma, p.n_m, sample.t);
    r.max_rel_deviation =
        std::max(r.max_rel_deviation, std::abs(sample.var_YM - sample.var_YM_theory) / sample.var_YM_theory);
    r.samples.push_back(sample);
  }
  return r;
}

std::string meanfield_csv(const std::vector<MeanFieldState>& states) {
  std::ostringstream out;
  out.precision(12);
  out << "# squeeze-sim schema v1\n";
  out << "t,re_alpha,im_alpha,re_beta,im_beta,abs_alpha2\n";
  for (const auto& s : states) {
    out << s.t << ',' << s.alpha.real() << ',' << s.alpha.imag() << ',' << s.beta.real() << ',' << s.beta.imag()
        << ',' << std::norm(s.alpha) << '\n';
  }
  return out.str();
}

std::string parametric_csv(const ParametricResult& r) {
  std::ostringstream out;
  out.precision(12);
  out << "# squeeze-sim schema v1\n";
  out << "t,re_alpha,im_alpha,re_beta,im_beta,abs_alpha2,var_YM,var_YM_theory\n";
  for (const auto& s : r.samples) {
    out << s.t << ',' << s.alpha.real() << ',' << s.alpha.imag() << ',' << s.beta.real() << ',' << s.beta.imag()
        << ',' << std::norm(s.alpha) << ',' << s.var_YM << ',' << s.var_YM_theory << '\n';
  }
  return out.str();
}

}  // namespace squeeze::meanfield
