#include "squeeze/analytics.hpp"

#include <cmath>
#include <numbers>

#include "squeeze/error.hpp"

namespace squeeze::analytics {

namespace {

constexpr double kPi = std::numbers::pi;

void require_time(double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::NegativeTime, std::to_string(t));
}

// (1 - (1 + x) e^{-x}) / x^2, finite at x = 0.
double relax2(double x) {
  if (std::abs(x) < 1e-3) return 0.5 - x / 3 + x * x / 8 - x * x * x / 30;
  return (1.0 - (1.0 + x) * std::exp(-x)) / (x * x);
}

// (1 - e^{-x}) / x, finite at x = 0.
double relax1(double x) {
  if (x == 0.0) return 1.0;
  return -std::expm1(-x) / x;
}

// (sqrt(1+r) - 1)/(sqrt(1+r) + 1) without cancellation; r = +inf gives 1.
double ratio_form(double r) {
  if (std::isinf(r)) return 1.0;
  const double q = std::sqrt(1.0 + r) + 1.0;
  return r / (q * q);
}

}  // namespace

double effective_sigma(double G, double t0, double phi) { return 0.5 * G * G * t0 * std::sin(phi); }

Regime classify(double sigma, double omega_m) {
  const double threshold = -omega_m / 4;
  const double tol = kRegimeTolerance * omega_m;
  if (sigma > threshold + tol) return Regime::Stable;
  if (sigma >= threshold - tol) return Regime::Threshold;
  return Regime::Unstable;
}

EffectiveModel effective_model(const SystemParams& p) {
  EffectiveModel m;
  m.sigma = effective_sigma(p.G, p.t0, p.phi);
  m.regime = classify(m.sigma, p.omega_m);
  m.omega_s_prime = p.omega_m + 4 * m.sigma;
  m.mu = 0.25 * p.G * p.t0 * (1.0 + std::polar(1.0, p.phi));
  const double w2 = p.omega_m * (p.omega_m + 4 * m.sigma);
  switch (m.regime) {
    case Regime::Stable:
      m.omega_s = std::sqrt(w2);
      m.t_s = kPi / (2 * *m.omega_s);
      m.t_prime = 2 * p.t0 * (1 + p.G * p.G * p.t0 * std::sin(p.phi) / p.omega_m);
      break;
    case Regime::Threshold:
      m.omega_s = 0.0;
      m.epsilon = 0.0;
      break;
    case Regime::Unstable:
      m.epsilon = std::sqrt(-w2);
      break;
  }
  return m;
}

Variances variance_evolution(double sigma, double omega_m, double n_th, double t) {
  require_time(t);
  if (!(n_th >= 0.0)) throw Error(ErrorCode::NegativeOccupation, "n_th");
  const double w = omega_m;
  const double thermal = 1 + 2 * n_th;
  Variances v;
  switch (classify(sigma, w)) {
    case Regime::Stable: {
      const double ws = std::sqrt(w * (w + 4 * sigma));
      const double x = ws * t;
      // s = sin(ws t)/ws keeps every term finite near threshold and at the
      // cot^2 poles.
      const double s = std::sin(x) / ws;
      const double c = std::cos(x);
      const double a = (w + 2 * sigma) * (w + 2 * sigma);
      v.var_YM = 1 + 2 * n_th +
                 4 * thermal * (2 * sigma * sigma * s * s - std::abs(sigma) * std::abs(s) * std::sqrt(a * s * s + c * c));
      v.var_PM = thermal * (1 + 4 * sigma * (w + 4 * sigma) * s * s);
      v.var_XM = thermal * (1 - 4 * sigma * w * s * s);
      break;
    }
    case Regime::Threshold: {
      const double wt = w * t;
      v.var_YM = thermal * (t == 0.0 ? 1.0 : ratio_form(4.0 / (wt * wt)));
      v.var_XM = thermal * (1 + wt * wt);
      v.var_PM = thermal;
      break;
    }
    case Regime::Unstable: {
      const double eps = std::sqrt(-w * (w + 4 * sigma));
      const double u = std::expm1(2 * eps * t);
      if (t == 0.0) {
        v.var_YM = thermal;
      } else {
        // r = (1+u) eps^2 / (sigma^2 u^2)
        const double inv_u = 1.0 / u;
        const double r = (inv_u + inv_u * inv_u) * eps * eps / (sigma * sigma);
        v.var_YM = thermal * ratio_form(r);
      }
      const double ch = std::cosh(eps * t);
      const double sh_over = t == 0.0 ? 0.0 : std::sinh(eps * t) / eps;
      v.var_XM = thermal * (ch * ch + w * w * sh_over * sh_over);
      v.var_PM = thermal * (ch * ch + eps * eps * sh_over * sh_over / (w * w));
      break;
    }
  }
  return v;
}

double transposed_form_var_YM(double sigma, double omega_m, double n_th, double t) {
  const double thermal = 1 + 2 * n_th;
  if (sigma == 0.0) return thermal;
  const double ws = std::sqrt(omega_m * (omega_m + 4 * sigma));
  const double c2 = std::pow(std::cos(ws * t), 2);
  // (2 sigma^2/ws^2) cos^2 (sqrt(1 + ws^2/(sigma^2 cos^2)) - 1), finite at cos = 0
  const double term = 2 * sigma * sigma / (ws * ws) * (std::sqrt(c2 * c2 + ws * ws * c2 / (sigma * sigma)) - c2);
  return thermal * (1 - term);
}

double squeezing_limit(double sigma, double omega_m, double n_th) {
  if (classify(sigma, omega_m) != Regime::Stable) throw Error(ErrorCode::OutOfRegime, "sigma <= -omega_m/4");
  const double thermal = 1 + 2 * n_th;
  if (sigma < 0) return thermal * (omega_m + 4 * sigma) / omega_m;
  return thermal * omega_m / (omega_m + 4 * sigma);
}

ExactSolutionConstants exact_solution_constants(double omega_s, double gamma, double n_m) {
  const std::complex<double> z =
      std::complex<double>(gamma * n_m, omega_s) / std::complex<double>(gamma, -2 * omega_s);
  return {z.real(), z.imag()};
}

double MechanicalMoments::var_YM() const { return 1 + 2 * (n_b - std::hypot(re_b2, im_b2)); }

MechanicalMoments exact_dissipative_solution(double sigma, double omega_m, double gamma, double n_th, double n_m,
                                             double t) {
  require_time(t);
  if (!(gamma >= 0.0)) throw Error(ErrorCode::NonPositive, "gamma");
  const double w = omega_m;
  const double E = std::exp(-gamma * t);
  MechanicalMoments m;
  switch (classify(sigma, w)) {
    case Regime::Stable: {
      const double ws = std::sqrt(w * (w + 4 * sigma));
      const auto [a, b] = exact_solution_constants(ws, gamma, n_m);
      const double c = std::cos(2 * ws * t);
      const double s = std::sin(2 * ws * t);
      const double g2 = gamma / (2 * ws);
      const double osc = (n_th - a) * c + g2 * (n_m - a) * s;
      const double ws2 = ws * ws;
      m.n_b = -4 * sigma * sigma / ws2 * (a + E * osc) +
              (w + 2 * sigma) * (w + 2 * sigma) / ws2 * (n_m + (n_th - n_m) * E);
      m.re_b2 = 2 * sigma * (w + 2 * sigma) / ws2 * (a - n_m + E * (osc + n_m - n_th));
      m.im_b2 = -2 * sigma / ws * (b * (1 - E * (c + g2 * s)) + E * (n_th + 0.5) * s);
      break;
    }
    case Regime::Threshold: {
      const double x = gamma * t;
      const double drive = 2 * n_m + 1;
      const double quad = 0.5 * w * w * (t * t * (n_th - n_m) * E + drive * t * t * relax2(x));
      m.n_b = quad + (n_th - n_m) * E + n_m;
      m.re_b2 = quad;
      m.im_b2 = w * t * (n_th - n_m) * E + 0.5 * w * drive * t * relax1(x);
      break;
    }
    case Regime::Unstable: {
      const double eps = std::sqrt(-w * (w + 4 * sigma));
      if (std::abs(gamma - 2 * eps) <= 1e-10 * std::max(1.0, eps)) {
        throw Error(ErrorCode::DegenerateBranch, "gamma = 2 epsilon");
      }
      const double w0 = w + 2 * sigma;
      const double ep = std::exp(2 * eps * t);
      const double em = std::exp(-2 * eps * t);
      const double d = gamma * gamma - 4 * eps * eps;
      const double gm = gamma - 2 * eps;
      const double gp = gamma + 2 * eps;
      const double s2 = sigma * sigma;
      const double e2 = eps * eps;
      const double mix_minus = ep / gm - em / gp;
      const double mix_plus = ep / gm + em / gp;
      const double weighted = gamma / gm * ep + gamma / gp * em;
      m.n_b = (-w0 * w0 + 8 * s2 * (ep + em)) * n_th / (4 * e2) * E + (w0 * w0 + gamma * gamma) / d * n_m -
              (-w0 * w0 + 8 * s2 * weighted) * n_m / (4 * e2) * E + 8 * s2 / d - mix_minus * 2 * s2 / eps * E;
      m.re_b2 = (1 - 0.5 * (ep + em)) * sigma * w0 * n_th / e2 * E - 4 * sigma * w0 / d * n_m -
                (1 - weighted) * sigma * w0 * n_m / e2 * E - 2 * sigma * w0 / d +
                mix_minus * w0 * sigma / (2 * eps) * E;
      m.im_b2 = -(ep - em) * sigma * n_th / eps * E - 4 * sigma * gamma / d * n_m +
                mix_minus * sigma * gamma * n_m / eps * E - 2 * gamma * sigma / d + mix_plus * sigma * E;
      break;
    }
  }
  return m;
}

SteadyState steady_state_variances(double sigma, double omega_m, double gamma, double n_m) {
  if (classify(sigma, omega_m) != Regime::Stable) throw Error(ErrorCode::OutOfRegime, "sigma <= -omega_m/4");
  const double den = gamma * gamma / 4 + omega_m * (omega_m + 4 * sigma);
  const double thermal = 1 + 2 * n_m;
  return {thermal * (1 - 2 * sigma * omega_m / den), thermal * (1 + 2 * sigma * (omega_m + 4 * sigma) / den)};
}

double parametric_theory(double xi0, double gamma, double n_m, double t) {
  if (!(xi0 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "xi0 < 0");
  require_time(t);
  const double rate = gamma + xi0;
  if (rate == 0.0) return 1.0;
  const double e = std::exp(-rate * t);
  return e + gamma * (2 * n_m + 1) / rate * (1 - e);
}

std::complex<double> required_drive_for_switch(const CavitySwitchSpec& spec) {
  if (!(spec.kappa > 0.0)) throw Error(ErrorCode::NonPositive, "kappa");
  const std::complex<double> before(spec.kappa / 2, spec.omega1 - spec.omega0);
  const std::complex<double> after(spec.kappa / 2, spec.omega2 - spec.omega0);
  return spec.A1 * after / before;
}

bool TimescaleReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

TimescaleReport validate_switch_timescales(const CavitySwitchSpec& spec, double G, double omega_m) {
  if (!(spec.tau_switch > 0.0)) throw Error(ErrorCode::NonPositive, "tau_switch");
  if (!(spec.tau_roundtrip > 0.0)) throw Error(ErrorCode::NonPositive, "tau_roundtrip");
  TimescaleReport r;
  const double tau = spec.tau_switch;
  const bool slow_enough = tau > spec.tau_roundtrip;
  r.checks.push_back({"slower_than_round_trip", slow_enough, slow_enough ? "ok" : "faster than round trip"});
  auto fast_vs = [&](const char* name, double rate, const char* what) {
    const bool ok = !(rate > 0.0) || tau < 0.1 / rate;
    r.checks.push_back({name, ok, ok ? "ok" : std::string("not fast vs ") + what});
  };
  fast_vs("fast_vs_coupling", G, "1/G");
  fast_vs("fast_vs_decay", spec.kappa, "1/kappa");
  fast_vs("fast_vs_mechanical", omega_m, "mechanical period");
  return r;
}

namespace {

double detuned_response(double kappa_Hz, double delta_Hz, FrequencyConvention conv) {
  const double scale = conv == FrequencyConvention::Angular ? 2 * kPi : 1.0;
  const double k = kappa_Hz * scale;
  const double d = delta_Hz * scale;
  return k / (k * k / 4 + d * d);
}

}  // namespace

double intracavity_photons(double power_W, double laser_Hz, double kappa_Hz, double delta_Hz,
                           FrequencyConvention conv) {
  if (!(power_W > 0.0)) throw Error(ErrorCode::NonPositive, "power");
  if (!(laser_Hz > 0.0)) throw Error(ErrorCode::NonPositive, "laser frequency");
  if (!(kappa_Hz > 0.0)) throw Error(ErrorCode::NonPositive, "kappa");
  // hbar*omega_L = h*f_L in either convention
  return power_W / (kPlanck * laser_Hz) * detuned_response(kappa_Hz, delta_Hz, conv);
}

double power_for_photons(double photons, double laser_Hz, double kappa_Hz, double delta_Hz,
                         FrequencyConvention conv) {
  if (!(photons > 0.0)) throw Error(ErrorCode::NonPositive, "photons");
  if (!(laser_Hz > 0.0)) throw Error(ErrorCode::NonPositive, "laser frequency");
  if (!(kappa_Hz > 0.0)) throw Error(ErrorCode::NonPositive, "kappa");
  return photons * kPlanck * laser_Hz / detuned_response(kappa_Hz, delta_Hz, conv);
}

double strong_coupling_photons(double omega_m, double g) {
  if (!(g > 0.0)) throw Error(ErrorCode::NonPositive, "g");
  return (omega_m / g) * (omega_m / g);
}

}  // namespace squeeze::analytics
