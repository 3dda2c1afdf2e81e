// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "squeeze/analytics.hpp"
#include "squeeze/error.hpp"
#include "squeeze/experiments.hpp"
#include "squeeze/gaussian_dynamics.hpp"
#include "squeeze/meanfield.hpp"
#include "squeeze/moment_oracle.hpp"
#include "squeeze/schedule.hpp"

using namespace squeeze;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double circular_distance(double a, double b) { return std::abs(std::remainder(a - b, 2 * pi)); }

Trajectory squeezing_run(const SystemParams& p) {
  return run_schedule(thermal_initial_state(0.0, p.n_th), p, experiments::search_schedule(p));
}

Outcome baseline_minimum() {
  const auto start = std::chrono::steady_clock::now();
  const auto traj = squeezing_run(load_preset("fig4"));
  const double v = traj.min_var_YM().mech.var_YM;
  const double dt = seconds_since(start);
  return {std::abs(v - 0.0714) <= 0.004 && dt < 1.0,
          fmt("fig4 min var_YM = %.5f (target 0.0714 +- 0.004), %.3f s", v, dt)};
}

Outcome analytic_limit() {
  const auto start = std::chrono::steady_clock::now();
  const auto f4 = load_preset("fig4");
  const double sigma = analytics::effective_model(f4).sigma;
  const double limit = analytics::squeezing_limit(sigma, f4.omega_m, f4.n_th);
  const double pulsed = squeezing_run(f4).min_var_YM().mech.var_YM;
  bool ok = std::abs(limit - 0.0625) < 1e-12 && pulsed > limit;
  std::string detail = fmt("limit %.6f, fig4 pulsed %.5f", limit, pulsed);
  for (const auto& [name, target] : {std::pair{"fig3_neg", 0.36}, std::pair{"fig3_pos", 1 / 1.64}}) {
    const double v = squeezing_run(load_preset(name)).min_var_YM().mech.var_YM;
    const double rel = std::abs(v - target) / target;
    ok = ok && rel < 0.03;
    detail += fmt("; %s %.5f vs %.4f (%.2f%%)", name, v, target, 100 * rel);
  }
  const double dt = seconds_since(start);
  return {ok && dt < 1.0, detail + fmt(", %.3f s", dt)};
}

Outcome timing() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"fig2", "fig3_neg", "fig3_pos", "fig4"}) {
    const auto p = load_preset(name);
    const double ts = *analytics::effective_model(p).t_s;
    const double t_min = squeezing_run(p).min_var_YM().t;
    const double T = 4 * p.t0;
    ok = ok && std::abs(t_min - ts) <= T;
    detail += fmt("%s%s |t_min - t_s| = %.4f (T = %.3f)", detail.empty() ? "" : "; ", name, std::abs(t_min - ts), T);
  }
  return {ok, detail};
}

Outcome frozen_stationarity() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (const auto& [name, target] : {std::pair{"fig3_neg", pi}, std::pair{"fig3_pos", 0.0}}) {
    const auto p = load_preset(name);
    FreezeOptions fo;
    fo.n_post_periods = post_periods_for_mechanical_periods(p, 5.0);
    const auto sched = freeze_schedule(p, fo);
    const auto samples = experiments::period_samples(thermal_initial_state(0.0, p.n_th), p, sched);
    double lo = 1e300, hi = -1e300, sum = 0.0, theta_dev = 0.0;
    int n = 0;
    for (const auto& s : samples) {
      if (s.t < *sched.switch_time - 1e-12) continue;
      lo = std::min(lo, s.mech.var_YM);
      hi = std::max(hi, s.mech.var_YM);
      sum += s.mech.var_YM;
      ++n;
      theta_dev = std::max(theta_dev, circular_distance(s.mech.theta, target));
    }
    const double drift = (hi - lo) / (sum / n);
    ok = ok && drift < 0.01 && theta_dev < 0.05;
    detail += fmt("%s%s drift %.2f%%, max |theta - %.4f| = %.4f", detail.empty() ? "" : "; ", name, 100 * drift,
                  target, theta_dev);
  }
  const double dt = seconds_since(start);
  return {ok && dt < 2.0, detail + fmt(", %.3f s", dt)};
}

Outcome montecarlo() {
  const auto start = std::chrono::steady_clock::now();
  const auto base = load_preset("fig4");
  const auto angles = experiments::montecarlo_errors(experiments::ErrorKind::Angles, 0.1, 400, 20230101, base);
  const auto intervals = experiments::montecarlo_errors(experiments::ErrorKind::Intervals, 0.1, 400, 20230101, base);
  const double dt = seconds_since(start);
  const bool ok = std::abs(angles.mean - 0.0746) <= 0.003 && std::abs(intervals.mean - 0.0745) <= 0.003 && dt < 30;
  return {ok, fmt("angles mean %.5f (0.0746), intervals mean %.5f (0.0745), %.2f s", angles.mean, intervals.mean, dt)};
}

Outcome oracle_equivalence() {
  auto p = load_preset("fig2");
  p.kappa = 0.1;
  p.gamma = 0.01;
  p.n_m = 1.0;
  const auto sched = four_pulse_schedule(p.phi, p.t0, 2);
  const auto initial = thermal_initial_state(0.0, p.n_th);
  const auto traj = run_schedule(initial, p, sched);
  const auto mom = oracle::integrate_moments(oracle::from_covariance(initial.cov), p, sched);
  if (mom.size() != traj.samples.size()) return {false, "sample count mismatch"};
  double worst = 0.0;
  for (std::size_t i = 0; i < mom.size(); ++i) {
    const Mat4 V = oracle::to_covariance(mom[i].m);
    const auto& r = traj.samples[i].mech;
    worst = std::max({worst, std::abs(V(kXM, kXM) - r.var_XM) / r.var_XM, std::abs(V(kPM, kPM) - r.var_PM) / r.var_PM,
                      std::abs(V(kXM, kPM) - r.cov_XP) / std::sqrt(r.var_XM * r.var_PM)});
  }
  return {worst < 1e-8, fmt("max relative deviation %.2e over %zu samples", worst, mom.size())};
}

Outcome exact_solution() {
  constexpr double n_th = 2.0, n_m = 1.0;
  double worst = 0.0;
  std::string detail;
  auto compare = [&](double sigma, double gamma, const char* label) {
    const double ws = sigma > -0.25 ? std::sqrt(1 + 4 * sigma) : 1.0;
    const double horizon = 4 * pi / (2 * ws);
    std::vector<double> times;
    for (int i = 0; i <= 200; ++i) times.push_back(horizon * i / 200);
    const auto num = oracle::integrate_reduced({n_th, {}}, {sigma, 1.0, gamma, n_m}, times, 1e-4);
    double w = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto ex = analytics::exact_dissipative_solution(sigma, 1.0, gamma, n_th, n_m, times[i]);
      w = std::max({w, std::abs(ex.var_XM() - num[i].var_XM()) / num[i].var_XM(),
                    std::abs(ex.var_PM() - num[i].var_PM()) / num[i].var_PM(),
                    std::abs(ex.var_YM() - num[i].var_YM()) / num[i].var_YM()});
      if (gamma == 0.0) {
        const double closed = analytics::variance_evolution(sigma, 1.0, n_th, times[i]).var_YM;
        w = std::max(w, std::abs(closed - num[i].var_YM()) / num[i].var_YM());
      }
    }
    worst = std::max(worst, w);
    detail += fmt("%s%s %.1e", detail.empty() ? "" : "; ", label, w);
  };
  compare(0.5, 0.05, "stable");
  compare(-0.25, 0.0, "threshold");
  compare(-0.5, 0.05, "unstable");
  return {worst < 1e-6, "max relative deviation " + detail};
}

Outcome steady_state() {
  bool bound = true;
  for (int i = 0; i <= 1000; ++i) {
    const double sigma = 100.0 * i / 1000;
    for (double n_m : {0.0, 1.0, 50.0}) {
      bound = bound && analytics::steady_state_variances(sigma, 1.0, 0.05, n_m).var_XM >= 0.5 * (1 + 2 * n_m);
    }
  }
  bool ok = bound;
  std::string detail = bound ? "3 dB bound holds on sigma in [0, 100]" : "3 dB bound violated";
  for (const char* name : {"fig3_neg", "fig3_pos"}) {
    auto p = load_preset(name);
    p.gamma = 0.05;
    const double sigma = analytics::effective_model(p).sigma;
    const auto ss = analytics::steady_state_variances(sigma, p.omega_m, p.gamma, p.n_m);
    const auto sched = four_pulse_schedule(p.phi, p.t0, periods_for(400.0, p.t0));
    const auto samples = experiments::period_samples(thermal_initial_state(0.0, p.n_th), p, sched);
    double worst = 0.0;
    for (const auto& s : samples) {
      if (s.t < 380.0) continue;
      worst = std::max({worst, std::abs(s.mech.var_XM - ss.var_XM) / ss.var_XM,
                        std::abs(s.mech.var_PM - ss.var_PM) / ss.var_PM});
    }
    ok = ok && worst < 0.01;
    detail += fmt("; %s t in [380, 400] max deviation %.2f%%", name, 100 * worst);
  }
  return {ok, detail};
}

Outcome symplectic_purity() {
  double worst_det = 0.0;
  for (const char* name : {"fig2", "fig3_neg", "fig3_pos", "fig4"}) {
    const auto p = load_preset(name);
    const auto traj = run_schedule(GaussianState{}, p, four_pulse_schedule(p.phi, p.t0, 25));
    worst_det = std::max(worst_det, std::abs(traj.final_state.cov.determinant() - 1.0));
  }
  double worst_mech = 0.0;
  for (const char* name : {"fig3_neg", "fig3_pos"}) {
    const auto p = load_preset(name);
    FreezeOptions fo;
    fo.n_post_periods = post_periods_for_mechanical_periods(p, 5.0);
    for (const auto& s : experiments::period_samples(GaussianState{}, p, freeze_schedule(p, fo)))
      worst_mech = std::max(worst_mech, s.mech.det_mech);
  }
  return {worst_det < 1e-6 && worst_mech <= 1.05,
          fmt("|det(cov) - 1| after 100 pulses %.1e; max mechanical det %.4f", worst_det, worst_mech)};
}

Outcome unstable_gain() {
  SystemParams p;
  p.phi = -pi / 2;
  p.t0 = 0.005;
  p.G = std::sqrt(200.0);
  const double eps = *analytics::effective_model(p).epsilon;
  const auto samples =
      experiments::period_samples(GaussianState{}, p, four_pulse_schedule(p.phi, p.t0, periods_for(5.0, p.t0)));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& s : samples) {
    if (s.t < 2.0 - 1e-12 || s.t > 5.0 + 1e-12) continue;
    const double y = std::log(s.mech.var_anti);
    sx += s.t, sy += y, sxx += s.t * s.t, sxy += s.t * y;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double rel = std::abs(slope - 2 * eps) / (2 * eps);
  return {rel < 0.05, fmt("log-slope %.4f vs 2 epsilon = %.4f (%.2f%%)", slope, 2 * eps, 100 * rel)};
}

Outcome parametric() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (double n_m : {0.0, 50.0}) {
    const auto sc = experiments::parametric_scenario(n_m);
    const auto r = meanfield::parametric_simulation(sc.params, sc.spec, sc.t_end);
    ok = ok && std::abs(r.fit_constant - 0.45) <= 0.05 && r.max_rel_deviation < 0.1;
    detail += fmt("n_m = %g: G/(g Omega0 t0) = %.4f, max deviation from theory %.1f%%; ", n_m, r.fit_constant,
                  100 * r.max_rel_deviation);
  }
  const double dt = seconds_since(start);
  return {ok && dt < 60, detail + fmt("%.2f s", dt)};
}

Outcome photons() {
  const double n = analytics::intracavity_photons(136e-6, 6.5e9, 1e6, 96.96e6);
  const double rel = std::abs(n - 3.37e9) / 3.37e9;
  return {rel < 0.02, fmt("n = %.4e at 136 uW (target 3.37e9, %.2f%%)", n, 100 * rel)};
}

Outcome wigner_normalization() {
  const auto dir = std::filesystem::temp_directory_path() / "squeeze_acceptance_wigner";
  std::filesystem::remove_all(dir);
  double worst = 0.0;
  int fields = 0;
  for (const char* fig : {"fig2", "fig3"}) {
    const auto manifest = experiments::run_figure(fig, dir / fig);
    for (const std::string f : manifest["files"]) {
      if (f.rfind("wigner_", 0) != 0 || !f.ends_with(".json")) continue;
      std::ifstream in(dir / fig / f);
      const auto j = nlohmann::json::parse(in);
      worst = std::max(worst, std::abs(j["integral"].get<double>() - 1.0));
      ++fields;
    }
  }
  std::filesystem::remove_all(dir);
  return {fields > 0 && worst <= 1e-3, fmt("%d fields, max |integral - 1| = %.1e", fields, worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"baseline squeezing minimum", baseline_minimum},
      {"analytic limit consistency", analytic_limit},
      {"squeezing time", timing},
      {"frozen stationarity", frozen_stationarity},
      {"pulse-error Monte Carlo", montecarlo},
      {"oracle equivalence", oracle_equivalence},
      {"exact-solution regression", exact_solution},
      {"steady-state 3 dB bound", steady_state},
      {"symplectic purity", symplectic_purity},
      {"unstable gain", unstable_gain},
      {"parametric resonance", parametric},
      {"intracavity photon number", photons},
      {"Wigner normalization", wigner_normalization},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", index - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
