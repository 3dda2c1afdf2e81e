#include "squeeze_c.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include <json.hpp>

#include "squeeze/analytics.hpp"
#include "squeeze/error.hpp"
#include "squeeze/experiments.hpp"
#include "squeeze/gaussian_dynamics.hpp"
#include "squeeze/io.hpp"
#include "squeeze/moment_oracle.hpp"
#include "squeeze/wigner.hpp"

struct squeeze_params {
  squeeze::SystemParams p;
};

struct squeeze_trajectory {
  squeeze::Trajectory traj;
  squeeze::PulseSchedule schedule;
  squeeze::SystemParams params;
};

namespace {

using json = nlohmann::json;
namespace sq = squeeze;

thread_local std::string g_last_error;

squeeze_status fail(squeeze_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename Fn>
squeeze_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SQUEEZE_OK;
  } catch (const sq::Error& e) {
    return fail(static_cast<squeeze_status>(static_cast<int>(e.code()) + 1), e.what());
  } catch (const json::exception& e) {
    return fail(SQUEEZE_ERR_PARSE, std::string("Parse: ") + e.what());
  } catch (const std::exception& e) {
    return fail(SQUEEZE_ERR_INTERNAL, std::string("Internal: ") + e.what());
  } catch (...) {
    return fail(SQUEEZE_ERR_INTERNAL, "Internal: unknown exception");
  }
}

void require(const void* ptr, const char* name) {
  if (!ptr) throw sq::Error(sq::ErrorCode::InvalidArgument, std::string(name) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

squeeze_run_options defaults() {
  squeeze_run_options o;
  o.freeze = 0;
  o.freeze_mech_periods = 5.0;
  o.t_end = 0.0;
  o.record_every = 0.0;
  return o;
}

sq::PulseSchedule build_schedule(const sq::SystemParams& p, const squeeze_run_options& o) {
  if (o.freeze) {
    sq::FreezeOptions fo;
    fo.n_post_periods = sq::post_periods_for_mechanical_periods(p, o.freeze_mech_periods);
    return sq::freeze_schedule(p, fo);
  }
  double horizon = o.t_end;
  if (!(horizon > 0.0)) {
    const auto model = sq::analytics::effective_model(p);
    horizon = model.t_s ? sq::experiments::kHorizonFactor * *model.t_s : 2 * std::numbers::pi / p.omega_m;
  }
  return sq::four_pulse_schedule(p.phi, p.t0, sq::periods_for(horizon, p.t0));
}

void fill(squeeze_sample* out, const sq::TrajectorySample& s) {
  out->t = s.t;
  out->var_XL = s.var_XL;
  out->var_PL = s.var_PL;
  out->var_XM = s.mech.var_XM;
  out->var_PM = s.mech.var_PM;
  out->var_YM = s.mech.var_YM;
  out->var_anti = s.mech.var_anti;
  out->theta = s.mech.theta;
  out->cov_XMPM = s.mech.cov_XP;
  out->det_mech = s.mech.det_mech;
  out->cross_norm = s.cross_norm;
  for (int i = 0; i < 4; ++i) out->mean[i] = s.mean[i];
}

double arg_or(const json& args, const char* key, double fallback) {
  return args.contains(key) ? args.at(key).get<double>() : fallback;
}

double arg(const json& args, const char* key) {
  if (!args.contains(key)) throw sq::Error(sq::ErrorCode::InvalidArgument, std::string("missing argument '") + key + "'");
  return args.at(key).get<double>();
}

sq::analytics::FrequencyConvention convention(const json& args) {
  const std::string c = args.value("convention", std::string("cyclic"));
  if (c == "cyclic") return sq::analytics::FrequencyConvention::Cyclic;
  if (c == "angular") return sq::analytics::FrequencyConvention::Angular;
  throw sq::Error(sq::ErrorCode::InvalidArgument, "convention must be cyclic or angular");
}

json analytic(const sq::SystemParams& p, const std::string& q, const json& args) {
  namespace an = sq::analytics;
  const auto model = an::effective_model(p);
  if (q == "effective_model") {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(); };
    return {{"sigma", model.sigma},
            {"regime", std::string(sq::to_string(model.regime))},
            {"omega_s", opt(model.omega_s)},
            {"epsilon", opt(model.epsilon)},
            {"omega_s_prime", model.omega_s_prime},
            {"mu", {model.mu.real(), model.mu.imag()}},
            {"t_s", opt(model.t_s)},
            {"t_prime", opt(model.t_prime)}};
  }
  if (q == "squeezing_limit") return {{"var_YM", an::squeezing_limit(model.sigma, p.omega_m, p.n_th)}};
  if (q == "variance_evolution") {
    const auto v = an::variance_evolution(model.sigma, p.omega_m, p.n_th, arg(args, "t"));
    return {{"var_YM", v.var_YM}, {"var_XM", v.var_XM}, {"var_PM", v.var_PM}};
  }
  if (q == "exact_solution") {
    const auto m = an::exact_dissipative_solution(model.sigma, p.omega_m, p.gamma, p.n_th, p.n_m, arg(args, "t"));
    return {{"n_b", m.n_b},         {"re_b2", m.re_b2},       {"im_b2", m.im_b2},
            {"var_XM", m.var_XM()}, {"var_PM", m.var_PM()}, {"var_YM", m.var_YM()}};
  }
  if (q == "steady_state") {
    const auto s = an::steady_state_variances(model.sigma, p.omega_m, p.gamma, p.n_m);
    return {{"var_XM", s.var_XM}, {"var_PM", s.var_PM}};
  }
  if (q == "parametric_theory") {
    if (!args.contains("xi0") && !model.omega_s) {
      throw sq::Error(sq::ErrorCode::OutOfRegime, "parametric gain needs the stable regime or an explicit xi0");
    }
    const double xi0 = args.contains("xi0") ? arg(args, "xi0") : std::abs(*model.omega_s - p.omega_m);
    return {{"xi0", xi0}, {"var_YM", an::parametric_theory(xi0, p.gamma, p.n_m, arg(args, "t"))}};
  }
  if (q == "intracavity_photons") {
    return {{"photons", an::intracavity_photons(arg(args, "power_W"), arg(args, "laser_Hz"), arg(args, "kappa_Hz"),
                                                arg_or(args, "delta_Hz", 0.0), convention(args))}};
  }
  if (q == "power_for_photons") {
    return {{"power_W", an::power_for_photons(arg(args, "photons"), arg(args, "laser_Hz"), arg(args, "kappa_Hz"),
                                              arg_or(args, "delta_Hz", 0.0), convention(args))}};
  }
  if (q == "strong_coupling_photons") return {{"photons", an::strong_coupling_photons(p.omega_m, p.g)}};
  throw sq::Error(sq::ErrorCode::InvalidArgument, "unknown quantity '" + q + "'");
}

}  // namespace

extern "C" {

const char* squeeze_version(void) { return "0.1.0"; }

const char* squeeze_last_error(void) { return g_last_error.c_str(); }

const char* squeeze_status_name(squeeze_status status) {
  switch (status) {
    case SQUEEZE_OK:
      return "Ok";
    case SQUEEZE_ERR_INTERNAL:
      return "Internal";
    default:
      break;
  }
  const int code = static_cast<int>(status) - 1;
  if (code >= 0 && code <= static_cast<int>(sq::ErrorCode::Io)) {
    return sq::to_string(static_cast<sq::ErrorCode>(code)).data();
  }
  return "Unknown";
}

void squeeze_string_free(char* s) { delete[] s; }

void squeeze_run_options_default(squeeze_run_options* opts) {
  if (opts) *opts = defaults();
}

squeeze_status squeeze_params_create(squeeze_params** out) {
  return guarded([&] {
    require(out, "out");
    *out = new squeeze_params{};
  });
}

squeeze_status squeeze_params_from_preset(const char* name, squeeze_params** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = new squeeze_params{sq::load_preset(name)};
  });
}

squeeze_status squeeze_params_from_scenario(const char* text, squeeze_params** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new squeeze_params{sq::parse_scenario(text)};
  });
}

squeeze_status squeeze_params_load(const char* path, squeeze_params** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new squeeze_params{sq::load_scenario_file(path)};
  });
}

void squeeze_params_destroy(squeeze_params* p) { delete p; }

squeeze_status squeeze_params_set(squeeze_params* p, const char* key, double value) {
  return guarded([&] {
    require(p, "params");
    require(key, "key");
    sq::set_param(p->p, key, value);
  });
}

squeeze_status squeeze_params_override(squeeze_params* p, const char* assignment) {
  return guarded([&] {
    require(p, "params");
    require(assignment, "assignment");
    sq::apply_assignment(p->p, assignment);
  });
}

squeeze_status squeeze_params_get(const squeeze_params* p, const char* key, double* out) {
  return guarded([&] {
    require(p, "params");
    require(key, "key");
    require(out, "out");
    *out = sq::get_param(p->p, key);
  });
}

squeeze_status squeeze_params_validate(const squeeze_params* p, char** warnings_json) {
  return guarded([&] {
    require(p, "params");
    const auto v = sq::validate_params(p->p);
    if (warnings_json) {
      json arr = json::array();
      for (const auto& w : v.warnings) arr.push_back({{"code", w.code}, {"message", w.message}});
      *warnings_json = dup_string(arr.dump());
    }
  });
}

squeeze_status squeeze_params_to_json(const squeeze_params* p, char** out) {
  return guarded([&] {
    require(p, "params");
    require(out, "out");
    *out = dup_string(sq::io::params_json(p->p).dump(2));
  });
}

squeeze_status squeeze_simulate(const squeeze_params* p, const squeeze_run_options* opts, squeeze_trajectory** out) {
  return guarded([&] {
    require(p, "params");
    require(out, "out");
    const squeeze_run_options o = opts ? *opts : defaults();
    const auto params = sq::validate_params(p->p).params;
    auto result = std::make_unique<squeeze_trajectory>();
    result->params = params;
    result->schedule = build_schedule(params, o);
    sq::RunOptions ro;
    ro.record_every = o.record_every;
    result->traj = sq::run_schedule(sq::thermal_initial_state(0.0, params.n_th), params, result->schedule, ro);
    *out = result.release();
  });
}

void squeeze_trajectory_destroy(squeeze_trajectory* t) { delete t; }

size_t squeeze_trajectory_size(const squeeze_trajectory* t) { return t ? t->traj.samples.size() : 0; }

squeeze_status squeeze_trajectory_sample(const squeeze_trajectory* t, size_t index, squeeze_sample* out) {
  return guarded([&] {
    require(t, "trajectory");
    require(out, "out");
    if (index >= t->traj.samples.size()) throw sq::Error(sq::ErrorCode::InvalidArgument, "sample index out of range");
    fill(out, t->traj.samples[index]);
  });
}

squeeze_status squeeze_trajectory_min(const squeeze_trajectory* t, squeeze_sample* out) {
  return guarded([&] {
    require(t, "trajectory");
    require(out, "out");
    fill(out, t->traj.min_var_YM());
  });
}

double squeeze_trajectory_switch_time(const squeeze_trajectory* t) {
  if (!t || !t->schedule.switch_time) return std::numeric_limits<double>::quiet_NaN();
  return *t->schedule.switch_time;
}

squeeze_status squeeze_trajectory_write_csv(const squeeze_trajectory* t, const char* path) {
  return guarded([&] {
    require(t, "trajectory");
    require(path, "path");
    sq::io::write_text(path, sq::io::trajectory_csv(t->traj));
  });
}

squeeze_status squeeze_trajectory_write_json(const squeeze_trajectory* t, const char* path) {
  return guarded([&] {
    require(t, "trajectory");
    require(path, "path");
    sq::io::write_text(path, sq::io::trajectory_json(t->traj, t->schedule, t->params).dump(1) + "\n");
  });
}

squeeze_status squeeze_trajectory_schedule_text(const squeeze_trajectory* t, char** text) {
  return guarded([&] {
    require(t, "trajectory");
    require(text, "text");
    *text = dup_string(sq::format_schedule(t->schedule));
  });
}

squeeze_status squeeze_oracle_check(const squeeze_params* p, const squeeze_run_options* opts,
                                    double* max_rel_deviation) {
  return guarded([&] {
    require(p, "params");
    require(max_rel_deviation, "max_rel_deviation");
    const squeeze_run_options o = opts ? *opts : defaults();
    const auto params = sq::validate_params(p->p).params;
    const auto schedule = build_schedule(params, o);
    const auto initial = sq::thermal_initial_state(0.0, params.n_th);
    const auto traj = sq::run_schedule(initial, params, schedule, {});
    const auto moments = sq::oracle::integrate_moments(sq::oracle::from_covariance(initial.cov), params, schedule);
    if (moments.size() != traj.samples.size()) throw sq::Error(sq::ErrorCode::InvalidArgument, "sample mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < moments.size(); ++i) {
      const auto cov = sq::oracle::to_covariance(moments[i].m);
      const auto& r = traj.samples[i].mech;
      worst = std::max(worst, std::abs(cov(sq::kXM, sq::kXM) - r.var_XM) / r.var_XM);
      worst = std::max(worst, std::abs(cov(sq::kPM, sq::kPM) - r.var_PM) / r.var_PM);
    }
    *max_rel_deviation = worst;
  });
}

squeeze_status squeeze_wigner(const squeeze_params* p, double t, const char* outdir, char** manifest_json) {
  return guarded([&] {
    require(p, "params");
    require(outdir, "outdir");
    const auto params = sq::validate_params(p->p).params;
    if (!(t >= 0.0)) throw sq::Error(sq::ErrorCode::NegativeTime, "t");
    const auto schedule = sq::four_pulse_schedule(params.phi, params.t0, sq::periods_for(t, params.t0));
    const auto state = sq::state_at(sq::thermal_initial_state(0.0, params.n_th), params, schedule, t);
    const std::filesystem::path dir(outdir);
    json files = json::array();
    json integrals;
    for (auto sub : {sq::wigner::Subsystem::Optical, sq::wigner::Subsystem::Mechanical}) {
      const auto field = sq::wigner::wigner_marginal(state, sub);
      const std::string stem = std::string("wigner_") + (sub == sq::wigner::Subsystem::Optical ? "optical" : "mech");
      sq::io::write_text(dir / (stem + ".csv"), sq::wigner::field_csv(field));
      sq::io::write_text(dir / (stem + ".json"), sq::wigner::field_json(field, state, t) + "\n");
      files.push_back(stem + ".csv");
      files.push_back(stem + ".json");
      integrals[std::string(sq::wigner::to_string(sub))] = field.integral();
    }
    if (manifest_json) *manifest_json = dup_string(json{{"t", t}, {"files", files}, {"integrals", integrals}}.dump(2));
  });
}

squeeze_status squeeze_sweep(const squeeze_params* base, double phi, squeeze_range G, squeeze_range t0,
                             unsigned threads, const char* out_csv, char** summary_json) {
  return guarded([&] {
    require(base, "params");
    const auto r = sq::experiments::sweep_min_variance({G.lo, G.hi, G.n}, {t0.lo, t0.hi, t0.n}, phi, base->p, threads);
    if (out_csv) sq::io::write_text(out_csv, sq::experiments::sweep_csv(r));
    if (summary_json) {
      std::size_t unstable = 0, failed = 0;
      const sq::experiments::SweepCell* best = nullptr;
      for (const auto& c : r.cells) {
        unstable += c.unstable();
        failed += !c.error.empty();
        if (c.min_var_YM && (!best || *c.min_var_YM < *best->min_var_YM)) best = &c;
      }
      json j{{"phi", phi}, {"cells", r.cells.size()}, {"unstable_cells", unstable}, {"failed_cells", failed}};
      if (best) j["best"] = {{"G", best->G}, {"t0", best->t0}, {"min_var_YM", *best->min_var_YM}};
      *summary_json = dup_string(j.dump(2));
    }
  });
}

squeeze_status squeeze_montecarlo(const squeeze_params* base, const char* kind, double sigma_frac, int events,
                                  uint64_t seed, unsigned threads, const char* outdir, char** summary_json) {
  return guarded([&] {
    require(base, "params");
    require(kind, "kind");
    const auto k = sq::experiments::parse_error_kind(kind);
    const auto r = sq::experiments::montecarlo_errors(k, sigma_frac, events, seed, base->p, threads);
    if (outdir) {
      const std::filesystem::path dir(outdir);
      const std::string tag(sq::experiments::to_string(k));
      sq::io::write_text(dir / ("montecarlo_" + tag + ".csv"), sq::experiments::montecarlo_csv(r));
      sq::io::write_text(dir / ("histogram_" + tag + ".csv"), sq::experiments::histogram_csv(r));
    }
    if (summary_json) *summary_json = dup_string(sq::experiments::montecarlo_summary(r).dump(2));
  });
}

squeeze_status squeeze_analytic(const squeeze_params* p, const char* quantity, const char* args_json,
                                char** result_json) {
  return guarded([&] {
    require(p, "params");
    require(quantity, "quantity");
    require(result_json, "result_json");
    const json args = args_json && *args_json ? json::parse(args_json) : json::object();
    json out = analytic(sq::validate_params(p->p).params, quantity, args);
    out["quantity"] = quantity;
    *result_json = dup_string(out.dump(2));
  });
}

squeeze_status squeeze_run_figure(const char* name, const char* outdir, unsigned threads, char** manifest_json) {
  return guarded([&] {
    require(name, "name");
    require(outdir, "outdir");
    sq::experiments::FigureOptions opts;
    opts.threads = threads;
    const auto manifest = sq::experiments::run_figure(name, outdir, opts);
    if (manifest_json) *manifest_json = dup_string(manifest.dump(2));
  });
}

}  // extern "C"
