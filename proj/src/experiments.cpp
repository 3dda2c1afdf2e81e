#include "squeeze/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

#include "squeeze/analytics.hpp"
#include "squeeze/error.hpp"
#include "squeeze/gaussian_dynamics.hpp"
#include "squeeze/io.hpp"
#include "squeeze/meanfield.hpp"
#include "squeeze/random.hpp"
#include "squeeze/wigner.hpp"

namespace squeeze::experiments {

namespace {

constexpr double kPi = std::numbers::pi;

// Runs fn(i) for i in [0, n) on a small pool; results are written by index so
// the outcome does not depend on scheduling. The first failure (by index) is
// rethrown.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error(ErrorCode::Parse, "bad number '" + std::string(s) + "'");
  return v;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

}  // namespace

std::vector<TrajectorySample> period_samples(const GaussianState& initial, const SystemParams& params,
                                             const PulseSchedule& schedule) {
  const auto dd = drift_diffusion(params, params.delta0_prime);
  std::map<double, Propagator> cache;
  std::vector<TrajectorySample> out{make_sample(0.0, initial)};
  GaussianState s = initial;
  std::size_t pulses = 0;
  for (const auto& e : schedule.events) {
    if (e.is_pulse()) {
      s = apply_pulse(s, e.angle);
      if (++pulses % 4 == 0) out.push_back(make_sample(e.start_time, s));
      continue;
    }
    auto it = cache.find(e.duration);
    if (it == cache.end()) it = cache.emplace(e.duration, make_propagator(dd, e.duration)).first;
    s = propagate(s, it->second);
  }
  return out;
}

std::vector<double> Range::values() const {
  std::vector<double> v;
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
  return v;
}

Range parse_range(std::string_view text) {
  const auto a = text.find(':');
  const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
  if (b == std::string_view::npos) throw Error(ErrorCode::Parse, "range must be lo:hi:n");
  Range r{parse_double(text.substr(0, a)), parse_double(text.substr(a + 1, b - a - 1)), 0};
  const auto count = text.substr(b + 1);
  const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), r.n);
  if (ec != std::errc() || ptr != count.data() + count.size() || r.n < 1) {
    throw Error(ErrorCode::Parse, "range count must be a positive integer");
  }
  if (r.n > 1 && !(r.hi >= r.lo)) throw Error(ErrorCode::Parse, "range needs lo <= hi");
  return r;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

MinimumResult minimum_over(const SystemParams& params, const PulseSchedule& schedule) {
  const auto initial = thermal_initial_state(0.0, params.n_th);
  const auto traj = run_schedule(initial, params, schedule, {});
  const auto& best = traj.min_var_YM();
  return {best.mech.var_YM, best.t};
}

PulseSchedule search_schedule(const SystemParams& params) {
  const auto model = analytics::effective_model(params);
  if (model.regime != Regime::Stable) throw Error(ErrorCode::UnstableRegime, "sigma <= -omega_m/4");
  auto s = four_pulse_schedule(params.phi, params.t0, periods_for(kHorizonFactor * *model.t_s, params.t0));
  s.label = "search";
  return s;
}

SweepResult sweep_min_variance(const Range& G, const Range& t0, double phi, const SystemParams& base,
                               unsigned threads) {
  if (G.n < 1 || t0.n < 1) throw Error(ErrorCode::InvalidArgument, "empty sweep range");
  SweepResult r{phi, G, t0, {}};
  const auto gs = G.values();
  const auto ts = t0.values();
  r.cells.resize(gs.size() * ts.size());
  parallel_for(r.cells.size(), threads, [&](std::size_t i) {
    SweepCell& c = r.cells[i];
    c.G = gs[i % gs.size()];
    c.t0 = ts[i / gs.size()];
    c.within_validity = std::abs(c.G * c.t0) < kCouplingIntervalLimit;
    try {
      SystemParams p = base;
      p.G = c.G;
      p.t0 = c.t0;
      p.phi = phi;
      p = validate_params(p).params;
      const auto model = analytics::effective_model(p);
      c.regime = model.regime;
      if (c.unstable()) return;
      c.analytic = analytics::squeezing_limit(model.sigma, p.omega_m, p.n_th);
      const auto m = minimum_over(p, search_schedule(p));
      c.min_var_YM = m.min_var_YM;
      c.t_min = m.t_min;
    } catch (const Error& e) {
      c.error = e.what();
    }
  });
  return r;
}

std::string sweep_csv(const SweepResult& r) {
  std::ostringstream out;
  out << io::kSchemaLine << "\n";
  out << "G,t0,phi,regime,min_var_YM,t_min,analytic,within_validity,error\n";
  auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
  for (const auto& c : r.cells) {
    out << fmt(c.G) << ',' << fmt(c.t0) << ',' << fmt(r.phi) << ',' << to_string(c.regime) << ','
        << opt(c.min_var_YM) << ',' << opt(c.t_min) << ',' << opt(c.analytic) << ',' << (c.within_validity ? 1 : 0)
        << ',' << c.error << '\n';
  }
  return out.str();
}

std::string_view to_string(ErrorKind k) noexcept { return k == ErrorKind::Angles ? "angles" : "intervals"; }

ErrorKind parse_error_kind(std::string_view s) {
  if (s == "angles") return ErrorKind::Angles;
  if (s == "intervals") return ErrorKind::Intervals;
  throw Error(ErrorCode::InvalidArgument, "kind must be angles or intervals");
}

MonteCarloResult montecarlo_errors(ErrorKind kind, double sigma_frac, int n_events, std::uint64_t seed,
                                   const SystemParams& base, unsigned threads) {
  if (n_events < 1) throw Error(ErrorCode::InvalidArgument, "n_events < 1");
  if (!(sigma_frac >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma_frac < 0");
  const auto p = validate_params(base).params;
  const auto nominal = search_schedule(p);
  MonteCarloResult r;
  r.kind = kind;
  r.sigma_frac = sigma_frac;
  r.seed = seed;
  r.nominal = minimum_over(p, nominal).min_var_YM;
  r.minima.resize(static_cast<std::size_t>(n_events));
  const double angle = kind == ErrorKind::Angles ? sigma_frac : 0.0;
  const double interval = kind == ErrorKind::Intervals ? sigma_frac : 0.0;
  parallel_for(r.minima.size(), threads, [&](std::size_t i) {
    const auto s = perturb_schedule(nominal, angle, interval, derive_seed(seed, i));
    r.minima[i] = minimum_over(p, s).min_var_YM;
  });
  const double n = static_cast<double>(r.minima.size());
  r.mean = std::accumulate(r.minima.begin(), r.minima.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : r.minima) ss += (v - r.mean) * (v - r.mean);
  r.stddev = r.minima.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  return r;
}

std::string montecarlo_csv(const MonteCarloResult& r) {
  std::ostringstream out;
  out << io::kSchemaLine << "\n";
  out << "event,min_var_YM\n";
  for (std::size_t i = 0; i < r.minima.size(); ++i) out << i << ',' << fmt(r.minima[i]) << '\n';
  return out.str();
}

std::string histogram_csv(const MonteCarloResult& r, int bins) {
  if (bins < 1) throw Error(ErrorCode::InvalidArgument, "bins < 1");
  const auto [lo_it, hi_it] = std::minmax_element(r.minima.begin(), r.minima.end());
  const double lo = *lo_it;
  const double width = (*hi_it - lo) / bins;
  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  for (double v : r.minima) {
    const int b = width > 0.0 ? std::min(bins - 1, static_cast<int>((v - lo) / width)) : 0;
    ++counts[static_cast<std::size_t>(b)];
  }
  std::ostringstream out;
  out << io::kSchemaLine << "\n";
  out << "bin_lo,bin_hi,count\n";
  for (int b = 0; b < bins; ++b) {
    out << fmt(lo + b * width) << ',' << fmt(lo + (b + 1) * width) << ',' << counts[static_cast<std::size_t>(b)]
        << '\n';
  }
  return out.str();
}

nlohmann::json montecarlo_summary(const MonteCarloResult& r) {
  return {{"kind", std::string(to_string(r.kind))},
          {"sigma_frac", r.sigma_frac},
          {"seed", r.seed},
          {"events", r.events()},
          {"nominal_min_var_YM", r.nominal},
          {"mean_min_var_YM", r.mean},
          {"stddev_min_var_YM", r.stddev}};
}

std::vector<std::string> figure_names() { return {"fig2", "fig3", "fig4ab", "fig4cd", "fig5"}; }

namespace {

struct Writer {
  std::filesystem::path dir;
  nlohmann::json files = nlohmann::json::array();

  void put(const std::string& name, const std::string& text) {
    io::write_text(dir / name, text);
    files.push_back(name);
  }
};

nlohmann::json model_json(const EffectiveModel& m) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
  return {{"sigma", m.sigma},     {"regime", std::string(to_string(m.regime))},
          {"omega_s", opt(m.omega_s)}, {"epsilon", opt(m.epsilon)},
          {"t_s", opt(m.t_s)},     {"t_prime", opt(m.t_prime)},
          {"omega_s_prime", m.omega_s_prime}};
}

void write_wigner(Writer& w, const std::string& stem, const GaussianState& s, wigner::Subsystem sub, double t) {
  const auto field = wigner::wigner_marginal(s, sub);
  w.put(stem + ".csv", wigner::field_csv(field));
  w.put(stem + ".json", wigner::field_json(field, s, t));
}

std::string time_tag(double t) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(4);
  out << t;
  return out.str();
}

nlohmann::json figure2(Writer& w) {
  const auto p = load_preset("fig2");
  const auto model = analytics::effective_model(p);
  const auto schedule = search_schedule(p);
  const auto initial = thermal_initial_state(0.0, p.n_th);
  RunOptions opts;
  opts.record_every = p.t0 / 5;
  const auto traj = run_schedule(initial, p, schedule, opts);
  w.put("trajectory.csv", io::trajectory_csv(traj));
  w.put("trajectory.json", io::trajectory_json(traj, schedule, p).dump(1));

  const double period = 4 * p.t0;
  const double ts = *model.t_s;
  nlohmann::json snapshots = nlohmann::json::array();
  for (double target : {0.0, 0.5 * ts, ts}) {
    const double t = std::round(target / period) * period;
    const auto s = state_at(initial, p, schedule, t);
    write_wigner(w, "wigner_optical_t" + time_tag(t), s, wigner::Subsystem::Optical, t);
    write_wigner(w, "wigner_mech_t" + time_tag(t), s, wigner::Subsystem::Mechanical, t);
    snapshots.push_back(t);
  }
  const auto& best = traj.min_var_YM();
  return {{"preset", "fig2"},
          {"params", io::params_json(p)},
          {"effective_model", model_json(model)},
          {"min_var_YM", best.mech.var_YM},
          {"t_min", best.t},
          {"squeezing_limit", analytics::squeezing_limit(model.sigma, p.omega_m, p.n_th)},
          {"wigner_times", snapshots}};
}

nlohmann::json figure3(Writer& w) {
  nlohmann::json runs = nlohmann::json::array();
  for (const char* name : {"fig3_neg", "fig3_pos"}) {
    const auto p = load_preset(name);
    const auto model = analytics::effective_model(p);
    FreezeOptions fo;
    fo.n_post_periods = post_periods_for_mechanical_periods(p, 5.0);
    const auto schedule = freeze_schedule(p, fo);
    const auto initial = thermal_initial_state(0.0, p.n_th);
    RunOptions opts;
    opts.record_every = p.t0;
    const auto traj = run_schedule(initial, p, schedule, opts);
    w.put(std::string("trajectory_") + name + ".csv", io::trajectory_csv(traj));
    w.put(std::string("trajectory_") + name + ".json", io::trajectory_json(traj, schedule, p).dump(1));
    const auto at_switch = state_at(initial, p, schedule, *schedule.switch_time);
    write_wigner(w, std::string("wigner_mech_") + name, at_switch, wigner::Subsystem::Mechanical,
                 *schedule.switch_time);

    const auto periods = period_samples(initial, p, schedule);
    double lo = 1e300, hi = -1e300, ref = 0.0;
    for (const auto& s : periods) {
      if (s.t < *schedule.switch_time - 1e-12) continue;
      if (ref == 0.0) ref = s.mech.var_YM;
      lo = std::min(lo, s.mech.var_YM);
      hi = std::max(hi, s.mech.var_YM);
    }
    runs.push_back({{"preset", name},
                    {"params", io::params_json(p)},
                    {"effective_model", model_json(model)},
                    {"switch_time", *schedule.switch_time},
                    {"t_prime", *schedule.t_prime},
                    {"post_switch_var_YM", ref},
                    {"post_switch_drift", (hi - lo) / ref},
                    {"theta_at_switch", squeezing_report(at_switch).theta}});
  }
  return {{"runs", runs}};
}

nlohmann::json figure4ab(Writer& w, const FigureOptions& opts) {
  const auto base = load_preset("fig4");
  nlohmann::json sweeps = nlohmann::json::array();
  for (const auto& [tag, phi] : {std::pair{"minus", -kPi / 2}, std::pair{"plus", kPi / 2}}) {
    const auto r = sweep_min_variance(opts.sweep_G, opts.sweep_t0, phi, base, opts.threads);
    const std::string file = std::string("sweep_phi_") + tag + ".csv";
    w.put(file, sweep_csv(r));
    std::size_t unstable = 0;
    for (const auto& c : r.cells) unstable += c.unstable();
    sweeps.push_back({{"phi", phi}, {"file", file}, {"cells", r.cells.size()}, {"unstable_cells", unstable}});
  }
  return {{"base_params", io::params_json(base)},
          {"G_range", {opts.sweep_G.lo, opts.sweep_G.hi, opts.sweep_G.n}},
          {"t0_range", {opts.sweep_t0.lo, opts.sweep_t0.hi, opts.sweep_t0.n}},
          {"sweeps", sweeps}};
}

nlohmann::json figure4cd(Writer& w, const FigureOptions& opts) {
  const auto base = load_preset("fig4");
  nlohmann::json studies = nlohmann::json::array();
  for (auto kind : {ErrorKind::Angles, ErrorKind::Intervals}) {
    const auto r = montecarlo_errors(kind, 0.1, opts.montecarlo_events, opts.seed, base, opts.threads);
    const std::string tag(to_string(kind));
    w.put("montecarlo_" + tag + ".csv", montecarlo_csv(r));
    w.put("histogram_" + tag + ".csv", histogram_csv(r));
    studies.push_back(montecarlo_summary(r));
  }
  return {{"base_params", io::params_json(base)}, {"studies", studies}};
}

nlohmann::json figure5(Writer& w) {
  nlohmann::json runs = nlohmann::json::array();
  for (double n_m : {0.0, 50.0}) {
    const auto sc = parametric_scenario(n_m);
    const auto r = meanfield::parametric_simulation(sc.params, sc.spec, sc.t_end);
    const std::string file = "parametric_nm" + std::to_string(static_cast<int>(n_m)) + ".csv";
    w.put(file, meanfield::parametric_csv(r));
    runs.push_back({{"n_m", n_m},
                    {"file", file},
                    {"params", io::params_json(sc.params)},
                    {"Omega0", sc.spec.Omega0},
                    {"fitted_G", r.fitted_G},
                    {"fit_constant", r.fit_constant},
                    {"omega_s", r.omega_s},
                    {"xi0", r.xi0},
                    {"fit_residual", r.fit_residual},
                    {"max_rel_deviation", r.max_rel_deviation}});
  }
  return {{"runs", runs}};
}

}  // namespace

ParametricScenario parametric_scenario(double n_m) {
  ParametricScenario sc;
  sc.params.t0 = 0.01;
  sc.params.phi = kPi / 2;
  sc.params.g = 1e-4;
  sc.params.gamma = 0.02;
  sc.params.n_m = n_m;
  sc.spec.Omega0 = 4.4e6;  // g * Omega0 * t0 = 4.4
  sc.t_end = 100.0;
  return sc;
}

nlohmann::json run_figure(std::string_view name, const std::filesystem::path& outdir, const FigureOptions& opts) {
  Writer w{outdir};
  nlohmann::json body;
  if (name == "fig2") {
    body = figure2(w);
  } else if (name == "fig3") {
    body = figure3(w);
  } else if (name == "fig4ab") {
    body = figure4ab(w, opts);
  } else if (name == "fig4cd") {
    body = figure4cd(w, opts);
  } else if (name == "fig5") {
    body = figure5(w);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown figure '" + std::string(name) + "'");
  }
  nlohmann::json manifest;
  manifest["schema"] = "squeeze-sim schema v1";
  manifest["figure"] = std::string(name);
  manifest["files"] = w.files;
  manifest["results"] = body;
  io::write_text(outdir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

}  // namespace squeeze::experiments
