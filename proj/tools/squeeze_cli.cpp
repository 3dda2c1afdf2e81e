// squeeze-sim: command-line front end over the C API.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "squeeze_c.h"

namespace {

using json = nlohmann::json;

struct Failure {
  squeeze_status status;
  std::string message;
};

void check(squeeze_status s) {
  if (s != SQUEEZE_OK) throw Failure{s, squeeze_last_error()};
}

void usage_error(const std::string& message) { throw Failure{SQUEEZE_ERR_INVALID_ARGUMENT, message}; }

struct ParamsDeleter {
  void operator()(squeeze_params* p) const { squeeze_params_destroy(p); }
};
struct TrajectoryDeleter {
  void operator()(squeeze_trajectory* t) const { squeeze_trajectory_destroy(t); }
};
using Params = std::unique_ptr<squeeze_params, ParamsDeleter>;
using Traj = std::unique_ptr<squeeze_trajectory, TrajectoryDeleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  squeeze_string_free(s);
  return out;
}

struct ScenarioArgs {
  std::string preset;
  std::string config;
  std::vector<std::string> overrides;

  void add_to(CLI::App* cmd, const std::string& default_preset) {
    preset = default_preset;
    cmd->add_option("--preset", preset, "Named scenario (fig2, fig3_neg, fig3_pos, fig4, microwave3d)");
    cmd->add_option("--config", config, "Scenario file with key = value lines");
    cmd->add_option("--override", overrides, "Parameter override key=value (repeatable)");
  }

  Params load() const {
    squeeze_params* raw = nullptr;
    if (!config.empty()) {
      check(squeeze_params_load(config.c_str(), &raw));
    } else if (!preset.empty()) {
      check(squeeze_params_from_preset(preset.c_str(), &raw));
    } else {
      check(squeeze_params_create(&raw));
    }
    Params p(raw);
    for (const auto& o : overrides) check(squeeze_params_override(p.get(), o.c_str()));
    return p;
  }
};

squeeze_range parse_range(const std::string& text) {
  squeeze_range r{};
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &r.lo, &r.hi, &r.n, &tail) != 3 || r.n < 1) {
    usage_error("range must be lo:hi:n, got '" + text + "'");
  }
  return r;
}

json sample_json(const squeeze_sample& s) {
  return {{"t", s.t},           {"var_YM", s.var_YM},     {"var_XM", s.var_XM},     {"var_PM", s.var_PM},
          {"theta", s.theta},   {"det_mech", s.det_mech}, {"var_anti", s.var_anti}, {"cross_norm", s.cross_norm}};
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulsed optomechanical squeezing simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(squeeze_version()));

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run the pulsed Gaussian simulation");
  ScenarioArgs sim_scenario;
  sim_scenario.add_to(sim, "fig4");
  std::string sim_out = "out";
  bool oracle = false, dump_schedule = false, freeze = false;
  double t_end = 0.0, record_every = 0.0, freeze_periods = 5.0;
  sim->add_option("--out", sim_out, "Output directory");
  sim->add_flag("--oracle-check", oracle, "Cross-check against the independent moment integrator");
  sim->add_flag("--dump-schedule", dump_schedule, "Write the pulse schedule as schedule.txt");
  sim->add_flag("--freeze", freeze, "Switch to the frozen interval at the squeezing time");
  sim->add_option("--freeze-periods", freeze_periods, "Post-switch span in mechanical periods");
  sim->add_option("--t-end", t_end, "Horizon (default 1.5 t_s)");
  sim->add_option("--record-every", record_every, "Interior sampling step (default: event boundaries)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Minimal squeezed variance over a (G, t0) grid");
  ScenarioArgs sweep_scenario;
  sweep_scenario.add_to(sweep, "fig4");
  std::string phi_text = "pi/2", g_range = "1:60:30", t0_range = "0.001:0.1:30", sweep_out = "sweep.csv";
  unsigned sweep_threads = 0;
  sweep->add_option("--phi", phi_text, "Pulse angle (accepts pi shorthands)");
  sweep->add_option("--G", g_range, "G range lo:hi:n");
  sweep->add_option("--t0", t0_range, "t0 range lo:hi:n");
  sweep->add_option("--out", sweep_out, "CSV output path");
  sweep->add_option("--threads", sweep_threads, "Worker threads (0: all cores)");

  // montecarlo
  auto* mc = app.add_subcommand("montecarlo", "Gaussian pulse-error study");
  ScenarioArgs mc_scenario;
  mc_scenario.add_to(mc, "fig4");
  std::string kind = "angles", mc_out = "montecarlo";
  double sigma_frac = 0.1;
  int events = 400;
  std::uint64_t seed = 20230101;
  unsigned mc_threads = 0;
  mc->add_option("--kind", kind, "angles or intervals")->check(CLI::IsMember({"angles", "intervals"}));
  mc->add_option("--sigma-frac", sigma_frac, "Relative standard deviation");
  mc->add_option("--events", events, "Number of events");
  mc->add_option("--seed", seed, "Master seed");
  mc->add_option("--out", mc_out, "Output directory");
  mc->add_option("--threads", mc_threads, "Worker threads (0: all cores)");

  // wigner
  auto* wig = app.add_subcommand("wigner", "Optical and mechanical Wigner fields at a time");
  ScenarioArgs wig_scenario;
  wig_scenario.add_to(wig, "fig2");
  double at = 0.0;
  std::string wig_out = "wigner";
  wig->add_option("--at", at, "Time in units of 1/omega_m")->required();
  wig->add_option("--out", wig_out, "Output directory");

  // analytic
  auto* ana = app.add_subcommand("analytic", "Closed-form quantities");
  ScenarioArgs ana_scenario;
  ana_scenario.add_to(ana, "fig4");
  std::string quantity;
  std::vector<std::string> extra;
  std::string conv;
  ana->add_option("--quantity", quantity, "Quantity name")->required();
  ana->add_option("--arg", extra, "Extra numeric input key=value, e.g. t=0.4 (repeatable)");
  ana->add_option("--convention", conv, "cyclic or angular (photon-number quantities)");

  // figure
  auto* fig = app.add_subcommand("figure", "Reproduce a figure's data files");
  std::string fig_name, fig_out;
  unsigned fig_threads = 0;
  fig->add_option("name", fig_name, "fig2, fig3, fig4ab, fig4cd or fig5")->required();
  fig->add_option("--out", fig_out, "Output directory (default: the figure name)");
  fig->add_option("--threads", fig_threads, "Worker threads (0: all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      const auto p = sim_scenario.load();
      squeeze_run_options opts;
      squeeze_run_options_default(&opts);
      opts.freeze = freeze ? 1 : 0;
      opts.freeze_mech_periods = freeze_periods;
      opts.t_end = t_end;
      opts.record_every = record_every;
      squeeze_trajectory* raw = nullptr;
      check(squeeze_simulate(p.get(), &opts, &raw));
      Traj traj(raw);
      const std::filesystem::path dir(sim_out);
      check(squeeze_trajectory_write_csv(traj.get(), (dir / "trajectory.csv").c_str()));
      check(squeeze_trajectory_write_json(traj.get(), (dir / "trajectory.json").c_str()));
      json summary;
      char* warnings = nullptr;
      check(squeeze_params_validate(p.get(), &warnings));
      summary["warnings"] = json::parse(take(warnings));
      squeeze_sample best{};
      check(squeeze_trajectory_min(traj.get(), &best));
      summary["minimum"] = sample_json(best);
      summary["samples"] = squeeze_trajectory_size(traj.get());
      if (const double ts = squeeze_trajectory_switch_time(traj.get()); !std::isnan(ts)) summary["switch_time"] = ts;
      if (dump_schedule) {
        char* text = nullptr;
        check(squeeze_trajectory_schedule_text(traj.get(), &text));
        std::FILE* f = std::fopen((dir / "schedule.txt").c_str(), "wb");
        if (!f) throw Failure{SQUEEZE_ERR_IO, "cannot write schedule.txt"};
        const std::string s = take(text);
        std::fwrite(s.data(), 1, s.size(), f);
        std::fclose(f);
      }
      if (oracle) {
        double dev = 0.0;
        check(squeeze_oracle_check(p.get(), &opts, &dev));
        summary["oracle_max_rel_deviation"] = dev;
      }
      print(summary);
    } else if (sweep->parsed()) {
      auto p = sweep_scenario.load();
      check(squeeze_params_override(p.get(), ("phi=" + phi_text).c_str()));
      double phi = 0.0;
      check(squeeze_params_get(p.get(), "phi", &phi));
      char* summary = nullptr;
      check(squeeze_sweep(p.get(), phi, parse_range(g_range), parse_range(t0_range), sweep_threads, sweep_out.c_str(),
                          &summary));
      print(json::parse(take(summary)));
    } else if (mc->parsed()) {
      const auto p = mc_scenario.load();
      char* summary = nullptr;
      check(squeeze_montecarlo(p.get(), kind.c_str(), sigma_frac, events, seed, mc_threads, mc_out.c_str(), &summary));
      print(json::parse(take(summary)));
    } else if (wig->parsed()) {
      const auto p = wig_scenario.load();
      char* manifest = nullptr;
      check(squeeze_wigner(p.get(), at, wig_out.c_str(), &manifest));
      print(json::parse(take(manifest)));
    } else if (ana->parsed()) {
      const auto p = ana_scenario.load();
      json args = json::object();
      for (const auto& kv : extra) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) usage_error("--arg expects key=value, got '" + kv + "'");
        try {
          args[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
          usage_error("--arg value must be numeric: '" + kv + "'");
        }
      }
      if (!conv.empty()) args["convention"] = conv;
      char* result = nullptr;
      check(squeeze_analytic(p.get(), quantity.c_str(), args.dump().c_str(), &result));
      print(json::parse(take(result)));
    } else if (fig->parsed()) {
      char* manifest = nullptr;
      const std::string out = fig_out.empty() ? fig_name : fig_out;
      check(squeeze_run_figure(fig_name.c_str(), out.c_str(), fig_threads, &manifest));
      const json m = json::parse(take(manifest));
      print({{"figure", m["figure"]}, {"outdir", out}, {"files", m["files"]}});
    }
  } catch (const Failure& f) {
    std::cerr << json{{"error", squeeze_status_name(f.status)}, {"status", static_cast<int>(f.status)},
                      {"message", f.message}}
                     .dump()
              << "\n";
    return 2;
  }
  return 0;
}
