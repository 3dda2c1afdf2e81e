#pragma once

// Parameter sweeps, Monte Carlo error studies and figure drivers.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "squeeze/gaussian_dynamics.hpp"
#include "squeeze/meanfield.hpp"
#include "squeeze/model.hpp"
#include "squeeze/schedule.hpp"

namespace squeeze::experiments {

inline constexpr double kHorizonFactor = 1.5;  // minima searched up to 1.5 t_s

// Inclusive linear range, "lo:hi:n" on the command line.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int n = 1;

  std::vector<double> values() const;
};
Range parse_range(std::string_view text);

// 0 means hardware concurrency.
unsigned resolve_threads(unsigned requested);

struct MinimumResult {
  double min_var_YM = 1.0;
  double t_min = 0.0;
};

// Minimum of var_YM over the pulse boundaries of `schedule`.
MinimumResult minimum_over(const SystemParams& params, const PulseSchedule& schedule);

// Nominal four-pulse schedule reaching 1.5 t_s; throws UnstableRegime
// outside the Stable regime.
PulseSchedule search_schedule(const SystemParams& params);

// Initial state plus the state after every complete four-pulse period.
std::vector<TrajectorySample> period_samples(const GaussianState& initial, const SystemParams& params,
                                             const PulseSchedule& schedule);

// Amplitude-modulated drive used for the parametric-resonance figure.
struct ParametricScenario {
  SystemParams params;
  meanfield::ParametricSpec spec;
  double t_end = 0.0;
};
ParametricScenario parametric_scenario(double n_m);

struct SweepCell {
  double G = 0.0;
  double t0 = 0.0;
  Regime regime = Regime::Stable;
  std::optional<double> min_var_YM;
  std::optional<double> t_min;
  std::optional<double> analytic;  // squeezing limit of the effective model
  bool within_validity = false;    // |G t0| < 0.5
  std::string error;

  bool unstable() const { return regime != Regime::Stable; }
};

struct SweepResult {
  double phi = 0.0;
  Range G;
  Range t0;
  std::vector<SweepCell> cells;  // t0-major: cells[i_t0 * G.n + i_G]
};

SweepResult sweep_min_variance(const Range& G, const Range& t0, double phi, const SystemParams& base,
                               unsigned threads = 0);
std::string sweep_csv(const SweepResult& r);

enum class ErrorKind { Angles, Intervals };
std::string_view to_string(ErrorKind k) noexcept;
ErrorKind parse_error_kind(std::string_view s);

struct MonteCarloResult {
  ErrorKind kind = ErrorKind::Angles;
  double sigma_frac = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> minima;  // per event, in event order
  double nominal = 0.0;        // unperturbed minimum
  double mean = 0.0;
  double stddev = 0.0;

  std::size_t events() const { return minima.size(); }
};

MonteCarloResult montecarlo_errors(ErrorKind kind, double sigma_frac, int n_events, std::uint64_t seed,
                                   const SystemParams& base, unsigned threads = 0);
std::string montecarlo_csv(const MonteCarloResult& r);
std::string histogram_csv(const MonteCarloResult& r, int bins = 40);
nlohmann::json montecarlo_summary(const MonteCarloResult& r);

struct FigureOptions {
  unsigned threads = 0;
  std::uint64_t seed = 20230101;
  int montecarlo_events = 400;
  Range sweep_G{1.0, 60.0, 30};
  Range sweep_t0{0.001, 0.1, 30};
};

std::vector<std::string> figure_names();

// Writes the figure's CSV/JSON files and manifest.json into outdir; returns
// the manifest.
nlohmann::json run_figure(std::string_view name, const std::filesystem::path& outdir,
                          const FigureOptions& opts = {});

}  // namespace squeeze::experiments
