#pragma once

// Shared domain types: scenario parameters, Gaussian states and the derived
// quantities reported by the analytic and dynamic modules.
//
// Units: every rate is expressed in units of the mechanical frequency
// (omega_m = 1) and times in 1/omega_m, except for the `microwave3d` preset
// which carries SI values in the cyclic-frequency (Hz) convention.

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace squeeze {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Mat2 = Eigen::Matrix2d;

// Quadrature ordering used by every 4-vector and 4x4 matrix in the library.
enum Quadrature : int { kXL = 0, kPL = 1, kXM = 2, kPM = 3 };

struct SystemParams {
  double omega_m = 1.0;
  double G = 0.0;  // enhanced coupling, real >= 0
  double g = 0.0;  // single-photon coupling (mean-field / feasibility only)
  double delta0_prime = 0.0;
  double kappa = 0.0;
  double gamma = 0.0;
  double n_th = 0.0;  // initial mechanical occupation
  double n_m = 0.0;   // bath occupation
  double phi = 0.0;   // pulse rotating angle in [-pi, pi]
  double t0 = 0.01;   // pulse interval

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

struct ParamWarning {
  std::string code;     // stable machine-readable key
  std::string message;  // human readable
};

struct ValidatedParams {
  SystemParams params;
  std::vector<ParamWarning> warnings;
};

// Thresholds for the soft approximation conditions.
inline constexpr double kSmallIntervalLimit = 0.05;  // omega_m * t0
inline constexpr double kCouplingIntervalLimit = 0.5;  // |G t0|
inline constexpr double kStrongCouplingFactor = 10.0;  // |G sin phi| vs max(|D0'|, omega_m)

// Hard-errors on invariant violations (NonPositive, PhiOutOfRange); soft
// approximation conditions come back as warnings.
ValidatedParams validate_params(const SystemParams& raw);

// Named scenarios: fig2, fig3_neg, fig3_pos, fig4, microwave3d.
SystemParams load_preset(std::string_view name);
std::vector<std::string> preset_names();

// Key/value access by field name, used by config files and CLI overrides.
void set_param(SystemParams& p, std::string_view key, double value);
double get_param(const SystemParams& p, std::string_view key);
std::vector<std::string> param_keys();
// "key=value" (whitespace allowed); values accept the pi shorthands of
// scenario files, e.g. "phi = -pi/2".
void apply_assignment(SystemParams& p, std::string_view assignment);

// Scenario file: `key = value` lines, `#` comments, optional `preset = name`
// line which seeds the remaining keys.
SystemParams parse_scenario(std::string_view text);
SystemParams load_scenario_file(const std::string& path);
std::string format_scenario(const SystemParams& p);

// Mean vector and symmetrized covariance over (X_L, P_L, X_M, P_M), with
// V_ij = <{dr_i, dr_j}>/2 so that the vacuum has V = identity.
struct GaussianState {
  Vec4 mean = Vec4::Zero();
  Mat4 cov = Mat4::Identity();

  Mat2 optical_block() const { return cov.block<2, 2>(0, 0); }
  Mat2 mechanical_block() const { return cov.block<2, 2>(2, 2); }
  Mat2 cross_block() const { return cov.block<2, 2>(0, 2); }
};

GaussianState thermal_initial_state(double n_opt, double n_mech);

struct StateCheck {
  double asymmetry = 0.0;    // max |V - V^T|
  double min_eigenvalue = 0.0;
  double det_optical = 0.0;
  double det_mechanical = 0.0;

  bool physical(double tol = 1e-9) const {
    return asymmetry <= 1e-12 && min_eigenvalue > 0.0 && det_optical >= 1.0 - tol &&
           det_mechanical >= 1.0 - tol;
  }
};

StateCheck check_state(const GaussianState& s);

struct SqueezingReport {
  double var_XM = 1.0;
  double var_PM = 1.0;
  double var_YM = 1.0;   // smaller eigenvalue of the mechanical block
  double var_anti = 1.0;  // larger eigenvalue
  double theta = 0.0;    // squeezing angle in [0, 2pi)
  double cov_XP = 0.0;
  double det_mech = 1.0;
};

enum class Regime { Stable, Threshold, Unstable };
std::string_view to_string(Regime r) noexcept;

struct EffectiveModel {
  double sigma = 0.0;
  std::optional<double> omega_s;  // Stable, and 0 at threshold
  std::optional<double> epsilon;  // Unstable, and 0 at threshold
  double omega_s_prime = 1.0;
  std::complex<double> mu;
  std::optional<double> t_s;
  std::optional<double> t_prime;
  Regime regime = Regime::Stable;
};

}  // namespace squeeze
