#include "squeeze/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "squeeze/error.hpp"

namespace squeeze {

namespace {

constexpr double kPi = std::numbers::pi;

struct FieldRef {
  std::string_view key;
  double SystemParams::*member;
};

constexpr FieldRef kFields[] = {
    {"omega_m", &SystemParams::omega_m}, {"G", &SystemParams::G},
    {"g", &SystemParams::g},             {"delta0_prime", &SystemParams::delta0_prime},
    {"kappa", &SystemParams::kappa},     {"gamma", &SystemParams::gamma},
    {"n_th", &SystemParams::n_th},       {"n_m", &SystemParams::n_m},
    {"phi", &SystemParams::phi},         {"t0", &SystemParams::t0},
};

const FieldRef& find_field(std::string_view key) {
  for (const auto& f : kFields) {
    if (f.key == key) return f;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown parameter '" + std::string(key) + "'");
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, std::string_view key) {
  // Accepts plain numbers plus the `pi` shorthands used in scenario files
  // ("pi/2", "-pi/2", "pi").
  std::string s(trim(text));
  double sign = 1.0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    if (s[0] == '-') sign = -1.0;
    s.erase(0, 1);
  }
  if (s.rfind("pi", 0) == 0) {
    double value = kPi;
    const auto rest = trim(std::string_view(s).substr(2));
    if (!rest.empty()) {
      if (rest[0] != '/') throw Error(ErrorCode::Parse, std::string(key) + " = " + std::string(text));
      value /= parse_number(rest.substr(1), key);
    }
    return sign * value;
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, std::string(key) + " = " + std::string(text));
  }
  if (used != s.size()) throw Error(ErrorCode::Parse, std::string(key) + " = " + std::string(text));
  return sign * value;
}

}  // namespace

ValidatedParams validate_params(const SystemParams& raw) {
  auto require = [](bool ok, const char* field) {
    if (!ok) throw Error(ErrorCode::NonPositive, field);
  };
  // Written as !(x > 0) so NaN fails too.
  require(raw.omega_m > 0.0, "omega_m");
  require(raw.t0 > 0.0, "t0");
  require(raw.kappa >= 0.0, "kappa");
  require(raw.gamma >= 0.0, "gamma");
  require(raw.n_th >= 0.0, "n_th");
  require(raw.n_m >= 0.0, "n_m");
  require(raw.G >= 0.0, "G");
  require(raw.g >= 0.0, "g");
  require(std::isfinite(raw.delta0_prime), "delta0_prime");
  if (!(raw.phi >= -kPi && raw.phi <= kPi)) throw Error(ErrorCode::PhiOutOfRange, std::to_string(raw.phi));

  ValidatedParams out{raw, {}};
  const double wt = raw.omega_m * raw.t0;
  if (wt > kSmallIntervalLimit) {
    out.warnings.push_back({"omega_m_t0_not_small",
                            "omega_m*t0 = " + std::to_string(wt) + " is not small (> 0.05)"});
  }
  const double gt = std::abs(raw.G * raw.t0);
  if (gt >= kCouplingIntervalLimit) {
    out.warnings.push_back({"G_t0_large", "|G*t0| = " + std::to_string(gt) + " is large (>= 0.5)"});
  }
  const double drive = std::abs(raw.G * std::sin(raw.phi));
  const double scale = std::max(std::abs(raw.delta0_prime), raw.omega_m);
  if (drive < kStrongCouplingFactor * scale) {
    out.warnings.push_back({"weak_coupling",
                            "|G*sin(phi)| = " + std::to_string(drive) +
                                " is not >> max(|delta0'|, omega_m) (< 10x)"});
  }
  return out;
}

SystemParams load_preset(std::string_view name) {
  SystemParams p;
  if (name == "fig2" || name == "fig4") {
    // G chosen so that omega_s = 4 omega_m: sigma = 15/4 = G^2 t0 / 2.
    p.t0 = 0.01;
    p.phi = kPi / 2;
    p.G = std::sqrt(750.0);
    return p;
  }
  if (name == "fig3_neg" || name == "fig3_pos") {
    p.t0 = 0.005;
    p.G = 8.0;
    p.phi = name == "fig3_neg" ? -kPi / 2 : kPi / 2;
    return p;
  }
  if (name == "microwave3d") {
    p.omega_m = 9.696e6;
    p.g = 167.0;
    p.kappa = 1.0e6;
    p.G = p.omega_m;  // edge of the strong-coupling regime
    p.t0 = 0.01 / p.omega_m;
    p.phi = kPi / 2;
    return p;
  }
  throw Error(ErrorCode::UnknownPreset, std::string(name));
}

std::vector<std::string> preset_names() { return {"fig2", "fig3_neg", "fig3_pos", "fig4", "microwave3d"}; }

void set_param(SystemParams& p, std::string_view key, double value) { p.*(find_field(key).member) = value; }

double get_param(const SystemParams& p, std::string_view key) { return p.*(find_field(key).member); }

std::vector<std::string> param_keys() {
  std::vector<std::string> keys;
  for (const auto& f : kFields) keys.emplace_back(f.key);
  return keys;
}

void apply_assignment(SystemParams& p, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw Error(ErrorCode::Parse, "expected key=value, got '" + std::string(assignment) + "'");
  const auto key = trim(assignment.substr(0, eq));
  set_param(p, key, parse_number(assignment.substr(eq + 1), key));
}

SystemParams parse_scenario(std::string_view text) {
  SystemParams p;
  std::vector<std::pair<std::string, std::string>> entries;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected key = value");
    }
    entries.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
  }
  // The preset seeds the values regardless of where it appears in the file.
  for (const auto& [key, value] : entries) {
    if (key == "preset") p = load_preset(value);
  }
  for (const auto& [key, value] : entries) {
    if (key == "preset") continue;
    set_param(p, key, parse_number(value, key));
  }
  return p;
}

SystemParams load_scenario_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

std::string format_scenario(const SystemParams& p) {
  std::ostringstream out;
  out.precision(17);
  out << "# squeeze-sim scenario (rates in units of omega_m)\n";
  for (const auto& f : kFields) out << f.key << " = " << p.*(f.member) << "\n";
  return out.str();
}

GaussianState thermal_initial_state(double n_opt, double n_mech) {
  if (!(n_opt >= 0.0)) throw Error(ErrorCode::NegativeOccupation, "n_opt");
  if (!(n_mech >= 0.0)) throw Error(ErrorCode::NegativeOccupation, "n_mech");
  GaussianState s;
  s.cov.diagonal() << 2 * n_opt + 1, 2 * n_opt + 1, 2 * n_mech + 1, 2 * n_mech + 1;
  return s;
}

StateCheck check_state(const GaussianState& s) {
  StateCheck c;
  c.asymmetry = (s.cov - s.cov.transpose()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Mat4> eig(s.cov, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = eig.eigenvalues().minCoeff();
  c.det_optical = s.optical_block().determinant();
  c.det_mechanical = s.mechanical_block().determinant();
  return c;
}

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Stable: return "Stable";
    case Regime::Threshold: return "Threshold";
    case Regime::Unstable: return "Unstable";
  }
  return "Unknown";
}

}  // namespace squeeze
