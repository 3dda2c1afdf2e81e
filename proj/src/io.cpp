#include "squeeze/io.hpp"

#include <fstream>
#include <sstream>

#include "squeeze/error.hpp"

namespace squeeze::io {

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  out.precision(12);
  out << kSchemaLine << "\n";
  out << "t,var_XL,var_PL,var_XM,var_PM,var_YM,theta,cov_XMPM,det_mech,cross_norm,mean_XL,mean_PL,mean_XM,mean_PM\n";
  for (const auto& s : traj.samples) {
    const auto& m = s.mech;
    out << s.t << ',' << s.var_XL << ',' << s.var_PL << ',' << m.var_XM << ',' << m.var_PM << ',' << m.var_YM << ','
        << m.theta << ',' << m.cov_XP << ',' << m.det_mech << ',' << s.cross_norm;
    for (int i = 0; i < 4; ++i) out << ',' << s.mean[i];
    out << '\n';
  }
  return out.str();
}

nlohmann::json params_json(const SystemParams& p) {
  nlohmann::json j;
  for (const auto& key : param_keys()) j[key] = get_param(p, key);
  return j;
}

nlohmann::json schedule_json(const PulseSchedule& s) {
  nlohmann::json j;
  j["label"] = s.label;
  j["t0"] = s.t0;
  j["total_time"] = s.total_time;
  j["pulse_count"] = s.pulse_count();
  j["switch_time"] = s.switch_time ? nlohmann::json(*s.switch_time) : nlohmann::json();
  j["switch_index"] = s.switch_index ? nlohmann::json(*s.switch_index) : nlohmann::json();
  j["t_prime"] = s.t_prime ? nlohmann::json(*s.t_prime) : nlohmann::json();
  auto& events = j["events"] = nlohmann::json::array();
  for (const auto& e : s.events) {
    if (e.is_pulse()) {
      events.push_back({{"kind", "pulse"}, {"start", e.start_time}, {"angle", e.angle}});
    } else {
      events.push_back({{"kind", "evolve"}, {"start", e.start_time}, {"duration", e.duration}});
    }
  }
  return j;
}

nlohmann::json sample_json(const TrajectorySample& s) {
  return {{"t", s.t},
          {"var_XL", s.var_XL},
          {"var_PL", s.var_PL},
          {"var_XM", s.mech.var_XM},
          {"var_PM", s.mech.var_PM},
          {"var_YM", s.mech.var_YM},
          {"var_anti", s.mech.var_anti},
          {"theta", s.mech.theta},
          {"cov_XMPM", s.mech.cov_XP},
          {"det_mech", s.mech.det_mech},
          {"cross_norm", s.cross_norm},
          {"mean", {s.mean[0], s.mean[1], s.mean[2], s.mean[3]}}};
}

nlohmann::json trajectory_json(const Trajectory& traj, const PulseSchedule& schedule, const SystemParams& params) {
  nlohmann::json j;
  j["schema"] = "squeeze-sim schema v1";
  j["params"] = params_json(params);
  j["schedule"] = schedule_json(schedule);
  auto& samples = j["samples"] = nlohmann::json::array();
  for (const auto& s : traj.samples) samples.push_back(sample_json(s));
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace squeeze::io
