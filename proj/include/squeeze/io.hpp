#pragma once

// File formats shared by the CLI and the figure drivers.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "squeeze/gaussian_dynamics.hpp"
#include "squeeze/model.hpp"
#include "squeeze/schedule.hpp"

namespace squeeze::io {

inline constexpr const char* kSchemaLine = "# squeeze-sim schema v1";

std::string trajectory_csv(const Trajectory& traj);

nlohmann::json params_json(const SystemParams& p);
nlohmann::json schedule_json(const PulseSchedule& s);
nlohmann::json sample_json(const TrajectorySample& s);
// Samples plus the schedule that produced them.
nlohmann::json trajectory_json(const Trajectory& traj, const PulseSchedule& schedule, const SystemParams& params);

// Creates parent directories; throws Io.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace squeeze::io
