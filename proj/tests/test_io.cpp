#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "squeeze/error.hpp"
#include "squeeze/io.hpp"

using namespace squeeze;

TEST_CASE("trajectory CSV") {
  const auto p = load_preset("fig2");
  const auto sched = four_pulse_schedule(p.phi, p.t0, 1);
  const auto traj = run_schedule(GaussianState{}, p, sched);
  const auto csv = io::trajectory_csv(traj);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == io::kSchemaLine);
  std::getline(in, line);
  CHECK(line ==
        "t,var_XL,var_PL,var_XM,var_PM,var_YM,theta,cov_XMPM,det_mech,cross_norm,mean_XL,mean_PL,mean_XM,mean_PM");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 13);
  }
  CHECK(rows == static_cast<int>(traj.samples.size()));
}

TEST_CASE("trajectory JSON embeds the schedule") {
  auto p = load_preset("fig3_pos");
  const auto sched = freeze_schedule(p, {});
  const auto traj = run_schedule(GaussianState{}, p, sched);
  const auto j = io::trajectory_json(traj, sched, p);
  CHECK(j["schedule"]["switch_time"].get<double>() == *sched.switch_time);
  CHECK(j["schedule"]["events"].size() == sched.events.size());
  CHECK(j["samples"].size() == traj.samples.size());
  CHECK(j["params"]["G"] == 8.0);
}

TEST_CASE("write_text") {
  const auto dir = std::filesystem::temp_directory_path() / "squeeze_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  io::write_text(dir / "a.txt", "hello\n");
  std::ifstream f(dir / "a.txt");
  std::string s;
  std::getline(f, s);
  CHECK(s == "hello");
  CHECK_THROWS_AS(io::write_text("/proc/definitely/not/here.txt", "x"), Error);
  std::filesystem::remove_all(dir.parent_path());
}
