#pragma once

// Linear quantum Langevin propagation of the optomechanical Gaussian state
// through a pulse schedule.

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "squeeze/model.hpp"
#include "squeeze/schedule.hpp"

namespace squeeze {

struct DriftDiffusion {
  Mat4 A = Mat4::Zero();
  Mat4 D = Mat4::Zero();
};

Mat4 drift_matrix(const SystemParams& params, double delta_prime);
// Complex coupling G = g*alpha; reduces to the real form when Im G = 0.
Mat4 drift_matrix(const SystemParams& params, double delta_prime, std::complex<double> G);
Mat4 diffusion_matrix(const SystemParams& params);
DriftDiffusion drift_diffusion(const SystemParams& params, double delta_prime);

// mean -> phi*mean, cov -> phi*cov*phi^T + q over a fixed duration.
struct Propagator {
  Mat4 phi = Mat4::Identity();
  Mat4 q = Mat4::Zero();
};

Propagator make_propagator(const DriftDiffusion& dd, double duration);
GaussianState propagate(const GaussianState& s, const Propagator& p);

GaussianState evolve_interval(const GaussianState& s, const DriftDiffusion& dd, double duration);
// Fixed-step RK4 cross-check of evolve_interval.
GaussianState evolve_interval_rk4(const GaussianState& s, const DriftDiffusion& dd, double duration,
                                  double max_step);

GaussianState apply_pulse(const GaussianState& s, double theta);

SqueezingReport squeezing_report(const GaussianState& s);

struct TrajectorySample {
  double t = 0.0;
  SqueezingReport mech;
  double var_XL = 1.0;
  double var_PL = 1.0;
  double cross_norm = 0.0;  // Frobenius norm of the optical-mechanical block
  Vec4 mean = Vec4::Zero();
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::string schedule_label;
  GaussianState final_state;

  // Sample with the smallest var_YM, optionally restricted to t in [from, to].
  const TrajectorySample& min_var_YM(double from = 0.0, double to = 1e300) const;
};

enum class Integrator { Exact, RK4 };

struct RunOptions {
  double record_every = 0.0;  // interior sampling step; 0 records only event boundaries
  Integrator integrator = Integrator::Exact;
  double rk4_step_fraction = 1.0 / 200;  // RK4 step as a fraction of t0
};

TrajectorySample make_sample(double t, const GaussianState& s);

// Samples: the initial state, every record_every multiple inside free
// intervals, and the state after each event (after the pulse when an interval
// ends in one).
Trajectory run_schedule(const GaussianState& initial, const SystemParams& params, const PulseSchedule& schedule,
                        const RunOptions& opts = {});

// Final state only; avoids sample bookkeeping in hot loops.
GaussianState final_state(const GaussianState& initial, const SystemParams& params, const PulseSchedule& schedule);

// State at time t (pulses at exactly t are applied). t beyond the schedule
// end is an error.
GaussianState state_at(const GaussianState& initial, const SystemParams& params, const PulseSchedule& schedule,
                       double t);

}  // namespace squeeze
