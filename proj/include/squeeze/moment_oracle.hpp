#pragma once

// Independent second-moment integrator in the (a, b) operator basis, used to
// cross-check the covariance propagation.

#include <complex>
#include <vector>

#include "squeeze/model.hpp"
#include "squeeze/schedule.hpp"

namespace squeeze::oracle {

using cplx = std::complex<double>;

struct MomentVector {
  double n_a = 0.0;  // <a^dag a>
  double n_b = 0.0;  // <b^dag b>
  cplx a2;           // <a^2>
  cplx b2;           // <b^2>
  cplx ab;           // <a b>
  cplx ab_dag;       // <a b^dag>
};

MomentVector moment_rhs(const MomentVector& m, const SystemParams& params, double delta_prime);

MomentVector apply_pulse(const MomentVector& m, double theta);

Mat4 to_covariance(const MomentVector& m);
MomentVector from_covariance(const Mat4& cov);

struct MomentSample {
  double t = 0.0;
  MomentVector m;
};

// RK4 between pulses with step <= step_fraction * t0; a sample after every
// event (after the pulse when an interval ends in one). Throws StepTooLarge
// when the step-doubling error estimate exceeds 1e-9.
std::vector<MomentSample> integrate_moments(const MomentVector& initial, const SystemParams& params,
                                            const PulseSchedule& schedule, double step_fraction = 1.0 / 500);

// Pulse-averaged model with the optical mode eliminated.
struct ReducedMoments {
  double n_b = 0.0;
  cplx b2;

  double var_XM() const { return 1 + 2 * (n_b + b2.real()); }
  double var_PM() const { return 1 + 2 * (n_b - b2.real()); }
  double var_YM() const { return 1 + 2 * (n_b - std::abs(b2)); }
};

struct ReducedModel {
  double sigma = 0.0;
  double omega_m = 1.0;
  double gamma = 0.0;
  double n_m = 0.0;
};

ReducedMoments reduced_rhs(const ReducedMoments& m, const ReducedModel& model);

// Values at each requested time (non-decreasing, starting from t = 0).
std::vector<ReducedMoments> integrate_reduced(const ReducedMoments& initial, const ReducedModel& model,
                                              const std::vector<double>& times, double max_step);

}  // namespace squeeze::oracle
