#pragma once

// Classical mean-field amplitudes of the driven optomechanical system and the
// amplitude-modulated (parametric) squeezing experiment built on them.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "squeeze/model.hpp"
#include "squeeze/schedule.hpp"

namespace squeeze::meanfield {

using cplx = std::complex<double>;
using DriveFn = std::function<cplx(double)>;
using DetuningFn = std::function<double(double)>;

struct MeanFieldState {
  cplx alpha;
  cplx beta;
  double t = 0.0;
};

struct MeanFieldOptions {
  // Pulses rotate alpha by e^{i theta} at their start times.
  const PulseSchedule* schedule = nullptr;
  // Drop the g*alpha*(beta + beta^*) term, i.e. treat the effective detuning
  // as held fixed by the drive-frequency control.
  bool hold_effective_detuning = false;
};

// d(alpha)/dt = (-kappa/2 + i D) alpha + i g alpha (beta + beta^*) - i Omega
// d(beta)/dt  = (-gamma/2 - i omega_m) beta + i g |alpha|^2
MeanFieldState rk4_step(const MeanFieldState& s, const SystemParams& params, const DriveFn& drive,
                        const DetuningFn& detuning, double h, bool hold_effective_detuning);

// Samples every step (and at each pulse time, after the pulse).
std::vector<MeanFieldState> integrate_meanfield(const MeanFieldState& initial, const SystemParams& params,
                                                const DriveFn& drive, const DetuningFn& detuning, double t_end,
                                                double step, const MeanFieldOptions& opts = {});

struct ParametricSpec {
  double Omega0 = 0.0;
  std::optional<double> omega_s_target;  // initial guess for the modulation frequency
  int substeps = 5;                      // piecewise-constant G(t) steps per pulse interval
  double fit_tolerance = 1e-9;           // on omega_s between fit iterations
  int max_iterations = 50;
  double max_residual = 0.05;
};

struct ParametricSample {
  double t = 0.0;
  cplx alpha;
  cplx beta;
  double var_YM = 1.0;
  double var_YM_theory = 1.0;
};

struct ParametricResult {
  std::vector<ParametricSample> samples;  // one per four-pulse period
  double fitted_G = 0.0;
  double fit_constant = 0.0;  // fitted_G / (g Omega0 t0)
  double omega_s = 1.0;       // self-consistent modulation frequency
  double xi0 = 0.0;
  double fit_residual = 0.0;
  int iterations = 0;
  double max_rel_deviation = 0.0;  // simulated vs theoretical var_YM
};

// Omega(t) = Omega0 sin(omega_s t) under the four-pulse schedule; G(t) = g alpha(t)
// drives the fluctuation propagator. The effective G comes from a least-squares
// fit of the per-period Floquet frequency against the effective-model
// relation, iterated until omega_s is self-consistent. Throws FitFailed.
ParametricResult parametric_simulation(const SystemParams& params, const ParametricSpec& spec, double t_end);

std::string meanfield_csv(const std::vector<MeanFieldState>& states);
std::string parametric_csv(const ParametricResult& r);

}  // namespace squeeze::meanfield
