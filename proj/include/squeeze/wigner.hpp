#pragma once

// Gaussian Wigner functions in the (X, P) convention (vacuum variance 1).
// Position/momentum (q, p) axes with vacuum variance 1/4 relate by q = X/2.

#include <string>
#include <vector>

#include "squeeze/model.hpp"

namespace squeeze::wigner {

enum class Subsystem { Optical, Mechanical };
std::string_view to_string(Subsystem s) noexcept;

struct Axis {
  double lo = -1.0;
  double hi = 1.0;
  int n = 2;

  double step() const { return (hi - lo) / (n - 1); }
  double at(int i) const { return lo + i * step(); }
};

struct Grid {
  Axis x;
  Axis y;
};

// +-n_sd largest standard deviations around the mean, n points per axis.
Grid default_grid(const GaussianState& s, Subsystem sub, double n_sd = 6.0, int n = 201);

struct WignerField {
  Subsystem subsystem = Subsystem::Mechanical;
  Axis x;
  Axis y;
  std::vector<double> values;  // row-major: values[iy * x.n + ix]

  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * x.n + ix]; }
  double integral() const;  // trapezoidal
};

// Throws SingularCovariance when det of the block < 1e-14.
WignerField wigner_marginal(const GaussianState& s, Subsystem sub, const Grid& grid);
WignerField wigner_marginal(const GaussianState& s, Subsystem sub);

// Full four-mode density at r = (X_L, P_L, X_M, P_M).
double wigner_joint(const GaussianState& s, const Vec4& r);

struct FieldMoments {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Mat2 cov = Mat2::Identity();
};
FieldMoments numerical_moments(const WignerField& f);

std::string field_csv(const WignerField& f);
// Axis metadata and the generating block for consumers of the CSV.
std::string field_json(const WignerField& f, const GaussianState& s, double t);

}  // namespace squeeze::wigner
