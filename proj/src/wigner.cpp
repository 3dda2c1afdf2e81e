#include "squeeze/wigner.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "squeeze/error.hpp"

namespace squeeze::wigner {

namespace {

constexpr double kSingularDet = 1e-14;

struct Block {
  Eigen::Vector2d mean;
  Mat2 cov;
};

Block block_of(const GaussianState& s, Subsystem sub) {
  const int o = sub == Subsystem::Optical ? kXL : kXM;
  return {s.mean.segment<2>(o), s.cov.block<2, 2>(o, o)};
}

Axis check_axis(const Axis& a) {
  if (a.n < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 points per axis");
  if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || !(a.hi > a.lo)) {
    throw Error(ErrorCode::InvalidArgument, "grid range must be finite and increasing");
  }
  return a;
}

// Trapezoid weight of index i on an n-point axis.
double weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

}  // namespace

std::string_view to_string(Subsystem s) noexcept { return s == Subsystem::Optical ? "optical" : "mechanical"; }

Grid default_grid(const GaussianState& s, Subsystem sub, double n_sd, int n) {
  const auto b = block_of(s, sub);
  const double sd = std::sqrt(Eigen::SelfAdjointEigenSolver<Mat2>(b.cov).eigenvalues().maxCoeff());
  const double half = n_sd * sd;
  return {{b.mean.x() - half, b.mean.x() + half, n}, {b.mean.y() - half, b.mean.y() + half, n}};
}

WignerField wigner_marginal(const GaussianState& s, Subsystem sub, const Grid& grid) {
  const auto b = block_of(s, sub);
  const double det = b.cov.determinant();
  if (!(det >= kSingularDet)) throw Error(ErrorCode::SingularCovariance, "det = " + std::to_string(det));
  const Mat2 inv = b.cov.inverse();
  const double norm = 1.0 / (2 * std::numbers::pi * std::sqrt(det));
  WignerField f;
  f.subsystem = sub;
  f.x = check_axis(grid.x);
  f.y = check_axis(grid.y);
  f.values.resize(static_cast<std::size_t>(f.x.n) * f.y.n);
  for (int iy = 0; iy < f.y.n; ++iy) {
    for (int ix = 0; ix < f.x.n; ++ix) {
      const Eigen::Vector2d d(f.x.at(ix) - b.mean.x(), f.y.at(iy) - b.mean.y());
      f.values[static_cast<std::size_t>(iy) * f.x.n + ix] = norm * std::exp(-0.5 * d.dot(inv * d));
    }
  }
  return f;
}

WignerField wigner_marginal(const GaussianState& s, Subsystem sub) {
  return wigner_marginal(s, sub, default_grid(s, sub));
}

double WignerField::integral() const {
  double sum = 0.0;
  for (int iy = 0; iy < y.n; ++iy) {
    for (int ix = 0; ix < x.n; ++ix) sum += weight(ix, x.n) * weight(iy, y.n) * at(ix, iy);
  }
  return sum * x.step() * y.step();
}

double wigner_joint(const GaussianState& s, const Vec4& r) {
  const double det = s.cov.determinant();
  if (!(det >= kSingularDet)) throw Error(ErrorCode::SingularCovariance, "det = " + std::to_string(det));
  const Vec4 d = r - s.mean;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return std::exp(-0.5 * d.dot(s.cov.ldlt().solve(d))) / (4 * pi2 * std::sqrt(det));
}

FieldMoments numerical_moments(const WignerField& f) {
  double m0 = 0.0;
  Eigen::Vector2d m1 = Eigen::Vector2d::Zero();
  Mat2 m2 = Mat2::Zero();
  for (int iy = 0; iy < f.y.n; ++iy) {
    for (int ix = 0; ix < f.x.n; ++ix) {
      const double w = weight(ix, f.x.n) * weight(iy, f.y.n) * f.at(ix, iy);
      const Eigen::Vector2d r(f.x.at(ix), f.y.at(iy));
      m0 += w;
      m1 += w * r;
      m2 += w * r * r.transpose();
    }
  }
  FieldMoments out;
  out.mean = m1 / m0;
  out.cov = m2 / m0 - out.mean * out.mean.transpose();
  return out;
}

std::string field_csv(const WignerField& f) {
  std::ostringstream out;
  out.precision(10);
  out << "# squeeze-sim schema v1\n";
  out << "x,y,value\n";
  for (int iy = 0; iy < f.y.n; ++iy) {
    for (int ix = 0; ix < f.x.n; ++ix) out << f.x.at(ix) << ',' << f.y.at(iy) << ',' << f.at(ix, iy) << '\n';
  }
  return out.str();
}

std::string field_json(const WignerField& f, const GaussianState& s, double t) {
  const bool optical = f.subsystem == Subsystem::Optical;
  const auto b = block_of(s, f.subsystem);
  nlohmann::json j;
  j["schema"] = "squeeze-sim schema v1";
  j["subsystem"] = std::string(to_string(f.subsystem));
  j["t"] = t;
  j["convention"] = "X = a + a^dag, vacuum variance 1";
  j["x_axis"] = {{"name", optical ? "X_L" : "X_M"}, {"lo", f.x.lo}, {"hi", f.x.hi}, {"n", f.x.n}};
  j["y_axis"] = {{"name", optical ? "P_L" : "P_M"}, {"lo", f.y.lo}, {"hi", f.y.hi}, {"n", f.y.n}};
  j["mean"] = {b.mean.x(), b.mean.y()};
  j["cov"] = {{b.cov(0, 0), b.cov(0, 1)}, {b.cov(1, 0), b.cov(1, 1)}};
  j["integral"] = f.integral();
  return j.dump(2);
}

}  // namespace squeeze::wigner
