#pragma once

// Reference computations for the tests. Nothing here calls into the library's
// own estimators; geometry is rebuilt from coordinates.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2;

using Rng = std::mt19937_64;

inline Eigen::VectorXd random_unit(Rng& rng, int d) {
  std::normal_distribution<double> n;
  Eigen::VectorXd x(d);
  do {
    for (int i = 0; i < d; ++i) x[i] = n(rng);
  } while (x.norm() < 1e-12);
  return x.normalized();
}

inline std::vector<Eigen::VectorXd> random_points(Rng& rng, int d, int count) {
  std::vector<Eigen::VectorXd> v;
  for (int i = 0; i < count; ++i) v.push_back(random_unit(rng, d));
  return v;
}

inline Eigen::MatrixXd columns(const std::vector<Eigen::VectorXd>& v) {
  Eigen::MatrixXd m(v.front().size(), static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = v[i];
  return m;
}

/// x in the cone spanned by the columns of V (square, invertible).
inline bool in_cone(const Eigen::MatrixXd& V, const Eigen::VectorXd& x) {
  const Eigen::VectorXd c = V.partialPivLu().solve(x);
  return (c.array() >= 0.0).all();
}

/// Barycentric coordinates of the origin in the simplex with columns V.
inline Eigen::VectorXd origin_weights(const Eigen::MatrixXd& V) {
  const Eigen::Index d = V.rows();
  Eigen::MatrixXd A(d + 1, V.cols());
  A.topRows(d) = V;
  A.row(d).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d + 1);
  rhs[d] = 1.0;
  return A.fullPivLu().solve(rhs);
}

inline double simpson_step(const std::function<double(double)>& f, double a,
                           double b, double fa, double fm, double fb, double whole,
                           double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson quadrature with Richardson correction.
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-13) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

inline Estimate summarize(double sum, double sum_sq, std::size_t n) {
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
  return {mean, std::sqrt(var / n)};
}

/// Integral of X . apex over the spherical simplex with vertices V (columns,
/// apex = column 0) under the probability measure, by direct sampling.
inline Estimate direct_marginal_mean(const Eigen::MatrixXd& V, std::size_t n,
                                     std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::VectorXd apex = V.col(0);
  double s = 0.0, s2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::VectorXd x = random_unit(rng, static_cast<int>(V.rows()));
    const double v = in_cone(V, x) ? x.dot(apex) : 0.0;
    s += v;
    s2 += v * v;
  }
  return summarize(s, s2, n);
}

/// Right triangle with right angle at C, legs a = BC and b = AC, as columns
/// (A, B, C).
inline Eigen::Matrix3d right_triangle(double a, double b) {
  const Eigen::Vector3d A(1, 0, 0);
  const Eigen::Vector3d C(std::cos(b), std::sin(b), 0);
  const Eigen::Vector3d B = std::cos(a) * C + std::sin(a) * Eigen::Vector3d(0, 0, 1);
  Eigen::Matrix3d m;
  m << A, B, C;
  return m;
}

/// Angle at x between the great arcs to y and z.
inline double angle_at(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& z) {
  const Eigen::VectorXd ty = y - y.dot(x) * x, tz = z - z.dot(x) * x;
  return std::acos(std::clamp(ty.normalized().dot(tz.normalized()), -1.0, 1.0));
}

inline double arc(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return std::acos(std::clamp(x.dot(y), -1.0, 1.0));
}

/// f(A, B) = a sin b with cos a = cos A / sin B, cos b = cos B / sin A.
inline double f_ab(double A, double B) {
  const double a = std::acos(std::clamp(std::cos(A) / std::sin(B), -1.0, 1.0));
  const double b = std::acos(std::clamp(std::cos(B) / std::sin(A), -1.0, 1.0));
  return a * std::sin(b);
}

struct Derivs {
  double fA, fB, fAA, fAB, fBB;
};

/// Fourth-order central differences of f_ab.
inline Derivs fd_derivs(double A, double B, double h1, double h2) {
  auto f = f_ab;
  Derivs d{};
  d.fA = (-f(A + 2 * h1, B) + 8 * f(A + h1, B) - 8 * f(A - h1, B) + f(A - 2 * h1, B)) /
         (12 * h1);
  d.fB = (-f(A, B + 2 * h1) + 8 * f(A, B + h1) - 8 * f(A, B - h1) + f(A, B - 2 * h1)) /
         (12 * h1);
  const double f0 = f(A, B);
  d.fAA = (-f(A + 2 * h2, B) + 16 * f(A + h2, B) - 30 * f0 + 16 * f(A - h2, B) -
           f(A - 2 * h2, B)) / (12 * h2 * h2);
  d.fBB = (-f(A, B + 2 * h2) + 16 * f(A, B + h2) - 30 * f0 + 16 * f(A, B - h2) -
           f(A, B - 2 * h2)) / (12 * h2 * h2);
  auto cross = [&](double h) {
    return (f(A + h, B + h) - f(A + h, B - h) - f(A - h, B + h) + f(A - h, B - h)) /
           (4 * h * h);
  };
  d.fAB = (4 * cross(0.5 * h2) - cross(h2)) / 3;
  return d;
}

/// Uniform point of R = {0 < A, B < pi/2, A + B > pi/2} at least `margin`
/// from its boundary.
inline std::pair<double, double> random_region_point(Rng& rng, double margin) {
  std::uniform_real_distribution<double> u(margin, kHalfPi - margin);
  for (;;) {
    const double A = u(rng), B = u(rng);
    if (A + B > kHalfPi + margin) return {A, B};
  }
}

inline double region_distance(double A, double B) {
  return std::min({A + B - kHalfPi, kHalfPi - A, kHalfPi - B});
}

}  // namespace oracle
