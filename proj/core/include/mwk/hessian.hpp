#pragma once

// f(A, B) = a sin b for a right spherical triangle with right angle at C,
// written in the two non-right angles A, B. Legs follow Napier's rule with a
// opposite A: cos a = cos A / sin B and cos b = cos B / sin A.

#include <iosfwd>
#include <optional>
#include <vector>

namespace mwk {

struct AnglePoint {
  double A = 0.0;
  double B = 0.0;
};

/// The positive quadrant of the negative-definiteness region:
/// 0 < A, B <= pi/2 and cos^2 A + cos^2 B < 1.
bool in_region(AnglePoint p);

struct LegPair {
  double a = 0.0;
  double b = 0.0;
};

LegPair intermediate_ab(AnglePoint p);

double f_value(AnglePoint p);

struct LegPartials {
  double da_dA = 0.0;
  double db_dA = 0.0;
  double da_dB = 0.0;
  double db_dB = 0.0;
};

LegPartials leg_partials(AnglePoint p);

struct Gradient {
  double f_A = 0.0;
  double f_B = 0.0;
};

Gradient gradient(AnglePoint p);

struct SecondPartials {
  double f_AA = 0.0;
  double f_AB = 0.0;
  double f_BB = 0.0;
};

struct PQR {
  double P = 0.0;
  double Q = 0.0;
  std::optional<double> R;  // singular at x = 1
};

/// Simplified closed forms at (x, y) = (sin a, sin b), x, y in [0, 1].
PQR pqr(double x, double y);

/// The unsimplified products of the second-partial factors; needs
/// 0 < x < 1 and 0 < y <= 1.
PQR pqr_raw(double x, double y);

/// R through its factored form (x^2/(1-x^2) - (1-x^2)/x^2) x^2 (1-(1-x^2)(1-y^2)).
double r_factored(double x, double y);

struct HessianReport {
  AnglePoint point;
  double f = 0.0;
  double f_A = 0.0;
  double f_B = 0.0;
  double f_AA = 0.0;
  double f_AB = 0.0;
  double f_BB = 0.0;
  double a = 0.0;
  double b = 0.0;
  double P = 0.0;
  double Q = 0.0;
  double R_val = 0.0;  // +inf when cos a = 0
  double det_hess = 0.0;
  double reduced_det = 0.0;
  /// P + Q a cos a / sin a + R a^2 / sin^2 a minus the scaled determinant.
  double pqr_residual = 0.0;
  /// sin^2 A / (cos^2 a cos^2 b) det_hess minus reduced_det.
  double reduced_residual = 0.0;
  bool limit_form = false;  // evaluated at cos a ~ 0 without the scaled forms
  bool negative_definite = false;
};

HessianReport hessian_analytic(AnglePoint p);

struct ReducedDeterminant {
  double value = 0.0;           // a^2 tan^2 a - (1 - a cot a)^2
  double sin_chain_factor = 0.0;  // 1 - 2a / sin 2a   (negative)
  double tan_chain_factor = 0.0;  // 1 - 2a / tan 2a   (positive)
  bool positive() const { return value > 0.0; }
};

ReducedDeterminant reduced_determinant(double a);
bool reduced_det_positive(double a);

/// Finite-difference steps used by the oracles below.
inline constexpr double kGradientFdStep = 1e-5;
inline constexpr double kHessianFdStep = 1e-4;

Gradient fd_gradient(AnglePoint p, double h = kGradientFdStep);

/// Central second differences, Richardson-extrapolated from h and h/2.
SecondPartials fd_hessian(AnglePoint p, double h = kHessianFdStep);

struct ScanRow {
  double A = 0.0;
  double B = 0.0;
  double f = 0.0;
  double f_AA = 0.0;
  double det_hess = 0.0;
  double reduced_det = 0.0;
  double fd_gap = 0.0;  // NaN when the FD stencil would leave the region
};

struct ScanReport {
  int grid_n = 0;
  std::vector<ScanRow> rows;
  double min_neg_f_AA = 0.0;
  double min_det_hess = 0.0;
  double max_fd_gap = 0.0;
  int det_violations = 0;
  int f_AA_violations = 0;

  int violations() const { return det_violations + f_AA_violations; }
};

/// Evaluates hessian_analytic on a grid_n x grid_n grid of (margin, pi/2 -
/// margin)^2, keeping points with cos^2 A + cos^2 B <= 1 - margin.
ScanReport region_scan(int grid_n, bool with_fd = true, double margin = 1e-4);

/// CSV with header A,B,f,f_AA,det_hess,reduced_det,fd_gap.
void write_scan_csv(const ScanReport& report, std::ostream& out);

}  // namespace mwk
