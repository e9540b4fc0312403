#include "mwk/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "mwk/config.hpp"
#include "mwk/error.hpp"

namespace mwk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this |cos a| the scaled second-partial forms are 0/0.
constexpr double kCosLimit = 1e-8;

void require_region(AnglePoint p) {
  if (!in_region(p)) {
    throw Error(ErrorKind::kDomain,
                "(A, B) outside the region 0 < A, B <= pi/2, cos^2 A + cos^2 B < 1");
  }
}

LegPair legs_raw(AnglePoint p) {
  const double cos_a = std::clamp(std::cos(p.A) / std::sin(p.B), -1.0, 1.0);
  const double cos_b = std::clamp(std::cos(p.B) / std::sin(p.A), -1.0, 1.0);
  return {std::acos(cos_a), std::acos(cos_b)};
}

double f_raw(AnglePoint p) {
  const LegPair l = legs_raw(p);
  return l.a * std::sin(l.b);
}

SecondPartials second_partials(double a, double b, bool& limit_form) {
  const double sa = std::sin(a), ca = std::cos(a);
  const double sb = std::sin(b), cb = std::cos(b);
  const double t = a / sa;
  SecondPartials s;
  limit_form = std::abs(ca) < kCosLimit;
  if (!limit_form) {
    const double s1 = 1.0 / sb - (2.0 * sb * ca + 1.0 / (sb * ca)) * t;
    const double s2 = -sb + ca * ca * cb * cb / sb -
                      (sb / ca + cb * cb / sb * ca) * t;
    const double s3 = cb * cb / sb * ca - ((1.0 + sb * sb) / sb) * t;
    s.f_AA = s1 * ca * cb * cb / sa;
    s.f_BB = s2 * ca / sa;
    s.f_AB = s3 * ca * cb / sa;
  } else {
    // Same expressions multiplied through by cos a.
    s.f_AA = cb * cb / sa * (ca / sb - (2.0 * sb * ca * ca + 1.0 / sb) * t);
    s.f_BB = (-sb * ca + ca * ca * ca * cb * cb / sb -
              (sb + cb * cb * ca * ca / sb) * t) / sa;
    s.f_AB = cb / sa * (cb * cb * ca * ca / sb - ca * (1.0 + sb * sb) / sb * t);
  }
  return s;
}

}  // namespace

bool in_region(AnglePoint p) {
  if (!(p.A > 0.0 && p.A <= kHalfPi && p.B > 0.0 && p.B <= kHalfPi)) return false;
  const double ca = std::cos(p.A), cb = std::cos(p.B);
  return ca * ca + cb * cb < 1.0;
}

LegPair intermediate_ab(AnglePoint p) {
  require_region(p);
  return legs_raw(p);
}

double f_value(AnglePoint p) {
  require_region(p);
  return f_raw(p);
}

LegPartials leg_partials(AnglePoint p) {
  const LegPair l = intermediate_ab(p);
  const double sa = std::sin(l.a), ca = std::cos(l.a);
  const double sb = std::sin(l.b), cb = std::cos(l.b);
  return {1.0 / sb, ca * cb / sa, ca * cb / sb, 1.0 / sa};
}

Gradient gradient(AnglePoint p) {
  const LegPair l = intermediate_ab(p);
  const double sa = std::sin(l.a), ca = std::cos(l.a);
  const double cb = std::cos(l.b);
  return {1.0 + l.a * ca * cb * cb / sa, cb * (ca + l.a / sa)};
}

PQR pqr(double x, double y) {
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
    throw Error(ErrorKind::kDomain, "pqr needs x, y in [0, 1]");
  }
  const double k = (1.0 - x * x) * (1.0 - y * y);
  PQR out;
  out.P = k - 1.0;
  out.Q = 2.0 * (1.0 - k);
  if (x < 1.0) {
    out.R = (2.0 * x * x - 1.0) * (y * y - 1.0 + 1.0 / (1.0 - x * x));
  }
  return out;
}

PQR pqr_raw(double x, double y) {
  if (!(x > 0.0 && x < 1.0)) {
    throw Error(ErrorKind::kDomain, "unsimplified P/Q/R need 0 < x < 1");
  }
  if (!(y > 0.0 && y <= 1.0)) {
    throw Error(ErrorKind::kDomain, "unsimplified P/Q/R need 0 < y <= 1");
  }
  const double u = 1.0 - x * x;  // cos^2 a
  const double v = 1.0 - y * y;  // cos^2 b
  PQR out;
  out.P = (1.0 / y) * (-y + u * v / y) - (v * v / (y * y)) * u;
  out.Q = -(1.0 / y) * (y / u + v / y) -
          (2.0 * y + 1.0 / (y * u)) * (-y + u * v / y) +
          2.0 * (v / y) * ((1.0 + y * y) / y);
  out.R = (2.0 * y + 1.0 / (y * u)) * (y + v * u / y) -
          (y + 1.0 / y) * (y + 1.0 / y);
  return out;
}

double r_factored(double x, double y) {
  if (!(x > 0.0 && x < 1.0)) {
    throw Error(ErrorKind::kDomain, "factored R needs 0 < x < 1");
  }
  const double u = 1.0 - x * x;
  return (x * x / u - u / (x * x)) * x * x * (1.0 - u * (1.0 - y * y));
}

HessianReport hessian_analytic(AnglePoint p) {
  require_region(p);
  HessianReport r;
  r.point = p;
  const LegPair l = legs_raw(p);
  r.a = l.a;
  r.b = l.b;
  r.f = l.a * std::sin(l.b);
  const Gradient g = gradient(p);
  r.f_A = g.f_A;
  r.f_B = g.f_B;

  const SecondPartials s = second_partials(l.a, l.b, r.limit_form);
  r.f_AA = s.f_AA;
  r.f_AB = s.f_AB;
  r.f_BB = s.f_BB;
  r.det_hess = s.f_AA * s.f_BB - s.f_AB * s.f_AB;

  const double sa = std::sin(l.a), ca = std::cos(l.a);
  const double sb = std::sin(l.b), cb = std::cos(l.b);
  const PQR coeffs = pqr(std::clamp(sa, 0.0, 1.0), std::clamp(sb, 0.0, 1.0));
  r.P = coeffs.P;
  r.Q = coeffs.Q;
  r.R_val = coeffs.R.value_or(kInf);

  const bool interior = l.a < kHalfPi && !r.limit_form && std::abs(cb) >= kCosLimit;
  r.reduced_det = l.a < kHalfPi ? reduced_determinant(l.a).value : kInf;
  if (interior && coeffs.R) {
    const double scale = sa * sa / (ca * ca * cb * cb);
    const double lhs = scale * r.det_hess;
    const double rhs = r.P + r.Q * l.a * ca / sa + r.R_val * l.a * l.a / (sa * sa);
    r.pqr_residual = (lhs - rhs) / std::max(1.0, std::abs(lhs));
    const double sinA = std::sin(p.A);
    const double reduced_lhs = sinA * sinA / (ca * ca * cb * cb) * r.det_hess;
    r.reduced_residual =
        (reduced_lhs - r.reduced_det) / std::max(1.0, std::abs(r.reduced_det));
  } else {
    r.pqr_residual = kNaN;
    r.reduced_residual = kNaN;
  }
  r.negative_definite = r.f_AA < 0.0 && r.det_hess > 0.0;
  return r;
}

ReducedDeterminant reduced_determinant(double a) {
  if (!(a > 0.0 && a < kHalfPi)) {
    throw Error(ErrorKind::kDomain, "reduced determinant needs a in (0, pi/2)");
  }
  const double tan_a = std::tan(a);
  const double a_cot_a = a / tan_a;
  ReducedDeterminant r;
  r.value = a * a * tan_a * tan_a - (1.0 - a_cot_a) * (1.0 - a_cot_a);
  r.sin_chain_factor = 1.0 - 2.0 * a / std::sin(2.0 * a);
  r.tan_chain_factor = 1.0 - 2.0 * a / std::tan(2.0 * a);
  return r;
}

bool reduced_det_positive(double a) { return reduced_determinant(a).positive(); }

Gradient fd_gradient(AnglePoint p, double h) {
  return {(f_raw({p.A + h, p.B}) - f_raw({p.A - h, p.B})) / (2.0 * h),
          (f_raw({p.A, p.B + h}) - f_raw({p.A, p.B - h})) / (2.0 * h)};
}

namespace {

SecondPartials central_second(AnglePoint p, double h) {
  const double f0 = f_raw(p);
  SecondPartials s;
  s.f_AA = (f_raw({p.A + h, p.B}) - 2.0 * f0 + f_raw({p.A - h, p.B})) / (h * h);
  s.f_BB = (f_raw({p.A, p.B + h}) - 2.0 * f0 + f_raw({p.A, p.B - h})) / (h * h);
  s.f_AB = (f_raw({p.A + h, p.B + h}) - f_raw({p.A + h, p.B - h}) -
            f_raw({p.A - h, p.B + h}) + f_raw({p.A - h, p.B - h})) /
           (4.0 * h * h);
  return s;
}

}  // namespace

SecondPartials fd_hessian(AnglePoint p, double h) {
  const SecondPartials coarse = central_second(p, h);
  const SecondPartials fine = central_second(p, 0.5 * h);
  return {(4.0 * fine.f_AA - coarse.f_AA) / 3.0,
          (4.0 * fine.f_AB - coarse.f_AB) / 3.0,
          (4.0 * fine.f_BB - coarse.f_BB) / 3.0};
}

ScanReport region_scan(int grid_n, bool with_fd, double margin) {
  if (grid_n < 2) throw Error(ErrorKind::kDomain, "grid_n must be >= 2");
  ScanReport report;
  report.grid_n = grid_n;
  report.min_neg_f_AA = kInf;
  report.min_det_hess = kInf;
  report.max_fd_gap = 0.0;

  const double lo = margin, hi = kHalfPi - margin;
  for (int i = 0; i < grid_n; ++i) {
    const double A = lo + (hi - lo) * i / (grid_n - 1);
    for (int j = 0; j < grid_n; ++j) {
      const double B = lo + (hi - lo) * j / (grid_n - 1);
      const double cA = std::cos(A), cB = std::cos(B);
      if (cA * cA + cB * cB > 1.0 - margin) continue;

      const HessianReport h = hessian_analytic({A, B});
      ScanRow row{A, B, h.f, h.f_AA, h.det_hess, h.reduced_det, kNaN};
      const double h_fd = kHessianFdStep;
      if (with_fd && in_region({A - h_fd, B - h_fd})) {
        const SecondPartials fd = fd_hessian({A, B}, h_fd);
        row.fd_gap = std::max({std::abs(fd.f_AA - h.f_AA),
                               std::abs(fd.f_AB - h.f_AB),
                               std::abs(fd.f_BB - h.f_BB)});
        report.max_fd_gap = std::max(report.max_fd_gap, row.fd_gap);
      }
      report.min_neg_f_AA = std::min(report.min_neg_f_AA, -h.f_AA);
      report.min_det_hess = std::min(report.min_det_hess, h.det_hess);
      if (!(h.det_hess > 0.0)) ++report.det_violations;
      if (!(h.f_AA < 0.0)) ++report.f_AA_violations;
      report.rows.push_back(row);
    }
  }
  return report;
}

void write_scan_csv(const ScanReport& report, std::ostream& out) {
  out << "A,B,f,f_AA,det_hess,reduced_det,fd_gap\n";
  out << std::setprecision(17);
  for (const ScanRow& r : report.rows) {
    out << r.A << ',' << r.B << ',' << r.f << ',' << r.f_AA << ',' << r.det_hess
        << ',' << r.reduced_det << ',' << r.fd_gap << '\n';
  }
}

}  // namespace mwk
