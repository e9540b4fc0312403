#include "mwk/sphere.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mwk/config.hpp"
#include "mwk/error.hpp"

namespace mwk {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kDimension: return "dimension";
    case ErrorKind::kDegenerate: return "degenerate";
    case ErrorKind::kGeneralPosition: return "general_position";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kSampling: return "sampling";
  }
  return "unknown";
}

UnitVector::UnitVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) {
    throw Error(ErrorKind::kDimension, "UnitVector requires d >= 2");
  }
  const double n = coords_.norm();
  if (!(std::abs(n - 1.0) <= kUnitNormTol)) {
    throw Error(ErrorKind::kDomain,
                "UnitVector norm " + std::to_string(n) + " is not 1");
  }
}

UnitVector UnitVector::normalized(const Eigen::VectorXd& v) {
  if (v.size() < 2) {
    throw Error(ErrorKind::kDimension, "UnitVector requires d >= 2");
  }
  const double n = v.norm();
  if (!(n >= kDegeneracyEps) || !std::isfinite(n)) {
    throw Error(ErrorKind::kDegenerate, "cannot normalize a (near-)zero vector");
  }
  return UnitVector(v / n, Trusted{});
}

UnitVector UnitVector::basis(int d, int i) {
  if (d < 2 || i < 0 || i >= d) {
    throw Error(ErrorKind::kDomain, "basis index out of range");
  }
  return UnitVector(Eigen::VectorXd::Unit(d, i), Trusted{});
}

double UnitVector::dot(const UnitVector& other) const {
  require_same_dim(*this, other);
  return coords_.dot(other.coords_);
}

UnitVector UnitVector::operator-() const { return UnitVector(-coords_, Trusted{}); }

void require_same_dim(const UnitVector& x, const UnitVector& y) {
  if (x.dim() != y.dim()) {
    throw Error(ErrorKind::kDimension,
                "dimension mismatch: " + std::to_string(x.dim()) + " vs " +
                    std::to_string(y.dim()));
  }
}

double arc_length(const UnitVector& x, const UnitVector& y) {
  return std::acos(std::clamp(x.dot(y), -1.0, 1.0));
}

namespace {

void require_dim3(const UnitVector& A, const UnitVector& B,
                  const UnitVector& C) {
  require_same_dim(A, B);
  require_same_dim(A, C);
  if (A.dim() != 3) {
    throw Error(ErrorKind::kDimension, "operation requires points on S^2");
  }
}

double det3(const UnitVector& A, const UnitVector& B, const UnitVector& C) {
  Eigen::Matrix3d m;
  m << A.coords(), B.coords(), C.coords();
  return m.determinant();
}

Eigen::VectorXd tangent_toward(const UnitVector& at, const UnitVector& y) {
  Eigen::VectorXd t = y.coords() - y.dot(at) * at.coords();
  const double n = t.norm();
  if (n < kDegeneracyEps) {
    throw Error(ErrorKind::kDegenerate,
                "tangent direction undefined (coincident or antipodal points)");
  }
  return t / n;
}

void require_nondegenerate(const UnitVector& A, const UnitVector& B,
                           const UnitVector& C) {
  require_dim3(A, B, C);
  if (std::abs(det3(A, B, C)) < kDegeneracyEps) {
    throw Error(ErrorKind::kDegenerate,
                "triangle vertices lie on a common great circle");
  }
}

}  // namespace

Orientation orientation(const UnitVector& A, const UnitVector& B,
                        const UnitVector& C) {
  require_dim3(A, B, C);
  const double det = det3(A, B, C);
  if (std::abs(det) < kDegeneracyEps) return Orientation::kDegenerate;
  return det > 0 ? Orientation::kPositive : Orientation::kNegative;
}

double vertex_angle(const UnitVector& at, const UnitVector& y,
                    const UnitVector& z) {
  require_same_dim(at, y);
  require_same_dim(at, z);
  const Eigen::VectorXd ty = tangent_toward(at, y);
  const Eigen::VectorXd tz = tangent_toward(at, z);
  return std::acos(std::clamp(ty.dot(tz), -1.0, 1.0));
}

RightSphericalTriangle solve_right_triangle(double a, double b) {
  if (!(a > 0.0 && a <= kHalfPi) || !(b > 0.0 && b <= kHalfPi)) {
    throw Error(ErrorKind::kDomain, "right-triangle legs must lie in (0, pi/2]");
  }
  const double ca = std::cos(a), sa = std::sin(a);
  const double cb = std::cos(b), sb = std::sin(b);
  Eigen::VectorXd A(3), B(3), C(3);
  A << 1.0, 0.0, 0.0;
  C << cb, sb, 0.0;
  // B leaves C along e3, which is the tangent at C orthogonal to arc CA.
  B << ca * cb, ca * sb, sa;
  const double c = std::acos(std::clamp(ca * cb, -1.0, 1.0));
  // tan(alpha) = tan(a) / sin(b), written without the tan singularity.
  const double alpha = std::atan2(sa, ca * sb);
  const double beta = std::atan2(sb, cb * sa);
  return RightSphericalTriangle{UnitVector::normalized(A),
                                UnitVector::normalized(B),
                                UnitVector::normalized(C),
                                a,
                                b,
                                c,
                                alpha,
                                beta};
}

double napier_angle(double a, double B_angle) {
  const double cosA = std::cos(a) * std::sin(B_angle);
  if (!(std::abs(cosA) <= 1.0 + kDegeneracyEps)) {
    throw Error(ErrorKind::kDomain, "cos a * sin B outside [-1, 1]");
  }
  return std::acos(std::clamp(cosA, -1.0, 1.0));
}

double phi_param(double theta, double b) {
  if (!(b > 0.0 && b < kHalfPi)) {
    throw Error(ErrorKind::kDomain, "phi_param requires b in (0, pi/2)");
  }
  if (!(theta >= 0.0 && theta <= kHalfPi)) {
    throw Error(ErrorKind::kDomain, "phi_param requires theta in [0, pi/2]");
  }
  // cos(theta) = tan(b) cot(Phi)
  return std::atan2(std::tan(b), std::cos(theta));
}

double law_of_sines_residual(const UnitVector& A, const UnitVector& B,
                             const UnitVector& C) {
  require_nondegenerate(A, B, C);
  const std::array<double, 3> ratios{
      std::sin(arc_length(B, C)) / std::sin(vertex_angle(A, B, C)),
      std::sin(arc_length(A, C)) / std::sin(vertex_angle(B, A, C)),
      std::sin(arc_length(A, B)) / std::sin(vertex_angle(C, A, B))};
  return std::max({std::abs(ratios[0] - ratios[1]),
                   std::abs(ratios[1] - ratios[2]),
                   std::abs(ratios[0] - ratios[2])});
}

double spherical_triangle_area(const UnitVector& A, const UnitVector& B,
                               const UnitVector& C) {
  require_nondegenerate(A, B, C);
  return vertex_angle(A, B, C) + vertex_angle(B, A, C) +
         vertex_angle(C, A, B) - kPi;
}

}  // namespace mwk
