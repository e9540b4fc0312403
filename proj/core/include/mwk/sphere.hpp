#pragma once

#include <Eigen/Dense>

namespace mwk {

/// A point on the unit sphere S^{d-1} in R^d, d >= 2.
class UnitVector {
 public:
  /// Throws Error(kDomain) unless |coords| is 1 within kUnitNormTol.
  explicit UnitVector(Eigen::VectorXd coords);

  /// Normalizes a nonzero vector; throws Error(kDegenerate) if |v| < eps.
  static UnitVector normalized(const Eigen::VectorXd& v);
  static UnitVector basis(int d, int i);

  int dim() const { return static_cast<int>(coords_.size()); }
  const Eigen::VectorXd& coords() const { return coords_; }
  double operator[](int i) const { return coords_[i]; }

  double dot(const UnitVector& other) const;
  UnitVector operator-() const;

 private:
  struct Trusted {};
  UnitVector(Eigen::VectorXd coords, Trusted) : coords_(std::move(coords)) {}

  Eigen::VectorXd coords_;
};

void require_same_dim(const UnitVector& x, const UnitVector& y);

/// Geodesic distance; the dot product is clamped to [-1, 1].
double arc_length(const UnitVector& x, const UnitVector& y);

enum class Orientation : int { kNegative = -1, kDegenerate = 0, kPositive = 1 };

inline int sign_of(Orientation o) { return static_cast<int>(o); }

/// Sign of det[A B C]; kDegenerate when |det| < kDegeneracyEps. Requires d = 3.
Orientation orientation(const UnitVector& A, const UnitVector& B,
                        const UnitVector& C);

/// Interior angle at `at` between the arcs toward `y` and `z`, measured
/// between the tangent projections t = y - (y.at) at.
double vertex_angle(const UnitVector& at, const UnitVector& y,
                    const UnitVector& z);

/// Right spherical triangle with the right angle at C.
struct RightSphericalTriangle {
  UnitVector A;
  UnitVector B;
  UnitVector C;
  double a;      // arc BC, opposite A
  double b;      // arc AC, opposite B
  double c;      // hypotenuse AB
  double alpha;  // angle at A
  double beta;   // angle at B
};

/// Canonical frame: A = (1,0,0), C = (cos b, sin b, 0), B above the xy-plane.
/// Legs must lie in (0, pi/2].
RightSphericalTriangle solve_right_triangle(double a, double b);

/// Napier: the angle A with cos A = cos a sin B.
double napier_angle(double a, double B_angle);

/// Polar distance Phi(theta) of the side opposite A = (1,0,0), seen from A
/// at azimuth theta, for the canonical right triangle with leg b along the
/// xy-plane. b in (0, pi/2), theta in [0, pi/2].
double phi_param(double theta, double b);

/// Max pairwise deviation among sin(side)/sin(opposite angle).
double law_of_sines_residual(const UnitVector& A, const UnitVector& B,
                             const UnitVector& C);

/// Girard area in steradians: angle sum minus pi.
double spherical_triangle_area(const UnitVector& A, const UnitVector& B,
                               const UnitVector& C);

}  // namespace mwk
