#pragma once

// Spherical measure theory on S^{d-1}: Wallis integrals, caps, and the
// marginal mean M_A(R) = \int_R X.A dmu(X) under the uniform probability
// measure mu.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mwk/sphere.hpp"

namespace mwk {

/// W^d = \int_0^pi sin^d t dt, from W^0 = pi, W^1 = 2 and
/// W^d = (d-1)/d W^{d-2}.
double wallis_complete(int d);

/// Incomplete Wallis integral \int_0^r sin^d t dt for r in [0, pi].
double wallis_incomplete(int d, double r);

struct WallisTable {
  int d_max = 0;
  std::vector<double> complete;  // complete[d] = W^d
};

WallisTable make_wallis_table(int d_max);

/// mu of the geodesic cap of radius r in S^{d-1}, d >= 2.
double cap_measure(int d, double r);

struct MarginalMean {
  double value = 0.0;
  double std_error = 0.0;  // 0 for closed forms
  std::string region;
};

/// M_{e1} over the cap of radius r centered at e1.
MarginalMean cap_marginal_mean(int d, double r);

/// M_A of a right triangle (right angle at C) with leg a opposite A and leg b
/// adjacent to A: a sin(b) / (8 pi). Legs in (0, pi/2].
MarginalMean right_triangle_marginal_mean(double a, double b);

/// M_A of a general triangle, by splitting along the altitude from A into two
/// signed right triangles.
MarginalMean triangle_marginal_mean(const UnitVector& A, const UnitVector& B,
                                    const UnitVector& C);

/// Euclidean centroid of a spherical triangle under the steradian surface
/// measure (not mu; multiply the numerator by 1/(4 pi) to convert).
Eigen::Vector3d centroid_brock(const UnitVector& A, const UnitVector& B,
                               const UnitVector& C);

/// Spherical simplex {x : Hx >= 0}. Rows of H are unit inward normals.
class HalfspaceCell {
 public:
  explicit HalfspaceCell(Eigen::MatrixXd H);

  /// Cell spanned by the columns of V (its vertices). Rows are the
  /// normalized rows of V^{-1}, so row i is positive on vertex i.
  static HalfspaceCell from_vertices(const Eigen::MatrixXd& V);

  int dim() const { return static_cast<int>(H_.rows()); }
  const Eigen::MatrixXd& normals() const { return H_; }
  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;

 private:
  Eigen::MatrixXd H_;
};

/// Prefactor used in the path-simplex marginal-mean integral.
/// kCorrected = 1/((d-1) W^{d-2}), which matches the cap marginal mean;
/// kDMinus2 = 1/((d-2) W^{d-2}) exists only as a negative control.
enum class MatPrefactor { kCorrected, kDMinus2 };

double mat_prefactor(int d, MatPrefactor variant = MatPrefactor::kCorrected);

/// M_{e1}(T) for a cell with e1 as its first vertex, as
///   c_d \int_{T~} (1 + (theta . h)^2)^{(1-d)/2} dmu(theta)
/// over the reduced simplex T~ in S^{d-2}, estimated by rejection sampling.
MarginalMean cell_marginal_mean_mat(
    const HalfspaceCell& cell, std::size_t n_samples, std::uint64_t seed,
    MatPrefactor variant = MatPrefactor::kCorrected);

struct PrefactorCheck {
  bool passed = false;
  double estimate = 0.0;
  double std_error = 0.0;
  double expected = 0.0;
};

/// Compares the octant cell of S^2 against the closed form 1/16.
PrefactorCheck check_mat_prefactor(
    MatPrefactor variant = MatPrefactor::kCorrected);

/// Runs check_mat_prefactor once per process; throws if it fails.
void ensure_mat_prefactor_verified();

}  // namespace mwk
