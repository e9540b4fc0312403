#include "mwk/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "mwk/config.hpp"
#include "mwk/error.hpp"
#include "mwk/monte_carlo.hpp"

namespace mwk {

namespace {

// Radii a few ulps past pi (e.g. pi * k / k) are clamped rather than refused.
double checked_radius(double r) {
  constexpr double kSlack = 8.0 * std::numeric_limits<double>::epsilon();
  if (!(r >= 0.0 && r <= kPi * (1.0 + kSlack))) {
    throw Error(ErrorKind::kDomain, "radius must lie in [0, pi]");
  }
  return std::min(r, kPi);
}

}  // namespace

double wallis_complete(int d) {
  if (d < 0) throw Error(ErrorKind::kDomain, "Wallis index must be >= 0");
  double w = (d % 2 == 0) ? kPi : 2.0;
  for (int k = (d % 2 == 0) ? 2 : 3; k <= d; k += 2) {
    w *= static_cast<double>(k - 1) / static_cast<double>(k);
  }
  return w;
}

double wallis_incomplete(int d, double r) {
  if (d < 0) throw Error(ErrorKind::kDomain, "Wallis index must be >= 0");
  r = checked_radius(r);
  const double s = std::sin(r), c = std::cos(r);
  const double half = std::sin(0.5 * r);
  double w = (d % 2 == 0) ? r : 2.0 * half * half;  // 1 - cos r
  double s_pow = (d % 2 == 0) ? s : s * s;           // sin^{k-1} r at k = start
  for (int k = (d % 2 == 0) ? 2 : 3; k <= d; k += 2) {
    w = (static_cast<double>(k - 1) * w - c * s_pow) / static_cast<double>(k);
    s_pow *= s * s;
  }
  return w;
}

WallisTable make_wallis_table(int d_max) {
  if (d_max < 0) throw Error(ErrorKind::kDomain, "d_max must be >= 0");
  WallisTable t;
  t.d_max = d_max;
  t.complete.resize(d_max + 1);
  for (int d = 0; d <= d_max; ++d) {
    t.complete[d] = d < 2 ? wallis_complete(d)
                          : t.complete[d - 2] * (d - 1) / static_cast<double>(d);
  }
  return t;
}

double cap_measure(int d, double r) {
  if (d < 2) throw Error(ErrorKind::kDimension, "cap_measure requires d >= 2");
  return wallis_incomplete(d - 2, r) / wallis_complete(d - 2);
}

MarginalMean cap_marginal_mean(int d, double r) {
  if (d < 2) {
    throw Error(ErrorKind::kDimension, "cap_marginal_mean requires d >= 2");
  }
  r = checked_radius(r);
  const double value =
      std::pow(std::sin(r), d - 1) / ((d - 1) * wallis_complete(d - 2));
  return {value, 0.0, "cap"};
}

namespace {

double right_triangle_moment(double opposite_leg, double adjacent_leg) {
  return opposite_leg * std::sin(adjacent_leg) / (8.0 * kPi);
}

}  // namespace

MarginalMean right_triangle_marginal_mean(double a, double b) {
  if (!(a > 0.0 && a <= kHalfPi) || !(b > 0.0 && b <= kHalfPi)) {
    throw Error(ErrorKind::kDomain, "right-triangle legs must lie in (0, pi/2]");
  }
  return {right_triangle_moment(a, b), 0.0, "right_triangle"};
}

MarginalMean triangle_marginal_mean(const UnitVector& A, const UnitVector& B,
                                    const UnitVector& C) {
  require_same_dim(A, B);
  require_same_dim(A, C);
  if (A.dim() != 3) {
    throw Error(ErrorKind::kDimension, "triangle_marginal_mean requires S^2");
  }
  if (orientation(A, B, C) == Orientation::kDegenerate) {
    throw Error(ErrorKind::kDegenerate, "degenerate triangle");
  }
  const Eigen::Vector3d a = A.coords(), b = B.coords(), c = C.coords();
  const Eigen::Vector3d bc = b.cross(c);
  const double bc_norm = bc.norm();
  const Eigen::Vector3d n = bc / bc_norm;

  // A at a pole of BC: the triangle is a sector of width |BC| about A.
  const Eigen::Vector3d foot_raw = a - a.dot(n) * n;
  if (foot_raw.norm() < kDegeneracyEps) {
    return {right_triangle_moment(arc_length(B, C), kHalfPi), 0.0, "triangle"};
  }
  // Foot of the altitude from A, taken on the side of the great circle where
  // it splits BC into signed pieces D = alpha B + beta C.
  Eigen::Vector3d dv = foot_raw.normalized();
  double alpha = dv.cross(c).dot(n) / bc_norm;
  double beta = b.cross(dv).dot(n) / bc_norm;
  if (alpha < 0.0 && beta < 0.0) {
    // The antipodal foot lies inside BC; the moment is symmetric under
    // h -> pi - h, so the same sine applies.
    dv = -dv;
    alpha = -alpha;
    beta = -beta;
  }
  const UnitVector D = UnitVector::normalized(dv);
  const double bd = arc_length(B, D);
  const double dc = arc_length(D, C);
  const double h = arc_length(A, D);
  const double sign_abd = beta > 0.0 ? 1.0 : -1.0;
  const double sign_adc = alpha > 0.0 ? 1.0 : -1.0;
  const double value = sign_abd * right_triangle_moment(bd, h) +
                       sign_adc * right_triangle_moment(dc, h);
  return {value, 0.0, "triangle"};
}

Eigen::Vector3d centroid_brock(const UnitVector& A, const UnitVector& B,
                               const UnitVector& C) {
  const Orientation o = orientation(A, B, C);
  if (o == Orientation::kDegenerate) {
    throw Error(ErrorKind::kDegenerate, "degenerate triangle");
  }
  const double area = spherical_triangle_area(A, B, C);
  const Eigen::Vector3d a = A.coords(), b = B.coords(), c = C.coords();
  auto term = [](const Eigen::Vector3d& p, const Eigen::Vector3d& q,
                 double side) {
    return Eigen::Vector3d(p.cross(q) * (side / std::sin(side)));
  };
  const Eigen::Vector3d sum = term(b, c, arc_length(B, C)) +
                              term(c, a, arc_length(C, A)) +
                              term(a, b, arc_length(A, B));
  return static_cast<double>(sign_of(o)) * sum / (2.0 * area);
}

HalfspaceCell::HalfspaceCell(Eigen::MatrixXd H) : H_(std::move(H)) {
  if (H_.rows() != H_.cols() || H_.rows() < 2) {
    throw Error(ErrorKind::kDimension, "HalfspaceCell needs a square matrix, d >= 2");
  }
  for (Eigen::Index i = 0; i < H_.rows(); ++i) {
    if (std::abs(H_.row(i).norm() - 1.0) > kUnitNormTol) {
      throw Error(ErrorKind::kDomain, "HalfspaceCell rows must be unit vectors");
    }
  }
  if (std::abs(H_.determinant()) <= kDegeneracyEps) {
    throw Error(ErrorKind::kDegenerate, "HalfspaceCell matrix is singular");
  }
}

HalfspaceCell HalfspaceCell::from_vertices(const Eigen::MatrixXd& V) {
  if (V.rows() != V.cols()) {
    throw Error(ErrorKind::kDimension, "vertex matrix must be square");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(V);
  if (!lu.isInvertible() || std::abs(lu.determinant()) <= kDegeneracyEps) {
    throw Error(ErrorKind::kDegenerate, "cell vertices are linearly dependent");
  }
  Eigen::MatrixXd H = lu.inverse();
  for (Eigen::Index i = 0; i < H.rows(); ++i) H.row(i).normalize();
  return HalfspaceCell(std::move(H));
}

bool HalfspaceCell::contains(const Eigen::VectorXd& x, double tol) const {
  return ((H_ * x).array() >= -tol).all();
}

double mat_prefactor(int d, MatPrefactor variant) {
  if (d < 3) throw Error(ErrorKind::kDimension, "MAT requires d >= 3");
  const int k = variant == MatPrefactor::kCorrected ? d - 1 : d - 2;
  return 1.0 / (k * wallis_complete(d - 2));
}

MarginalMean cell_marginal_mean_mat(const HalfspaceCell& cell,
                                    std::size_t n_samples, std::uint64_t seed,
                                    MatPrefactor variant) {
  const int d = cell.dim();
  if (d < 3) throw Error(ErrorKind::kDimension, "MAT requires d >= 3");
  if (n_samples == 0) throw Error(ErrorKind::kDomain, "n_samples must be >= 1");
  const Eigen::MatrixXd& H = cell.normals();

  // e1 must be a vertex: it lies on facets 2..d and inside facet 1.
  constexpr double kVertexTol = 1e-9;
  if (!(H(0, 0) > kVertexTol)) {
    throw Error(ErrorKind::kDomain, "e1 is not on the inner side of facet 1");
  }
  for (int i = 1; i < d; ++i) {
    if (std::abs(H(i, 0)) > kVertexTol) {
      throw Error(ErrorKind::kDomain, "e1 is not a vertex of the cell");
    }
  }
  // Row 1 scaled so that H_11 = 1; the facet opposite e1 is then
  // cos(phi) + (theta . h) sin(phi) = 0.
  const Eigen::VectorXd h = H.row(0).tail(d - 1).transpose() / H(0, 0);
  const Eigen::MatrixXd reduced = H.bottomRightCorner(d - 1, d - 1);
  const double exponent = 0.5 * (1.0 - d);

  const McEstimate est = monte_carlo(seed, n_samples, [&](Engine& rng) {
    const Eigen::VectorXd theta = sample_uniform_sphere(rng, d - 1);
    if (((reduced * theta).array() < 0.0).any()) return 0.0;
    const double t = theta.dot(h);
    return std::pow(1.0 + t * t, exponent);
  });

  const double acceptance =
      static_cast<double>(est.nonzero) / static_cast<double>(est.samples);
  if (est.nonzero == 0 || acceptance < 1e-6) {
    throw Error(ErrorKind::kSampling,
                "rejection acceptance rate " + std::to_string(acceptance) +
                    " too low; cell too thin for naive sampling");
  }
  const double c = mat_prefactor(d, variant);
  return {c * est.mean, c * est.std_error, "path_simplex_mat"};
}

PrefactorCheck check_mat_prefactor(MatPrefactor variant) {
  const HalfspaceCell octant(Eigen::MatrixXd::Identity(3, 3));
  const MarginalMean m = cell_marginal_mean_mat(octant, 200000, 0x5eed, variant);
  const double expected = right_triangle_marginal_mean(kHalfPi, kHalfPi).value;
  PrefactorCheck check;
  check.estimate = m.value;
  check.std_error = m.std_error;
  check.expected = expected;
  check.passed = std::abs(m.value - expected) <= 5.0 * m.std_error + 1e-12;
  return check;
}

void ensure_mat_prefactor_verified() {
  static std::once_flag once;
  static bool ok = false;
  std::call_once(once, [] { ok = check_mat_prefactor().passed; });
  if (!ok) {
    throw Error(ErrorKind::kSampling,
                "MAT prefactor self-test disagrees with the right-triangle "
                "closed form");
  }
}

}  // namespace mwk
