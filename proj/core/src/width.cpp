#include "mwk/width.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mwk/config.hpp"
#include "mwk/error.hpp"
#include "mwk/measures.hpp"
#include "mwk/monte_carlo.hpp"
#include "width_internal.hpp"

namespace mwk {

double support_function(const InscribedSimplex& S, const UnitVector& u) {
  if (u.dim() != S.dim()) {
    throw Error(ErrorKind::kDimension, "support direction has the wrong dimension");
  }
  return (S.matrix().transpose() * u.coords()).maxCoeff();
}

double support_function(std::span<const Eigen::VectorXd> points,
                        const Eigen::VectorXd& u) {
  if (points.empty()) throw Error(ErrorKind::kDomain, "no points");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    if (p.size() != u.size()) {
      throw Error(ErrorKind::kDimension, "support direction has the wrong dimension");
    }
    best = std::max(best, p.dot(u));
  }
  return best;
}

const char* to_string(WidthMethod m) {
  switch (m) {
    case WidthMethod::kExact3d: return "exact3d";
    case WidthMethod::kMonteCarlo: return "monte_carlo";
    case WidthMethod::kMatQuadrature: return "mat_quadrature";
  }
  return "?";
}

std::optional<WidthMethod> parse_width_method(const std::string& name) {
  if (name == "exact3d") return WidthMethod::kExact3d;
  if (name == "mc" || name == "monte_carlo") return WidthMethod::kMonteCarlo;
  if (name == "mat" || name == "mat_quadrature") return WidthMethod::kMatQuadrature;
  return std::nullopt;
}

namespace {

WidthEstimate mc_over_columns(const Eigen::MatrixXd& V, std::size_t n,
                              std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::kDomain, "n must be >= 1");
  const int d = static_cast<int>(V.rows());
  const McEstimate est = monte_carlo(seed, n, [&](Engine& rng) {
    return (V.transpose() * sample_uniform_sphere(rng, d)).maxCoeff();
  });
  // A single sample says nothing about spread; report the full range.
  const double se = n == 1 ? 2.0 : 2.0 * est.std_error;
  return {2.0 * est.mean, se, WidthMethod::kMonteCarlo};
}

}  // namespace

WidthEstimate mean_width_mc(const InscribedSimplex& S, std::size_t n,
                            std::uint64_t seed) {
  return mc_over_columns(S.matrix(), n, seed);
}

WidthEstimate mean_width_mc(std::span<const Eigen::VectorXd> points,
                            std::size_t n, std::uint64_t seed) {
  if (points.empty()) throw Error(ErrorKind::kDomain, "no points");
  Eigen::MatrixXd V(points.front().size(), static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != V.rows()) {
      throw Error(ErrorKind::kDimension, "points differ in dimension");
    }
    V.col(static_cast<Eigen::Index>(i)) = points[i];
  }
  return mc_over_columns(V, n, seed);
}

namespace detail {

double exact3d_columns(const Eigen::MatrixXd& V) {
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector3d vi = V.col(i);
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      const Eigen::Vector3d vj = V.col(j);
      const Eigen::Vector3d pij = (vi + vj).normalized();
      for (int k = 0; k < 4; ++k) {
        if (k == i || k == j) continue;
        const Eigen::Vector3d vk = V.col(k);
        Eigen::Vector3d n = (vj - vi).cross(vk - vi).normalized();
        const double lift = n.dot(vi);
        const double side = (vi - vk).dot(pij);
        if (std::abs(lift) < kGeneralPositionTol ||
            std::abs(side) < kGeneralPositionTol) {
          throw Error(ErrorKind::kGeneralPosition,
                      "right-triangle complex is degenerate at vertex " +
                          std::to_string(i) + "; retry with --jiggle");
        }
        if (lift < 0) n = -n;
        const double a = std::acos(std::clamp(pij.dot(n), -1.0, 1.0));
        const double b = std::acos(std::clamp(vi.dot(pij), -1.0, 1.0));
        sum += (side > 0 ? 1.0 : -1.0) * a * std::sin(b);
      }
    }
  }
  return sum / (4.0 * kPi);
}

bool origin_strictly_inside(const Eigen::MatrixXd& V) {
  const Eigen::Index d = V.rows();
  Eigen::MatrixXd system(d + 1, d + 1);
  system.topRows(d) = V;
  system.row(d).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d + 1);
  rhs[d] = 1.0;
  const Eigen::VectorXd bary = system.fullPivLu().solve(rhs);
  return (bary.array() > 0.0).all();
}

}  // namespace detail

WidthEstimate mean_width_exact3d(const InscribedSimplex& S) {
  if (S.dim() != 3) {
    throw Error(ErrorKind::kDimension,
                "exact3d needs d = 3, got d = " + std::to_string(S.dim()));
  }
  if (!S.contains_origin()) {
    throw Error(ErrorKind::kInfeasible,
                "origin is not inside the simplex; the hemispheres do not cover S^2");
  }
  return {detail::exact3d_columns(S.matrix()), 0.0, WidthMethod::kExact3d};
}

namespace {

// Reflection taking v to e1.
Eigen::MatrixXd householder_to_e1(const Eigen::VectorXd& v) {
  const Eigen::Index d = v.size();
  Eigen::VectorXd u = v;
  u[0] -= 1.0;
  const double nn = u.squaredNorm();
  Eigen::MatrixXd R = Eigen::MatrixXd::Identity(d, d);
  if (nn > 1e-30) R -= 2.0 * u * u.transpose() / nn;
  return R;
}

std::string chain_label(const Chain& c) {
  std::string s = "(";
  for (std::size_t k = 0; k < c.order.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(c.order[k]);
  }
  return s + ")";
}

}  // namespace

WidthEstimate mean_width_mat(const InscribedSimplex& S, std::size_t n,
                             std::uint64_t seed) {
  const int d = S.dim();
  if (d < 3) throw Error(ErrorKind::kDimension, "MAT quadrature needs d >= 3");
  ensure_mat_prefactor_verified();

  double sum = 0.0, var = 0.0;
  std::uint64_t stream = 0;
  for (const Chain& chain : all_maximal_chains(d)) {
    const SignedPathSimplex P = path_simplex_from_chain(S, chain);
    const Eigen::MatrixXd R = householder_to_e1(P.path.front().coords());
    Eigen::MatrixXd V = R * P.vertex_matrix();
    V.col(0) = Eigen::VectorXd::Unit(d, 0);
    try {
      const HalfspaceCell cell = HalfspaceCell::from_vertices(V);
      const MarginalMean m = cell_marginal_mean_mat(
          cell, n, seed + 0x9e3779b97f4a7c15ull * ++stream);
      sum += P.sign * m.value;
      var += m.std_error * m.std_error;
    } catch (const Error& e) {
      throw Error(e.kind(), "path simplex " + chain_label(chain) + " of cell " +
                                std::to_string(chain.order.front()) + ": " +
                                e.what());
    }
  }
  return {2.0 * sum, 2.0 * std::sqrt(var), WidthMethod::kMatQuadrature};
}

InscribedSimplex regular_simplex(int d) {
  if (d < 2) throw Error(ErrorKind::kDimension, "regular_simplex needs d >= 2");
  const int n = d + 1;
  const Eigen::MatrixXd centered =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  // The first d columns of Q span the hyperplane orthogonal to (1, ..., 1).
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(centered)
                                .householderQ() *
                            Eigen::MatrixXd::Identity(n, d);
  std::vector<UnitVector> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) {
    v.push_back(UnitVector::normalized(Q.transpose() * centered.col(i)));
  }
  return InscribedSimplex(std::move(v));
}

double regular_tetrahedron_width() {
  return 6.0 / kPi * std::acos(1.0 / std::sqrt(3.0)) * std::sqrt(2.0 / 3.0);
}

double regularity_metric(const InscribedSimplex& S) {
  const double target = -1.0 / S.dim();
  double worst = 0.0;
  for (int i = 0; i < S.size(); ++i) {
    for (int j = i + 1; j < S.size(); ++j) {
      worst = std::max(worst, std::abs(S.vertex(i).dot(S.vertex(j)) - target));
    }
  }
  return worst;
}

InscribedSimplex random_feasible_simplex(int d, std::uint64_t seed,
                                         double margin) {
  if (d < 2) throw Error(ErrorKind::kDimension, "d must be >= 2");
  Engine rng = partition_engine(seed, 0x726e64u);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::vector<UnitVector> v;
    for (int i = 0; i <= d; ++i) {
      v.push_back(UnitVector::normalized(sample_uniform_sphere(rng, d)));
    }
    try {
      InscribedSimplex S(std::move(v));
      if (S.contains_origin(margin)) return S;
    } catch (const Error&) {
      // degenerate draw
    }
  }
  throw Error(ErrorKind::kSampling, "no feasible simplex found");
}

}  // namespace mwk
