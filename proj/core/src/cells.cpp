#include "mwk/cells.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "mwk/config.hpp"
#include "mwk/error.hpp"
#include "mwk/monte_carlo.hpp"

namespace mwk {

InscribedSimplex::InscribedSimplex(std::vector<UnitVector> vertices)
    : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) {
    throw Error(ErrorKind::kDimension, "an inscribed simplex needs d+1 >= 3 vertices");
  }
  const int d = vertices_.front().dim();
  for (const auto& v : vertices_) {
    if (v.dim() != d) {
      throw Error(ErrorKind::kDimension, "simplex vertices differ in dimension");
    }
  }
  if (static_cast<int>(vertices_.size()) != d + 1) {
    throw Error(ErrorKind::kDimension,
                "a simplex in S^" + std::to_string(d - 1) + " needs " +
                    std::to_string(d + 1) + " vertices");
  }
  Eigen::MatrixXd diffs(d, d);
  for (int i = 1; i <= d; ++i) {
    diffs.col(i - 1) = vertices_[i].coords() - vertices_[0].coords();
  }
  if (!(std::abs(diffs.determinant()) > kAffineDetTol)) {
    throw Error(ErrorKind::kDegenerate, "simplex vertices are affinely dependent");
  }
}

Eigen::MatrixXd InscribedSimplex::matrix() const {
  Eigen::MatrixXd m(dim(), size());
  for (int i = 0; i < size(); ++i) m.col(i) = vertices_[i].coords();
  return m;
}

Eigen::VectorXd InscribedSimplex::origin_barycentric() const {
  const int d = dim();
  Eigen::MatrixXd system(d + 1, d + 1);
  system.topRows(d) = matrix();
  system.row(d).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d + 1);
  rhs[d] = 1.0;
  return system.fullPivLu().solve(rhs);
}

bool InscribedSimplex::contains_origin(double tol) const {
  return (origin_barycentric().array() > tol).all();
}

InscribedSimplex make_simplex(std::span<const Eigen::VectorXd> points) {
  std::vector<UnitVector> v;
  v.reserve(points.size());
  for (const auto& p : points) v.emplace_back(p);
  return InscribedSimplex(std::move(v));
}

std::vector<VoronoiCell> voronoi_cells(const InscribedSimplex& S) {
  const int d = S.dim();
  std::vector<VoronoiCell> cells;
  cells.reserve(S.size());
  for (int i = 0; i < S.size(); ++i) {
    Eigen::MatrixXd H(d, d);
    int row = 0;
    for (int j = 0; j < S.size(); ++j) {
      if (j == i) continue;
      Eigen::VectorXd diff = S.vertex(i).coords() - S.vertex(j).coords();
      const double n = diff.norm();
      if (n < kDegeneracyEps) {
        throw Error(ErrorKind::kDegenerate, "coincident simplex vertices");
      }
      H.row(row++) = diff.transpose() / n;
    }
    cells.push_back(VoronoiCell{i, HalfspaceCell(std::move(H))});
  }
  return cells;
}

int owning_cell(const InscribedSimplex& S, const Eigen::VectorXd& u) {
  Eigen::Index best = 0;
  (S.matrix().transpose() * u).maxCoeff(&best);
  return static_cast<int>(best);
}

namespace {

void validate_subset(const InscribedSimplex& S, const VertexSubset& subset) {
  if (subset.empty() || static_cast<int>(subset.size()) > S.dim()) {
    throw Error(ErrorKind::kDomain, "subset size must lie in [1, d]");
  }
  std::vector<int> sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() ||
      sorted.front() < 0 || sorted.back() >= S.size()) {
    throw Error(ErrorKind::kDomain, "subset indices must be distinct vertex indices");
  }
}

// Orthonormal basis (columns) of span{columns of M}.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& M) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  return qr.householderQ() * Eigen::MatrixXd::Identity(M.rows(), M.cols());
}

UnitVector equidistant_point_unchecked(const InscribedSimplex& S,
                                       const VertexSubset& subset) {
  const Eigen::VectorXd& v0 = S.vertex(subset.front()).coords();
  if (subset.size() == 1) return S.vertex(subset.front());
  Eigen::MatrixXd diffs(S.dim(), static_cast<Eigen::Index>(subset.size() - 1));
  for (std::size_t k = 1; k < subset.size(); ++k) {
    diffs.col(static_cast<Eigen::Index>(k - 1)) = S.vertex(subset[k]).coords() - v0;
  }
  const Eigen::MatrixXd Q = orthonormal_basis(diffs);
  const Eigen::VectorXd p = v0 - Q * (Q.transpose() * v0);
  if (p.norm() < kDegeneracyEps) {
    throw Error(ErrorKind::kGeneralPosition,
                "equidistance subspace is orthogonal to the subset's vertices");
  }
  return UnitVector::normalized(p);
}

// Equidistant points keyed by subset bitmask.
class FaceCache {
 public:
  explicit FaceCache(const InscribedSimplex& S) : S_(S) {}

  const UnitVector& point(const VertexSubset& subset) {
    unsigned mask = 0;
    for (int i : subset) mask |= 1u << i;
    auto it = points_.find(mask);
    if (it == points_.end()) {
      VertexSubset sorted = subset;
      std::sort(sorted.begin(), sorted.end());
      it = points_.emplace(mask, equidistant_point_unchecked(S_, sorted)).first;
    }
    return it->second;
  }

 private:
  const InscribedSimplex& S_;
  std::unordered_map<unsigned, UnitVector> points_;
};

VertexSubset all_but(int n, int m) {
  VertexSubset s;
  for (int i = 0; i < n; ++i) {
    if (i != m) s.push_back(i);
  }
  return s;
}

void validate_chain(const InscribedSimplex& S, const Chain& chain) {
  if (static_cast<int>(chain.order.size()) != S.dim()) {
    throw Error(ErrorKind::kDomain, "a maximal chain has d levels");
  }
  std::vector<int> sorted = chain.order;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() ||
      sorted.front() < 0 || sorted.back() >= S.size()) {
    throw Error(ErrorKind::kDomain, "chain must add distinct vertex indices");
  }
}

int det_sign(const Eigen::MatrixXd& M, const char* what) {
  const double det = M.determinant();
  if (std::abs(det) < kGeneralPositionTol) {
    throw Error(ErrorKind::kGeneralPosition, std::string(what) + " is singular");
  }
  return det > 0 ? 1 : -1;
}

SignedPathSimplex chain_simplex(const InscribedSimplex& S, const Chain& chain,
                                FaceCache& cache) {
  const int d = S.dim();
  SignedPathSimplex P;
  P.path.reserve(d);
  for (int k = 1; k <= d; ++k) P.path.push_back(cache.point(chain.level(k)));

  Eigen::MatrixXd U(d, d);
  for (int k = 1; k < d; ++k) {
    U.col(k - 1) = cache.point(all_but(S.size(), chain.order[k])).coords();
  }
  U.col(d - 1) = cache.point(all_but(S.size(), chain.omitted(S.size()))).coords();

  P.sign = det_sign(P.vertex_matrix(), "path vertex matrix") *
           det_sign(U, "cell vertex matrix");
  P.chain = chain;
  return P;
}

}  // namespace

UnitVector equidistant_point(const InscribedSimplex& S,
                             const VertexSubset& subset) {
  validate_subset(S, subset);
  return equidistant_point_unchecked(S, subset);
}

SubsetFace subset_face(const InscribedSimplex& S, const VertexSubset& subset) {
  VertexSubset sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  return SubsetFace{sorted, equidistant_point(S, sorted)};
}

std::vector<UnitVector> cell_vertices(const InscribedSimplex& S, int owner) {
  if (owner < 0 || owner >= S.size()) {
    throw Error(ErrorKind::kDomain, "cell owner out of range");
  }
  std::vector<UnitVector> out;
  for (int m = 0; m < S.size(); ++m) {
    if (m != owner) out.push_back(equidistant_point(S, all_but(S.size(), m)));
  }
  return out;
}

VertexSubset Chain::level(int k) const {
  VertexSubset s(order.begin(), order.begin() + k);
  std::sort(s.begin(), s.end());
  return s;
}

int Chain::omitted(int n_vertices) const {
  std::vector<bool> used(n_vertices, false);
  for (int i : order) used.at(i) = true;
  for (int i = 0; i < n_vertices; ++i) {
    if (!used[i]) return i;
  }
  return -1;
}

std::vector<Chain> all_maximal_chains(int d) {
  if (d < 2) throw Error(ErrorKind::kDimension, "chains need d >= 2");
  std::vector<int> perm(d + 1);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Chain> chains;
  do {
    chains.push_back(Chain{std::vector<int>(perm.begin(), perm.begin() + d)});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return chains;
}

Eigen::MatrixXd SignedPathSimplex::vertex_matrix() const {
  Eigen::MatrixXd m(dim(), static_cast<Eigen::Index>(path.size()));
  for (std::size_t k = 0; k < path.size(); ++k) {
    m.col(static_cast<Eigen::Index>(k)) = path[k].coords();
  }
  return m;
}

double SignedPathSimplex::orthogonality_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Eigen::VectorXd& a = path[i].coords();
    const Eigen::VectorXd& b = path[i + 1].coords();
    const Eigen::VectorXd t = a - a.dot(b) * b;
    for (std::size_t k = i + 1; k < path.size(); ++k) {
      worst = std::max(worst, std::abs(t.dot(path[k].coords())));
    }
  }
  return worst;
}

SignedPathSimplex path_simplex_from_chain(const InscribedSimplex& S,
                                          const Chain& chain) {
  validate_chain(S, chain);
  FaceCache cache(S);
  return chain_simplex(S, chain, cache);
}

namespace {

struct Piece {
  std::vector<Eigen::VectorXd> path;
  int sign;
};

std::vector<Piece> decompose_face(const std::vector<Eigen::VectorXd>& face,
                                  const Eigen::VectorXd& O) {
  const std::size_t k = face.size();
  if (k == 1) return {Piece{{face.front()}, 1}};

  std::vector<Piece> out;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<Eigen::VectorXd> facet;
    facet.reserve(k - 1);
    for (std::size_t i = 0; i < k; ++i) {
      if (i != j) facet.push_back(face[i]);
    }
    Eigen::MatrixXd F(O.size(), static_cast<Eigen::Index>(k - 1));
    for (std::size_t i = 0; i + 1 < k; ++i) F.col(static_cast<Eigen::Index>(i)) = facet[i];
    const Eigen::MatrixXd Q = orthonormal_basis(F);

    // Side of span(facet), within span(face), for O versus the opposite vertex.
    Eigen::VectorXd normal = face[j] - Q * (Q.transpose() * face[j]);
    normal.normalize();
    const double side = O.dot(normal);
    if (std::abs(side) < kGeneralPositionTol) {
      throw Error(ErrorKind::kGeneralPosition,
                  "altitude foot lies on a facet boundary");
    }
    const int s = side > 0 ? 1 : -1;

    const Eigen::VectorXd foot = (Q * (Q.transpose() * O)).normalized();
    for (Piece& sub : decompose_face(facet, foot)) {
      sub.path.insert(sub.path.begin(), O);
      sub.sign *= s;
      out.push_back(std::move(sub));
    }
  }
  return out;
}

}  // namespace

std::vector<SignedPathSimplex> decompose_simplex(
    const std::vector<UnitVector>& vertices, const UnitVector& O) {
  const int d = O.dim();
  if (static_cast<int>(vertices.size()) != d) {
    throw Error(ErrorKind::kDimension,
                "a spherical simplex in S^{d-1} has d vertices");
  }
  Eigen::MatrixXd T(d, d);
  std::vector<Eigen::VectorXd> face;
  for (int i = 0; i < d; ++i) {
    require_same_dim(vertices[i], O);
    T.col(i) = vertices[i].coords();
    face.push_back(vertices[i].coords());
    if (!(O.dot(vertices[i]) > kGeneralPositionTol)) {
      throw Error(ErrorKind::kDomain,
                  "O must lie within pi/2 of every vertex of the simplex");
    }
  }
  if (std::abs(T.determinant()) < kDegeneracyEps) {
    throw Error(ErrorKind::kDegenerate, "simplex vertices are linearly dependent");
  }

  std::vector<SignedPathSimplex> out;
  for (Piece& piece : decompose_face(face, O.coords())) {
    SignedPathSimplex P;
    P.sign = piece.sign;
    for (auto& v : piece.path) P.path.push_back(UnitVector::normalized(v));
    out.push_back(std::move(P));
  }
  return out;
}

double GramMatrix::max_off_band() const {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < G.rows(); ++i) {
    for (Eigen::Index j = 0; j < G.cols(); ++j) {
      if (std::abs(i - j) > 1) worst = std::max(worst, std::abs(G(i, j)));
    }
  }
  return worst;
}

GramMatrix gram_matrix(const SignedPathSimplex& P) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(P.vertex_matrix());
  if (!lu.isInvertible() || std::abs(lu.determinant()) < kDegeneracyEps) {
    throw Error(ErrorKind::kDegenerate, "path vertex matrix is singular");
  }
  Eigen::MatrixXd N = lu.inverse();
  for (Eigen::Index i = 0; i < N.rows(); ++i) N.row(i).normalize();
  return GramMatrix{N * N.transpose()};
}

std::vector<double> adjacent_dihedral_angles(const GramMatrix& G) {
  std::vector<double> angles;
  for (Eigen::Index i = 0; i + 1 < G.G.rows(); ++i) {
    angles.push_back(std::acos(std::clamp(-G.G(i, i + 1), -1.0, 1.0)));
  }
  return angles;
}

std::vector<double> adjacent_dihedral_angles(const SignedPathSimplex& P) {
  return adjacent_dihedral_angles(gram_matrix(P));
}

AngleSumReport chain_angle_sums(const InscribedSimplex& S) {
  const int d = S.dim();
  AngleSumReport report;
  report.signed_sums.assign(d - 1, 0.0);
  report.unsigned_sums.assign(d - 1, 0.0);
  FaceCache cache(S);
  for (const Chain& chain : all_maximal_chains(d)) {
    const SignedPathSimplex P = chain_simplex(S, chain, cache);
    const GramMatrix G = gram_matrix(P);
    const auto theta = adjacent_dihedral_angles(G);
    for (int i = 0; i < d - 1; ++i) {
      report.signed_sums[i] += P.sign * theta[i];
      report.unsigned_sums[i] += theta[i];
    }
    report.max_off_band = std::max(report.max_off_band, G.max_off_band());
    ++report.simplex_count;
    if (P.sign < 0) ++report.negative_count;
  }
  report.expected = 2.0 * kPi * report.simplex_count / 6.0;
  return report;
}

std::vector<std::string> ComplexAudit::failures() const {
  std::vector<std::string> out;
  if (!per_vertex_ok) out.emplace_back("per_vertex_angle_sum");
  if (!total_ok) out.emplace_back("total_vertex_angle_sum");
  if (!far_angle_ok) out.emplace_back("far_angle_sum");
  if (!max_angle_ok) out.emplace_back("max_angle");
  return out;
}

RightTriangleComplex right_triangle_complex(const InscribedSimplex& S,
                                            double tol) {
  if (S.dim() != 3) {
    throw Error(ErrorKind::kDimension, "the right-triangle complex needs d = 3");
  }
  RightTriangleComplex cx;
  ComplexAudit& audit = cx.audit;
  audit.vertex_angle_sums.assign(S.size(), 0.0);

  FaceCache cache(S);
  for (const Chain& chain : all_maximal_chains(3)) {
    ComplexTriangle t;
    t.simplex = chain_simplex(S, chain, cache);
    const GramMatrix G = gram_matrix(t.simplex);
    // Facets are indexed by the opposite path vertex: theta_12 sits at p_3,
    // theta_23 at p_1, and the (1,3) angle at p_2 is the right angle.
    const auto theta = adjacent_dihedral_angles(G);
    t.far_angle = theta[0];
    t.vertex_angle = theta[1];
    t.right_angle = std::acos(std::clamp(-G.G(0, 2), -1.0, 1.0));
    const auto& p = t.simplex.path;
    t.leg_adjacent = arc_length(p[0], p[1]);
    t.leg_opposite = arc_length(p[1], p[2]);

    const int s = t.simplex.sign;
    audit.vertex_angle_sums[chain.order[0]] += s * t.vertex_angle;
    audit.far_angle_signed_sum += s * t.far_angle;
    if (s < 0) ++audit.negative_count;
    audit.max_angle = std::max({audit.max_angle, t.vertex_angle, t.far_angle});
    audit.max_leg = std::max({audit.max_leg, t.leg_adjacent, t.leg_opposite});
    audit.max_right_angle_defect =
        std::max(audit.max_right_angle_defect, std::abs(t.right_angle - kHalfPi));
    cx.triangles.push_back(std::move(t));
  }

  for (int i = 0; i < S.size(); ++i) {
    const auto u = cell_vertices(S, i);
    audit.cell_area_sum += spherical_triangle_area(u[0], u[1], u[2]);
    audit.total_vertex_angle_sum += audit.vertex_angle_sums[i];
  }
  audit.far_angle_corrected_sum =
      audit.far_angle_signed_sum + kPi * audit.negative_count;
  audit.hemisphere_cover = S.contains_origin();

  audit.per_vertex_ok = std::all_of(
      audit.vertex_angle_sums.begin(), audit.vertex_angle_sums.end(),
      [&](double s) { return std::abs(s - 2.0 * kPi) <= tol; });
  audit.total_ok = std::abs(audit.total_vertex_angle_sum - 8.0 * kPi) <= tol;
  audit.far_angle_ok =
      std::abs(audit.cell_area_sum - 4.0 * kPi) <= tol &&
      std::abs(audit.far_angle_corrected_sum - (4.0 * kPi + audit.cell_area_sum)) <= tol;
  audit.max_angle_ok = audit.hemisphere_cover &&
                       audit.max_angle <= kHalfPi + tol &&
                       audit.max_leg <= kHalfPi + tol;
  return cx;
}

FeasibilityReport feasibility_checks(std::span<const Eigen::VectorXd> points,
                                     std::uint64_t seed, std::size_t n_samples,
                                     double tol) {
  FeasibilityReport r;
  if (points.empty()) return r;
  const Eigen::Index d = points.front().size();
  for (const auto& p : points) {
    if (p.size() != d) {
      throw Error(ErrorKind::kDimension, "points differ in dimension");
    }
  }
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());

  r.on_sphere = std::all_of(points.begin(), points.end(), [&](const auto& p) {
    return std::abs(p.norm() - 1.0) <= tol;
  });

  if (n == d + 1) {
    Eigen::MatrixXd system(d + 1, d + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      system.block(0, i, d, 1) = points[i];
      system(d, i) = 1.0;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (lu.isInvertible()) {
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d + 1);
      rhs[d] = 1.0;
      r.barycentric = lu.solve(rhs);
      r.origin_in_hull = (r.barycentric.array() >= -tol).all();
    }
  }

  Eigen::MatrixXd dirs(d, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = points[i].norm();
    dirs.col(i) = norm > 0 ? Eigen::VectorXd(points[i] / norm) : points[i];
  }
  const McEstimate sampled = monte_carlo(seed, n_samples, [&](Engine& rng) {
    const Eigen::VectorXd u = sample_uniform_sphere(rng, static_cast<int>(d));
    return (dirs.transpose() * u).maxCoeff() < -tol ? 1.0 : 0.0;
  });
  r.hemisphere_cover = sampled.nonzero == 0;

  r.min_support = std::numeric_limits<double>::infinity();
  if (n == d + 1) {
    try {
      std::vector<UnitVector> unit;
      for (Eigen::Index i = 0; i < n; ++i) unit.push_back(UnitVector::normalized(dirs.col(i)));
      const InscribedSimplex S(std::move(unit));
      for (int m = 0; m < S.size(); ++m) {
        const UnitVector p = equidistant_point(S, all_but(S.size(), m));
        r.min_support = std::min(r.min_support, (dirs.transpose() * p.coords()).maxCoeff());
      }
      if (r.min_support < -tol) r.hemisphere_cover = false;
    } catch (const Error&) {
      // dependent directions: the sampled verdict stands
    }
  }
  return r;
}

std::vector<Eigen::VectorXd> jiggle(std::span<const Eigen::VectorXd> points,
                                    std::uint64_t seed, double magnitude) {
  Engine rng = partition_engine(seed, 0x6a6967u);
  std::vector<Eigen::VectorXd> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const double norm = p.norm();
    if (norm == 0.0) {
      out.push_back(p);
      continue;
    }
    const Eigen::VectorXd x = p / norm;
    Eigen::VectorXd t;
    do {
      t = sample_uniform_sphere(rng, static_cast<int>(p.size()));
      t -= t.dot(x) * x;
    } while (t.norm() < 1e-6);
    t.normalize();
    out.push_back(norm * (std::cos(magnitude) * x + std::sin(magnitude) * t));
  }
  return out;
}

}  // namespace mwk
