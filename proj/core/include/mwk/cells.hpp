#pragma once

// Spherical Voronoi cells of an inscribed simplex, the subset lattice of their
// faces, and signed path-simplex (orthoscheme) decompositions.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mwk/measures.hpp"
#include "mwk/sphere.hpp"

namespace mwk {

/// d+1 affinely independent unit vectors in S^{d-1}.
class InscribedSimplex {
 public:
  explicit InscribedSimplex(std::vector<UnitVector> vertices);

  int dim() const { return vertices_.front().dim(); }
  int size() const { return static_cast<int>(vertices_.size()); }
  const UnitVector& vertex(int i) const { return vertices_.at(i); }
  const std::vector<UnitVector>& vertices() const { return vertices_; }

  /// d x (d+1) matrix with the vertices as columns.
  Eigen::MatrixXd matrix() const;

  /// Barycentric coordinates of the origin (sum to 1).
  Eigen::VectorXd origin_barycentric() const;
  /// True when the origin is strictly inside the convex hull; for points on
  /// the sphere this is equivalent to the closed hemispheres covering it.
  bool contains_origin(double tol = 0.0) const;

 private:
  std::vector<UnitVector> vertices_;
};

InscribedSimplex make_simplex(std::span<const Eigen::VectorXd> points);

using VertexSubset = std::vector<int>;

struct VoronoiCell {
  int owner = 0;
  HalfspaceCell cell;  // rows (v_owner - v_j)/|v_owner - v_j|, j != owner
};

std::vector<VoronoiCell> voronoi_cells(const InscribedSimplex& S);

/// Index of the cell containing u (argmax of u.v_i, lowest index on ties).
int owning_cell(const InscribedSimplex& S, const Eigen::VectorXd& u);

struct SubsetFace {
  VertexSubset subset;
  UnitVector point;
};

/// The unit vector of the equidistance subspace of `subset` nearest to its
/// vertices: a member vertex projected off all differences v_i - v_j.
UnitVector equidistant_point(const InscribedSimplex& S,
                             const VertexSubset& subset);

SubsetFace subset_face(const InscribedSimplex& S, const VertexSubset& subset);

/// Vertices of cell `owner`, i.e. p(V \ {m}) for m != owner in increasing m.
std::vector<UnitVector> cell_vertices(const InscribedSimplex& S, int owner);

/// Maximal chain {i1} < {i1,i2} < ... < {i1..id}, stored as the insertion
/// order (i1, ..., id).
struct Chain {
  std::vector<int> order;

  VertexSubset level(int k) const;  // first k indices, sorted
  int omitted(int n_vertices) const;  // the one index never added
};

/// All (d+1)! maximal chains over d+1 vertices.
std::vector<Chain> all_maximal_chains(int d);

struct SignedPathSimplex {
  std::vector<UnitVector> path;  // p_1, ..., p_d in path order
  int sign = 1;
  std::optional<Chain> chain;

  int dim() const { return path.front().dim(); }
  Eigen::MatrixXd vertex_matrix() const;
  /// Max |t_i . p_k| over consecutive-edge tangents t_i and k > i.
  double orthogonality_defect() const;
};

/// Path simplex S_tau of the Voronoi complex. The sign compares the
/// orientation of [p_1..p_d] with that of the owner cell's vertices ordered
/// by the chain (u_{i2}, ..., u_{id}, u_omitted).
SignedPathSimplex path_simplex_from_chain(const InscribedSimplex& S,
                                          const Chain& chain);

/// Decomposes the spherical simplex spanned by `vertices` (d of them in
/// S^{d-1}) into d! signed path simplices with end vertex O, by recursive
/// altitude dropping. O must lie within pi/2 of every vertex; this condition
/// is inherited by each foot and makes the signed identity exact.
std::vector<SignedPathSimplex> decompose_simplex(
    const std::vector<UnitVector>& vertices, const UnitVector& O);

struct GramMatrix {
  Eigen::MatrixXd G;

  /// Largest |G_ij| with |i - j| > 1.
  double max_off_band() const;
};

/// Angle Gram matrix of unit inward facet normals (rows of P^{-1}, scaled).
GramMatrix gram_matrix(const SignedPathSimplex& P);

/// theta_{i,i+1} = arccos(-G_{i,i+1}), consecutive facets in path order.
std::vector<double> adjacent_dihedral_angles(const SignedPathSimplex& P);
std::vector<double> adjacent_dihedral_angles(const GramMatrix& G);

/// Per-level signed sums of theta_{i,i+1} over every chain simplex.
struct AngleSumReport {
  std::vector<double> signed_sums;    // index i -> sum of sign * theta_{i,i+1}
  std::vector<double> unsigned_sums;
  double expected = 0.0;              // 2 pi (d+1)! / 6
  int simplex_count = 0;
  int negative_count = 0;
  double max_off_band = 0.0;
  bool well_centered() const { return negative_count == 0; }
};

AngleSumReport chain_angle_sums(const InscribedSimplex& S);

struct ComplexTriangle {
  SignedPathSimplex simplex;  // (v_i, p_ij, p_ijk), right angle at p_ij
  double vertex_angle = 0.0;  // at v_i
  double far_angle = 0.0;     // at the cell vertex p_ijk
  double right_angle = 0.0;   // at p_ij, from the Gram matrix
  double leg_opposite = 0.0;  // arc p_ij p_ijk
  double leg_adjacent = 0.0;  // arc v_i p_ij
};

/// Bookkeeping of the 24-right-triangle complex of a tetrahedron.
///   (i)   signed angle sum at each v_i is 2 pi
///   (ii)  total signed vertex-angle sum is 8 pi
///   (iii) signed far-angle sum + pi * (#negative triangles) equals the sum
///         of the cells' interior angles, 4 pi + sum of cell areas (= 8 pi);
///         the plain signed sum reaches 8 pi only when no sign is negative
///   (iv)  with the hemisphere cover, no angle or leg exceeds pi/2
struct ComplexAudit {
  std::vector<double> vertex_angle_sums;
  double total_vertex_angle_sum = 0.0;
  double far_angle_signed_sum = 0.0;
  double far_angle_corrected_sum = 0.0;
  double cell_area_sum = 0.0;
  int negative_count = 0;
  double max_angle = 0.0;
  double max_leg = 0.0;
  double max_right_angle_defect = 0.0;
  bool hemisphere_cover = false;

  bool per_vertex_ok = false;
  bool total_ok = false;
  bool far_angle_ok = false;
  bool max_angle_ok = false;

  bool passed() const {
    return per_vertex_ok && total_ok && far_angle_ok && max_angle_ok;
  }
  std::vector<std::string> failures() const;
};

struct RightTriangleComplex {
  std::vector<ComplexTriangle> triangles;
  ComplexAudit audit;
};

RightTriangleComplex right_triangle_complex(const InscribedSimplex& S,
                                            double tol = 1e-9);

struct FeasibilityReport {
  bool origin_in_hull = false;      // (a)
  bool on_sphere = false;           // (b)
  bool hemisphere_cover = false;    // (c)
  Eigen::VectorXd barycentric;      // empty if the points are dependent
  double min_support = 0.0;  // min over cell vertices p of max_i p.v_i

  bool all() const { return origin_in_hull && on_sphere && hemisphere_cover; }
};

/// Necessary conditions for a maximizer, on arbitrary (possibly non-unit)
/// points: origin in hull, vertices on the sphere, hemispheres covering S,
/// the last checked on n_samples random directions and every cell vertex.
FeasibilityReport feasibility_checks(std::span<const Eigen::VectorXd> points,
                                     std::uint64_t seed = 1,
                                     std::size_t n_samples = 100000,
                                     double tol = 1e-9);

/// Rotates each vertex independently by `magnitude` radians in a random
/// tangent direction (used to step off measure-zero configurations).
std::vector<Eigen::VectorXd> jiggle(std::span<const Eigen::VectorXd> points,
                                    std::uint64_t seed,
                                    double magnitude = 1e-7);

}  // namespace mwk
