#pragma once

// Mean width w = 2 E[h(u)] of inscribed simplices, and a projected
// gradient-ascent search for its maximizer.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mwk/cells.hpp"
#include "mwk/sphere.hpp"

namespace mwk {

/// max_i u . v_i.
double support_function(const InscribedSimplex& S, const UnitVector& u);
double support_function(std::span<const Eigen::VectorXd> points,
                        const Eigen::VectorXd& u);

enum class WidthMethod { kExact3d, kMonteCarlo, kMatQuadrature };

const char* to_string(WidthMethod m);
std::optional<WidthMethod> parse_width_method(const std::string& name);

struct WidthEstimate {
  double value = 0.0;
  double std_error = 0.0;
  WidthMethod method = WidthMethod::kMonteCarlo;
};

WidthEstimate mean_width_mc(const InscribedSimplex& S, std::size_t n,
                            std::uint64_t seed);
/// MC width of the hull of arbitrary points (need not be on the sphere).
WidthEstimate mean_width_mc(std::span<const Eigen::VectorXd> points,
                            std::size_t n, std::uint64_t seed);

/// (1/4pi) sum over the 24 right triangles of sigma a sin b. Needs d = 3 and
/// the origin strictly inside the simplex.
WidthEstimate mean_width_exact3d(const InscribedSimplex& S);

/// Sum over the (d+1)! chain path simplices of sigma times the MAT estimate
/// of their marginal mean about v_i; `n` samples per path simplex.
WidthEstimate mean_width_mat(const InscribedSimplex& S, std::size_t n,
                             std::uint64_t seed);

/// d+1 unit vectors with pairwise dots -1/d summing to zero.
InscribedSimplex regular_simplex(int d);

/// (6/pi) arccos(1/sqrt 3) sqrt(2/3).
double regular_tetrahedron_width();

/// max_{i<j} |v_i . v_j + 1/d|; zero exactly for the regular simplex.
double regularity_metric(const InscribedSimplex& S);

/// Uniform random vertices, rejected until the origin is strictly inside.
InscribedSimplex random_feasible_simplex(int d, std::uint64_t seed,
                                         double margin = 1e-3);

struct OptimizerParams {
  int max_iter = 2000;
  double step0 = 0.05;
  double tol = 1e-13;
  std::uint64_t seed = 1;
  std::size_t mc_samples = 20000;  // per objective call when d >= 4
  double fd_step = 1e-6;
};

struct OptimizerState {
  InscribedSimplex simplex;
  WidthEstimate width;
  int iteration = 0;
  double step_size = 0.0;
  bool converged = false;
  double regularity = 0.0;
};

struct OptimizerRun {
  std::vector<OptimizerState> trace;  // accepted states, starting at init
  const OptimizerState& final_state() const { return trace.back(); }
};

/// exact3d objective for d = 3; common-random-number MC for d >= 4, and for
/// d = 2 the closed-form perimeter / pi.
OptimizerRun optimize_width(int d, std::optional<InscribedSimplex> init,
                            const OptimizerParams& params);

/// Header iteration,width,step,regularity_metric.
void write_trace_csv(const OptimizerRun& run, std::ostream& out);

}  // namespace mwk
