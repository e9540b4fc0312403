#include <cmath>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <string>

#include "mwk/config.hpp"
#include "mwk/error.hpp"
#include "mwk/monte_carlo.hpp"
#include "mwk/width.hpp"
#include "width_internal.hpp"

namespace mwk {

namespace {

// Objective on a d x (d+1) column matrix; nullopt where it is undefined.
using Objective = std::function<std::optional<double>(const Eigen::MatrixXd&)>;

Objective make_objective(int d, const OptimizerParams& params) {
  if (d == 2) {
    // Hull of three points on a circle: width = perimeter / pi.
    return [](const Eigen::MatrixXd& V) -> std::optional<double> {
      return ((V.col(0) - V.col(1)).norm() + (V.col(1) - V.col(2)).norm() +
              (V.col(2) - V.col(0)).norm()) / kPi;
    };
  }
  if (d == 3) {
    return [](const Eigen::MatrixXd& V) -> std::optional<double> {
      if (!detail::origin_strictly_inside(V)) return std::nullopt;
      return detail::exact3d_columns(V);
    };
  }
  // Common random numbers: one fixed direction sample for the whole run.
  const std::size_t n = params.mc_samples;
  if (n == 0) throw Error(ErrorKind::kDomain, "mc_samples must be >= 1");
  auto U = std::make_shared<Eigen::MatrixXd>(n, d);
  Engine rng = partition_engine(params.seed, 0x637226u);
  for (std::size_t k = 0; k < n; ++k) {
    U->row(static_cast<Eigen::Index>(k)) = sample_uniform_sphere(rng, d).transpose();
  }
  return [U](const Eigen::MatrixXd& V) -> std::optional<double> {
    return 2.0 * (*U * V).rowwise().maxCoeff().mean();
  };
}

Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& x) {
  const Eigen::Index d = x.size();
  const Eigen::MatrixXd Q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(x).householderQ() *
      Eigen::MatrixXd::Identity(d, d);
  return Q.rightCols(d - 1);
}

Eigen::MatrixXd step_vertex(Eigen::MatrixXd V, Eigen::Index i,
                            const Eigen::VectorXd& delta) {
  V.col(i) = (V.col(i) + delta).normalized();
  return V;
}

// Per-vertex tangent gradient, stored column-wise like V.
Eigen::MatrixXd fd_gradient(const Objective& F, const Eigen::MatrixXd& V,
                            double f0, double h) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(V.rows(), V.cols());
  for (Eigen::Index i = 0; i < V.cols(); ++i) {
    const Eigen::MatrixXd T = tangent_basis(V.col(i));
    for (Eigen::Index t = 0; t < T.cols(); ++t) {
      const Eigen::VectorXd dir = T.col(t);
      const auto plus = F(step_vertex(V, i, h * dir));
      const auto minus = F(step_vertex(V, i, -h * dir));
      double slope = 0.0;
      if (plus && minus) {
        slope = (*plus - *minus) / (2.0 * h);
      } else if (plus) {
        slope = (*plus - f0) / h;
      } else if (minus) {
        slope = (f0 - *minus) / h;
      }
      g.col(i) += slope * dir;
    }
  }
  return g;
}

InscribedSimplex to_simplex(const Eigen::MatrixXd& V) {
  std::vector<UnitVector> v;
  v.reserve(V.cols());
  for (Eigen::Index i = 0; i < V.cols(); ++i) v.push_back(UnitVector::normalized(V.col(i)));
  return InscribedSimplex(std::move(v));
}

WidthMethod objective_method(int d) {
  return d == 3 ? WidthMethod::kExact3d : WidthMethod::kMonteCarlo;
}

}  // namespace

OptimizerRun optimize_width(int d, std::optional<InscribedSimplex> init,
                            const OptimizerParams& params) {
  if (d < 2) throw Error(ErrorKind::kDimension, "optimize needs d >= 2");
  if (params.max_iter < 0 || !(params.step0 > 0) || !(params.tol > 0) ||
      !(params.fd_step > 0)) {
    throw Error(ErrorKind::kDomain, "invalid optimizer parameters");
  }
  if (init && init->dim() != d) {
    throw Error(ErrorKind::kDimension, "initial simplex has the wrong dimension");
  }
  InscribedSimplex start = init ? *init : random_feasible_simplex(d, params.seed);
  const Objective F = make_objective(d, params);

  Eigen::MatrixXd V = start.matrix();
  const auto f_init = F(V);
  if (!f_init) {
    throw Error(ErrorKind::kInfeasible, "initial simplex does not contain the origin");
  }
  double f = *f_init;
  double step = params.step0;

  OptimizerRun run;
  auto record = [&](int iter, bool converged) {
    OptimizerState s{to_simplex(V), {f, 0.0, objective_method(d)}, iter, step,
                     converged, 0.0};
    s.regularity = regularity_metric(s.simplex);
    run.trace.push_back(std::move(s));
  };
  record(0, false);

  constexpr double kGradTol = 1e-8;
  constexpr double kMinStep = 1e-14;
  for (int iter = 1; iter <= params.max_iter; ++iter) {
    Eigen::MatrixXd g;
    try {
      g = fd_gradient(F, V, f, params.fd_step);
    } catch (const Error& e) {
      throw Error(e.kind(), "iteration " + std::to_string(iter) + ": " + e.what());
    }
    if (g.norm() < kGradTol) {
      run.trace.back().converged = true;
      return run;
    }

    bool accepted = false;
    double gain = 0.0;
    while (step >= kMinStep) {
      Eigen::MatrixXd trial = V;
      for (Eigen::Index i = 0; i < V.cols(); ++i) {
        trial.col(i) = (V.col(i) + step * g.col(i)).normalized();
      }
      std::optional<double> ft;
      try {
        ft = F(trial);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kGeneralPosition) {
          throw Error(e.kind(), "iteration " + std::to_string(iter) + ": " + e.what());
        }
      }
      if (ft && *ft >= f) {
        gain = *ft - f;
        V = trial;
        f = *ft;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      run.trace.back().converged = true;
      return run;
    }
    const bool done = gain < params.tol;
    record(iter, done);
    if (done) return run;
    step *= 1.5;
  }
  return run;
}

void write_trace_csv(const OptimizerRun& run, std::ostream& out) {
  out << "iteration,width,step,regularity_metric\n" << std::setprecision(17);
  for (const OptimizerState& s : run.trace) {
    out << s.iteration << ',' << s.width.value << ',' << s.step_size << ','
        << s.regularity << '\n';
  }
}

}  // namespace mwk
