#pragma once

#include <Eigen/Dense>
#include <optional>

#include "periorec/operators.hpp"
#include "periorec/sampling.hpp"

namespace periorec {

struct FistaConfig {
  double lambda = 0.0;       ///< regularization weight, must be > 0
  double delta = 75.0;       ///< momentum offset: coefficient (n-1)/(n+delta)
  double epsilon = 1e-4;     ///< relative stopping tolerance
  int max_iter = 2000;
  std::optional<Eigen::VectorXd> initial;  ///< warm start, defaults to zero
};

struct FistaResult {
  Eigen::VectorXd weights;
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;  ///< |y - H b|^2 + lambda |b|_1 at the returned weights
};

/// soft_a(x) = max(|x| - a, 0) sgn(x), the proximal operator of a |.|_1.
double soft_threshold(double x, double alpha);
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& x, double alpha);

/// Step size tau = 1 / (2 lambda_max(H^T H)), the inverse Lipschitz constant
/// of the gradient of |y - H b|^2.  The dominant eigenvalue comes from a
/// power iteration (relative tolerance 1e-8, at most 1e4 rounds) on the
/// smaller Gram matrix, or a dense eigendecomposition below size 64.
double lipschitz_step(const Eigen::MatrixXd& H);
double lipschitz_step(const Eigen::MatrixXcd& G);  ///< same, for complex forward maps

/// Smallest lambda for which the LASSO solution collapses to zero:
/// lambda_max = 2 |H^T y|_inf.
double lambda_max_grid(const Eigen::MatrixXd& H, const Eigen::VectorXd& y);

/// Accelerated proximal gradient descent for
///   min_b |y - H b|^2 + lambda |b|_1.
///
/// Iterates, from x_0 = z_0 = initial,
///   z_n = soft_{tau lambda}(x_{n-1} - 2 tau H^T (H x_{n-1} - y)),
///   x_n = z_n + ((n-1)/(n+delta)) (z_n - z_{n-1}),
/// and stops once |x_n - x_{n-1}| <= epsilon |x_{n-1}| (a zero previous
/// iterate requires a zero current one).  Returns the proximal iterate z_n,
/// whose entries are exactly thresholded.
FistaResult fista_solve(const Eigen::MatrixXd& H, const Eigen::VectorXd& y,
                        const FistaConfig& config);

/// Solves the measure recovery problem restricted to N_grid equispaced
/// candidate knots i T / N_grid.  The regularization is set from the data
/// as lambda = sigma * |H^T y|_inf (config.lambda is ignored); knots with
/// |weight| > 1e-10 make up the returned measure.
std::pair<SparseMeasure, FistaResult> grid_reconstruct(const SampleSet& samples,
                                                       const GreensFunction& green, int N_grid,
                                                       double sigma, const FistaConfig& config);

}  // namespace periorec
