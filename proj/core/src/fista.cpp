#include "periorec/fista.hpp"

#include <cmath>
#include <stdexcept>

namespace periorec {

namespace {

// Dominant eigenvalue of a Hermitian positive semi-definite matrix.
template <typename Matrix>
double dominant_eigenvalue(const Matrix& B) {
  using Vector = Eigen::Matrix<typename Matrix::Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = B.rows();

  if (n < 64) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(B, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff();
  }

  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  double lambda = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Vector w = B * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const double next = std::real(v.dot(B * v));
    if (std::abs(next - lambda) <= 1e-8 * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

template <typename Matrix>
double step_from_forward_matrix(const Matrix& H) {
  if (H.rows() == 0 || H.cols() == 0)
    throw std::invalid_argument("lipschitz_step: empty matrix");
  if (H.norm() == 0.0)
    throw std::invalid_argument("lipschitz_step: zero matrix has no valid step size");

  // The Gram matrix on the smaller side has the same dominant eigenvalue.
  const double lambda_max = H.rows() < H.cols()
                                ? dominant_eigenvalue(Matrix(H * H.adjoint()))
                                : dominant_eigenvalue(Matrix(H.adjoint() * H));
  return 1.0 / (2.0 * lambda_max);
}

}  // namespace

double soft_threshold(double x, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("soft_threshold: alpha must be >= 0");
  const double shrunk = std::abs(x) - alpha;
  if (shrunk <= 0.0) return 0.0;
  return x > 0.0 ? shrunk : -shrunk;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& x, double alpha) {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = soft_threshold(x(i), alpha);
  return out;
}

double lipschitz_step(const Eigen::MatrixXd& H) { return step_from_forward_matrix(H); }

double lipschitz_step(const Eigen::MatrixXcd& G) { return step_from_forward_matrix(G); }

double lambda_max_grid(const Eigen::MatrixXd& H, const Eigen::VectorXd& y) {
  if (H.rows() != y.size()) throw std::invalid_argument("lambda_max_grid: dimension mismatch");
  return 2.0 * (H.transpose() * y).cwiseAbs().maxCoeff();
}

FistaResult fista_solve(const Eigen::MatrixXd& H, const Eigen::VectorXd& y,
                        const FistaConfig& config) {
  if (H.rows() != y.size()) throw std::invalid_argument("fista_solve: dimension mismatch");
  if (!(config.lambda > 0.0)) throw std::invalid_argument("fista_solve: lambda must be > 0");
  if (!(config.epsilon > 0.0)) throw std::invalid_argument("fista_solve: epsilon must be > 0");
  if (config.delta < 0.0) throw std::invalid_argument("fista_solve: delta must be >= 0");
  if (config.max_iter < 1) throw std::invalid_argument("fista_solve: max_iter must be >= 1");

  const double tau = lipschitz_step(H);
  const double threshold = tau * config.lambda;

  Eigen::VectorXd x = config.initial.value_or(Eigen::VectorXd::Zero(H.cols()));
  if (x.size() != H.cols()) throw std::invalid_argument("fista_solve: initial has wrong size");
  Eigen::VectorXd z_prev = x;

  FistaResult result;
  for (int n = 1; n <= config.max_iter; ++n) {
    const Eigen::VectorXd grad = 2.0 * (H.transpose() * (H * x - y));
    const Eigen::VectorXd z = soft_threshold(x - tau * grad, threshold);
    const double momentum = static_cast<double>(n - 1) / (n + config.delta);
    const Eigen::VectorXd x_next = z + momentum * (z - z_prev);

    const double prev_norm = x.norm();
    const double diff = (x_next - x).norm();
    const bool done = prev_norm == 0.0 ? x_next.norm() == 0.0 : diff <= config.epsilon * prev_norm;

    z_prev = z;
    x = x_next;
    result.iterations = n;
    if (done) {
      result.converged = true;
      break;
    }
  }

  result.weights = z_prev;
  result.objective = (y - H * z_prev).squaredNorm() + config.lambda * z_prev.lpNorm<1>();
  return result;
}

std::pair<SparseMeasure, FistaResult> grid_reconstruct(const SampleSet& samples,
                                                       const GreensFunction& green, int N_grid,
                                                       double sigma, const FistaConfig& config) {
  if (N_grid < 1) throw std::invalid_argument("grid_reconstruct: N_grid must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("grid_reconstruct: sigma must be > 0");

  const double T = samples.period;
  const std::vector<double> grid = equispaced_positions(N_grid, T);
  const Eigen::MatrixXd H = matrix_H(samples.positions, grid, green);

  const double base = (H.transpose() * samples.values).cwiseAbs().maxCoeff();
  if (base == 0.0) {
    // Degenerate data (e.g. y = 0): the optimum is the empty measure.
    FistaResult trivial;
    trivial.weights = Eigen::VectorXd::Zero(N_grid);
    trivial.iterations = 1;
    trivial.converged = true;
    trivial.objective = samples.values.squaredNorm();
    return {SparseMeasure{{}, {}, T}, trivial};
  }

  FistaConfig cfg = config;
  cfg.lambda = sigma * base;
  FistaResult result = fista_solve(H, samples.values, cfg);

  std::vector<std::pair<double, double>> innovations;
  for (int i = 0; i < N_grid; ++i)
    if (std::abs(result.weights(i)) > 1e-10)
      innovations.emplace_back(grid[static_cast<std::size_t>(i)], result.weights(i));
  return {SparseMeasure::from_innovations(std::move(innovations), T), result};
}

}  // namespace periorec
