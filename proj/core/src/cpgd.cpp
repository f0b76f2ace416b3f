#include "periorec/cpgd.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace periorec {

namespace {

int bandwidth_of(const Eigen::VectorXcd& v) {
  if (v.size() % 2 == 0 || v.size() < 1)
    throw std::invalid_argument("coefficient vectors must have odd length 2M+1");
  return static_cast<int>((v.size() - 1) / 2);
}

// Roots of the polynomial c_0 z^d + ... + c_d (c_0 != 0) as eigenvalues of
// the companion matrix of the monic normalization.
Eigen::VectorXcd polynomial_roots(const Eigen::VectorXcd& c) {
  const Eigen::Index d = c.size() - 1;
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) companion(0, i) = -c(i + 1) / c(0);
  for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(companion, false);
  return eig.eigenvalues();
}

}  // namespace

void CpgdConfig::validate() const {
  if (K < 1 || K > P || P > M)
    throw std::invalid_argument("cpgd: parameters must satisfy 1 <= K <= P <= M");
  if (!(epsilon > 0.0)) throw std::invalid_argument("cpgd: epsilon must be > 0");
  if (max_iter < 1) throw std::invalid_argument("cpgd: max_iter must be >= 1");
  if (map_iters < 0) throw std::invalid_argument("cpgd: map_iters must be >= 0");
}

Eigen::MatrixXcd toeplitzify(const Eigen::VectorXcd& v, int P) {
  const int M = bandwidth_of(v);
  if (P < 0 || P > 2 * M) throw std::invalid_argument("toeplitzify: need 0 <= P <= 2M");

  Eigen::MatrixXcd X(2 * M - P + 1, P + 1);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = v(P + i - j);
  return X;
}

Eigen::VectorXd gamma_diag(int M, int P) {
  if (M < 0 || P < 0 || P > 2 * M) throw std::invalid_argument("gamma_diag: need 0 <= P <= 2M");
  Eigen::VectorXd gamma(2 * M + 1);
  for (int i = 1; i <= 2 * M + 1; ++i)
    gamma(i - 1) = std::min({static_cast<double>(i), static_cast<double>(P + 1),
                             static_cast<double>(2 * M + 2 - i),
                             static_cast<double>(2 * M - P + 1)});
  return gamma;
}

Eigen::VectorXcd toeplitz_pinv(const Eigen::MatrixXcd& X) {
  // Recover (M, P) from the shape: rows = 2M-P+1, cols = P+1.
  const int P = static_cast<int>(X.cols()) - 1;
  const long twoM = X.rows() + P - 1;
  if (X.rows() < 1 || X.cols() < 1 || twoM % 2 != 0)
    throw std::invalid_argument("toeplitz_pinv: shape is not a Toeplitz embedding");
  const int M = static_cast<int>(twoM / 2);

  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(2 * M + 1);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) acc(P + i - j) += X(i, j);
  return acc.array() / gamma_diag(M, P).array().cast<std::complex<double>>();
}

Eigen::MatrixXcd project_rank(const Eigen::MatrixXcd& X, int K) {
  if (K < 0) throw std::invalid_argument("project_rank: K must be >= 0");
  if (K >= std::min(X.rows(), X.cols())) return X;
  if (K == 0) return Eigen::MatrixXcd::Zero(X.rows(), X.cols());

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  return svd.matrixU().leftCols(K) * s.head(K).asDiagonal() *
         svd.matrixV().leftCols(K).adjoint();
}

Eigen::VectorXcd map_project(const Eigen::VectorXcd& v, int K, int P, int iters) {
  bandwidth_of(v);  // shape check
  if (K < 1) throw std::invalid_argument("map_project: K must be >= 1");
  if (iters < 0) throw std::invalid_argument("map_project: iters must be >= 0");

  Eigen::VectorXcd current = v;
  for (int r = 0; r < iters; ++r) {
    Eigen::VectorXcd next = toeplitz_pinv(project_rank(toeplitzify(current, P), K));
    const double diff = (next - current).norm();
    current = std::move(next);
    if (diff < 1e-10) break;
  }
  return current;
}

CpgdRun cpgd_solve(const SampleSet& samples, const Eigen::MatrixXcd& G, const CpgdConfig& config) {
  config.validate();
  if (G.cols() != 2 * static_cast<Eigen::Index>(config.M) + 1)
    throw std::invalid_argument("cpgd_solve: G must have 2M+1 columns");
  if (G.rows() != samples.values.size())
    throw std::invalid_argument("cpgd_solve: G and samples disagree in length");

  const Eigen::VectorXcd y = samples.values.cast<std::complex<double>>();
  const double tau = lipschitz_step(G);

  CpgdRun run;
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(G.cols());
  for (int n = 1; n <= config.max_iter; ++n) {
    const Eigen::VectorXcd z = x - 2.0 * tau * (G.adjoint() * (G * x - y));
    const Eigen::VectorXcd x_next = map_project(z, config.K, config.M, config.map_iters);

    const double prev_norm = x.norm();
    const double diff = (x_next - x).norm();
    const bool done =
        prev_norm == 0.0 ? x_next.norm() == 0.0 : diff <= config.epsilon * prev_norm;

    x = x_next;
    run.iterations = n;
    if (done) {
      run.converged = true;
      break;
    }
  }
  run.estimate = FourierEstimate{x, config.M};
  return run;
}

AnnihilatingFilter annihilating_filter(const FourierEstimate& estimate, int K) {
  const int M = bandwidth_of(estimate.coeffs);
  if (estimate.M != M) throw std::invalid_argument("annihilating_filter: inconsistent bandwidth");
  if (K < 1 || K > 2 * M) throw std::invalid_argument("annihilating_filter: need 1 <= K <= 2M");

  AnnihilatingFilter filter;
  if (estimate.coeffs.norm() == 0.0) {
    filter.h = Eigen::VectorXcd::Unit(K + 1, 0);
    filter.degenerate = true;
    return filter;
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(toeplitzify(estimate.coeffs, K), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  filter.h = svd.matrixV().col(K);
  // An ill-separated trailing pair means the null direction is ambiguous.
  if (s.size() >= 2) {
    const Eigen::Index last = s.size() - 1;
    filter.degenerate = (s(last - 1) - s(last)) <= 1e-8 * s(0);
  }
  return filter;
}

std::vector<double> knots_from_filter(const Eigen::VectorXcd& h, double period) {
  if (!(period > 0.0)) throw std::invalid_argument("knots_from_filter: period must be > 0");
  if (h.size() < 1 || h.norm() == 0.0)
    throw std::invalid_argument("knots_from_filter: filter is empty");

  // Deflate leading (numerically zero) taps: they only lower the degree.
  const double scale = h.cwiseAbs().maxCoeff();
  Eigen::Index first = 0;
  while (first < h.size() && std::abs(h(first)) <= 1e-12 * scale) ++first;
  const Eigen::Index degree = h.size() - 1 - first;

  std::vector<double> knots;
  if (degree < 1) return knots;

  const Eigen::VectorXcd roots = polynomial_roots(h.segment(first, degree + 1));
  for (Eigen::Index r = 0; r < roots.size(); ++r) {
    const std::complex<double> u = roots(r);
    if (std::abs(std::abs(u) - 1.0) > 0.5) continue;  // spurious: far off the circle
    knots.push_back(wrap_period(-period * std::arg(u) / two_pi, period));
  }
  std::sort(knots.begin(), knots.end());
  return knots;
}

std::pair<SparseMeasure, SolverReport> cpgd_reconstruct(const SampleSet& samples,
                                                        const GreensFunction& green,
                                                        const FourierSymbol& symbol,
                                                        const CpgdConfig& config,
                                                        const FistaConfig& fista_cfg,
                                                        double sigma) {
  config.validate();
  if (!(sigma > 0.0)) throw std::invalid_argument("cpgd_reconstruct: sigma must be > 0");

  const double T = samples.period;
  const Eigen::MatrixXcd G = matrix_G(samples.positions, config.M, symbol, green.spec());
  const CpgdRun run = cpgd_solve(samples, G, config);

  SolverReport report;
  report.iterations = run.iterations;

  const AnnihilatingFilter filter = annihilating_filter(run.estimate, config.K);
  const std::vector<double> knots = knots_from_filter(filter.h, T);
  if (knots.empty()) {
    report.converged = false;
    report.objective = samples.values.squaredNorm();
    return {SparseMeasure{{}, {}, T}, report};
  }

  // Debias: LASSO over the recovered knots only.
  const Eigen::MatrixXd H = matrix_H(samples.positions, knots, green);
  const double base = (H.transpose() * samples.values).cwiseAbs().maxCoeff();
  if (base == 0.0) {
    report.converged = run.converged;
    report.objective = samples.values.squaredNorm();
    return {SparseMeasure{{}, {}, T}, report};
  }

  FistaConfig weight_cfg = fista_cfg;
  weight_cfg.lambda = sigma * base;
  const FistaResult weights = fista_solve(H, samples.values, weight_cfg);

  std::vector<std::pair<double, double>> innovations;
  for (std::size_t k = 0; k < knots.size(); ++k)
    if (std::abs(weights.weights(static_cast<Eigen::Index>(k))) > 1e-10)
      innovations.emplace_back(knots[k], weights.weights(static_cast<Eigen::Index>(k)));

  SparseMeasure measure = SparseMeasure::from_innovations(std::move(innovations), T);
  report.converged = run.converged && weights.converged;
  report.objective = (samples.values - forward(measure, samples.positions, green)).squaredNorm() +
                     weight_cfg.lambda * measure.tv_norm();
  report.sparsity = static_cast<int>(measure.size());
  return {measure, report};
}

}  // namespace periorec
