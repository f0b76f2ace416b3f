#include "periorec/frank_wolfe.hpp"

#include <cmath>
#include <stdexcept>

namespace periorec {

namespace {

// Derivative-free maximization of f on [a, b] by golden-section search,
// run down to a fixed relative interval width.
double golden_max(const std::function<double(double)>& f, double a, double b) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while ((b - a) > 1e-10 * (1.0 + std::abs(a) + std::abs(b))) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

void validate(const FwConfig& config) {
  if (!(config.lambda > 0.0)) throw std::invalid_argument("fw: lambda must be > 0");
  if (!(config.nu > 0.0)) throw std::invalid_argument("fw: nu must be > 0");
  if (config.max_iter < 1) throw std::invalid_argument("fw: max_iter must be >= 1");
  if (config.grid_points < 4) throw std::invalid_argument("fw: grid_points must be >= 4");
}

}  // namespace

double certificate_eval(const Eigen::VectorXd& residual, const SampleSet& samples,
                        const GreensFunction& green, double lambda, double t) {
  if (!(lambda > 0.0)) throw std::invalid_argument("certificate_eval: lambda must be > 0");
  return (2.0 / lambda) * adjoint_eval(residual, samples.positions, green, t);
}

std::function<double(double)> empirical_certificate(const SparseMeasure& measure,
                                                    const SampleSet& samples,
                                                    const GreensFunction& green, double lambda) {
  Eigen::VectorXd residual = samples.values - forward(measure, samples.positions, green);
  return [residual = std::move(residual), samples, green, lambda](double t) {
    return certificate_eval(residual, samples, green, lambda, t);
  };
}

CertificatePeak certificate_argmax(const Eigen::VectorXd& residual, const SampleSet& samples,
                                   const GreensFunction& green, double lambda, int grid_points) {
  if (grid_points < 4) throw std::invalid_argument("certificate_argmax: grid too coarse");
  const double T = samples.period;

  auto eta = [&](double t) { return certificate_eval(residual, samples, green, lambda, t); };

  double best_abs = -1.0;
  int best_j = 0;
  for (int j = 0; j < grid_points; ++j) {
    const double value = std::abs(eta(j * T / grid_points));
    if (value > best_abs) {
      best_abs = value;
      best_j = j;
    }
  }

  const double h = T / grid_points;
  const double center = best_j * h;
  const double t_star =
      golden_max([&](double t) { return std::abs(eta(t)); }, center - h, center + h);

  CertificatePeak peak;
  peak.t = wrap_period(t_star, T);
  peak.value = eta(t_star);
  return peak;
}

double fw_gamma(const Eigen::VectorXd& phi_m, const Eigen::VectorXd& phi_u, double s, double s_u,
                const Eigen::VectorXd& y, double lambda) {
  const double denom = 2.0 * (phi_m - phi_u).squaredNorm();
  if (denom == 0.0) return 0.0;
  const double numer = 2.0 * (y - phi_m).dot(phi_u - phi_m) - lambda * (s_u - s);
  return std::clamp(numer / denom, 0.0, 1.0);
}

double objective_eval(const SparseMeasure& measure, const SampleSet& samples,
                      const GreensFunction& green, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("objective_eval: lambda must be > 0");
  return (samples.values - forward(measure, samples.positions, green)).squaredNorm() +
         lambda * measure.tv_norm();
}

FwRun fw_solve(const SampleSet& samples, const GreensFunction& green, const FwConfig& config) {
  validate(config);
  const double T = samples.period;
  const Eigen::VectorXd& y = samples.values;
  const double bound = y.squaredNorm() / config.lambda;  // TV mass cap M
  const double merge_radius = T / config.grid_points;

  // Iterate state: zero-weight atoms stay in the support mid-run.
  std::vector<double> support;
  Eigen::VectorXd weights(0);
  double s = 0.0;
  Eigen::VectorXd residual = y;

  FwRun run;
  int stagnant = 0;

  auto atom_count = [&] {
    int count = 0;
    for (Eigen::Index k = 0; k < weights.size(); ++k)
      if (weights(k) != 0.0) ++count;
    return count;
  };

  for (int n = 1; n <= config.max_iter; ++n) {
    run.report.iterations = n;
    const CertificatePeak peak =
        certificate_argmax(residual, samples, green, config.lambda, config.grid_points);
    const double cert_max = std::abs(peak.value);

    if (config.record_trace)
      run.trace.push_back({n, cert_max, residual.squaredNorm() + config.lambda * s, atom_count(),
                           s, weights.cwiseAbs().sum()});

    if (std::abs(cert_max - 1.0) <= config.nu) {
      run.report.converged = true;
      break;
    }
    if (cert_max < 1.0 && s == 0.0) {
      // A subcritical certificate at the zero measure: zero is optimal.
      run.report.converged = true;
      break;
    }

    bool changed_support = false;
    double gamma = 0.0;

    const Eigen::VectorXd phi_m = y - residual;
    if (cert_max > 1.0) {
      const double sign = peak.value > 0.0 ? 1.0 : -1.0;
      Eigen::VectorXd phi_u(y.size());
      for (Eigen::Index l = 0; l < y.size(); ++l)
        phi_u(l) = sign * bound * green(samples.positions[static_cast<std::size_t>(l)] - peak.t);

      gamma = fw_gamma(phi_m, phi_u, s, bound, y, config.lambda);
      weights *= (1.0 - gamma);

      // Merge the new spike into an existing atom when it lands on top of one.
      Eigen::Index nearest = -1;
      for (Eigen::Index k = 0; k < weights.size(); ++k)
        if (torus_distance(support[static_cast<std::size_t>(k)], peak.t, T) < merge_radius) {
          nearest = k;
          break;
        }
      if (nearest >= 0) {
        weights(nearest) += gamma * sign * bound;
      } else {
        support.push_back(peak.t);
        weights.conservativeResize(weights.size() + 1);
        weights(weights.size() - 1) = gamma * sign * bound;
        changed_support = true;
      }

      if (config.variant == FwVariant::reweighted) {
        // Re-fit every weight over the enlarged support, warm-started from
        // the convex-combination weights.
        const Eigen::MatrixXd H = matrix_H(samples.positions, support, green);
        FistaConfig fista_cfg = config.fista;
        fista_cfg.lambda = config.lambda;
        fista_cfg.initial = weights;
        weights = fista_solve(H, y, fista_cfg).weights;
      }
    } else {
      // Subcritical certificate with mass on the board: shrink toward (0, 0).
      gamma = fw_gamma(phi_m, Eigen::VectorXd::Zero(y.size()), s, 0.0, y, config.lambda);
      weights *= (1.0 - gamma);
    }

    s = weights.cwiseAbs().sum();
    if (support.empty()) {
      residual = y;
    } else {
      residual = y - matrix_H(samples.positions, support, green) * weights;
    }

    stagnant = (gamma == 0.0 && !changed_support) ? stagnant + 1 : 0;
    if (stagnant >= 2) break;  // no progress twice in a row: give up
  }

  std::vector<std::pair<double, double>> innovations;
  for (Eigen::Index k = 0; k < weights.size(); ++k)
    if (std::abs(weights(k)) > 1e-10)
      innovations.emplace_back(support[static_cast<std::size_t>(k)], weights(k));
  run.measure = SparseMeasure::from_innovations(std::move(innovations), T);

  run.report.objective = objective_eval(run.measure, samples, green, config.lambda);
  run.report.sparsity = static_cast<int>(run.measure.size());
  run.support_bound_ok = run.measure.size() <= samples.positions.size();
  return run;
}

}  // namespace periorec
