#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "periorec/fista.hpp"
#include "periorec/operators.hpp"
#include "periorec/report.hpp"
#include "periorec/sampling.hpp"

namespace periorec {

enum class FwVariant { regular, reweighted };

struct FwConfig {
  double lambda = 0.0;     ///< regularization weight, must be > 0
  double nu = 1e-2;        ///< certificate stopping tolerance
  int max_iter = 200;
  int grid_points = 4096;  ///< certificate search grid resolution
  FwVariant variant = FwVariant::reweighted;
  bool record_trace = false;
  FistaConfig fista;       ///< weight re-fit settings (lambda is overridden)
};

struct FwTraceRow {
  int iteration = 0;
  double cert_max = 0.0;  ///< max_t |eta(t)| at the top of the iteration
  double objective = 0.0;
  int atoms = 0;          ///< atoms currently carrying non-zero weight
  double s = 0.0;         ///< lifted mass bookkeeping value
  double tv = 0.0;        ///< sum_k |w_k|, equal to s by construction
};

struct FwRun {
  SparseMeasure measure;
  SolverReport report;
  std::vector<FwTraceRow> trace;   ///< filled when config.record_trace
  bool support_bound_ok = true;    ///< final atom count <= number of samples
};

/// Empirical dual certificate of the current iterate, evaluated from the
/// cached residual r = y - Phi m:
///   eta(t) = (2 / lambda) sum_l r_l psi(theta_l - t).
double certificate_eval(const Eigen::VectorXd& residual, const SampleSet& samples,
                        const GreensFunction& green, double lambda, double t);

/// Certificate of a measure against data, as a reusable callable.
std::function<double(double)> empirical_certificate(const SparseMeasure& measure,
                                                    const SampleSet& samples,
                                                    const GreensFunction& green, double lambda);

struct CertificatePeak {
  double t = 0.0;
  double value = 0.0;  ///< eta(t), signed
};

/// Location of max_t |eta(t)|: a scan over `grid_points` equispaced points
/// followed by derivative-free refinement inside the bracketing cell pair
/// (to relative width 1e-10).
CertificatePeak certificate_argmax(const Eigen::VectorXd& residual, const SampleSet& samples,
                                   const GreensFunction& green, double lambda, int grid_points);

/// Exact line search for the convex combination
///   (1-gamma) (s, m) + gamma (s_u, u)
/// minimizing |y - Phi m_gamma|^2 + lambda s_gamma, given the images
/// phi_m = Phi m and phi_u = Phi u.  The unconstrained minimizer
///   gamma* = (2 (y - phi_m)^T (phi_u - phi_m) - lambda (s_u - s))
///            / (2 |phi_m - phi_u|^2)
/// is clamped to [0, 1]; a vanishing denominator yields 0.
double fw_gamma(const Eigen::VectorXd& phi_m, const Eigen::VectorXd& phi_u, double s, double s_u,
                const Eigen::VectorXd& y, double lambda);

/// |y - Phi m|^2 + lambda |m|_TV.
double objective_eval(const SparseMeasure& measure, const SampleSet& samples,
                      const GreensFunction& green, double lambda);

/// Frank-Wolfe descent over measures on the torus.  Each iteration finds the
/// certificate peak t*; the run stops as converged once ||eta(t*)| - 1| <= nu
/// (or immediately when the zero measure is optimal).  Otherwise the iterate
/// moves toward the vertex (M, sgn(eta) M delta_{t*}) with M = |y|^2/lambda
/// — or toward (0, 0) when the certificate is subcritical — by the exact
/// line search above.  The regular variant keeps the convex-combination
/// weights; the reweighted variant re-solves the LASSO over the enlarged
/// support, warm-started from them.  A peak falling within T/grid_points of
/// an existing atom merges into it.  Two consecutive stagnant iterations
/// abort the run with converged = false.
FwRun fw_solve(const SampleSet& samples, const GreensFunction& green, const FwConfig& config);

}  // namespace periorec
