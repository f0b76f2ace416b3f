#pragma once

namespace periorec {

/// Outcome summary of one solver run at one regularization factor, in the
/// shape emitted by the experiments CSV.
struct SolverReport {
  double factor = 0.0;        ///< sigma, the fraction of lambda_max used
  int iterations = 0;
  double duration_s = 0.0;    ///< wall time of the solver call
  bool converged = false;
  double objective = 0.0;     ///< |y - Phi m|^2 + lambda |m|_TV
  double splines_rrse = 0.0;  ///< relative RMSE of the spline vs. the source
  double samples_rrse = 0.0;  ///< relative RMSE of the resampled spline vs. y
  int sparsity = 0;           ///< number of recovered atoms
};

}  // namespace periorec
