#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "periorec/cpgd.hpp"
#include "periorec/fista.hpp"
#include "periorec/frank_wolfe.hpp"
#include "periorec/operators.hpp"
#include "periorec/report.hpp"
#include "periorec/sampling.hpp"

namespace periorec {

enum class SolverKind { grid, cpgd, fw, fw_rw };

/// Synthetic recovery protocol: draw a K0-atom source measure, sample its
/// spline at L positions, add noise at a fixed PSNR, then reconstruct once
/// per entry of sigma_list with regularization lambda = sigma * lambda_base,
/// where lambda_base is the solver's own scale for the collapse threshold.
/// All randomness is derived from `seed` (measure: seed, positions: seed+1,
/// noise: seed+2), so a configuration pins the entire run.
struct ExperimentConfig {
  std::uint64_t seed = 0;
  int K0 = 4;
  double psnr_db = 20.0;
  std::vector<double> sigma_list = {0.01, 0.1, 0.2, 0.3};
  OperatorSpec source_op{OperatorFamily::exponential, 3.0, 2.0, two_pi};
  OperatorSpec recon_op{OperatorFamily::exponential, 3.0, 2.0, two_pi};
  int cutoff = 2048;               ///< Fourier truncation for symbols / series
  SolverKind solver = SolverKind::grid;
  int N_grid = 300;                ///< grid solver resolution
  std::optional<int> L_override;   ///< number of samples, default 8 K0 + 1
  bool equispaced = false;         ///< equispaced instead of uniform positions

  FistaConfig fista;               ///< grid / weighting solver settings
  FwConfig fw;                     ///< Frank-Wolfe settings
  double cpgd_epsilon = 1e-4;
  int cpgd_max_iter = 2000;
  int map_iters = 20;

  void validate() const;
};

struct ExperimentEntry {
  SolverReport report;
  SparseMeasure recovered;
  double lambda = 0.0;  ///< regularization weight the solver actually ran with
};

struct ExperimentResult {
  SparseMeasure truth;
  SampleSet samples;
  std::vector<ExperimentEntry> entries;  ///< one per sigma, in list order

  std::vector<SolverReport> reports() const;
};

/// Draws only the dataset of an experiment: the seeded source measure, the
/// sample positions and the noise-corrupted sample values.  Entries stay
/// empty; run_experiment builds on this.
ExperimentResult make_dataset(const ExperimentConfig& config);

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Quality measures of a recovery: relative root squared errors of the
/// reconstructed spline against the source spline (on a 4096-point grid)
/// and of its resampling against the measured values, plus the objective
/// |y - Phi m|^2 + lambda |m|_TV.  A zero-energy reference yields NaN.
SolverReport metrics(const SparseMeasure& recovered, const SparseMeasure& truth,
                     const SampleSet& samples, const GreensFunction& recon_green,
                     const GreensFunction& source_green, double lambda);

/// Writes reports as CSV with header
///   factor,iterations,duration,converged,objective,splines_rrse,samples_rrse
/// floats at 6 significant digits and booleans as true/false.
void emit_csv(std::ostream& out, const std::vector<SolverReport>& reports);

/// Writes the four plot-data files for one entry into `dir`:
/// <tag>_source_spline.csv and <tag>_recon_spline.csv ("t,f" curves),
/// <tag>_samples.csv ("theta,y") and <tag>_innovations.csv ("knot,weight").
void write_plot_csvs(const std::filesystem::path& dir, const std::string& tag,
                     const ExperimentResult& result, const ExperimentEntry& entry,
                     const GreensFunction& source_green, const GreensFunction& recon_green,
                     int curve_points = 1024);

}  // namespace periorec
