#include "periorec/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace periorec {

namespace {

Eigen::VectorXd spline_on_grid(const SparseMeasure& measure, const GreensFunction& green,
                               int points) {
  const double T = green.period();
  Eigen::VectorXd f(points);
  for (int j = 0; j < points; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < measure.size(); ++k)
      acc += measure.weights[k] * green(j * T / points - measure.knots[k]);
    f(j) = acc;
  }
  return f;
}

double certificate_grid_base(const SampleSet& samples, const GreensFunction& green,
                             int grid_points) {
  double base = 0.0;
  const double T = samples.period;
  for (int j = 0; j < grid_points; ++j)
    base = std::max(base,
                    std::abs(adjoint_eval(samples.values, samples.positions, green, j * T / grid_points)));
  return base;
}

void write_curve_csv(const std::filesystem::path& file, const Eigen::VectorXd& f, double period) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open " + file.string());
  out << "t,f\n";
  char row[80];
  for (Eigen::Index j = 0; j < f.size(); ++j) {
    std::snprintf(row, sizeof(row), "%.17g,%.17g\n",
                  static_cast<double>(j) * period / static_cast<double>(f.size()), f(j));
    out << row;
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  source_op.validate();
  recon_op.validate();
  if (K0 < 0) throw std::invalid_argument("experiment: K0 must be >= 0");
  if (sigma_list.empty()) throw std::invalid_argument("experiment: sigma_list is empty");
  for (double sigma : sigma_list)
    if (!(sigma > 0.0)) throw std::invalid_argument("experiment: sigma factors must be > 0");
  if (source_op.period != recon_op.period)
    throw std::invalid_argument("experiment: source and reconstruction periods differ");
  if (N_grid < 1) throw std::invalid_argument("experiment: N_grid must be >= 1");
  if (cutoff < 1) throw std::invalid_argument("experiment: cutoff must be >= 1");
  if (L_override && *L_override < 1) throw std::invalid_argument("experiment: L must be >= 1");
}

std::vector<SolverReport> ExperimentResult::reports() const {
  std::vector<SolverReport> out;
  out.reserve(entries.size());
  for (const auto& entry : entries) out.push_back(entry.report);
  return out;
}

SolverReport metrics(const SparseMeasure& recovered, const SparseMeasure& truth,
                     const SampleSet& samples, const GreensFunction& recon_green,
                     const GreensFunction& source_green, double lambda) {
  constexpr int grid = 4096;
  SolverReport report;

  const Eigen::VectorXd f_rec = spline_on_grid(recovered, recon_green, grid);
  const Eigen::VectorXd f_src = spline_on_grid(truth, source_green, grid);
  const double src_energy = f_src.squaredNorm();
  report.splines_rrse = src_energy > 0.0
                            ? std::sqrt((f_rec - f_src).squaredNorm() / src_energy)
                            : std::numeric_limits<double>::quiet_NaN();

  const Eigen::VectorXd resampled = forward(recovered, samples.positions, recon_green);
  const double y_energy = samples.values.squaredNorm();
  report.samples_rrse = y_energy > 0.0
                            ? std::sqrt((resampled - samples.values).squaredNorm() / y_energy)
                            : std::numeric_limits<double>::quiet_NaN();

  report.objective = objective_eval(recovered, samples, recon_green, lambda);
  report.sparsity = static_cast<int>(recovered.size());
  return report;
}

ExperimentResult make_dataset(const ExperimentConfig& config) {
  config.validate();
  const double T = config.source_op.period;
  const int L = config.L_override.value_or(8 * config.K0 + 1);
  const GreensFunction source_green = GreensFunction::make(config.source_op, config.cutoff);

  ExperimentResult result;
  result.truth = random_sparse_measure(config.K0, config.seed, T);
  result.samples.period = T;
  result.samples.positions = config.equispaced ? equispaced_positions(L, T)
                                               : random_positions(L, config.seed + 1, T);
  const Eigen::VectorXd clean = forward(result.truth, result.samples.positions, source_green);
  result.samples.values = add_noise(clean, config.psnr_db, config.seed + 2);
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const double T = config.source_op.period;
  const int L = config.L_override.value_or(8 * config.K0 + 1);

  const GreensFunction source_green = GreensFunction::make(config.source_op, config.cutoff);
  const GreensFunction recon_green = GreensFunction::make(config.recon_op, config.cutoff);

  ExperimentResult result = make_dataset(config);

  const int M = std::min(4 * config.K0, (L - 1) / 2);

  for (double sigma : config.sigma_list) {
    ExperimentEntry entry;
    entry.recovered.period = T;
    double lambda = sigma;  // placeholder until the solver's base is known
    const auto start = std::chrono::steady_clock::now();

    switch (config.solver) {
      case SolverKind::grid: {
        auto [measure, fres] = grid_reconstruct(result.samples, recon_green, config.N_grid, sigma,
                                                config.fista);
        const Eigen::MatrixXd H = matrix_H(result.samples.positions,
                                           equispaced_positions(config.N_grid, T), recon_green);
        const double base = (H.transpose() * result.samples.values).cwiseAbs().maxCoeff();
        lambda = base > 0.0 ? sigma * base : sigma;
        entry.recovered = std::move(measure);
        entry.report.iterations = fres.iterations;
        entry.report.converged = fres.converged;
        break;
      }
      case SolverKind::cpgd: {
        CpgdConfig cfg;
        cfg.K = cfg.P = cfg.M = M;
        cfg.epsilon = config.cpgd_epsilon;
        cfg.max_iter = config.cpgd_max_iter;
        cfg.map_iters = config.map_iters;
        const FourierSymbol symbol = make_symbol(config.recon_op, config.cutoff);
        auto [measure, rep] = cpgd_reconstruct(result.samples, recon_green, symbol, cfg,
                                               config.fista, sigma);
        if (!measure.knots.empty()) {
          const Eigen::MatrixXd H =
              matrix_H(result.samples.positions, measure.knots, recon_green);
          const double base = (H.transpose() * result.samples.values).cwiseAbs().maxCoeff();
          if (base > 0.0) lambda = sigma * base;
        }
        entry.recovered = std::move(measure);
        entry.report.iterations = rep.iterations;
        entry.report.converged = rep.converged;
        break;
      }
      case SolverKind::fw:
      case SolverKind::fw_rw: {
        FwConfig cfg = config.fw;
        cfg.variant = config.solver == SolverKind::fw ? FwVariant::regular : FwVariant::reweighted;
        const double base = certificate_grid_base(result.samples, recon_green, cfg.grid_points);
        lambda = base > 0.0 ? sigma * base : sigma;
        cfg.lambda = lambda;
        FwRun run = fw_solve(result.samples, recon_green, cfg);
        entry.recovered = std::move(run.measure);
        entry.report.iterations = run.report.iterations;
        entry.report.converged = run.report.converged;
        break;
      }
    }

    const auto stop = std::chrono::steady_clock::now();
    const SolverReport quality =
        metrics(entry.recovered, result.truth, result.samples, recon_green, source_green, lambda);
    entry.report.objective = quality.objective;
    entry.report.splines_rrse = quality.splines_rrse;
    entry.report.samples_rrse = quality.samples_rrse;
    entry.report.sparsity = quality.sparsity;
    entry.report.factor = sigma;
    entry.report.duration_s = std::chrono::duration<double>(stop - start).count();
    entry.lambda = lambda;
    result.entries.push_back(std::move(entry));
  }
  return result;
}

void emit_csv(std::ostream& out, const std::vector<SolverReport>& reports) {
  out << "factor,iterations,duration,converged,objective,splines_rrse,samples_rrse\n";
  char row[256];
  for (const SolverReport& r : reports) {
    std::snprintf(row, sizeof(row), "%.6g,%d,%.6g,%s,%.6g,%.6g,%.6g\n", r.factor, r.iterations,
                  r.duration_s, r.converged ? "true" : "false", r.objective, r.splines_rrse,
                  r.samples_rrse);
    out << row;
  }
}

void write_plot_csvs(const std::filesystem::path& dir, const std::string& tag,
                     const ExperimentResult& result, const ExperimentEntry& entry,
                     const GreensFunction& source_green, const GreensFunction& recon_green,
                     int curve_points) {
  if (curve_points < 2) throw std::invalid_argument("write_plot_csvs: curve_points too small");
  std::filesystem::create_directories(dir);
  const double T = result.samples.period;

  write_curve_csv(dir / (tag + "_source_spline.csv"),
                  spline_on_grid(result.truth, source_green, curve_points), T);
  write_curve_csv(dir / (tag + "_recon_spline.csv"),
                  spline_on_grid(entry.recovered, recon_green, curve_points), T);

  std::ofstream samples_out(dir / (tag + "_samples.csv"));
  if (!samples_out) throw std::runtime_error("cannot open samples plot file");
  write_samples_csv(samples_out, result.samples);

  std::ofstream innovations_out(dir / (tag + "_innovations.csv"));
  if (!innovations_out) throw std::runtime_error("cannot open innovations plot file");
  write_measure_csv(innovations_out, entry.recovered);
}

}  // namespace periorec
