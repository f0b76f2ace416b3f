#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "periorec/operators.hpp"

namespace periorec {

/// Reduces t into [0, period).
double wrap_period(double t, double period);

/// Distance between a and b on the torus of circumference `period`.
double torus_distance(double a, double b, double period);

/// Finite stream of weighted Dirac impulses on the torus [0, T).  Knots are
/// kept sorted; constructing from raw innovations reduces knots mod T and
/// merges coincident ones by summing their weights.
struct SparseMeasure {
  std::vector<double> knots;
  std::vector<double> weights;
  double period = two_pi;

  static SparseMeasure from_innovations(std::vector<std::pair<double, double>> innovations,
                                        double period);

  std::size_t size() const { return knots.size(); }
  double tv_norm() const;  ///< sum_k |w_k|

  /// Copy with atoms of |weight| <= tol removed.
  SparseMeasure pruned(double tol = 1e-10) const;
};

/// Point samples y_l taken at positions theta_l in [0, T).
struct SampleSet {
  std::vector<double> positions;
  Eigen::VectorXd values;
  double period = two_pi;
};

/// Collocation matrix H[l, k] = psi(theta_l - t_k) mapping knot weights to
/// samples of the induced spline.
Eigen::MatrixXd matrix_H(std::span<const double> positions, std::span<const double> knots,
                         const GreensFunction& green);

/// Fourier-side forward matrix G[l, n] = psihat[n] exp(i 2 pi n theta_l / T)
/// for |n| <= M, with psihat[n] = 1 / (T Dhat[n]).  Columns are ordered
/// n = -M..M.  Requires M <= symbol.cutoff.
Eigen::MatrixXcd matrix_G(std::span<const double> positions, int M, const FourierSymbol& symbol,
                          const OperatorSpec& spec);

/// Samples of the spline induced by `measure`: y_l = sum_k w_k psi(theta_l - t_k).
Eigen::VectorXd forward(const SparseMeasure& measure, std::span<const double> positions,
                        const GreensFunction& green);

/// Adjoint of the sampling map applied to p, evaluated at t:
/// (Phi* p)(t) = sum_l p_l psi(theta_l - t).
double adjoint_eval(const Eigen::VectorXd& p, std::span<const double> positions,
                    const GreensFunction& green, double t);

/// Fourier coefficients of the Dirac stream: mhat_n = sum_k w_k exp(-i 2 pi n t_k / T),
/// returned for n = -M..M.
Eigen::VectorXcd fourier_coefficients(const SparseMeasure& measure, int M);

/// K0 knots i.i.d. uniform on [0, T) and weights i.i.d. standard normal,
/// deterministic in `seed` (knots drawn first, then weights).
SparseMeasure random_sparse_measure(int K0, std::uint64_t seed, double period);

/// L positions i.i.d. uniform on [0, T), sorted; deterministic in `seed`.
std::vector<double> random_positions(int L, std::uint64_t seed, double period);

/// L equispaced positions l * T / L.
std::vector<double> equispaced_positions(int L, double period);

/// Additive white Gaussian noise at a peak signal-to-noise ratio:
/// omega = max_l |clean_l| * exp(-psnr_db / 10), w ~ N(0, omega^2).
Eigen::VectorXd add_noise(const Eigen::VectorXd& clean, double psnr_db, std::uint64_t seed);

// --- CSV serialization (headers "knot,weight" and "theta,y") ---

void write_measure_csv(std::ostream& out, const SparseMeasure& measure);
SparseMeasure read_measure_csv(std::istream& in, double period);
void write_samples_csv(std::ostream& out, const SampleSet& samples);
SampleSet read_samples_csv(std::istream& in, double period);

}  // namespace periorec
