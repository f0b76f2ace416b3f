#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "periorec/fista.hpp"
#include "periorec/operators.hpp"
#include "periorec/report.hpp"
#include "periorec/sampling.hpp"

namespace periorec {

struct CpgdConfig {
  int K = 1;  ///< model order (number of spikes), 1 <= K
  int P = 1;  ///< Toeplitz parameter, K <= P
  int M = 1;  ///< bandwidth of the Fourier-side unknown, P <= M
  double epsilon = 1e-4;  ///< relative stopping tolerance of the descent loop
  int max_iter = 2000;
  int map_iters = 20;  ///< alternating-projection rounds per descent step

  void validate() const;  ///< enforces 1 <= K <= P <= M
};

/// Fourier coefficients mhat_n of an estimated Dirac stream, n = -M..M.
struct FourierEstimate {
  Eigen::VectorXcd coeffs;
  int M = 0;
};

struct CpgdRun {
  FourierEstimate estimate;
  int iterations = 0;
  bool converged = false;
};

struct AnnihilatingFilter {
  Eigen::VectorXcd h;       ///< K+1 filter taps
  bool degenerate = false;  ///< trailing singular values not well separated
};

/// Toeplitz embedding of v = (v_{-M}, .., v_M): the (2M-P+1) x (P+1) matrix
/// with [T_P(v)]_{ij} = v_{-M+P+i-j} (indices starting at 1).
Eigen::MatrixXcd toeplitzify(const Eigen::VectorXcd& v, int P);

/// Diagonal of T_P* T_P, the multiplicity of each generator entry in the
/// embedding: Gamma_ii = min(i, P+1, 2M+2-i, 2M-P+1), i = 1..2M+1.  The
/// last term only binds for P > M, where the embedding is wider than tall.
Eigen::VectorXd gamma_diag(int M, int P);

/// Left inverse of the embedding, T_P^dag = Gamma^-1 T_P*: recovers the
/// generating vector of a Toeplitz matrix, and maps a general matrix to the
/// generator of its closest Toeplitz matrix (diagonal averaging).
Eigen::VectorXcd toeplitz_pinv(const Eigen::MatrixXcd& X);

/// Best rank-K approximation in Frobenius norm (SVD truncation, ties broken
/// by keeping the earlier singular values in sorted order).
Eigen::MatrixXcd project_rank(const Eigen::MatrixXcd& X, int K);

/// Approximate projection onto vectors whose Toeplitz embedding T_P has
/// rank <= K: `iters` rounds of rank truncation followed by Toeplitz
/// re-projection, with an early exit once successive iterates differ by
/// less than 1e-10 in norm.
Eigen::VectorXcd map_project(const Eigen::VectorXcd& v, int K, int P, int iters);

/// Projected gradient descent on |G x - y|^2 over the rank-K constraint,
/// from a zero initial point with step 1 / (2 lambda_max(G* G)).  Each step
/// projects through map_project with the full-width embedding T_M.  Stops
/// once |x_n - x_{n-1}| <= epsilon |x_{n-1}| (zero previous iterate:
/// requires a zero current one) or at max_iter with converged = false.
CpgdRun cpgd_solve(const SampleSet& samples, const Eigen::MatrixXcd& G, const CpgdConfig& config);

/// Annihilating filter of the estimated coefficients: the right singular
/// vector of T_K(mhat) for its smallest singular value (total least
/// squares).  Flags degeneracy when the trailing singular values are not
/// separated, or when the coefficients vanish.
AnnihilatingFilter annihilating_filter(const FourierEstimate& estimate, int K);

/// Knot locations encoded by the filter roots: with H(z) = sum_k h_k z^{K-k},
/// each root u gives t = (-T arg(u) / 2 pi) mod T.  Roots with ||u|-1| > 0.5
/// are treated as spurious and dropped; leading zero taps deflate the degree.
std::vector<double> knots_from_filter(const Eigen::VectorXcd& h, double period);

/// Full pipeline: descend on the Fourier coefficients, extract knots, then
/// re-fit weights by solving the LASSO over the recovered knots with
/// lambda = sigma * |H^T y|_inf.  Atoms with |weight| <= 1e-10 are dropped.
std::pair<SparseMeasure, SolverReport> cpgd_reconstruct(const SampleSet& samples,
                                                        const GreensFunction& green,
                                                        const FourierSymbol& symbol,
                                                        const CpgdConfig& config,
                                                        const FistaConfig& fista_cfg, double sigma);

}  // namespace periorec
