#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "periorec/cpgd.hpp"
#include "periorec/fista.hpp"
#include "periorec/frank_wolfe.hpp"
#include "periorec/operators.hpp"
#include "periorec/sampling.hpp"

using namespace periorec;

namespace {

const OperatorSpec kSpec{OperatorFamily::exponential, 3.0, 2.0, two_pi};

void BM_GreenClosedForm(benchmark::State& state) {
  const GreensFunction green = GreensFunction::exponential_closed_form(kSpec);
  double t = 0.123;
  for (auto _ : state) {
    benchmark::DoNotOptimize(green(t));
    t += 1e-4;
  }
}
BENCHMARK(BM_GreenClosedForm);

void BM_GreenFourier(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  const FourierSymbol symbol = make_symbol(kSpec, cutoff);
  double t = 0.123;
  for (auto _ : state) {
    benchmark::DoNotOptimize(green_eval_fourier(symbol, kSpec, t));
    t += 1e-4;
  }
}
BENCHMARK(BM_GreenFourier)->Arg(256)->Arg(2048);

void BM_MatrixH(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GreensFunction green = GreensFunction::make(kSpec);
  const std::vector<double> positions = random_positions(33, 1, two_pi);
  const std::vector<double> knots = equispaced_positions(n, two_pi);
  for (auto _ : state) benchmark::DoNotOptimize(matrix_H(positions, knots, green));
}
BENCHMARK(BM_MatrixH)->Arg(300)->Arg(1024);

void BM_FistaSolve(benchmark::State& state) {
  const GreensFunction green = GreensFunction::make(kSpec);
  const SparseMeasure truth = random_sparse_measure(4, 11, two_pi);
  SampleSet samples;
  samples.period = two_pi;
  samples.positions = random_positions(33, 12, two_pi);
  samples.values = forward(truth, samples.positions, green);
  const Eigen::MatrixXd H =
      matrix_H(samples.positions, equispaced_positions(300, two_pi), green);
  FistaConfig config;
  config.lambda = 0.1 * lambda_max_grid(H, samples.values);
  config.max_iter = 500;
  for (auto _ : state) benchmark::DoNotOptimize(fista_solve(H, samples.values, config));
}
BENCHMARK(BM_FistaSolve);

void BM_MapProject(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const SparseMeasure truth = random_sparse_measure(3, 21, two_pi);
  const Eigen::VectorXcd mhat = fourier_coefficients(truth, M);
  for (auto _ : state) benchmark::DoNotOptimize(map_project(mhat, 3, M, 10));
}
BENCHMARK(BM_MapProject)->Arg(8)->Arg(16);

void BM_CertificateGrid(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  const GreensFunction green = GreensFunction::make(kSpec);
  const SparseMeasure truth = random_sparse_measure(4, 31, two_pi);
  SampleSet samples;
  samples.period = two_pi;
  samples.positions = random_positions(33, 32, two_pi);
  samples.values = forward(truth, samples.positions, green);
  const double lambda = 0.1 * samples.values.cwiseAbs().maxCoeff();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        certificate_argmax(samples.values, samples, green, lambda, grid));
}
BENCHMARK(BM_CertificateGrid)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
