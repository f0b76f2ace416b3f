#include "periorec/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace periorec {

namespace {

void check_period(double T) {
  if (!(T > 0.0)) throw std::invalid_argument("period must be > 0");
}

std::vector<double> parse_csv_rows(std::istream& in, const std::string& expected_header,
                                   std::vector<double>& second) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: empty input");
  if (line != expected_header)
    throw std::invalid_argument("csv: expected header '" + expected_header + "', got '" + line + "'");
  std::vector<double> first;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("csv: malformed row '" + line + "'");
    first.push_back(std::stod(line.substr(0, comma)));
    second.push_back(std::stod(line.substr(comma + 1)));
  }
  return first;
}

}  // namespace

double wrap_period(double t, double period) {
  check_period(period);
  double r = std::fmod(t, period);
  if (r < 0.0) r += period;
  return r;
}

double torus_distance(double a, double b, double period) {
  const double d = wrap_period(a - b, period);
  return std::min(d, period - d);
}

SparseMeasure SparseMeasure::from_innovations(std::vector<std::pair<double, double>> innovations,
                                              double period) {
  check_period(period);
  for (auto& [t, w] : innovations) t = wrap_period(t, period);
  std::sort(innovations.begin(), innovations.end());

  SparseMeasure m;
  m.period = period;
  for (const auto& [t, w] : innovations) {
    if (!m.knots.empty() && m.knots.back() == t) {
      m.weights.back() += w;
    } else {
      m.knots.push_back(t);
      m.weights.push_back(w);
    }
  }
  return m;
}

double SparseMeasure::tv_norm() const {
  double acc = 0.0;
  for (double w : weights) acc += std::abs(w);
  return acc;
}

SparseMeasure SparseMeasure::pruned(double tol) const {
  SparseMeasure m;
  m.period = period;
  for (std::size_t k = 0; k < knots.size(); ++k) {
    if (std::abs(weights[k]) > tol) {
      m.knots.push_back(knots[k]);
      m.weights.push_back(weights[k]);
    }
  }
  return m;
}

Eigen::MatrixXd matrix_H(std::span<const double> positions, std::span<const double> knots,
                         const GreensFunction& green) {
  Eigen::MatrixXd H(positions.size(), knots.size());
  for (Eigen::Index l = 0; l < H.rows(); ++l)
    for (Eigen::Index k = 0; k < H.cols(); ++k)
      H(l, k) = green(positions[static_cast<std::size_t>(l)] - knots[static_cast<std::size_t>(k)]);
  return H;
}

Eigen::MatrixXcd matrix_G(std::span<const double> positions, int M, const FourierSymbol& symbol,
                          const OperatorSpec& spec) {
  spec.validate();
  if (M < 0) throw std::invalid_argument("matrix_G: M must be >= 0");
  if (M > symbol.cutoff) throw std::invalid_argument("matrix_G: M exceeds the symbol cutoff");

  const double T = spec.period;
  Eigen::MatrixXcd G(positions.size(), 2 * M + 1);
  for (Eigen::Index l = 0; l < G.rows(); ++l) {
    const std::complex<double> w = std::polar(1.0, two_pi * positions[static_cast<std::size_t>(l)] / T);
    // Fill outwards from n = 0 so each row costs one polar() call.
    std::complex<double> zp = 1.0, zm = 1.0;
    G(l, M) = 1.0 / (T * symbol.at(0));
    for (int n = 1; n <= M; ++n) {
      zp *= w;
      zm *= std::conj(w);
      G(l, M + n) = zp / (T * symbol.at(n));
      G(l, M - n) = zm / (T * symbol.at(-n));
    }
  }
  return G;
}

Eigen::VectorXd forward(const SparseMeasure& measure, std::span<const double> positions,
                        const GreensFunction& green) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(positions.size()));
  for (std::size_t l = 0; l < positions.size(); ++l)
    for (std::size_t k = 0; k < measure.size(); ++k)
      y(static_cast<Eigen::Index>(l)) += measure.weights[k] * green(positions[l] - measure.knots[k]);
  return y;
}

double adjoint_eval(const Eigen::VectorXd& p, std::span<const double> positions,
                    const GreensFunction& green, double t) {
  if (static_cast<std::size_t>(p.size()) != positions.size())
    throw std::invalid_argument("adjoint_eval: p and positions disagree in length");
  double acc = 0.0;
  for (std::size_t l = 0; l < positions.size(); ++l)
    acc += p(static_cast<Eigen::Index>(l)) * green(positions[l] - t);
  return acc;
}

Eigen::VectorXcd fourier_coefficients(const SparseMeasure& measure, int M) {
  if (M < 0) throw std::invalid_argument("fourier_coefficients: M must be >= 0");
  Eigen::VectorXcd mhat(2 * M + 1);
  for (int n = -M; n <= M; ++n) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < measure.size(); ++k)
      acc += measure.weights[k] *
             std::polar(1.0, -two_pi * n * measure.knots[k] / measure.period);
    mhat(n + M) = acc;
  }
  return mhat;
}

SparseMeasure random_sparse_measure(int K0, std::uint64_t seed, double period) {
  check_period(period);
  if (K0 < 0) throw std::invalid_argument("random_sparse_measure: K0 must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, period);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<std::pair<double, double>> innovations(static_cast<std::size_t>(K0));
  for (auto& [t, w] : innovations) t = uniform(rng);
  for (auto& [t, w] : innovations) w = normal(rng);
  return SparseMeasure::from_innovations(std::move(innovations), period);
}

std::vector<double> random_positions(int L, std::uint64_t seed, double period) {
  check_period(period);
  if (L < 0) throw std::invalid_argument("random_positions: L must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, period);
  std::vector<double> positions(static_cast<std::size_t>(L));
  for (auto& p : positions) p = uniform(rng);
  std::sort(positions.begin(), positions.end());
  return positions;
}

std::vector<double> equispaced_positions(int L, double period) {
  check_period(period);
  if (L <= 0) throw std::invalid_argument("equispaced_positions: L must be > 0");
  std::vector<double> positions(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) positions[static_cast<std::size_t>(l)] = l * period / L;
  return positions;
}

Eigen::VectorXd add_noise(const Eigen::VectorXd& clean, double psnr_db, std::uint64_t seed) {
  const double peak = clean.size() > 0 ? clean.cwiseAbs().maxCoeff() : 0.0;
  const double omega = peak * std::exp(-psnr_db / 10.0);
  if (omega == 0.0) return clean;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, omega);
  Eigen::VectorXd noisy = clean;
  for (Eigen::Index l = 0; l < noisy.size(); ++l) noisy(l) += normal(rng);
  return noisy;
}

void write_measure_csv(std::ostream& out, const SparseMeasure& measure) {
  out << "knot,weight\n";
  char row[80];
  for (std::size_t k = 0; k < measure.size(); ++k) {
    std::snprintf(row, sizeof(row), "%.17g,%.17g\n", measure.knots[k], measure.weights[k]);
    out << row;
  }
}

SparseMeasure read_measure_csv(std::istream& in, double period) {
  std::vector<double> weights;
  std::vector<double> knots = parse_csv_rows(in, "knot,weight", weights);
  std::vector<std::pair<double, double>> innovations;
  innovations.reserve(knots.size());
  for (std::size_t k = 0; k < knots.size(); ++k) innovations.emplace_back(knots[k], weights[k]);
  return SparseMeasure::from_innovations(std::move(innovations), period);
}

void write_samples_csv(std::ostream& out, const SampleSet& samples) {
  out << "theta,y\n";
  char row[80];
  for (std::size_t l = 0; l < samples.positions.size(); ++l) {
    std::snprintf(row, sizeof(row), "%.17g,%.17g\n", samples.positions[l],
                  samples.values(static_cast<Eigen::Index>(l)));
    out << row;
  }
}

SampleSet read_samples_csv(std::istream& in, double period) {
  check_period(period);
  std::vector<double> values;
  SampleSet samples;
  samples.positions = parse_csv_rows(in, "theta,y", values);
  samples.values = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  samples.period = period;
  return samples;
}

}  // namespace periorec
