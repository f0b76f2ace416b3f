#include "periorec/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "periorec/sampling.hpp"

namespace periorec {

namespace {

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

}  // namespace

SaturationSet saturation_points(const std::function<double(double)>& eta, double period,
                                int grid_points, double tol) {
  if (!(period > 0.0)) throw std::invalid_argument("saturation_points: period must be > 0");
  if (grid_points < 4) throw std::invalid_argument("saturation_points: grid too coarse");
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("saturation_points: tol must be in (0, 1)");

  const double h = period / grid_points;
  std::vector<double> magnitude(static_cast<std::size_t>(grid_points));
  for (int j = 0; j < grid_points; ++j) magnitude[static_cast<std::size_t>(j)] = std::abs(eta(j * h));

  const double peak = *std::max_element(magnitude.begin(), magnitude.end());
  if (peak > 1.0 + tol)
    throw std::invalid_argument("saturation_points: certificate exceeds 1 + tol (infeasible)");

  auto saturated = [&](int j) { return magnitude[static_cast<std::size_t>(j)] >= 1.0 - tol; };

  // Collect circularly connected runs of saturated grid cells as index
  // intervals [a, b] (b may exceed grid_points when the run wraps).
  std::vector<std::pair<int, int>> regions;
  const bool all = std::all_of(magnitude.begin(), magnitude.end(),
                               [&](double m) { return m >= 1.0 - tol; });
  if (all) {
    regions.emplace_back(0, grid_points - 1);
  } else {
    int start = 0;
    while (saturated(start)) ++start;  // rotate to an unsaturated cell
    for (int k = 0; k < grid_points; ++k) {
      const int j = (start + k) % grid_points;
      if (!saturated(j)) continue;
      int end = k;
      while (end + 1 < grid_points && saturated((start + end + 1) % grid_points)) ++end;
      regions.emplace_back(start + k, start + end);
      k = end;
    }
  }

  SaturationSet set;
  for (const auto& [a, b] : regions) {
    const double lo = a * h - h;
    const double hi = b * h + h;
    const double t = golden_max([&](double x) { return std::abs(eta(x)); }, lo, hi);

    double lowest = 2.0, highest = 0.0;
    for (int j = a; j <= b; ++j) {
      const double m = magnitude[static_cast<std::size_t>(j % grid_points)];
      lowest = std::min(lowest, m);
      highest = std::max(highest, m);
    }

    SaturationPoint point;
    point.t = wrap_period(t, period);
    point.sign = eta(t) >= 0.0 ? 1 : -1;
    point.plateau = (b - a + 1 >= 3) && (highest - lowest <= 0.1 * tol);
    set.points.push_back(point);
  }

  std::sort(set.points.begin(), set.points.end(),
            [](const SaturationPoint& x, const SaturationPoint& y) { return x.t < y.t; });
  return set;
}

int saturation_bound(int L, int N) {
  if (L < 0 || N < 1) throw std::invalid_argument("saturation_bound: need L >= 0 and N >= 1");
  return L * N;
}

UniquenessCheck uniqueness_matrix(std::span<const double> positions, std::span<const double> taus,
                                  const GreensFunction& green) {
  UniquenessCheck check;
  check.matrix = matrix_H(positions, taus, green);
  if (taus.empty()) {
    check.full_rank = true;  // vacuously injective
    return check;
  }
  if (positions.empty()) return check;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(check.matrix);
  const auto& s = svd.singularValues();
  check.max_sv = s(0);
  check.min_sv = s(s.size() - 1);
  check.full_rank = taus.size() <= positions.size() && check.min_sv > 1e-8 * check.max_sv;
  return check;
}

}  // namespace periorec
