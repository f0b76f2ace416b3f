#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "periorec/operators.hpp"

namespace periorec {

struct SaturationPoint {
  double t = 0.0;
  int sign = 0;          ///< sgn(eta) at the point
  bool plateau = false;  ///< the saturation region is flat rather than peaked
};

struct SaturationSet {
  std::vector<SaturationPoint> points;  ///< sorted by t
};

/// Locations where a dual certificate saturates, |eta(t)| >= 1 - tol.
/// The grid scan groups super-threshold samples into circularly connected
/// regions; each region contributes one refined extremum (regions spanning
/// several flat cells are flagged as plateaus).  Requires the certificate
/// to be feasible up to tolerance, max |eta| <= 1 + tol.
SaturationSet saturation_points(const std::function<double(double)>& eta, double period,
                                int grid_points, double tol = 1e-6);

/// Upper bound on the number of saturation points of a feasible certificate
/// built from L sampling functionals of an order-N operator: L * N.
int saturation_bound(int L, int N);

struct UniquenessCheck {
  Eigen::MatrixXd matrix;  ///< Psi[l, p] = psi(theta_l - tau_p)
  bool full_rank = false;  ///< full column rank at relative threshold 1e-8
  double min_sv = 0.0;
  double max_sv = 0.0;
};

/// Injectivity test for the sampling of splines with knots restricted to
/// the candidate saturation locations tau: the recovery problem has a
/// unique solution supported there when Psi has full column rank.
UniquenessCheck uniqueness_matrix(std::span<const double> positions, std::span<const double> taus,
                                  const GreensFunction& green);

}  // namespace periorec
