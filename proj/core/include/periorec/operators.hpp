#pragma once

#include <complex>
#include <numbers>
#include <vector>

namespace periorec {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Families of periodic pseudo-differential operators admitting sparse
/// spline reconstructions.  Both act diagonally on the Fourier basis
/// e_n(t) = exp(i 2 pi n t / T):
///
///   exponential: Dhat[n] = (i w_n + alpha)^gamma,     w_n = 2 pi n / T
///   sobolev:     Dhat[n] = (alpha^2 + w_n^2)^(gamma/2)
///
/// with alpha > 0 and order gamma > 1 so the Green's function below is a
/// continuous periodic function.  Non-integer orders use the principal
/// branch of the complex power.
enum class OperatorFamily { exponential, sobolev };

struct OperatorSpec {
  OperatorFamily family = OperatorFamily::exponential;
  double alpha = 1.0;   ///< spectral shift, > 0 (keeps Dhat invertible)
  double order = 2.0;   ///< gamma, > 1
  double period = two_pi;

  /// Throws std::invalid_argument unless alpha > 0, order > 1, period > 0.
  void validate() const;

  /// True when the order is an integer >= 1 written as a double, in which
  /// case the exponential family admits a closed-form Green's function.
  bool has_integer_order() const;
};

/// Dense table of symbol values Dhat[n] for |n| <= cutoff.
struct FourierSymbol {
  int cutoff = 0;  ///< M_c
  std::vector<std::complex<double>> values;  ///< index n + cutoff, size 2*cutoff+1

  std::complex<double> at(int n) const;
};

/// Evaluates the symbol of `spec` on |n| <= cutoff.
FourierSymbol make_symbol(const OperatorSpec& spec, int cutoff);

/// Coefficients a_0..a_{N-1} of the polynomial part of the Green's function
/// of (d/dt + alpha)^N on the unit-period torus:
///
///   psi(t) = P_{N-1}(t - floor(t)) exp(-alpha (t - floor(t))),
///   P_{N-1}(X) = sum_k a_k X^k.
///
/// With q = exp(-alpha) and A = q / (1 - q), the coefficients follow the
/// recursion (b_k = k! a_k)
///
///   b_{N-1} = 1 / (1 - q),
///   b_{N-k} = A * sum_{i=1}^{k-1} b_{N-k+i} / i!,   k = 2..N,
///
/// which also gives the ladder identity P_N' = P_{N-1} across orders.
std::vector<double> exp_green_coeffs(double alpha, int N);

/// Closed-form Green's function of (d/dt + alpha)^N with period T.  Values
/// for arbitrary T come from the unit-period formula by rescaling:
/// psi_T(t) = T^(N-1) psi_1(t / T) with shifted rate alpha' = alpha * T.
double green_eval_closed_form(double alpha, int N, double period, double t);

/// Truncated-Fourier evaluation of the Green's function:
///   psi(t) = Re sum_{|n| <= M_c} (1 / (T Dhat[n])) exp(i 2 pi n t / T).
/// The imaginary part of the sum is checked to be numerically zero (the
/// symbols of real operators are conjugate-symmetric) and discarded.
double green_eval_fourier(const FourierSymbol& symbol, const OperatorSpec& spec, double t);

/// Smallest cutoff M_c such that the energy sum_{|n| <= M_c} |1/Dhat[n]|^2
/// reaches `fraction` (in (0,1)) of the reference total at N_big = 65536.
int cutoff_for_energy(const OperatorSpec& spec, double fraction);

/// Evaluable Green's function psi of an operator, either as a truncated
/// Fourier series (any family) or in closed form (exponential family with
/// integer order).  Cheap to copy; evaluation is pure.
class GreensFunction {
 public:
  static GreensFunction fourier_truncated(const OperatorSpec& spec, int cutoff);
  static GreensFunction exponential_closed_form(const OperatorSpec& spec);

  /// Builds the preferred representation: closed form when available,
  /// otherwise a Fourier truncation at `cutoff`.
  static GreensFunction make(const OperatorSpec& spec, int cutoff = 2048);

  double operator()(double t) const;
  double period() const { return spec_.period; }
  const OperatorSpec& spec() const { return spec_; }

 private:
  GreensFunction() = default;

  OperatorSpec spec_;
  bool closed_form_ = false;
  // closed-form state: P_{N-1} coefficients at rate alpha * T, plus scale T^(N-1)
  std::vector<double> poly_;
  double scale_ = 1.0;
  // Fourier state
  FourierSymbol symbol_;
};

}  // namespace periorec
