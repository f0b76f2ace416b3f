#include "periorec/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace periorec {

namespace {

bool is_integer(double x) { return std::floor(x) == x; }

double frac(double x) { return x - std::floor(x); }

// Horner evaluation of sum_k a_k X^k.
double poly_eval(const std::vector<double>& a, double x) {
  double acc = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

void OperatorSpec::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("operator: alpha must be > 0");
  if (!(order > 1.0)) throw std::invalid_argument("operator: order must be > 1");
  if (!(period > 0.0)) throw std::invalid_argument("operator: period must be > 0");
}

bool OperatorSpec::has_integer_order() const {
  return order >= 1.0 && is_integer(order);
}

std::complex<double> FourierSymbol::at(int n) const {
  if (n < -cutoff || n > cutoff) throw std::out_of_range("symbol: |n| exceeds cutoff");
  return values[static_cast<std::size_t>(n + cutoff)];
}

FourierSymbol make_symbol(const OperatorSpec& spec, int cutoff) {
  spec.validate();
  if (cutoff < 0) throw std::invalid_argument("make_symbol: cutoff must be >= 0");

  FourierSymbol symbol;
  symbol.cutoff = cutoff;
  symbol.values.resize(2 * static_cast<std::size_t>(cutoff) + 1);
  for (int n = -cutoff; n <= cutoff; ++n) {
    const double w = two_pi * n / spec.period;
    std::complex<double> value;
    if (spec.family == OperatorFamily::exponential) {
      value = std::pow(std::complex<double>(spec.alpha, w), spec.order);
    } else {
      value = std::pow(spec.alpha * spec.alpha + w * w, spec.order / 2.0);
    }
    symbol.values[static_cast<std::size_t>(n + cutoff)] = value;
  }
  return symbol;
}

std::vector<double> exp_green_coeffs(double alpha, int N) {
  if (!(alpha > 0.0)) throw std::invalid_argument("exp_green_coeffs: alpha must be > 0");
  if (N < 1) throw std::invalid_argument("exp_green_coeffs: order must be >= 1");

  const double q = std::exp(-alpha);
  const double A = q / (1.0 - q);

  // b_k = k! a_k, filled from the top coefficient downwards.
  std::vector<double> b(static_cast<std::size_t>(N), 0.0);
  b[static_cast<std::size_t>(N - 1)] = 1.0 / (1.0 - q);
  for (int k = 2; k <= N; ++k) {
    double acc = 0.0;
    double fact = 1.0;
    for (int i = 1; i <= k - 1; ++i) {
      fact *= i;
      acc += b[static_cast<std::size_t>(N - k + i)] / fact;
    }
    b[static_cast<std::size_t>(N - k)] = A * acc;
  }

  std::vector<double> a(b);
  double fact = 1.0;
  for (int k = 2; k < N; ++k) {
    fact *= k;
    a[static_cast<std::size_t>(k)] /= fact;
  }
  return a;
}

double green_eval_closed_form(double alpha, int N, double period, double t) {
  if (!(period > 0.0)) throw std::invalid_argument("green_eval_closed_form: period must be > 0");
  const double rate = alpha * period;           // unit-period rate
  const auto a = exp_green_coeffs(rate, N);     // validates alpha and N
  const double u = frac(t / period);
  return std::pow(period, N - 1) * poly_eval(a, u) * std::exp(-rate * u);
}

double green_eval_fourier(const FourierSymbol& symbol, const OperatorSpec& spec, double t) {
  spec.validate();
  const double T = spec.period;
  const std::complex<double> w = std::polar(1.0, two_pi * t / T);

  // sum_{|n| <= M_c} (1 / (T Dhat[n])) w^n, powers by recurrence
  std::complex<double> acc = 1.0 / (T * symbol.at(0));
  std::complex<double> zp = 1.0, zm = 1.0;
  for (int n = 1; n <= symbol.cutoff; ++n) {
    zp *= w;
    zm *= std::conj(w);
    acc += zp / (T * symbol.at(n)) + zm / (T * symbol.at(-n));
  }

  if (std::abs(acc.imag()) > 1e-8 * (1.0 + std::abs(acc.real())))
    throw std::runtime_error("green_eval_fourier: series has a non-real limit; "
                             "symbol is not conjugate-symmetric");
  return acc.real();
}

int cutoff_for_energy(const OperatorSpec& spec, double fraction) {
  spec.validate();
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("cutoff_for_energy: fraction must lie in (0, 1)");

  constexpr int n_big = 1 << 16;
  const FourierSymbol symbol = make_symbol(spec, n_big);

  auto term = [&](int n) {
    const double m = std::abs(symbol.at(n));
    return 1.0 / (m * m);
  };

  double total = term(0);
  for (int n = 1; n <= n_big; ++n) total += term(n) + term(-n);

  double partial = term(0);
  if (partial >= fraction * total) return 0;
  for (int n = 1; n <= n_big; ++n) {
    partial += term(n) + term(-n);
    if (partial >= fraction * total) return n;
  }
  return n_big;
}

GreensFunction GreensFunction::fourier_truncated(const OperatorSpec& spec, int cutoff) {
  spec.validate();
  GreensFunction g;
  g.spec_ = spec;
  g.closed_form_ = false;
  g.symbol_ = make_symbol(spec, cutoff);
  return g;
}

GreensFunction GreensFunction::exponential_closed_form(const OperatorSpec& spec) {
  spec.validate();
  if (spec.family != OperatorFamily::exponential || !spec.has_integer_order())
    throw std::invalid_argument(
        "GreensFunction: closed form requires the exponential family with integer order");
  GreensFunction g;
  g.spec_ = spec;
  g.closed_form_ = true;
  const int N = static_cast<int>(spec.order);
  g.poly_ = exp_green_coeffs(spec.alpha * spec.period, N);
  g.scale_ = std::pow(spec.period, N - 1);
  return g;
}

GreensFunction GreensFunction::make(const OperatorSpec& spec, int cutoff) {
  if (spec.family == OperatorFamily::exponential && spec.has_integer_order() && spec.order > 1.0)
    return exponential_closed_form(spec);
  return fourier_truncated(spec, cutoff);
}

double GreensFunction::operator()(double t) const {
  if (closed_form_) {
    const double u = frac(t / spec_.period);
    return scale_ * poly_eval(poly_, u) * std::exp(-spec_.alpha * spec_.period * u);
  }
  return green_eval_fourier(symbol_, spec_, t);
}

}  // namespace periorec
