#pragma once

// Shared numerical plumbing: quadrature, regression, fixed-step RK4,
// uniform-grid interpolation, and deterministic number formatting.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace elandau {

/// Execution policy for the data-parallel kernels. `Serial` is the
/// reference path the parallel one is tested against.
enum class Exec { Serial, Parallel };

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when an operation is called outside its mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// ⟨x⟩ = sqrt(1 + x²)
inline double japanese_bracket(double x) { return std::sqrt(1.0 + x * x); }

/// Adaptive Gauss–Kronrod integral of a smooth real function on [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, double* error_estimate = nullptr);

/// Fixed-panel Gauss–Legendre (20-point) integral of a complex integrand.
std::complex<double> integrate_panels(const std::function<std::complex<double>(double)>& f,
                                      double a, double b, std::size_t panels);

struct TailIntegral {
  double head = 0.0;      // ∫_a^b f
  double tail = 0.0;      // power-law extrapolation of ∫_b^∞ f
  double exponent = 0.0;  // fitted decay exponent p in f ~ C x^{-p}
  bool finite = true;     // p > 1
  double total() const { return head + tail; }
};

/// ∫_a^∞ f for a nonnegative integrand with power-law decay, truncated at b
/// and completed by a power-law tail fitted from f near b.
TailIntegral integrate_with_power_tail(const std::function<double(double)>& f, double a, double b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// State (u, u') of a scalar second-order ODE.
struct OdeSample {
  double u = 0.0;
  double du = 0.0;
};

/// One classical RK4 step for u'' = accel(x, u, u').
OdeSample rk4_step(const std::function<double(double, double, double)>& accel, double x,
                   OdeSample s, double h);

/// Uniform, symmetric grid x_i = (i - n/2)·h, i = 0..n, with n even so that
/// x = 0 is a node and mirrored nodes are exact negatives of each other.
class SymmetricGrid {
 public:
  SymmetricGrid() = default;
  SymmetricGrid(double half_width, std::size_t intervals);

  std::size_t size() const { return intervals_ + 1; }
  std::size_t intervals() const { return intervals_; }
  double half_width() const { return half_width_; }
  double spacing() const { return h_; }
  double node(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(intervals_ / 2)) * h_;
  }
  std::size_t center() const { return intervals_ / 2; }
  bool contains(double x) const { return x >= -half_width_ && x <= half_width_; }

 private:
  double half_width_ = 0.0;
  std::size_t intervals_ = 0;
  double h_ = 0.0;
};

/// Four-point Lagrange interpolation on a SymmetricGrid; zero outside the
/// grid. The stencil is mirror-symmetric, so interpolating the reflected
/// data at -x reproduces the value at x exactly.
template <class T>
T interpolate_cubic(const SymmetricGrid& g, std::span<const T> values, double x) {
  if (!g.contains(x)) return T{};
  const std::size_t n = g.intervals();
  // Work at |x| and reflect indices for x < 0: the two halves then run the
  // same floating-point operations, which keeps the mirror property bitwise.
  const bool flip = x < 0.0;
  auto at = [&](std::size_t m) { return values[flip ? n - m : m]; };
  const double u = std::abs(x) / g.spacing() + static_cast<double>(n / 2);
  const double fl = std::floor(u);
  const auto j = static_cast<std::ptrdiff_t>(fl);
  if (fl == u) return at(static_cast<std::size_t>(j));
  std::ptrdiff_t base = j - 1;
  if (base > static_cast<std::ptrdiff_t>(n) - 3) base = static_cast<std::ptrdiff_t>(n) - 3;
  const double t = u - static_cast<double>(base) - 1.0;
  const double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
  const auto b = static_cast<std::size_t>(base);
  return w0 * at(b) + w1 * at(b + 1) + w2 * at(b + 2) + w3 * at(b + 3);
}

/// "%.17g" formatting, the fixed representation used in every CSV.
std::string format_g17(double v);

}  // namespace elandau
