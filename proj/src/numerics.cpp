#include "elandau/numerics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cstdio>
#include <limits>

namespace elandau {

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double* error_estimate) {
  if (a == b) {
    if (error_estimate) *error_estimate = 0.0;
    return 0.0;
  }
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 15, rel_tol, &err);
  if (error_estimate) *error_estimate = err;
  return v;
}

std::complex<double> integrate_panels(const std::function<std::complex<double>(double)>& f,
                                      double a, double b, std::size_t panels) {
  using gl = boost::math::quadrature::gauss<double, 20>;
  const auto& x = gl::abscissa();
  const auto& w = gl::weights();
  if (panels == 0) panels = 1;
  const double h = (b - a) / static_cast<double>(panels);
  std::complex<double> total{0.0, 0.0};
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * h;
    const double half = 0.5 * h;
    // Boost stores only the nonnegative half of the rule.
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0.0) {
        acc += w[i] * f(mid);
      } else {
        acc += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
      }
    }
    total += half * acc;
  }
  return total;
}

TailIntegral integrate_with_power_tail(const std::function<double(double)>& f, double a, double b) {
  TailIntegral out;
  out.head = integrate_adaptive(f, a, b, 1e-13);
  const double x1 = 0.5 * b;
  const double f1 = f(x1);
  const double f2 = f(b);
  if (f2 <= 0.0 || f1 <= 0.0) {
    // Identically vanishing (or sign-free negligible) tail.
    out.tail = 0.0;
    out.exponent = std::numeric_limits<double>::infinity();
    out.finite = true;
    return out;
  }
  out.exponent = -std::log(f2 / f1) / std::log(b / x1);
  out.finite = out.exponent > 1.0;
  out.tail = out.finite ? f2 * b / (out.exponent - 1.0) : std::numeric_limits<double>::infinity();
  return out;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need at least two paired samples");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissa");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  if (fit.r2 > 1.0) fit.r2 = 1.0;
  return fit;
}

OdeSample rk4_step(const std::function<double(double, double, double)>& accel, double x,
                   OdeSample s, double h) {
  const double k1u = s.du;
  const double k1v = accel(x, s.u, s.du);
  const double k2u = s.du + 0.5 * h * k1v;
  const double k2v = accel(x + 0.5 * h, s.u + 0.5 * h * k1u, k2u);
  const double k3u = s.du + 0.5 * h * k2v;
  const double k3v = accel(x + 0.5 * h, s.u + 0.5 * h * k2u, k3u);
  const double k4u = s.du + h * k3v;
  const double k4v = accel(x + h, s.u + h * k3u, k4u);
  return {s.u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
          s.du + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

SymmetricGrid::SymmetricGrid(double half_width, std::size_t intervals)
    : half_width_(half_width), intervals_(intervals) {
  if (!(half_width > 0.0)) throw DomainError("SymmetricGrid: half width must be positive");
  if (intervals < 4 || intervals % 2 != 0) {
    throw DomainError("SymmetricGrid: need an even interval count >= 4");
  }
  h_ = 2.0 * half_width / static_cast<double>(intervals);
}

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace elandau
