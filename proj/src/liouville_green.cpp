#include "elandau/liouville_green.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace elandau {

namespace odeint = boost::numeric::odeint;

LGBasis::LGBasis(RealFn a, double lo, double hi, std::optional<RealFn> inv_quarter_root_dd,
                 std::optional<RealFn> a_prime)
    : a_(std::move(a)), lo_(lo), hi_(hi), dd_(std::move(inv_quarter_root_dd)), da_(std::move(a_prime)) {
  if (!(hi > lo)) throw DomainError("LGBasis: empty interval");
  // Spot check positivity; a turning point would break the phase.
  for (int i = 0; i <= 64; ++i) {
    const double x = lo + (hi - lo) * i / 64.0;
    if (!(a_(x) > 0.0)) throw DomainError("LGBasis: coefficient must be positive on the interval");
  }
}

double LGBasis::require(double x, const char* what) const {
  if (!contains(x)) {
    std::ostringstream os;
    os << what << ": x = " << x << " outside [" << lo_ << ", " << hi_ << "]";
    throw DomainError(os.str());
  }
  return x;
}

namespace {

double fd_step(double x) { return 1e-4 * std::max(1.0, std::abs(x)); }

}  // namespace

double LGBasis::a_prime(double x) const {
  if (da_) return (*da_)(x);
  const double h = fd_step(x);
  if (x - h < lo_) return (-3.0 * a_(x) + 4.0 * a_(x + h) - a_(x + 2.0 * h)) / (2.0 * h);
  return (a_(x + h) - a_(x - h)) / (2.0 * h);
}

double LGBasis::inv_quarter_root_dd(double x) const {
  if (dd_) return (*dd_)(x);
  auto f = [&](double y) { return std::pow(a_(y), -0.25); };
  const double h = fd_step(x);
  if (x - h < lo_) return (f(x) - 2.0 * f(x + h) + f(x + 2.0 * h)) / (h * h);
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

double LGBasis::phase(double x) const {
  require(x, "LGBasis::phase");
  if (x == lo_) return 0.0;
  return integrate_adaptive([&](double y) { return std::sqrt(a_(y)); }, lo_, x, 1e-12);
}

std::vector<double> LGBasis::phase_on(std::span<const double> nodes) const {
  std::vector<double> out(nodes.size());
  double prev = lo_;
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    require(nodes[i], "LGBasis::phase_on");
    if (nodes[i] < prev) throw DomainError("LGBasis::phase_on: nodes must be ascending");
    if (nodes[i] > prev) {
      acc += integrate_adaptive([&](double y) { return std::sqrt(a_(y)); }, prev, nodes[i], 1e-12);
    }
    out[i] = acc;
    prev = nodes[i];
  }
  return out;
}

double LGBasis::variation_density(double x) const {
  return std::pow(a_(x), -0.25) * std::abs(inv_quarter_root_dd(x));
}

LGBasis lg_basis_for_model(const ScaleFactorModel& model, double scale, double lo, double hi) {
  if (!(scale > 0.0)) throw DomainError("lg_basis_for_model: scale must be positive");
  if (lo < 0.0) throw DomainError("lg_basis_for_model: interval must lie in tau >= 0");
  auto a = [model, scale](double tau) { return scale * model.a_of_T(tau); };
  const double s14 = std::pow(scale, -0.25);
  auto dd = [model, s14](double tau) { return s14 * model.inv_quarter_root_dd(tau); };
  auto da = [model, scale](double tau) -> double {
    if (model.kind() == ExpansionKind::Constant || model.q() == 0.0) return 0.0;
    const double q = model.q();
    if (q == 0.5) return 0.5 * scale * model.a_of_T(tau);
    // d/dtau B^{q/e} = q B^{q/e - 1}
    const double e = 1.0 - 2.0 * q;
    const double B = e * tau + std::pow(model.t0(), e);
    return scale * q * std::pow(B, q / e - 1.0);
  };
  return LGBasis(a, lo, hi, RealFn(dd), RealFn(da));
}

std::pair<double, double> lg_fundamental(const LGBasis& basis, double x) {
  const double xi = basis.phase(x);
  const double amp = std::pow(basis.a(x), -0.25);
  return {amp * std::sin(xi), amp * std::cos(xi)};
}

LGBudget lg_error_budget(const LGBasis& basis, double x) {
  if (!basis.contains(x)) throw DomainError("lg_error_budget: x outside the interval");
  LGBudget b;
  if (x > basis.lo()) {
    b.variation = integrate_adaptive([&](double y) { return basis.variation_density(y); }, basis.lo(), x, 1e-13);
  }
  b.bound = std::expm1(b.variation);
  return b;
}

std::vector<LGBudget> lg_error_budget_on(const LGBasis& basis, std::span<const double> nodes) {
  std::vector<LGBudget> out(nodes.size());
  double prev = basis.lo();
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!basis.contains(nodes[i]) || nodes[i] < prev) {
      throw DomainError("lg_error_budget_on: nodes must be ascending inside the interval");
    }
    if (nodes[i] > prev) {
      acc += integrate_adaptive([&](double y) { return basis.variation_density(y); }, prev, nodes[i], 1e-13);
    }
    out[i] = {acc, std::expm1(acc)};
    prev = nodes[i];
  }
  return out;
}

std::vector<OdeSample> reference_ivp(const LGBasis& basis, const RealFn& q_source, OdeSample v0,
                                     std::span<const double> nodes, const IvpOptions& opts) {
  if (nodes.empty()) return {};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!basis.contains(nodes[i])) throw DomainError("reference_ivp: node outside the interval");
    if (i > 0 && !(nodes[i] > nodes[i - 1])) throw DomainError("reference_ivp: nodes must be strictly ascending");
  }
  std::vector<OdeSample> out(nodes.size());
  out[0] = v0;

  if (opts.method == IvpMethod::FixedRK4) {
    if (!(opts.fixed_step > 0.0)) throw DomainError("reference_ivp: fixed_step must be positive");
    auto accel = [&](double x, double u, double) { return q_source(x) - basis.a(x) * u; };
    OdeSample st = v0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const double span = nodes[i] - nodes[i - 1];
      const auto m = static_cast<int>(std::ceil(span / opts.fixed_step - 1e-9));
      const double h = span / m;
      double x = nodes[i - 1];
      for (int k = 0; k < m; ++k) {
        st = rk4_step(accel, x, st, h);
        x = nodes[i - 1] + (k + 1) * h;
      }
      out[i] = st;
    }
    return out;
  }

  using State = std::array<double, 2>;
  auto sys = [&](const State& y, State& dy, double x) {
    dy[0] = y[1];
    dy[1] = q_source(x) - basis.a(x) * y[0];
  };
  State y{v0.u, v0.du};
  std::size_t idx = 0;
  auto observe = [&](const State& s, double) {
    out[idx] = {s[0], s[1]};
    ++idx;
  };
  auto stepper = odeint::make_dense_output(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>());
  const double dt0 = nodes.size() > 1 ? std::min(1e-3, nodes[1] - nodes[0]) : 1e-3;
  try {
    odeint::integrate_times(stepper, sys, y, nodes.begin(), nodes.end(), dt0, observe,
                            odeint::max_step_checker(1000000));
  } catch (const std::runtime_error& e) {
    std::ostringstream os;
    os << "reference_ivp: step control failed after node " << (idx == 0 ? 0 : idx - 1) << " (x = "
       << nodes[idx == 0 ? 0 : idx - 1] << "): " << e.what();
    throw std::runtime_error(os.str());
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i].u) || !std::isfinite(out[i].du)) {
      std::ostringstream os;
      os << "reference_ivp: non-finite state at x = " << nodes[i];
      throw std::runtime_error(os.str());
    }
  }
  return out;
}

std::pair<std::vector<OdeSample>, std::vector<OdeSample>> reference_fundamental_pair(
    const LGBasis& basis, std::span<const double> nodes, const IvpOptions& opts) {
  if (nodes.empty()) return {};
  const double x0 = nodes[0];
  const double a0 = basis.a(x0);
  const OdeSample d1{0.0, std::pow(a0, 0.25)};
  const OdeSample d2{std::pow(a0, -0.25), -0.25 * basis.a_prime(x0) * std::pow(a0, -1.25)};
  const RealFn zero = [](double) { return 0.0; };
  return {reference_ivp(basis, zero, d1, nodes, opts), reference_ivp(basis, zero, d2, nodes, opts)};
}

double wronskian_defect(std::span<const OdeSample> w1, std::span<const OdeSample> w2) {
  if (w1.size() != w2.size()) throw DomainError("wronskian_defect: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < w1.size(); ++i) {
    worst = std::max(worst, std::abs(w1[i].u * w2[i].du - w2[i].u * w1[i].du + 1.0));
  }
  return worst;
}

double wronskian_defect(const RealFn& w1, const RealFn& w2, std::span<const double> nodes, double h) {
  double worst = 0.0;
  for (double x : nodes) {
    const double d1 = (w1(x + h) - w1(x - h)) / (2.0 * h);
    const double d2 = (w2(x + h) - w2(x - h)) / (2.0 * h);
    worst = std::max(worst, std::abs(w1(x) * d2 - w2(x) * d1 + 1.0));
  }
  return worst;
}

std::vector<double> inhomogeneous_vp(std::span<const double> w1, std::span<const double> w2,
                                     const RealFn& q_source, std::span<const double> nodes) {
  if (w1.size() != nodes.size() || w2.size() != nodes.size()) {
    throw DomainError("inhomogeneous_vp: w1, w2 and nodes must have the same length");
  }
  std::vector<double> out(nodes.size(), 0.0);
  double i1 = 0.0, i2 = 0.0;
  double prev_q = nodes.empty() ? 0.0 : q_source(nodes[0]);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double qi = q_source(nodes[i]);
    const double h = nodes[i] - nodes[i - 1];
    i1 += 0.5 * h * (w1[i - 1] * prev_q + w1[i] * qi);
    i2 += 0.5 * h * (w2[i - 1] * prev_q + w2[i] * qi);
    out[i] = -w2[i] * i1 + w1[i] * i2;
    prev_q = qi;
  }
  return out;
}

}  // namespace elandau
