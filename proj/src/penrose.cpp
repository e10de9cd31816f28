#include "elandau/penrose.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace elandau {

namespace {

using cplx = std::complex<double>;

// ∫_0^∞ e^{-lambda s} s^power |mu_hat(k s)| ds on panels no wider than half
// an oscillation period or two decay lengths.
cplx laplace_moment(const Equilibrium& eq, double k_abs, cplx lambda, int power) {
  const double re = std::max(0.0, lambda.real());
  const double cutoff = eq.laplace_cutoff(k_abs, re);
  const double decay_len = cutoff / 42.0;
  double h = 2.0 * decay_len;
  const double omega = std::abs(lambda.imag());
  if (omega > 0.0) h = std::min(h, kPi / omega);
  const auto panels = static_cast<std::size_t>(std::ceil(cutoff / h));
  auto f = [&](double s) -> cplx {
    const double weight = power == 1 ? s : s * s;
    return std::exp(-lambda * s) * (weight * std::abs(mu_hat(eq, k_abs * s)));
  };
  return integrate_panels(f, 0.0, cutoff, panels);
}

struct Symbol {
  std::function<cplx(double, cplx)> value;
  std::function<cplx(double, cplx)> derivative;
  double bound;  // |D - 1| <= bound / |lambda|² on the real axis
};

// Imaginary-axis nodes, quadratically clustered at omega = 0 where the
// symbol varies on the scale theta0 |k|.
std::vector<double> axis_nodes(double omega_max, int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = -1.0 + 2.0 * static_cast<double>(i) / (n - 1);
    w[static_cast<std::size_t>(i)] = omega_max * u * std::abs(u);
  }
  return w;
}

double default_omega_max(const Equilibrium& eq, double k_max) {
  if (eq.kind() == EquilibriumKind::PoissonFamily) return 50.0 * eq.theta0() * k_max;
  return 50.0 * std::sqrt(eq.temperature()) * k_max;
}

std::optional<cplx> newton_root(const Symbol& sym, double k, cplx start) {
  cplx z = start;
  for (int it = 0; it < 60; ++it) {
    const cplx d = sym.value(k, z);
    if (std::abs(d) < 1e-13) return z;
    const cplx dd = sym.derivative(k, z);
    if (std::abs(dd) == 0.0) return std::nullopt;
    cplx step = d / dd;
    if (std::abs(step) > 1.0) step *= 1.0 / std::abs(step);
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
  }
  return std::abs(sym.value(k, z)) < 1e-10 ? std::optional<cplx>(z) : std::nullopt;
}

// Largest real zero of D on [0, Λ]; D is real there for real mu_hat.
std::optional<double> real_axis_root(const Symbol& sym, double k) {
  const double lam_max = std::sqrt(sym.bound) + 1.0;
  constexpr int kSamples = 400;
  auto D = [&](double x) { return sym.value(k, cplx(x, 0.0)).real(); };
  std::optional<double> best;
  double prev_x = 0.0;
  double prev = D(0.0);
  if (prev == 0.0) best = 0.0;
  for (int i = 1; i <= kSamples; ++i) {
    const double x = lam_max * static_cast<double>(i) / kSamples;
    const double cur = D(x);
    if (cur == 0.0) {
      best = x;
    } else if ((prev < 0.0) != (cur < 0.0)) {
      boost::uintmax_t iters = 200;
      auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::max(1.0, std::abs(a)); };
      const auto r = boost::math::tools::toms748_solve(D, prev_x, x, prev, cur, tol, iters);
      best = 0.5 * (r.first + r.second);
    }
    prev_x = x;
    prev = cur;
  }
  return best;
}

PenroseReport scan_margin(const Symbol& sym, const std::vector<double>& k_range, double omega_max,
                          const PenroseScanOptions& opts, Exec exec) {
  PenroseReport rep;
  rep.k_range = k_range;
  rep.omega_max = omega_max;
  rep.tolerance = opts.tolerance;

  std::vector<cplx> lambdas;
  const auto axis = axis_nodes(omega_max, opts.n_scan);
  for (double w : axis) lambdas.emplace_back(0.0, w);
  rep.scan_resolution = 0.0;
  for (std::size_t i = 1; i < axis.size(); ++i) {
    rep.scan_resolution = std::max(rep.scan_resolution, axis[i] - axis[i - 1]);
  }
  if (opts.n_interior_im >= 2) {
    const auto inner = axis_nodes(omega_max, opts.n_interior_im);
    for (double re : opts.interior_re) {
      for (double w : inner) lambdas.emplace_back(re, w);
    }
  }

  const std::size_t nl = lambdas.size();
  const std::size_t total = nl * k_range.size();
  std::vector<double> modulus(total);
  auto eval = [&](std::size_t idx) {
    modulus[idx] = std::abs(sym.value(k_range[idx / nl], lambdas[idx % nl]));
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(total); ++idx) {
      eval(static_cast<std::size_t>(idx));
    }
  } else {
    for (std::size_t idx = 0; idx < total; ++idx) eval(idx);
  }

  const auto it = std::min_element(modulus.begin(), modulus.end());
  const auto best = static_cast<std::size_t>(it - modulus.begin());
  rep.kappa = *it;
  rep.argmin_k = k_range[best / nl];
  rep.argmin_lambda = lambdas[best % nl];

  // Golden-section polish along the imaginary axis around a boundary minimum.
  if (rep.argmin_lambda.real() == 0.0) {
    const std::size_t j = best % nl;
    const double lo = j > 0 ? axis[j - 1] : axis[j];
    const double hi = j + 1 < axis.size() ? axis[j + 1] : axis[j];
    auto g = [&](double w) { return std::abs(sym.value(rep.argmin_k, cplx(0.0, w))); };
    double a = lo, b = hi;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double gc = g(c), gd = g(d);
    for (int i = 0; i < 80 && b - a > 1e-12; ++i) {
      if (gc < gd) {
        b = d; d = c; gd = gc; c = b - phi * (b - a); gc = g(c);
      } else {
        a = c; c = d; gc = gd; d = a + phi * (b - a); gd = g(d);
      }
    }
    const double w = 0.5 * (a + b);
    const double gw = g(w);
    if (gw < rep.kappa) {
      rep.kappa = gw;
      rep.argmin_lambda = cplx(0.0, w);
    }
  }

  // Zeros in the closed right half-plane.
  for (double k : k_range) {
    if (auto r = real_axis_root(sym, k)) {
      if (!rep.root || *r > rep.root->real()) {
        rep.root = cplx(*r, 0.0);
        rep.argmin_k = k;
      }
    }
  }
  if (!rep.root) {
    if (auto z = newton_root(sym, rep.argmin_k, rep.argmin_lambda); z && z->real() >= 0.0) {
      rep.root = *z;
    }
  }
  if (rep.root) {
    rep.kappa = 0.0;
    rep.argmin_lambda = *rep.root;
  }
  rep.stable = rep.kappa > opts.tolerance;
  return rep;
}

}  // namespace

std::complex<double> dielectric(const Equilibrium& eq, Interaction sign, double k_abs,
                                std::complex<double> lambda) {
  if (lambda.real() < 0.0) throw DomainError("dielectric: Re(lambda) < 0");
  if (k_abs == 0.0) throw DomainError("dielectric: k = 0");
  return 1.0 - 4.0 * kPi * eps_F(sign) * laplace_moment(eq, k_abs, lambda, 1);
}

std::complex<double> dielectric_adapted(const Equilibrium& eq, double a_t0, double k_abs,
                                        std::complex<double> lambda) {
  if (lambda.real() < 0.0) throw DomainError("dielectric_adapted: Re(lambda) < 0");
  if (k_abs == 0.0) throw DomainError("dielectric_adapted: k = 0");
  const double pref = std::pow(a_t0, -(eq.dim() - 4.0));
  return 1.0 - 4.0 * kPi * pref * laplace_moment(eq, k_abs, lambda, 1);
}

PenroseReport penrose_margin(const Equilibrium& eq, Interaction sign, const PenroseScanOptions& opts,
                             Exec exec) {
  if (opts.k_max < 1.0) throw DomainError("penrose_margin: k_max must be >= 1");
  if (opts.n_scan < 64) throw DomainError("penrose_margin: n_scan must be >= 64");
  const int dim = opts.dim > 0 ? opts.dim : eq.dim();
  const double eps = eps_F(sign);
  Symbol sym;
  // Newton steps may wander slightly left of the axis; the moment integral
  // converges there as long as Re(lambda) > -theta0 |k|, so evaluate directly.
  sym.value = [&eq, eps](double k, cplx z) { return 1.0 - 4.0 * kPi * eps * laplace_moment(eq, k, z, 1); };
  sym.derivative = [&eq, eps](double k, cplx z) { return 4.0 * kPi * eps * laplace_moment(eq, k, z, 2); };
  sym.bound = 4.0 * kPi * mu_hat(eq, 0.0);
  const double omega_max = opts.omega_max > 0.0 ? opts.omega_max : default_omega_max(eq, opts.k_max);
  return scan_margin(sym, lattice_norms(dim, opts.k_max), omega_max, opts, exec);
}

PenroseReport adapted_margin_d5(const Equilibrium& eq, double a_t0, double k_max, PenroseScanOptions opts,
                                Exec exec) {
  if (eq.dim() < 5) throw DomainError("adapted_margin_d5: equilibrium dimension must be >= 5");
  if (!(a_t0 >= 1.0)) throw DomainError("adapted_margin_d5: a(t0) must be >= 1");
  if (k_max < 1.0) throw DomainError("adapted_margin_d5: k_max must be >= 1");
  opts.k_max = k_max;
  const double pref = std::pow(a_t0, -(eq.dim() - 4.0));
  Symbol sym;
  sym.value = [&eq, pref](double k, cplx z) { return 1.0 - 4.0 * kPi * pref * laplace_moment(eq, k, z, 1); };
  sym.derivative = [&eq, pref](double k, cplx z) { return 4.0 * kPi * pref * laplace_moment(eq, k, z, 2); };
  sym.bound = 4.0 * kPi * pref * mu_hat(eq, 0.0);
  const double omega_max = opts.omega_max > 0.0 ? opts.omega_max : default_omega_max(eq, k_max);
  return scan_margin(sym, lattice_norms(eq.dim(), k_max), omega_max, opts, exec);
}

double jeans_length(double temperature, double rho0) {
  if (!(temperature > 0.0) || !(rho0 > 0.0)) {
    throw DomainError("jeans_length: temperature and density must be positive");
  }
  return std::sqrt(4.0 * temperature / rho0);
}

std::vector<double> lattice_norms(int dim, double k_max) {
  if (dim < 1) throw DomainError("lattice_norms: dim must be >= 1");
  const auto n_max = static_cast<std::size_t>(std::floor(k_max * k_max + 1e-9));
  // reach[n]: n is a sum of `d` squares (zeros allowed).
  std::vector<char> reach(n_max + 1, 0);
  reach[0] = 1;
  for (int d = 0; d < dim; ++d) {
    std::vector<char> next(n_max + 1, 0);
    for (std::size_t n = 0; n <= n_max; ++n) {
      if (!reach[n]) continue;
      for (std::size_t j = 0; n + j * j <= n_max; ++j) next[n + j * j] = 1;
    }
    reach.swap(next);
  }
  std::vector<double> out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (reach[n]) out.push_back(std::sqrt(static_cast<double>(n)));
  }
  return out;
}

std::vector<DielectricSample> dielectric_trace(const Equilibrium& eq, Interaction sign,
                                               const PenroseScanOptions& opts) {
  const int dim = opts.dim > 0 ? opts.dim : eq.dim();
  const double omega_max = opts.omega_max > 0.0 ? opts.omega_max : default_omega_max(eq, opts.k_max);
  const auto axis = axis_nodes(omega_max, opts.n_scan);
  std::vector<DielectricSample> out;
  for (double k : lattice_norms(dim, opts.k_max)) {
    for (double w : axis) out.push_back({k, w, dielectric(eq, sign, k, {0.0, w})});
  }
  return out;
}

}  // namespace elandau
