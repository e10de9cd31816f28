#include "elandau/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace elandau {

TauGrid::TauGrid(double tau_max, std::size_t n) : tau_max_(tau_max), n_(n), step_(0.0) {
  if (!(tau_max > 0.0)) throw DomainError("TauGrid: tau_max must be positive");
  if (n < 1) throw DomainError("TauGrid: need at least one interval");
  step_ = tau_max / static_cast<double>(n);
}

std::vector<double> TauGrid::nodes() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = node(i);
  return out;
}

KernelFn mode_kernel(const Equilibrium& eq, const ScaleFactorModel& model, Interaction sign,
                     double k_abs, double dim_power) {
  if (k_abs == 0.0) throw DomainError("mode_kernel: k = 0 has no kernel");
  return [eq, model, sign, k_abs, dim_power](double tau, double tau_tilde) {
    return kernel_K(eq, model, sign, k_abs, tau, tau_tilde, dim_power);
  };
}

namespace {

// Lower triangle K(tau_i, tau_m), m <= i, packed by rows.
class KernelSamples {
 public:
  KernelSamples(const KernelFn& k, const TauGrid& g) : data_(g.size() * (g.size() + 1) / 2) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t m = 0; m <= i; ++m) data_[row(i) + m] = k(g.node(i), g.node(m));
    }
  }
  double operator()(std::size_t i, std::size_t m) const { return data_[row(i) + m]; }

 private:
  static std::size_t row(std::size_t i) { return i * (i + 1) / 2; }
  std::vector<double> data_;
};

// phi_i = s_i + h (½K(i,j0)phi_j0 + Σ K(i,m)phi_m + ½K(i,i)phi_i), i > j0;
// phi_j0 = s_j0. out and src are indexed from j0.
template <class K>
void march(const K& kern, const double* src, std::size_t j0, std::size_t last, double h, double* out) {
  out[0] = src[0];
  for (std::size_t i = j0 + 1; i <= last; ++i) {
    double acc = 0.5 * kern(i, j0) * out[0];
    for (std::size_t m = j0 + 1; m < i; ++m) acc += kern(i, m) * out[m - j0];
    const double diag = 1.0 - 0.5 * h * kern(i, i);
    if (std::abs(diag) < 1e-12) {
      std::ostringstream os;
      os << "solve_volterra: singular step at node " << i;
      throw SingularStepError(os.str());
    }
    out[i - j0] = (src[i - j0] + h * acc) / diag;
  }
}

}  // namespace

std::vector<double> solve_volterra(const KernelFn& kernel, std::span<const double> source,
                                   const TauGrid& grid) {
  if (source.size() != grid.size()) throw DomainError("solve_volterra: source/grid size mismatch");
  const KernelSamples ks(kernel, grid);
  std::vector<double> out(grid.size());
  march(ks, source.data(), 0, grid.intervals(), grid.step(), out.data());
  return out;
}

std::vector<double> solve_volterra(const KernelFn& kernel, const SourceFn& source, const TauGrid& grid) {
  std::vector<double> s(grid.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = source(grid.node(i));
  return solve_volterra(kernel, std::span<const double>(s), grid);
}

std::vector<std::complex<double>> solve_volterra(const KernelFn& kernel,
                                                 std::span<const std::complex<double>> source,
                                                 const TauGrid& grid) {
  if (source.size() != grid.size()) throw DomainError("solve_volterra: source/grid size mismatch");
  const KernelSamples ks(kernel, grid);
  const std::size_t n = grid.size();
  std::vector<double> re(n), im(n), out_re(n), out_im(n);
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = source[i].real();
    im[i] = source[i].imag();
  }
  march(ks, re.data(), 0, grid.intervals(), grid.step(), out_re.data());
  march(ks, im.data(), 0, grid.intervals(), grid.step(), out_im.data());
  std::vector<std::complex<double>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {out_re[i], out_im[i]};
  return out;
}

ResolventTable::ResolventTable(TauGrid grid, double k_abs)
    : grid_(grid), k_abs_(k_abs), data_(grid.size() * (grid.size() + 1) / 2, 0.0) {}

ResolventTable resolvent_table(const KernelFn& kernel, const TauGrid& grid, double k_abs, Exec exec) {
  const KernelSamples ks(kernel, grid);
  ResolventTable table(grid, k_abs);
  const std::size_t n = grid.size();
  auto fill = [&](std::size_t j) {
    std::vector<double> src(n - j);
    for (std::size_t i = j; i < n; ++i) src[i - j] = ks(i, j);
    march(ks, src.data(), j, n - 1, grid.step(), table.column(j).data());
  };
  if (exec == Exec::Parallel) {
    // Early columns are the long ones.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j) fill(static_cast<std::size_t>(j));
  } else {
    for (std::size_t j = 0; j < n; ++j) fill(j);
  }
  return table;
}

std::vector<double> resolvent_column(const KernelFn& kernel, const TauGrid& grid, std::size_t j) {
  if (j >= grid.size()) throw DomainError("resolvent_column: column index out of range");
  const std::size_t n = grid.size();
  std::vector<double> src(n - j), col(n - j);
  for (std::size_t i = j; i < n; ++i) src[i - j] = kernel(grid.node(i), grid.node(j));
  auto kern = [&](std::size_t i, std::size_t m) { return kernel(grid.node(i), grid.node(m)); };
  march(kern, src.data(), j, n - 1, grid.step(), col.data());
  std::vector<double> out(n, 0.0);
  std::copy(col.begin(), col.end(), out.begin() + static_cast<std::ptrdiff_t>(j));
  return out;
}

double closed_form_resolvent_q0(double theta0, double k_abs, double s, Interaction sign) {
  if (s < 0.0) throw DomainError("closed_form_resolvent_q0: negative lag");
  const double w = 2.0 * std::sqrt(kPi);
  const double damp = std::exp(-theta0 * k_abs * s);
  if (sign == Interaction::Repulsive) return -w * damp * std::sin(w * s);
  return w * damp * std::sinh(w * s);
}

std::vector<double> resolvent_via_ode(const Equilibrium& eq, const ScaleFactorModel& model,
                                      Interaction sign, double k_abs, double tau_tilde,
                                      const TauGrid& grid, double dim_power) {
  if (eq.kind() != EquilibriumKind::PoissonFamily) {
    throw DomainError("resolvent_via_ode: only the exponential (PoissonFamily) equilibrium is supported");
  }
  if (k_abs == 0.0) throw DomainError("resolvent_via_ode: k = 0 has no kernel");
  if (tau_tilde < 0.0 || tau_tilde > grid.tau_max()) {
    throw DomainError("resolvent_via_ode: tau_tilde outside the grid");
  }
  auto b = [&](double tau) { return std::pow(model.a_of_T(tau), dim_power); };
  const double eps = eps_F(sign);
  const double b_tilde = b(tau_tilde);
  auto accel = [&](double tau, double u, double) {
    const double bt = b(tau);
    return 4.0 * kPi * eps * bt * u - 16.0 * kPi * kPi * bt * b_tilde * (tau - tau_tilde);
  };
  const double c = eq.theta0() * k_abs;
  auto resolvent = [&](double tau, double u) {
    return kernel_K(eq, model, sign, k_abs, tau, tau_tilde, dim_power) - std::exp(-c * (tau - tau_tilde)) * u;
  };

  std::vector<double> out(grid.size(), 0.0);
  OdeSample st{0.0, 0.0};
  double x = tau_tilde;
  constexpr int kSub = 4;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double target = grid.node(i);
    if (target < tau_tilde) continue;
    const double span = target - x;
    if (span > 0.0) {
      // Same sub-step count for a partial first interval keeps the step <= dtau/4.
      const double h = span / kSub;
      for (int k = 0; k < kSub; ++k) {
        st = rk4_step(accel, x, st, h);
        x += h;
      }
      x = target;
    }
    out[i] = resolvent(target, st.u);
  }
  return out;
}

std::vector<double> apply_resolvent(const ResolventTable& table, std::span<const double> source,
                                    const TauGrid& grid) {
  if (!(table.grid() == grid) || source.size() != grid.size()) {
    throw DomainError("apply_resolvent: table, source and grid must share the same grid");
  }
  const double h = grid.step();
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double acc = 0.0;
    if (i > 0) {
      acc = 0.5 * (table.value(i, 0) * source[0] + table.value(i, i) * source[i]);
      for (std::size_t j = 1; j < i; ++j) acc += table.value(i, j) * source[j];
    }
    out[i] = source[i] + h * acc;
  }
  return out;
}

std::vector<std::complex<double>> apply_resolvent(const ResolventTable& table,
                                                  std::span<const std::complex<double>> source,
                                                  const TauGrid& grid) {
  if (source.size() != grid.size()) throw DomainError("apply_resolvent: source/grid size mismatch");
  std::vector<double> re(source.size()), im(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) {
    re[i] = source[i].real();
    im[i] = source[i].imag();
  }
  const auto r = apply_resolvent(table, std::span<const double>(re), grid);
  const auto m = apply_resolvent(table, std::span<const double>(im), grid);
  std::vector<std::complex<double>> out(source.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {r[i], m[i]};
  return out;
}

ResolventBound check_resolvent_bound(const ResolventTable& table, const ScaleFactorModel& model,
                                     double theta0, double k_abs) {
  const TauGrid& g = table.grid();
  std::vector<double> a(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) a[i] = model.a_of_T(g.node(i));
  ResolventBound out;
  for (std::size_t j = 0; j < g.size(); ++j) {
    for (std::size_t i = j + 1; i < g.size(); ++i) {
      const double s = g.node(i) - g.node(j);
      const double base = std::exp(-theta0 * k_abs * s) * a[j] * std::sqrt(a[i]);
      const double r = std::abs(table.value(i, j));
      out.c_linear_quadratic = std::max(out.c_linear_quadratic, r / ((s + s * s) * base));
      out.c_quadratic = std::max(out.c_quadratic, r / (s * s * base));
    }
  }
  return out;
}

std::vector<double> damping_transfer_profile(const ResolventTable& table, double theta1,
                                             double beta_prime) {
  const TauGrid& g = table.grid();
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    double sup = 0.0;
    for (std::size_t i = j; i < g.size(); ++i) {
      sup = std::max(sup, std::abs(table.value(i, j)) * std::exp(theta1 * (g.node(i) - g.node(j))));
    }
    out[j] = sup * std::pow(japanese_bracket(g.node(j)), -beta_prime);
  }
  return out;
}

LinearFit fit_growth_rate(std::span<const double> s, std::span<const double> values, double s_lo,
                          double s_hi) {
  if (s.size() != values.size()) throw DomainError("fit_growth_rate: size mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < s_lo || s[i] > s_hi) continue;
    if (!(std::abs(values[i]) > 0.0)) throw DomainError("fit_growth_rate: zero sample in the fit window");
    x.push_back(s[i]);
    y.push_back(std::log(std::abs(values[i])));
  }
  if (x.size() < 2) throw DomainError("fit_growth_rate: fewer than two samples in the fit window");
  return fit_line(x, y);
}

std::vector<double> comparison_bound(const KernelFn& kernel_abs, const SourceFn& source_abs,
                                     const TauGrid& grid) {
  std::vector<double> y(grid.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = source_abs(grid.node(i));
    if (y[i] < 0.0) throw DomainError("comparison_bound: negative source sample");
  }
  const KernelSamples ks(kernel_abs, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t m = 0; m <= i; ++m) {
      if (ks(i, m) < 0.0) throw DomainError("comparison_bound: negative kernel sample");
    }
    if (!(1.0 - 0.5 * grid.step() * ks(i, i) > 0.0)) {
      throw DomainError("comparison_bound: step too large for a positive diagonal weight");
    }
  }
  std::vector<double> out(grid.size());
  march(ks, y.data(), 0, grid.intervals(), grid.step(), out.data());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < y[i]) throw std::logic_error("comparison_bound: majorant fell below the source");
  }
  return out;
}

}  // namespace elandau
