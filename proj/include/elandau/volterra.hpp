#pragma once

// Per-mode Volterra equations of the second kind on a uniform tau grid:
// forward marching with product-trapezoid weights, resolvent tables, an
// independent ODE route for the resolvent of exponential equilibria, and
// the comparison majorant.

#include "elandau/cosmology.hpp"
#include "elandau/equilibrium.hpp"
#include "elandau/numerics.hpp"

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace elandau {

class TauGrid {
 public:
  TauGrid(double tau_max, std::size_t n);

  double tau_max() const { return tau_max_; }
  std::size_t intervals() const { return n_; }
  std::size_t size() const { return n_ + 1; }
  double step() const { return step_; }
  double node(std::size_t i) const { return static_cast<double>(i) * step_; }
  std::vector<double> nodes() const;

  bool operator==(const TauGrid& o) const { return tau_max_ == o.tau_max_ && n_ == o.n_; }

 private:
  double tau_max_;
  std::size_t n_;
  double step_;
};

using KernelFn = std::function<double(double tau, double tau_tilde)>;
using SourceFn = std::function<double(double tau)>;

/// K_k(tau, tau~) for one mode as a callable.
KernelFn mode_kernel(const Equilibrium& eq, const ScaleFactorModel& model, Interaction sign,
                     double k_abs, double dim_power = 1.0);

/// Raised when the implicit diagonal weight 1 - ½ dtau K(tau_i, tau_i) vanishes.
class SingularStepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> solve_volterra(const KernelFn& kernel, const SourceFn& source, const TauGrid& grid);
std::vector<double> solve_volterra(const KernelFn& kernel, std::span<const double> source,
                                   const TauGrid& grid);
/// The kernel is real, so real and imaginary parts march independently.
std::vector<std::complex<double>> solve_volterra(const KernelFn& kernel,
                                                 std::span<const std::complex<double>> source,
                                                 const TauGrid& grid);

/// Lower-triangular R[i][j], i >= j, stored column by column.
class ResolventTable {
 public:
  ResolventTable(TauGrid grid, double k_abs);

  const TauGrid& grid() const { return grid_; }
  double k_abs() const { return k_abs_; }
  /// 0 above the diagonal.
  double value(std::size_t i, std::size_t j) const {
    return i < j ? 0.0 : data_[offset(j) + (i - j)];
  }
  std::span<double> column(std::size_t j) {
    return {data_.data() + offset(j), grid_.size() - j};
  }
  std::span<const double> column(std::size_t j) const {
    return {data_.data() + offset(j), grid_.size() - j};
  }

 private:
  std::size_t offset(std::size_t j) const {
    const std::size_t m = grid_.size();
    return j * m - (j * (j - (j > 0 ? 1 : 0))) / 2;
  }
  TauGrid grid_;
  double k_abs_;
  std::vector<double> data_;
};

/// Column j holds R(tau_i, tau_j) for i >= j. Costs O(n³) overall; columns
/// are independent and run concurrently under Exec::Parallel.
ResolventTable resolvent_table(const KernelFn& kernel, const TauGrid& grid, double k_abs = 0.0,
                               Exec exec = Exec::Parallel);

/// One column R(·, tau_j) by the same marching scheme.
std::vector<double> resolvent_column(const KernelFn& kernel, const TauGrid& grid, std::size_t j);

/// a ≡ 1, mu_hat = exp(-theta0|xi|): -2√π e^{-theta0|k|s} sin(2√π s) when
/// repulsive, 2√π e^{-theta0|k|s} sinh(2√π s) when attractive.
double closed_form_resolvent_q0(double theta0, double k_abs, double s,
                                Interaction sign = Interaction::Repulsive);

/// R(tau_i, tau~) for every node, 0 for tau_i < tau~, from
///   u'' - 4π eps_F b(tau) u = -16π² b(tau) b(tau~)(tau - tau~),  u(tau~) = u'(tau~) = 0,
/// with b = (a∘T)^p and R = K - e^{-theta0|k|(tau - tau~)} u. Classical RK4
/// with step dtau/4.
std::vector<double> resolvent_via_ode(const Equilibrium& eq, const ScaleFactorModel& model,
                                      Interaction sign, double k_abs, double tau_tilde,
                                      const TauGrid& grid, double dim_power = 1.0);

/// phi_i = s_i + ∫_0^{tau_i} R(tau_i, ·) s by the trapezoid rule.
std::vector<double> apply_resolvent(const ResolventTable& table, std::span<const double> source,
                                    const TauGrid& grid);
std::vector<std::complex<double>> apply_resolvent(const ResolventTable& table,
                                                  std::span<const std::complex<double>> source,
                                                  const TauGrid& grid);

struct ResolventBound {
  /// sup |R| / ((s + s²) e^{-theta0|k|s} a(T(tau~)) a(T(tau))^{1/2})
  double c_linear_quadratic = 0.0;
  /// Same with the s² envelope, off the diagonal only; grows like 1/dtau
  /// when R is linear in s near the diagonal.
  double c_quadratic = 0.0;
};

ResolventBound check_resolvent_bound(const ResolventTable& table, const ScaleFactorModel& model,
                                     double theta0, double k_abs);

/// Per column j: sup_{i >= j} |R(tau_i, tau_j)| e^{theta1 (tau_i - tau_j)} ⟨tau_j⟩^{-beta'}.
std::vector<double> damping_transfer_profile(const ResolventTable& table, double theta1,
                                             double beta_prime);

/// Slope of log|values| against s restricted to [s_lo, s_hi].
LinearFit fit_growth_rate(std::span<const double> s, std::span<const double> values, double s_lo,
                          double s_hi);

/// Solves u~ = y + ∫ K u~ for nonnegative K and y. The marching weights are
/// then all nonnegative, so the discrete resolvent is too; the output is
/// checked to dominate the source.
std::vector<double> comparison_bound(const KernelFn& kernel_abs, const SourceFn& source_abs,
                                     const TauGrid& grid);

}  // namespace elandau
