#pragma once

// Scale-factor models and the comoving time transform.
//
// For a(t) = t^q the renormalized clock is tau(t) = ∫_{t0}^t a(s)^{-2} ds and
// T is its inverse, T'(tau) = a(T(tau))², T(0) = t0. Everything downstream
// consumes the composed factor a∘T.

#include <span>
#include <string>

namespace elandau {

enum class ExpansionKind { PowerLaw, Constant };

class ScaleFactorModel {
 public:
  /// a(t) = t^q on [t0, ∞). Throws DomainError unless 0 <= q <= 1/2 and t0 > 0.
  static ScaleFactorModel power_law(double q, double t0);
  /// a ≡ 1, the non-expanding baseline.
  static ScaleFactorModel constant(double t0 = 1.0);

  ExpansionKind kind() const { return kind_; }
  double q() const { return q_; }
  double t0() const { return t0_; }

  double a(double t) const;
  double a_dot(double t) const;
  double a_ddot(double t) const;

  /// tau as a function of cosmic time; DomainError for t < t0.
  double tau_of_t(double t) const;
  /// Inverse of tau_of_t.
  double T_of_tau(double tau) const;
  /// (a∘T)(tau); DomainError for tau < 0.
  double a_of_T(double tau) const;
  /// ((a∘T)^{-1/4})'' in closed form.
  double inv_quarter_root_dd(double tau) const;

  /// Growth exponent q/(1-2q) of a∘T; +inf at q = 1/2, 0 for Constant.
  double beta() const;

  std::string describe() const;

 private:
  ScaleFactorModel(ExpansionKind kind, double q, double t0) : kind_(kind), q_(q), t0_(t0) {}
  ExpansionKind kind_;
  double q_;
  double t0_;
};

double tau_of_t(const ScaleFactorModel& model, double t);
double a_of_T(const ScaleFactorModel& model, double tau);

struct AdmissibilityReport {
  double beta_fit = 0.0;
  double beta_closed = 0.0;
  double beta_rel_gap = 0.0;
  bool scale_bound_ok = false;
  /// ∫_0^∞ a(T)^{-1/4} |((a∘T)^{-1/4})''| dtau
  double lg_integral = 0.0;
  bool lg_integral_finite = false;
  /// The same integral evaluated from the closed-form integrand printed in
  /// the power-law example, (q/4)(1 - 7q/4) B^{q/(2(1-2q)) - 2} with
  /// B = (1-2q)tau + t0^{1-2q}. Its exponent carries the opposite sign of
  /// the q-term relative to lg_integral's integrand, so the two differ.
  double example_formula_integral = 0.0;
};

/// Fits beta on the last decade [tau_max/10, tau_max] of a log-spaced grid
/// (the bound is asymptotic) and integrates the Liouville–Green variation
/// density with a power-law tail beyond tau_max.
AdmissibilityReport check_admissibility(const ScaleFactorModel& model, double tau_max, int n_grid);

/// a(t) = t^q in cosmic time with no restriction on q beyond q > 0; used for
/// the background-field relation, which is meaningful for q > 1/2 as well.
struct CosmicPowerLaw {
  double q = 0.5;
  double t0 = 1.0;
};

/// phi_b(t) = -eps_F (4π/d) a^{2-d} - q(q-1) a^{2-2/q}, the background field
/// that makes a = t^q solve ä = -(4π/d) eps_F a^{1-d} - a^{-1} phi_b.
double background_field(const CosmicPowerLaw& law, int d, int eps_F, double t);

/// max over t_grid of |ä + (4π/d) eps_F a^{1-d} + a^{-1} phi_b|.
double friedman_residual(const CosmicPowerLaw& law, int d, int eps_F, std::span<const double> t_grid);

}  // namespace elandau
