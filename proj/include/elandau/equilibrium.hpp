#pragma once

// Radial background equilibria, their Fourier transforms, and the per-mode
// kernels of the density Volterra equation.

#include "elandau/cosmology.hpp"

#include <span>
#include <string>

namespace elandau {

enum class EquilibriumKind { PoissonFamily, Maxwellian };

/// Sign of the interaction: -1 repulsive (electrostatic), +1 attractive
/// (gravitational).
enum class Interaction : int { Repulsive = -1, Attractive = 1 };

inline int eps_F(Interaction s) { return static_cast<int>(s); }
Interaction interaction_from_eps(int eps);

class Equilibrium {
 public:
  /// mu_hat(xi) = exp(-theta0 |xi|).
  static Equilibrium poisson(double theta0, int dim);
  /// mu(v) = rho0 (2πT)^{-d/2} exp(-|v|²/(2T)), mu_hat(xi) = rho0 exp(-T|xi|²/2).
  static Equilibrium maxwellian(double temperature, double rho0, int dim);

  EquilibriumKind kind() const { return kind_; }
  double theta0() const { return theta0_; }
  double temperature() const { return temperature_; }
  double rho0() const { return rho0_; }
  int dim() const { return dim_; }

  /// |xi| beyond which mu_hat has dropped by six e-foldings from mu_hat(0).
  double window_margin() const;

  /// Smallest S with s |mu_hat(k s)| e^{-re_lambda s} negligible (< 1e-17
  /// relative) for all s >= S.
  double laplace_cutoff(double k_abs, double re_lambda) const;

  std::string describe() const;

 private:
  Equilibrium(EquilibriumKind kind, double theta0, double temperature, double rho0, int dim)
      : kind_(kind), theta0_(theta0), temperature_(temperature), rho0_(rho0), dim_(dim) {}
  EquilibriumKind kind_;
  double theta0_;
  double temperature_;
  double rho0_;
  int dim_;
};

double mode_norm(std::span<const int> k);
double vector_norm(std::span<const double> x);

/// Radial Fourier transform as a function of |xi|.
double mu_hat(const Equilibrium& eq, double xi_abs);
double mu_hat(const Equilibrium& eq, std::span<const double> xi);

/// Real-space density at |v|. PoissonFamily supports d = 1 (Cauchy density,
/// which shares the transform exp(-theta0|xi|)) and d = 3.
double mu_value(const Equilibrium& eq, double v_abs);

/// M_k(s) = s mu_hat(|k| s).
double kernel_M(const Equilibrium& eq, double k_abs, double s);

/// K_k(tau, tau~) = 4π eps_F M_k(tau - tau~) (a∘T)(tau~)^p for tau >= tau~, 0 otherwise.
/// p = 1 is the three-dimensional kernel; p = 4 - d covers higher dimensions.
double kernel_K(const Equilibrium& eq, const ScaleFactorModel& model, Interaction sign,
                double k_abs, double tau, double tau_tilde, double dim_power = 1.0);

}  // namespace elandau
