#pragma once

// Gevrey multipliers, the sliding radius, generator functions F and G,
// and randomized checks of the elementary bracket inequalities.

#include "elandau/spectral_state.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace elandau {

struct GevreyParams {
  double gamma = 1.0;
  double sigma = 5.0;
  double alpha = 1.0;
  double lambda0 = 0.8;
  double lambda1 = 0.2;
  double delta = 0.5;
  double theta0 = 1.0;
  /// Radius of the physical-density norm reported by the simulations.
  double lambda_prime = 0.1;

  /// Throws DomainError on violated invariants.
  void validate() const;
  /// gamma > 1 - 2/(3 + beta + beta') and sigma > max(4, 2 + beta + beta').
  bool theorem_admissible(double beta, double beta_prime) const;
};

/// ⟨k, xi⟩ = sqrt(1 + |k|² + |xi|²)
double bracket(std::span<const double> k, std::span<const double> xi);
double bracket(double k_abs, double xi_abs);

/// e^{z⟨k,xi⟩^gamma} ⟨k,xi⟩^sigma for z in [0, 1].
double multiplier_A(const GevreyParams& p, double z, std::span<const double> k, std::span<const double> xi);
double multiplier_A(const GevreyParams& p, double z, double k_abs, double xi_abs);

/// lambda1 (1 + ⟨tau⟩^{-delta})
double sliding_z(const GevreyParams& p, double tau);

struct DensityMode {
  std::vector<int> k;
  std::complex<double> value;
};

/// sup_{k != 0} A(z)_{k, k tau} |k|^{-alpha} |rho_k| over the supplied modes
/// (a lower bound for the lattice sup).
double generator_F(const GevreyParams& p, std::span<const DensityMode> modes, double tau, double z);

/// Σ_{j=0}^{d} Σ_k Σ_i A(z)_{k,xi_i}² |D^j h(k, xi_i)|² dxi with fourth-order
/// difference stencils (one-sided in the two nodes nearest each end).
double generator_G(const GevreyParams& p, const SpectralState& state, double z);

/// j = 0 term of generator_G, square-rooted.
double gevrey_norm_phase_space(const GevreyParams& p, const SpectralState& state, double z);

/// sqrt(Σ_k e^{2z⟨k⟩^gamma} ⟨k⟩^{2 sigma} |rho_k|²)
double gevrey_norm_torus(const GevreyParams& p, std::span<const DensityMode> modes, double z);

/// First xi-derivative of a row with the stencils used by generator_G.
std::vector<std::complex<double>> xi_derivative(std::span<const std::complex<double>> row, double h);

struct InequalitySweep {
  std::size_t samples = 0;
  std::size_t triangle_violations = 0;
  std::size_t ratio_violations = 0;
  std::size_t algebra_violations = 0;
  /// Against the printed peak bound (b1/c)^{b1/b2} e^{-b1}.
  std::size_t peak_printed_violations = 0;
  /// Against the exact supremum (b1/(c b2))^{b1/b2} e^{-b1/b2}.
  std::size_t peak_sharp_violations = 0;
  /// max log(sup / printed bound) over the violating samples
  double peak_printed_worst_log_ratio = 0.0;
};

/// Random samples in d = 3: gamma in (0,1], integer k, k' in [-20,20]³,
/// xi, xi' in [-50,50]³, z in [0,1], sigma in (0,10]; b1, b2, c in (0,10],
/// y in [-100,100]. Comparisons use a relative slack of 1e-12.
InequalitySweep run_inequality_sweep(std::size_t samples, std::uint64_t seed);

double peak_bound_printed(double b1, double b2, double c);
double peak_bound_sharp(double b1, double b2, double c);

}  // namespace elandau
