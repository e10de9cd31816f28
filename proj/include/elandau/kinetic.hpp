#pragma once

// Spectral solver for the renormalized Vlasov–Poisson system in one space
// dimension: h_hat(tau, k, xi) on modes -K..K times a symmetric xi grid,
// advanced by classical RK4. Shifted evaluations h_hat(k - l, xi - l tau)
// are cubic interpolations that read 0 outside [-Xi, Xi].

#include "elandau/cosmology.hpp"
#include "elandau/equilibrium.hpp"
#include "elandau/gevrey.hpp"
#include "elandau/spectral_state.hpp"

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace elandau {

enum class SimMode { FreeStreaming, Linearized, FullNonlinear };

SimMode sim_mode_from_string(const std::string& s);
std::string to_string(SimMode m);

struct SimConfig {
  int dim = 1;
  int k_max = 2;
  double xi_max = 14.0;
  /// Number of xi intervals (even), so xi = 0 is a node and the grid is
  /// mirror-exact; the grid has n_xi + 1 points.
  std::size_t n_xi = 1024;
  double dtau = 0.01;
  double tau_end = 8.0;
  SimMode mode = SimMode::FreeStreaming;
  ScaleFactorModel model = ScaleFactorModel::constant();
  Equilibrium eq = Equilibrium::poisson(1.0, 1);
  Interaction sign = Interaction::Repulsive;
  double epsilon = 1e-3;
  /// Exponent p of the a(T)^p factor in front of the field terms.
  double dim_power = 1.0;
  /// |h_hat| above this counts as blow-up, like a non-finite value.
  double blowup_threshold = 1e10;

  /// Required half-width: K·tau_end + margin when modes interact; the
  /// free flow only samples rho_k, so there tau_end + margin suffices and
  /// higher modes read 0 once k·tau leaves the window.
  double required_xi_max() const;
  /// Throws DomainError listing every violated invariant.
  void validate() const;
  std::size_t steps() const;
};

enum class InitNormalization { Amplitude, GevreyNorm };

struct InitSpec {
  /// c_k for the separable data h_hat(0, k, xi) = eps² c_k exp(-xi²/(2 width²)).
  /// c_{-k} must equal conj(c_k) and c_0 must vanish.
  std::map<int, std::complex<double>> coefficients = {{1, 1.0}, {-1, 1.0}};
  double width = 1.0;
  /// Amplitude: coefficients are used as given. GevreyNorm: the state is
  /// rescaled so its phase-space Gevrey norm at radius lambda0 is eps².
  InitNormalization normalization = InitNormalization::Amplitude;
};

SpectralState init_state(const SimConfig& cfg, const InitSpec& init, const GevreyParams& gp = {});

/// rho_k = h_hat(k, k tau) for k = -K..K; rho_0 = 0. Throws DomainError if
/// |k| tau leaves the window unless allow_outside (then the value is 0).
std::vector<std::complex<double>> density_modes(const SpectralState& state, double tau,
                                                bool allow_outside = false);

/// d h_hat / d tau at (state, tau).
void rhs(const SpectralState& state, double tau, const SimConfig& cfg, SpectralState& out,
         Exec exec = Exec::Parallel);

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double tau) : std::runtime_error(what), tau_(tau) {}
  double tau() const { return tau_; }

 private:
  double tau_;
};

/// One RK4 step of size cfg.dtau; state.tau advances.
void step(SpectralState& state, const SimConfig& cfg, Exec exec = Exec::Parallel);

struct SeriesRow {
  double tau = 0.0;
  double t = 0.0;
  std::vector<std::complex<double>> rho;  // k = -K..K
  double abs_rho1 = 0.0;
  double z = 0.0;
  double F = 0.0;
  double G = 0.0;
  double diag_bootstrap = 0.0;  // NaN on the first row
  double diag_embedding = 0.0;  // F / sqrt(G)
  double phys_density_norm = 0.0;
  double h00 = 0.0;
  double reality_defect = 0.0;
  double top_mode_amplitude = 0.0;
};

struct SimResult {
  std::vector<SeriesRow> rows;
  std::vector<SpectralState> snapshots;  // one per output row
  double max_h00 = 0.0;
  double max_reality_defect = 0.0;
};

/// Runs to tau_end, recording a row (and a snapshot) every out_every steps
/// and at the final step.
SimResult run_simulation(const SimConfig& cfg, const InitSpec& init, const GevreyParams& gp,
                         std::size_t out_every, Exec exec = Exec::Parallel);

double reality_defect(const SpectralState& s);

struct HInfinityRow {
  double tau;
  double distance;
};

struct HInfinityReport {
  std::vector<HInfinityRow> rows;
  /// Distances to the final snapshot never increase over the last half.
  bool final_half_nonincreasing = false;
};

/// Gevrey distance at radius lambda_prime of each snapshot to the last.
HInfinityReport h_infinity_report(const std::vector<SpectralState>& snapshots, const GevreyParams& gp,
                                  double lambda_prime);

}  // namespace elandau
