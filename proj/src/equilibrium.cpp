#include "elandau/equilibrium.hpp"

#include "elandau/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace elandau {

Interaction interaction_from_eps(int eps) {
  if (eps == -1) return Interaction::Repulsive;
  if (eps == 1) return Interaction::Attractive;
  throw DomainError("interaction sign must be +1 or -1");
}

Equilibrium Equilibrium::poisson(double theta0, int dim) {
  if (!(theta0 > 0.0)) throw DomainError("Equilibrium: theta0 must be positive");
  if (dim < 1) throw DomainError("Equilibrium: dim must be >= 1");
  return {EquilibriumKind::PoissonFamily, theta0, 0.0, 1.0, dim};
}

Equilibrium Equilibrium::maxwellian(double temperature, double rho0, int dim) {
  if (!(temperature > 0.0)) throw DomainError("Equilibrium: temperature must be positive");
  if (!(rho0 > 0.0)) throw DomainError("Equilibrium: rho0 must be positive");
  if (dim < 1) throw DomainError("Equilibrium: dim must be >= 1");
  return {EquilibriumKind::Maxwellian, 0.0, temperature, rho0, dim};
}

double Equilibrium::window_margin() const {
  if (kind_ == EquilibriumKind::PoissonFamily) return 6.0 / theta0_;
  return std::sqrt(12.0 / temperature_);
}

double Equilibrium::laplace_cutoff(double k_abs, double re_lambda) const {
  // ln(1e17) ≈ 39.1; the extra log term absorbs the factor s.
  constexpr double kLog = 42.0;
  if (kind_ == EquilibriumKind::PoissonFamily) {
    const double c = theta0_ * k_abs + re_lambda;
    const double s = kLog / c;
    return s + std::log1p(s) / c;
  }
  const double g = 0.5 * temperature_ * k_abs * k_abs;
  return std::sqrt(kLog / g) + 1.0 / std::sqrt(g);
}

std::string Equilibrium::describe() const {
  std::ostringstream os;
  if (kind_ == EquilibriumKind::PoissonFamily) {
    os << "poisson(theta0=" << theta0_ << ", dim=" << dim_ << ")";
  } else {
    os << "maxwellian(T=" << temperature_ << ", rho0=" << rho0_ << ", dim=" << dim_ << ")";
  }
  return os.str();
}

double mode_norm(std::span<const int> k) {
  double s = 0.0;
  for (int c : k) s += static_cast<double>(c) * c;
  return std::sqrt(s);
}

double vector_norm(std::span<const double> x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

double mu_hat(const Equilibrium& eq, double xi_abs) {
  xi_abs = std::abs(xi_abs);
  if (eq.kind() == EquilibriumKind::PoissonFamily) return std::exp(-eq.theta0() * xi_abs);
  return eq.rho0() * std::exp(-0.5 * eq.temperature() * xi_abs * xi_abs);
}

double mu_hat(const Equilibrium& eq, std::span<const double> xi) {
  return mu_hat(eq, vector_norm(xi));
}

double mu_value(const Equilibrium& eq, double v_abs) {
  v_abs = std::abs(v_abs);
  if (eq.kind() == EquilibriumKind::Maxwellian) {
    const double T = eq.temperature();
    const double d = static_cast<double>(eq.dim());
    return eq.rho0() * std::pow(2.0 * kPi * T, -0.5 * d) * std::exp(-0.5 * v_abs * v_abs / T);
  }
  const double th = eq.theta0();
  switch (eq.dim()) {
    case 1:
      return (th / kPi) / (th * th + v_abs * v_abs);
    case 3: {
      const double den = th * th + v_abs * v_abs;
      return th / (kPi * kPi * den * den);
    }
    default:
      throw DomainError("mu_value: PoissonFamily closed form only for dim 1 and 3");
  }
}

double kernel_M(const Equilibrium& eq, double k_abs, double s) {
  if (s == 0.0) return 0.0;
  return s * mu_hat(eq, k_abs * s);
}

double kernel_K(const Equilibrium& eq, const ScaleFactorModel& model, Interaction sign,
                double k_abs, double tau, double tau_tilde, double dim_power) {
  if (k_abs == 0.0) throw DomainError("kernel_K: k = 0 has no kernel");
  if (tau < tau_tilde) return 0.0;
  const double lag = tau - tau_tilde;
  if (lag == 0.0) return 0.0;
  double amp = 1.0;
  if (model.kind() != ExpansionKind::Constant) amp = std::pow(model.a_of_T(tau_tilde), dim_power);
  return 4.0 * kPi * eps_F(sign) * kernel_M(eq, k_abs, lag) * amp;
}

}  // namespace elandau
