#include "elandau/cosmology.hpp"

#include "elandau/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace elandau {

ScaleFactorModel ScaleFactorModel::power_law(double q, double t0) {
  if (!(t0 > 0.0)) throw DomainError("ScaleFactorModel: t0 must be positive");
  if (!(q >= 0.0)) throw DomainError("ScaleFactorModel: q must be nonnegative");
  if (q > 0.5) {
    throw DomainError("ScaleFactorModel: q > 1/2 gives a finite tau range (no full phase mixing)");
  }
  return {ExpansionKind::PowerLaw, q, t0};
}

ScaleFactorModel ScaleFactorModel::constant(double t0) {
  if (!(t0 > 0.0)) throw DomainError("ScaleFactorModel: t0 must be positive");
  return {ExpansionKind::Constant, 0.0, t0};
}

double ScaleFactorModel::a(double t) const {
  if (kind_ == ExpansionKind::Constant) return 1.0;
  return std::pow(t, q_);
}

double ScaleFactorModel::a_dot(double t) const {
  if (kind_ == ExpansionKind::Constant || q_ == 0.0) return 0.0;
  return q_ * std::pow(t, q_ - 1.0);
}

double ScaleFactorModel::a_ddot(double t) const {
  if (kind_ == ExpansionKind::Constant || q_ == 0.0) return 0.0;
  return q_ * (q_ - 1.0) * std::pow(t, q_ - 2.0);
}

double ScaleFactorModel::tau_of_t(double t) const {
  if (t < t0_) throw DomainError("tau_of_t: t < t0");
  if (kind_ == ExpansionKind::Constant) return t - t0_;
  if (q_ == 0.5) return std::log(t) - std::log(t0_);
  const double e = 1.0 - 2.0 * q_;
  return (std::pow(t, e) - std::pow(t0_, e)) / e;
}

double ScaleFactorModel::T_of_tau(double tau) const {
  if (tau < 0.0) throw DomainError("T_of_tau: tau < 0");
  if (kind_ == ExpansionKind::Constant) return t0_ + tau;
  if (q_ == 0.5) return t0_ * std::exp(tau);
  const double e = 1.0 - 2.0 * q_;
  return std::pow(e * tau + std::pow(t0_, e), 1.0 / e);
}

double ScaleFactorModel::a_of_T(double tau) const {
  if (tau < 0.0) throw DomainError("a_of_T: tau < 0");
  if (kind_ == ExpansionKind::Constant) return 1.0;
  if (q_ == 0.5) return std::sqrt(t0_) * std::exp(0.5 * tau);
  const double e = 1.0 - 2.0 * q_;
  return std::pow(e * tau + std::pow(t0_, e), q_ / e);
}

double ScaleFactorModel::inv_quarter_root_dd(double tau) const {
  if (kind_ == ExpansionKind::Constant || q_ == 0.0) return 0.0;
  if (q_ == 0.5) return std::pow(t0_, -0.125) * std::exp(-0.125 * tau) / 64.0;
  // (a∘T)^{-1/4} = B^m with B = (1-2q) tau + t0^{1-2q}, m = -q / (4(1-2q)).
  const double e = 1.0 - 2.0 * q_;
  const double m = -q_ / (4.0 * e);
  const double B = e * tau + std::pow(t0_, e);
  return m * (m - 1.0) * e * e * std::pow(B, m - 2.0);
}

double ScaleFactorModel::beta() const {
  if (kind_ == ExpansionKind::Constant) return 0.0;
  if (q_ == 0.5) return std::numeric_limits<double>::infinity();
  return q_ / (1.0 - 2.0 * q_);
}

std::string ScaleFactorModel::describe() const {
  std::ostringstream os;
  if (kind_ == ExpansionKind::Constant) {
    os << "constant(t0=" << t0_ << ")";
  } else {
    os << "power_law(q=" << q_ << ", t0=" << t0_ << ")";
  }
  return os.str();
}

double tau_of_t(const ScaleFactorModel& model, double t) { return model.tau_of_t(t); }
double a_of_T(const ScaleFactorModel& model, double tau) { return model.a_of_T(tau); }

AdmissibilityReport check_admissibility(const ScaleFactorModel& model, double tau_max, int n_grid) {
  if (!(tau_max > 0.0)) throw DomainError("check_admissibility: tau_max must be positive");
  if (n_grid < 16) throw DomainError("check_admissibility: n_grid must be >= 16");

  AdmissibilityReport rep;
  rep.beta_closed = model.beta();

  // Log-spaced nodes over the last decade of [0, tau_max].
  const double lo = tau_max / 10.0;
  std::vector<double> lx, ly;
  lx.reserve(static_cast<std::size_t>(n_grid));
  ly.reserve(static_cast<std::size_t>(n_grid));
  for (int i = 0; i < n_grid; ++i) {
    const double tau = lo * std::pow(10.0, static_cast<double>(i) / (n_grid - 1));
    lx.push_back(std::log(japanese_bracket(tau)));
    ly.push_back(std::log(model.a_of_T(tau)));
  }
  rep.beta_fit = std::max(0.0, fit_line(lx, ly).slope);
  if (std::isfinite(rep.beta_closed) && rep.beta_closed > 0.0) {
    rep.beta_rel_gap = std::abs(rep.beta_fit - rep.beta_closed) / rep.beta_closed;
  } else if (rep.beta_closed == 0.0) {
    rep.beta_rel_gap = rep.beta_fit;
  } else {
    rep.beta_rel_gap = std::numeric_limits<double>::infinity();
  }

  // a∘T ≲ ⟨tau⟩^beta: the ratio must not keep growing polynomially in the tail.
  const double beta_used = std::isfinite(rep.beta_closed) ? rep.beta_closed : rep.beta_fit;
  std::vector<double> ratio_log(lx.size());
  for (std::size_t i = 0; i < lx.size(); ++i) ratio_log[i] = ly[i] - beta_used * lx[i];
  const double tail_growth = fit_line(lx, ratio_log).slope;
  rep.scale_bound_ok = std::isfinite(rep.beta_closed) && tail_growth <= 1e-2;

  if (model.kind() == ExpansionKind::Constant || model.q() == 0.0) {
    rep.lg_integral = 0.0;
    rep.lg_integral_finite = true;
    rep.example_formula_integral = 0.0;
    return rep;
  }

  auto density = [&](double tau) {
    return std::pow(model.a_of_T(tau), -0.25) * std::abs(model.inv_quarter_root_dd(tau));
  };
  const TailIntegral lg = integrate_with_power_tail(density, 0.0, tau_max);
  rep.lg_integral = lg.total();
  rep.lg_integral_finite = lg.finite;

  if (model.q() < 0.5) {
    const double q = model.q();
    const double e = 1.0 - 2.0 * q;
    const double base0 = std::pow(model.t0(), e);
    const double expo = q / (2.0 * e) - 2.0;
    auto printed = [&](double tau) {
      return 0.25 * q * (1.0 - 1.75 * q) * std::pow(e * tau + base0, expo);
    };
    const TailIntegral ex = integrate_with_power_tail(printed, 0.0, tau_max);
    rep.example_formula_integral =
        ex.finite ? ex.total() : std::numeric_limits<double>::infinity();
  } else {
    rep.example_formula_integral = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

double background_field(const CosmicPowerLaw& law, int d, int eps_F, double t) {
  if (law.q == 0.0) throw DomainError("background_field: q = 0 is unsupported (a^{-2/q} term)");
  if (!(law.q > 0.0)) throw DomainError("background_field: q must be positive");
  if (t < law.t0) throw DomainError("background_field: t < t0");
  if (d < 1) throw DomainError("background_field: dimension must be >= 1");
  if (eps_F != 1 && eps_F != -1) throw DomainError("background_field: eps_F must be +1 or -1");
  const double a = std::pow(t, law.q);
  const double dd = static_cast<double>(d);
  return -eps_F * (4.0 * kPi / dd) * std::pow(a, 2.0 - dd) -
         law.q * (law.q - 1.0) * std::pow(a, 2.0 - 2.0 / law.q);
}

double friedman_residual(const CosmicPowerLaw& law, int d, int eps_F, std::span<const double> t_grid) {
  double worst = 0.0;
  const double dd = static_cast<double>(d);
  for (double t : t_grid) {
    const double a = std::pow(t, law.q);
    const double a_ddot = law.q * (law.q - 1.0) * std::pow(t, law.q - 2.0);
    const double phi = background_field(law, d, eps_F, t);
    const double r = a_ddot + (4.0 * kPi / dd) * eps_F * std::pow(a, 1.0 - dd) + phi / a;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace elandau
