#include "elandau/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace elandau {

using cplx = std::complex<double>;

SimMode sim_mode_from_string(const std::string& s) {
  if (s == "FreeStreaming" || s == "free_streaming") return SimMode::FreeStreaming;
  if (s == "Linearized" || s == "linearized") return SimMode::Linearized;
  if (s == "FullNonlinear" || s == "full_nonlinear") return SimMode::FullNonlinear;
  throw DomainError("unknown simulation mode '" + s + "'");
}

std::string to_string(SimMode m) {
  switch (m) {
    case SimMode::FreeStreaming: return "FreeStreaming";
    case SimMode::Linearized: return "Linearized";
    case SimMode::FullNonlinear: return "FullNonlinear";
  }
  return "?";
}

double SimConfig::required_xi_max() const {
  const double reach = mode == SimMode::FreeStreaming ? 1.0 : static_cast<double>(k_max);
  return reach * tau_end + eq.window_margin();
}

void SimConfig::validate() const {
  std::vector<std::string> bad;
  if (dim != 1) bad.push_back("dim (only 1 is supported)");
  if (k_max < 1) bad.push_back("k_max (must be >= 1)");
  if (n_xi < 64 || n_xi % 2 != 0) bad.push_back("n_xi (must be even and >= 64)");
  if (!(dtau > 0.0)) bad.push_back("dtau (must be positive)");
  if (!(tau_end > 0.0)) bad.push_back("tau_end (must be positive)");
  if (dtau > 0.0 && std::abs(tau_end / dtau - std::round(tau_end / dtau)) > 1e-6) {
    bad.push_back("dtau (must divide tau_end)");
  }
  if (!(epsilon > 0.0)) bad.push_back("epsilon (must be positive)");
  if (!(blowup_threshold > 0.0)) bad.push_back("blowup_threshold (must be positive)");
  if (!(xi_max >= required_xi_max() - 1e-12)) {
    std::ostringstream os;
    os << "xi_max (" << xi_max << " < required " << required_xi_max() << ")";
    bad.push_back(os.str());
  }
  if (!bad.empty()) {
    std::string msg = "SimConfig invalid:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw DomainError(msg);
  }
}

std::size_t SimConfig::steps() const {
  return static_cast<std::size_t>(std::llround(tau_end / dtau));
}

SpectralState init_state(const SimConfig& cfg, const InitSpec& init, const GevreyParams& gp) {
  cfg.validate();
  if (!(init.width > 0.0)) throw DomainError("init_state: width must be positive");
  for (const auto& [k, c] : init.coefficients) {
    if (k == 0 && c != cplx(0.0)) throw DomainError("init_state: c_0 != 0 breaks charge neutrality");
    const auto it = init.coefficients.find(-k);
    const cplx mirror = it == init.coefficients.end() ? cplx(0.0) : it->second;
    if (mirror != std::conj(c)) throw DomainError("init_state: c_{-k} != conj(c_k) breaks reality");
  }
  SpectralState st(cfg.k_max, SymmetricGrid(cfg.xi_max, cfg.n_xi));
  const double amp = cfg.epsilon * cfg.epsilon;
  const auto& g = st.grid();
  for (const auto& [k, c] : init.coefficients) {
    if (k == 0 || std::abs(k) > cfg.k_max) continue;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.node(i) / init.width;
      st.at(k, i) = amp * c * std::exp(-0.5 * x * x);
    }
  }
  if (init.normalization == InitNormalization::GevreyNorm) {
    const double n = gevrey_norm_phase_space(gp, st, gp.lambda0);
    if (n == 0.0) throw DomainError("init_state: zero data cannot be normalized");
    for (auto& v : st.data()) v *= amp / n;
  }
  st.tau = 0.0;
  return st;
}

std::vector<cplx> density_modes(const SpectralState& state, double tau, bool allow_outside) {
  const int K = state.k_max();
  std::vector<cplx> rho(static_cast<std::size_t>(2 * K + 1));
  const auto& g = state.grid();
  for (int k = -K; k <= K; ++k) {
    if (k == 0) continue;
    const double x = k * tau;
    if (!g.contains(x) && !allow_outside) {
      std::ostringstream os;
      os << "density_modes: k tau = " << x << " outside the xi window [-" << g.half_width() << ", "
         << g.half_width() << "]";
      throw DomainError(os.str());
    }
    rho[static_cast<std::size_t>(k + K)] = interpolate_cubic<cplx>(g, state.row(k), x);
  }
  return rho;
}

// Field terms, with sf = -eps_F and A = 4π (a∘T)^p:
//   d h(k,xi) = -sf A (xi - k tau)/k rho_k mu_hat(xi - k tau)
//             + sf A Σ_{l != 0} (xi - k tau)/l rho_l h(k - l, xi - l tau).
// The k = 0 row has no linear term (rho_0 = 0) and every nonlinear term
// carries xi - 0·tau, which is exactly 0 at the xi = 0 node, so h(0, 0)
// stays 0 to the last bit.
void rhs(const SpectralState& state, double tau, const SimConfig& cfg, SpectralState& out, Exec exec) {
  const int K = state.k_max();
  const auto& g = state.grid();
  if (out.k_max() != K || out.grid().size() != g.size()) out = SpectralState(K, g);
  out.tau = tau;
  if (cfg.mode == SimMode::FreeStreaming) {
    std::fill(out.data().begin(), out.data().end(), cplx(0.0));
    return;
  }
  const auto rho = density_modes(state, tau, false);
  auto rho_at = [&](int k) { return rho[static_cast<std::size_t>(k + K)]; };
  double amp = 4.0 * kPi;
  if (cfg.model.kind() != ExpansionKind::Constant) amp *= std::pow(cfg.model.a_of_T(tau), cfg.dim_power);
  const double sf = -static_cast<double>(eps_F(cfg.sign));
  const bool nonlinear = cfg.mode == SimMode::FullNonlinear;
  const std::size_t n = g.size();

  auto point = [&](int k, std::size_t i) {
    const double xi = g.node(i);
    const double w = xi - k * tau;
    cplx v = 0.0;
    if (k != 0) v -= sf * amp * (w / k) * rho_at(k) * mu_hat(cfg.eq, w);
    if (nonlinear) {
      auto term = [&](int l) -> cplx {
        if (std::abs(k - l) > K) return 0.0;
        const cplx r = rho_at(l);
        if (r == cplx(0.0)) return 0.0;
        return sf * amp * (w / l) * r * interpolate_cubic<cplx>(g, state.row(k - l), xi - l * tau);
      };
      // Summing l and -l as a pair makes the mirrored point (-k, -xi) the exact
      // conjugate, so reality symmetry survives rounding even in unstable runs.
      for (int l = 1; l <= K; ++l) v += term(l) + term(-l);
    }
    out.at(k, i) = v;
  };

  const auto total = static_cast<std::ptrdiff_t>(state.n_modes() * n);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
      point(static_cast<int>(idx / static_cast<std::ptrdiff_t>(n)) - K,
            static_cast<std::size_t>(idx % static_cast<std::ptrdiff_t>(n)));
    }
  } else {
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
      point(static_cast<int>(idx / static_cast<std::ptrdiff_t>(n)) - K,
            static_cast<std::size_t>(idx % static_cast<std::ptrdiff_t>(n)));
    }
  }
}

namespace {

void axpy(SpectralState& y, const SpectralState& x, double a, const SpectralState& base) {
  auto& yd = y.data();
  const auto& xd = x.data();
  const auto& bd = base.data();
  for (std::size_t i = 0; i < yd.size(); ++i) yd[i] = bd[i] + a * xd[i];
}

}  // namespace

void step(SpectralState& state, const SimConfig& cfg, Exec exec) {
  const double h = cfg.dtau;
  const double t0 = state.tau;
  SpectralState k1, k2, k3, k4, tmp = state;
  rhs(state, t0, cfg, k1, exec);
  axpy(tmp, k1, 0.5 * h, state);
  rhs(tmp, t0 + 0.5 * h, cfg, k2, exec);
  axpy(tmp, k2, 0.5 * h, state);
  rhs(tmp, t0 + 0.5 * h, cfg, k3, exec);
  axpy(tmp, k3, h, state);
  rhs(tmp, t0 + h, cfg, k4, exec);
  auto& d = state.data();
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] += (h / 6.0) * (k1.data()[i] + 2.0 * k2.data()[i] + 2.0 * k3.data()[i] + k4.data()[i]);
    const double m = std::abs(d[i]);
    if (!std::isfinite(m) || m > cfg.blowup_threshold) {
      std::ostringstream os;
      os << "blow-up at tau = " << t0 + h << ": |h_hat| = " << m << " exceeds " << cfg.blowup_threshold;
      throw BlowUpError(os.str(), t0 + h);
    }
  }
  state.tau = t0 + h;
}

double reality_defect(const SpectralState& s) {
  const int K = s.k_max();
  const std::size_t n = s.grid().size();
  double worst = 0.0;
  for (int k = -K; k <= K; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(s.at(-k, n - 1 - i) - std::conj(s.at(k, i))));
    }
  }
  return worst;
}

namespace {

std::vector<DensityMode> as_modes(const std::vector<cplx>& rho, int K) {
  std::vector<DensityMode> out;
  for (int k = -K; k <= K; ++k) {
    if (k != 0) out.push_back({{k}, rho[static_cast<std::size_t>(k + K)]});
  }
  return out;
}

}  // namespace

SimResult run_simulation(const SimConfig& cfg, const InitSpec& init, const GevreyParams& gp,
                         std::size_t out_every, Exec exec) {
  if (out_every < 1) throw DomainError("run_simulation: out_every must be >= 1");
  gp.validate();
  SpectralState state = init_state(cfg, init, gp);
  const int K = cfg.k_max;
  const bool allow_outside = cfg.mode == SimMode::FreeStreaming;
  GevreyParams torus = gp;
  torus.sigma = 0.0;
  SimResult res;
  const SpectralState* prev = nullptr;

  auto record = [&]() {
    SeriesRow row;
    row.tau = state.tau;
    row.t = cfg.model.T_of_tau(state.tau);
    row.rho = density_modes(state, state.tau, allow_outside);
    row.abs_rho1 = std::abs(row.rho[static_cast<std::size_t>(K + 1)]);
    const auto modes = as_modes(row.rho, K);
    row.z = sliding_z(gp, state.tau);
    row.F = generator_F(gp, modes, state.tau, row.z);
    row.G = generator_G(gp, state, row.z);
    row.diag_embedding = row.G > 0.0 ? row.F / std::sqrt(row.G) : std::numeric_limits<double>::quiet_NaN();
    const double a = cfg.model.a_of_T(state.tau);
    row.diag_bootstrap = std::numeric_limits<double>::quiet_NaN();
    if (prev != nullptr && state.tau > prev->tau) {
      const double dG_dtau = (row.G - generator_G(gp, *prev, row.z)) / (state.tau - prev->tau);
      constexpr double hz = 1e-4;
      const double dG_dz = (generator_G(gp, state, std::min(1.0, row.z + hz)) -
                            generator_G(gp, state, std::max(0.0, row.z - hz))) /
                           (std::min(1.0, row.z + hz) - std::max(0.0, row.z - hz));
      const double denom = a * row.F * std::sqrt(row.G) + a * japanese_bracket(state.tau) * row.F * dG_dz;
      if (denom > 0.0) row.diag_bootstrap = dG_dtau / denom;
    }
    row.phys_density_norm = std::pow(a, -static_cast<double>(cfg.dim)) *
                            gevrey_norm_torus(torus, modes, gp.lambda_prime);
    row.h00 = std::abs(state.at(0, state.grid().center()));
    row.reality_defect = reality_defect(state);
    for (int k : {-K, K}) {
      for (const auto& v : state.row(k)) row.top_mode_amplitude = std::max(row.top_mode_amplitude, std::abs(v));
    }
    res.max_h00 = std::max(res.max_h00, row.h00);
    res.max_reality_defect = std::max(res.max_reality_defect, row.reality_defect);
    res.rows.push_back(std::move(row));
    res.snapshots.push_back(state);
    prev = &res.snapshots.back();
  };

  res.snapshots.reserve(cfg.steps() / out_every + 2);
  record();
  const std::size_t n = cfg.steps();
  for (std::size_t s = 1; s <= n; ++s) {
    step(state, cfg, exec);
    state.tau = static_cast<double>(s) * cfg.dtau;
    if (s % out_every == 0 || s == n) record();
  }
  return res;
}

HInfinityReport h_infinity_report(const std::vector<SpectralState>& snapshots, const GevreyParams& gp,
                                  double lambda_prime) {
  if (snapshots.size() < 3) throw DomainError("h_infinity_report: need at least three snapshots");
  if (!(lambda_prime >= 0.0 && lambda_prime < gp.lambda1)) {
    throw DomainError("h_infinity_report: lambda_prime must lie in [0, lambda1)");
  }
  const SpectralState& last = snapshots.back();
  HInfinityReport rep;
  for (const auto& s : snapshots) {
    if (s.data().size() != last.data().size()) throw DomainError("h_infinity_report: snapshot shape mismatch");
    SpectralState diff = s;
    for (std::size_t i = 0; i < diff.data().size(); ++i) diff.data()[i] -= last.data()[i];
    rep.rows.push_back({s.tau, gevrey_norm_phase_space(gp, diff, lambda_prime)});
  }
  rep.final_half_nonincreasing = true;
  for (std::size_t i = rep.rows.size() / 2 + 1; i < rep.rows.size(); ++i) {
    if (rep.rows[i].distance > rep.rows[i - 1].distance) rep.final_half_nonincreasing = false;
  }
  return rep;
}

}  // namespace elandau
