#include "elandau/gevrey.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace elandau {

void GevreyParams::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("GevreyParams: gamma must lie in (0, 1]");
  if (!(sigma >= 0.0)) throw DomainError("GevreyParams: sigma must be >= 0");
  if (!(alpha > 1.0 / 3.0 && alpha <= 1.0)) throw DomainError("GevreyParams: alpha must lie in (1/3, 1]");
  if (!(lambda0 > 0.0 && lambda0 <= 1.0)) throw DomainError("GevreyParams: lambda0 must lie in (0, 1]");
  if (!(lambda1 > 0.0 && lambda1 <= lambda0 / 4.0)) {
    throw DomainError("GevreyParams: lambda1 must lie in (0, lambda0/4]");
  }
  if (!(delta > 0.0)) throw DomainError("GevreyParams: delta must be positive");
  if (!(theta0 > 0.0)) throw DomainError("GevreyParams: theta0 must be positive");
  if (gamma == 1.0 && !(lambda1 < theta0 / 2.0)) {
    throw DomainError("GevreyParams: analytic case needs lambda1 < theta0/2");
  }
  if (!(lambda_prime >= 0.0)) throw DomainError("GevreyParams: lambda_prime must be >= 0");
}

bool GevreyParams::theorem_admissible(double beta, double beta_prime) const {
  const double s = beta + beta_prime;
  return gamma > 1.0 - 2.0 / (3.0 + s) && sigma > std::max(4.0, 2.0 + s);
}

double bracket(std::span<const double> k, std::span<const double> xi) {
  double s = 1.0;
  for (double c : k) s += c * c;
  for (double c : xi) s += c * c;
  return std::sqrt(s);
}

double bracket(double k_abs, double xi_abs) { return std::sqrt(1.0 + k_abs * k_abs + xi_abs * xi_abs); }

namespace {

double check_z(double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("Gevrey radius z must lie in [0, 1]");
  return z;
}

double multiplier_of_bracket(const GevreyParams& p, double z, double br) {
  return std::exp(z * std::pow(br, p.gamma)) * std::pow(br, p.sigma);
}

double log_multiplier(double gamma, double sigma, double z, double br) {
  return z * std::pow(br, gamma) + sigma * std::log(br);
}

}  // namespace

double multiplier_A(const GevreyParams& p, double z, std::span<const double> k, std::span<const double> xi) {
  return multiplier_of_bracket(p, check_z(z), bracket(k, xi));
}

double multiplier_A(const GevreyParams& p, double z, double k_abs, double xi_abs) {
  return multiplier_of_bracket(p, check_z(z), bracket(k_abs, xi_abs));
}

double sliding_z(const GevreyParams& p, double tau) {
  if (tau < 0.0) throw DomainError("sliding_z: tau < 0");
  return p.lambda1 * (1.0 + std::pow(japanese_bracket(tau), -p.delta));
}

double generator_F(const GevreyParams& p, std::span<const DensityMode> modes, double tau, double z) {
  check_z(z);
  double sup = 0.0;
  for (const auto& m : modes) {
    double k2 = 0.0;
    for (int c : m.k) k2 += static_cast<double>(c) * c;
    if (k2 == 0.0) continue;
    const double k_abs = std::sqrt(k2);
    const double br = bracket(k_abs, k_abs * std::abs(tau));
    sup = std::max(sup, multiplier_of_bracket(p, z, br) * std::pow(k_abs, -p.alpha) * std::abs(m.value));
  }
  return sup;
}

std::vector<std::complex<double>> xi_derivative(std::span<const std::complex<double>> f, double h) {
  const std::size_t n = f.size();
  if (n < 5) throw DomainError("xi_derivative: need at least five grid points");
  std::vector<std::complex<double>> d(n);
  const double s = 1.0 / (12.0 * h);
  d[0] = s * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
  d[1] = s * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
  for (std::size_t i = 2; i + 2 < n; ++i) d[i] = s * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
  d[n - 2] = -s * (-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] + f[n - 5]);
  d[n - 1] = -s * (-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] - 3.0 * f[n - 5]);
  return d;
}

namespace {

double weighted_l2(const GevreyParams& p, const SpectralState& st, double z, int max_j) {
  const auto& g = st.grid();
  if (g.size() < 5) throw DomainError("generator_G: xi grid too small for difference stencils");
  const double h = g.spacing();
  std::vector<double> w2(g.size());
  double total = 0.0;
  for (int k = -st.k_max(); k <= st.k_max(); ++k) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double a = multiplier_of_bracket(p, z, bracket(std::abs(k), std::abs(g.node(i))));
      w2[i] = a * a;
    }
    std::vector<std::complex<double>> cur(st.row(k).begin(), st.row(k).end());
    for (int j = 0; j <= max_j; ++j) {
      if (j > 0) cur = xi_derivative(cur, h);
      for (std::size_t i = 0; i < g.size(); ++i) total += w2[i] * std::norm(cur[i]) * h;
    }
  }
  return total;
}

}  // namespace

double generator_G(const GevreyParams& p, const SpectralState& state, double z) {
  return weighted_l2(p, state, check_z(z), state.dim());
}

double gevrey_norm_phase_space(const GevreyParams& p, const SpectralState& state, double z) {
  return std::sqrt(weighted_l2(p, state, check_z(z), 0));
}

double gevrey_norm_torus(const GevreyParams& p, std::span<const DensityMode> modes, double z) {
  check_z(z);
  double s = 0.0;
  for (const auto& m : modes) {
    double k2 = 0.0;
    for (int c : m.k) k2 += static_cast<double>(c) * c;
    const double br = std::sqrt(1.0 + k2);
    const double w = multiplier_of_bracket(p, z, br);
    s += w * w * std::norm(m.value);
  }
  return std::sqrt(s);
}

double peak_bound_printed(double b1, double b2, double c) {
  return std::pow(b1 / c, b1 / b2) * std::exp(-b1);
}

double peak_bound_sharp(double b1, double b2, double c) {
  return std::pow(b1 / (c * b2), b1 / b2) * std::exp(-b1 / b2);
}

InequalitySweep run_inequality_sweep(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> lattice(-20, 20);
  std::uniform_real_distribution<double> freq(-50.0, 50.0);
  std::uniform_real_distribution<double> wide(-100.0, 100.0);
  // (0, 10] and (0, 1]
  auto open10 = [&] { return 10.0 * (1.0 - unit(rng)); };
  auto open1 = [&] { return 1.0 - unit(rng); };
  constexpr double kSlack = 1e-12;

  InequalitySweep out;
  out.samples = samples;
  for (std::size_t n = 0; n < samples; ++n) {
    const double gamma = open1();
    const double z = unit(rng);
    const double sigma = open10();
    std::array<double, 3> k{}, kp{}, xi{}, xip{}, ks{}, xis{}, kd{}, xid{};
    for (int c = 0; c < 3; ++c) {
      k[c] = lattice(rng);
      kp[c] = lattice(rng);
      xi[c] = freq(rng);
      xip[c] = freq(rng);
      ks[c] = k[c] + kp[c];
      xis[c] = xi[c] + xip[c];
      kd[c] = k[c] - kp[c];
      xid[c] = xi[c] - xip[c];
    }
    const double b = bracket(k, xi);
    const double bp = bracket(kp, xip);
    const double bs = bracket(ks, xis);
    const double bd = bracket(kd, xid);

    const double tri_l = std::pow(bs, gamma), tri_r = std::pow(b, gamma) + std::pow(bp, gamma);
    if (tri_l > tri_r * (1.0 + kSlack)) ++out.triangle_violations;

    if (b / bp > 2.0 * bs * (1.0 + kSlack)) ++out.ratio_violations;

    // A_k <= 2^sigma A_{k-k'} A_{k'}, compared in logs.
    const double lhs = log_multiplier(gamma, sigma, z, b);
    const double rhs = sigma * std::log(2.0) + log_multiplier(gamma, sigma, z, bd) + log_multiplier(gamma, sigma, z, bp);
    if (lhs > rhs + kSlack * std::max(1.0, std::abs(rhs))) ++out.algebra_violations;

    const double b1 = open10(), b2 = open10(), c = open10();
    const double y = std::abs(wide(rng));
    const double log_val = y > 0.0 ? b1 * std::log(y) - c * std::pow(y, b2) : -INFINITY;
    const double log_printed = (b1 / b2) * std::log(b1 / c) - b1;
    const double log_sharp = (b1 / b2) * std::log(b1 / (c * b2)) - b1 / b2;
    if (log_val > log_printed + kSlack * std::max(1.0, std::abs(log_printed))) {
      ++out.peak_printed_violations;
      out.peak_printed_worst_log_ratio = std::max(out.peak_printed_worst_log_ratio, log_val - log_printed);
    }
    if (log_val > log_sharp + kSlack * std::max(1.0, std::abs(log_sharp))) ++out.peak_sharp_violations;
  }
  return out;
}

}  // namespace elandau
