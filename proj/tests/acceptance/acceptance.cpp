// One PASS/FAIL line per acceptance criterion. `acceptance --only <name>`
// runs a single criterion; without arguments all of them run in order.
#include "elandau/cosmology.hpp"
#include "elandau/gevrey.hpp"
#include "elandau/harness.hpp"
#include "elandau/kinetic.hpp"
#include "elandau/liouville_green.hpp"
#include "elandau/penrose.hpp"
#include "elandau/volterra.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace elandau;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [violated]");
  }
};

std::string g(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const double kW = 2.0 * std::sqrt(kPi);

// ------------------------------------------------------------------ resolvent

void resolvent_oracle_q0(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto eq = Equilibrium::poisson(1.0, 1);
  const auto flat = ScaleFactorModel::constant();
  const TauGrid grid(10.0, 10000);
  const auto K = mode_kernel(eq, flat, Interaction::Repulsive, 1.0);
  const auto table = resolvent_column(K, grid, 0);
  const auto ode = resolvent_via_ode(eq, flat, Interaction::Repulsive, 1.0, 0.0, grid);
  double e_table = 0.0, e_ode = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = grid.node(i);
    const double ref = -kW * std::exp(-s) * std::sin(kW * s);
    e_table = std::max(e_table, std::abs(table[i] - ref));
    e_ode = std::max(e_ode, std::abs(ode[i] - ref));
  }
  const double secs = seconds_since(t0);
  v.require(e_table <= 1e-4, "table sup error " + g(e_table));
  v.require(e_ode <= 1e-4, "ode sup error " + g(e_ode));
  v.require(secs < 60.0, "runtime " + g(secs) + " s");
}

void resolvent_bound_refinement(Verdict& v) {
  const auto eq = Equilibrium::poisson(1.0, 1);
  for (double q : {0.1, 0.25, 0.4}) {
    const auto m = ScaleFactorModel::power_law(q, 1.0);
    for (double k : {1.0, 2.0}) {
      const auto K = mode_kernel(eq, m, Interaction::Repulsive, k);
      const double c1 = check_resolvent_bound(resolvent_table(K, TauGrid(10.0, 500), k), m, 1.0, k).c_linear_quadratic;
      const double c2 = check_resolvent_bound(resolvent_table(K, TauGrid(10.0, 1000), k), m, 1.0, k).c_linear_quadratic;
      const double change = std::abs(c2 / c1 - 1.0);
      v.require(std::isfinite(c1) && change <= 0.10,
                "q=" + g(q) + " k=" + g(k) + " C=" + g(c1) + "->" + g(c2) + " (" + g(100 * change) + "%)");
    }
  }
}

void cross_route_agreement(Verdict& v) {
  const auto eq = Equilibrium::poisson(1.0, 1);
  for (double q : {0.0, 0.25}) {
    const auto m = q == 0.0 ? ScaleFactorModel::constant() : ScaleFactorModel::power_law(q, 1.0);
    for (double k : {1.0, 2.0}) {
      const TauGrid grid(10.0, 2000);
      const auto table = resolvent_table(mode_kernel(eq, m, Interaction::Repulsive, k), grid, k);
      double worst = 0.0;
      for (std::size_t j : {0u, 400u, 1000u}) {
        const auto ode = resolvent_via_ode(eq, m, Interaction::Repulsive, k, grid.node(j), grid);
        double diff = 0.0, sup = 0.0;
        for (std::size_t i = j; i < grid.size(); ++i) {
          diff = std::max(diff, std::abs(table.value(i, j) - ode[i]));
          sup = std::max(sup, std::abs(ode[i]));
        }
        worst = std::max(worst, diff / sup);
      }
      v.require(worst <= 1e-3, "q=" + g(q) + " k=" + g(k) + " rel " + g(worst));
    }
  }
}

void gravitational_growth(Verdict& v) {
  const auto eq = Equilibrium::poisson(1.0, 1);
  const TauGrid grid(15.0, 15000);
  const auto nodes = grid.nodes();
  for (double k : {1.0, 2.0}) {
    const auto col = resolvent_column(mode_kernel(eq, ScaleFactorModel::constant(), Interaction::Attractive, k), grid, 0);
    const double rate = fit_growth_rate(nodes, col, 5.0, 15.0).slope;
    const double expected = kW - k;
    v.require(std::abs(rate / expected - 1.0) <= 0.02, "k=" + g(k) + " rate " + g(rate) + " vs " + g(expected));
  }
}

// -------------------------------------------------------------------- penrose

void penrose_closed_form(Verdict& v) {
  const double th = 1.0;
  const auto eq = Equilibrium::poisson(th, 1);
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> re(0.0, 5.0), im(-50.0, 50.0);
  std::uniform_int_distribution<int> kk(1, 10);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::complex<double> lam(re(rng), im(rng));
    const double k = kk(rng);
    for (auto s : {Interaction::Repulsive, Interaction::Attractive}) {
      const auto ref = 1.0 - 4.0 * kPi * eps_F(s) / ((lam + th * k) * (lam + th * k));
      worst = std::max(worst, std::abs(dielectric(eq, s, k, lam) - ref));
    }
  }
  v.require(worst <= 1e-8, "closed form max error " + g(worst));

  PenroseScanOptions o;
  o.k_max = 10;
  const auto rep = penrose_margin(eq, Interaction::Repulsive, o);
  v.require(rep.stable, "repulsive stable, kappa " + g(rep.kappa));

  // theta0 |k| < 2√π at the smallest mode: the largest real root is 2√π - theta0.
  for (double t : {0.5, 1.0, 2.0, 3.0}) {
    PenroseScanOptions a;
    a.k_max = 3;
    const auto r = penrose_margin(Equilibrium::poisson(t, 1), Interaction::Attractive, a);
    const double err = r.root ? std::abs(*r.root - std::complex<double>(kW - t, 0.0)) : INFINITY;
    v.require(!r.stable && err <= 1e-6, "attractive theta0=" + g(t) + " root error " + g(err));
  }
}

void jeans_threshold(Verdict& v) {
  const double L = jeans_length(1.0, 1.0);
  v.require(L == 2.0, "jeans_length(1,1) = " + format_g17(L));
  PenroseScanOptions o;
  o.k_max = 3;
  o.n_scan = 128;
  const double rho_c = 1.0 / (4.0 * kPi);  // T = 4π rho0 at T = 1
  const bool below = penrose_margin(Equilibrium::maxwellian(1.0, 0.9 * rho_c, 1), Interaction::Attractive, o).stable;
  const bool above = penrose_margin(Equilibrium::maxwellian(1.0, 1.1 * rho_c, 1), Interaction::Attractive, o).stable;
  v.require(below && !above, "Maxwellian verdict flips at T = 4π rho0");
}

// ------------------------------------------------------------ Liouville–Green

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> x(n + 1);
  for (std::size_t i = 0; i <= n; ++i) x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  return x;
}

void lg_budget(Verdict& v) {
  const auto m = ScaleFactorModel::power_law(0.25, 1.0);
  const double scale = 4.0 * kPi, hi = 40.0;
  const auto basis = lg_basis_for_model(m, scale, 0.0, hi);
  const auto nodes = linspace(0.0, hi, 4000);
  const auto [w1, w2] = reference_fundamental_pair(basis, nodes);
  const auto phase = basis.phase_on(nodes);
  const auto budget = lg_error_budget_on(basis, nodes);
  double excess = -INFINITY, vgap = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double dev = std::abs(w1[i].u * std::pow(basis.a(nodes[i]), 0.25) - std::sin(phase[i]));
    excess = std::max(excess, dev - budget[i].bound);
    // V(x) = (9/160)(1 - B^{-5/4}) (4π)^{-1/2}, B = x/2 + 1
    const double B = 0.5 * nodes[i] + 1.0;
    const double closed = 9.0 / 160.0 * (1.0 - std::pow(B, -1.25)) / std::sqrt(scale);
    vgap = std::max(vgap, std::abs(budget[i].variation - closed));
  }
  v.require(excess <= 0.0, "max(deviation - budget) " + g(excess));
  v.require(vgap <= 1e-6, "variation vs closed form " + g(vgap));
  const auto adm = check_admissibility(m, 1e4, 64);
  v.require(std::abs(adm.example_formula_integral - 3.0 / 32.0) <= 1e-6,
            "example integral " + format_g17(adm.example_formula_integral));
  v.require(std::abs(adm.lg_integral / std::sqrt(scale) - 9.0 / 160.0 / std::sqrt(scale)) <= 1e-6,
            "variation at infinity " + g(adm.lg_integral / std::sqrt(scale)));
}

void wronskian(Verdict& v) {
  std::vector<std::pair<std::string, LGBasis>> cases;
  for (double q : {0.1, 0.25, 0.4, 0.5}) {
    cases.emplace_back("q=" + g(q), lg_basis_for_model(ScaleFactorModel::power_law(q, 1.0), 4.0 * kPi, 0.0, 20.0));
  }
  cases.emplace_back("constant", lg_basis_for_model(ScaleFactorModel::constant(), 4.0 * kPi, 0.0, 20.0));
  cases.emplace_back("2+sin", LGBasis([](double x) { return 2.0 + std::sin(x); }, 0.0, 20.0));
  double worst = 0.0;
  for (const auto& [name, b] : cases) {
    const auto [w1, w2] = reference_fundamental_pair(b, linspace(0.0, 20.0, 2000));
    worst = std::max(worst, wronskian_defect(w1, w2));
  }
  v.require(worst <= 1e-8, "max |W + 1| " + g(worst) + " over " + std::to_string(cases.size()) + " profiles");
}

// -------------------------------------------------------------------- kinetic

void free_streaming_oracle(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  SimConfig c;
  c.mode = SimMode::FreeStreaming;
  c.k_max = 2;
  c.xi_max = 14.0;
  c.n_xi = 1024;
  c.tau_end = 8.0;
  c.dtau = 0.01;
  c.epsilon = 1.0;
  const auto r = run_simulation(c, {}, {}, 1);
  double worst = 0.0;
  for (const auto& row : r.rows) {
    worst = std::max(worst, std::abs(row.abs_rho1 - c.epsilon * c.epsilon * std::exp(-0.5 * row.tau * row.tau)));
  }
  const double secs = seconds_since(t0);
  v.require(worst <= 1e-6, "sup error " + g(worst));
  v.require(secs < 120.0, "runtime " + g(secs) + " s");
}

void linear_kinetic_volterra(Verdict& v) {
  for (double q : {0.0, 0.25}) {
    SimConfig c;
    c.mode = SimMode::Linearized;
    c.model = q == 0.0 ? ScaleFactorModel::constant() : ScaleFactorModel::power_law(q, 1.0);
    c.k_max = 2;
    c.tau_end = 10.0;
    c.dtau = 0.01;
    c.n_xi = 2048;
    c.xi_max = c.required_xi_max();
    c.epsilon = 1e-3;
    InitSpec init;
    init.coefficients = {{1, 1.0}, {-1, 1.0}, {2, {0.5, 0.5}}, {-2, {0.5, -0.5}}};
    const auto r = run_simulation(c, init, {}, 1);
    const TauGrid grid(c.tau_end, c.steps());
    for (int k = 1; k <= 2; ++k) {
      std::vector<std::complex<double>> src(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = k * grid.node(i);
        src[i] = c.epsilon * c.epsilon * init.coefficients[k] * std::exp(-0.5 * x * x);
      }
      const auto phi = solve_volterra(mode_kernel(c.eq, c.model, c.sign, k, 1.0), src, grid);
      double diff = 0.0, sup = 0.0;
      for (std::size_t i = 0; i < r.rows.size(); ++i) {
        diff = std::max(diff, std::abs(r.rows[i].rho[static_cast<std::size_t>(k + c.k_max)] - phi[i]));
        sup = std::max(sup, std::abs(phi[i]));
      }
      v.require(diff / sup <= 1e-2, "q=" + g(q) + " k=" + std::to_string(k) + " rel " + g(diff / sup));
    }
  }
}

void conservation(Verdict& v) {
  double h00 = 0.0, real = 0.0;
  int runs = 0;
  for (auto mode : {SimMode::FreeStreaming, SimMode::Linearized, SimMode::FullNonlinear}) {
    for (auto sign : {Interaction::Repulsive, Interaction::Attractive}) {
      for (double q : {0.0, 0.25}) {
        SimConfig c;
        c.mode = mode;
        c.sign = sign;
        c.model = q == 0.0 ? ScaleFactorModel::constant() : ScaleFactorModel::power_law(q, 1.0);
        c.k_max = 3;
        c.tau_end = 4.0;
        c.dtau = 0.01;
        c.n_xi = 1024;
        c.xi_max = c.required_xi_max();
        c.epsilon = 0.05;
        InitSpec init;
        init.coefficients = {{1, {1.0, 0.3}}, {-1, {1.0, -0.3}}, {3, {0.0, 0.2}}, {-3, {0.0, -0.2}}};
        const auto r = run_simulation(c, init, {}, 1);
        h00 = std::max(h00, r.max_h00);
        real = std::max(real, r.max_reality_defect);
        ++runs;
      }
    }
  }
  v.require(h00 <= 1e-12, "max |h(0,0)| " + g(h00));
  v.require(real <= 1e-10, "max reality defect " + g(real) + " over " + std::to_string(runs) + " runs");
}

void nonlinear_damping_trend(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> c_hat;
  for (double q : {0.1, 0.4}) {
    SimConfig c;
    c.mode = SimMode::FullNonlinear;
    c.model = ScaleFactorModel::power_law(q, 1.0);
    c.k_max = 4;
    c.n_xi = 2048;
    c.tau_end = 10.0;
    c.dtau = 0.01;
    c.xi_max = c.required_xi_max();
    c.epsilon = 1e-3;
    const auto r = run_simulation(c, {}, {}, 5);
    std::vector<double> tau, mag;
    double at2 = NAN, at10 = NAN;
    for (const auto& row : r.rows) {
      tau.push_back(row.tau);
      mag.push_back(row.abs_rho1);
      if (std::abs(row.tau - 2.0) < 1e-9) at2 = row.abs_rho1;
      if (std::abs(row.tau - 10.0) < 1e-9) at10 = row.abs_rho1;
    }
    FitOptions o;
    o.upper_envelope = true;
    const auto f = fit_decay(tau, mag, o, c.model);
    c_hat.push_back(f.c_hat);
    v.require(at10 < at2, "q=" + g(q) + " |rho1| " + g(at2) + " -> " + g(at10));
    v.require(r.max_h00 <= 1e-12 && r.max_reality_defect <= 1e-10, "q=" + g(q) + " conserved");
  }
  v.require(c_hat[0] >= c_hat[1] && c_hat[1] > 0.0, "c_hat(0.1)=" + g(c_hat[0]) + " c_hat(0.4)=" + g(c_hat[1]));
  const double secs = seconds_since(t0);
  v.require(secs < 900.0, "runtime " + g(secs) + " s");
}

// ---------------------------------------------------------------- lemmas etc.

void inequality_lemmas(Verdict& v) {
  const auto s = run_inequality_sweep(10000, 42);
  v.require(s.triangle_violations == 0, "triangle " + std::to_string(s.triangle_violations));
  v.require(s.ratio_violations == 0, "ratio " + std::to_string(s.ratio_violations));
  v.require(s.algebra_violations == 0, "algebra " + std::to_string(s.algebra_violations));
  v.require(s.peak_printed_violations == 0, "peak bound as printed " + std::to_string(s.peak_printed_violations) +
                                                " (worst log(sup/bound) " + g(s.peak_printed_worst_log_ratio) + ")");
  // Informational: the exact supremum (b1/(c b2))^{b1/b2} e^{-b1/b2} holds.
  v.detail << "; sharp peak bound violations " << s.peak_sharp_violations;
}

void friedman_consistency(Verdict& v) {
  std::vector<double> ts;
  for (int i = 0; i <= 1000; ++i) ts.push_back(1.0 + 0.099 * i);
  struct Case {
    double q;
    int d;
    int eps;
  };
  for (const auto& c : {Case{0.5, 3, -1}, Case{2.0 / 3.0, 3, 1}, Case{0.25, 4, -1}}) {
    const double r = friedman_residual({c.q, 1.0}, c.d, c.eps, ts);
    v.require(r <= 1e-10, "q=" + g(c.q) + " d=" + std::to_string(c.d) + " residual " + g(r));
  }
}

struct Criterion {
  const char* name;
  std::function<void(Verdict&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"resolvent_oracle_q0", resolvent_oracle_q0},
      {"resolvent_bound_refinement", resolvent_bound_refinement},
      {"cross_route_agreement", cross_route_agreement},
      {"penrose_closed_form", penrose_closed_form},
      {"gravitational_growth", gravitational_growth},
      {"jeans_threshold", jeans_threshold},
      {"lg_budget", lg_budget},
      {"wronskian", wronskian},
      {"free_streaming_oracle", free_streaming_oracle},
      {"linear_kinetic_volterra", linear_kinetic_volterra},
      {"conservation", conservation},
      {"nonlinear_damping_trend", nonlinear_damping_trend},
      {"inequality_lemmas", inequality_lemmas},
      {"friedman_consistency", friedman_consistency},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = argv[++i];
    } else if (std::strcmp(argv[i], "--list") == 0) {
      for (const auto& c : criteria()) std::cout << c.name << '\n';
      return 0;
    } else {
      std::cerr << "usage: acceptance [--only <criterion>] [--list]\n";
      return 2;
    }
  }
  bool any = false, all_pass = true;
  for (const auto& c : criteria()) {
    if (!only.empty() && only != c.name) continue;
    any = true;
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (v.pass ? "PASS " : "FAIL ") << c.name << " (" << g(seconds_since(t0)) << " s): " << v.detail.str()
              << std::endl;
    all_pass = all_pass && v.pass;
  }
  if (!any) {
    std::cerr << "unknown criterion: " << only << '\n';
    return 2;
  }
  return all_pass ? 0 : 1;
}
