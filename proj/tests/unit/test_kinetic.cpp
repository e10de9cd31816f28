#include "elandau/kinetic.hpp"
#include "elandau/kinetic_io.hpp"
#include "elandau/volterra.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace elandau;

namespace {
SimConfig small(SimMode mode) {
  SimConfig c;
  c.mode = mode;
  c.k_max = 2;
  c.n_xi = 512;
  c.tau_end = 3.0;
  c.dtau = 0.01;
  c.epsilon = 0.1;
  c.xi_max = c.required_xi_max();
  return c;
}
}  // namespace

TEST_CASE("free streaming transports rho_1 = eps² exp(-tau²/2)") {
  SimConfig c = small(SimMode::FreeStreaming);
  c.k_max = 2;
  c.xi_max = 14.0;
  c.n_xi = 1024;
  c.tau_end = 8.0;
  c.epsilon = 1.0;
  const auto r = run_simulation(c, {}, {}, 10);
  double worst = 0.0;
  for (const auto& row : r.rows) worst = std::max(worst, std::abs(row.abs_rho1 - std::exp(-0.5 * row.tau * row.tau)));
  CHECK(worst < 1e-6);
}

TEST_CASE("linearized modes follow the Volterra equation") {
  SimConfig c = small(SimMode::Linearized);
  c.model = ScaleFactorModel::power_law(0.25, 1.0);
  InitSpec init;
  init.coefficients = {{1, 1.0}, {-1, 1.0}, {2, {0.0, 0.5}}, {-2, {0.0, -0.5}}};
  const auto r = run_simulation(c, init, {}, 1);
  const auto s0 = init_state(c, init);
  const TauGrid g(c.tau_end, c.steps());
  for (int k = 1; k <= 2; ++k) {
    std::vector<std::complex<double>> src(g.size());
    // source: free-streamed initial datum, h_hat(0, k, k tau)
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = k * g.node(i);
      src[i] = c.epsilon * c.epsilon * init.coefficients[k] * std::exp(-0.5 * x * x);
    }
    const auto phi = solve_volterra(mode_kernel(c.eq, c.model, c.sign, k, 1.0), src, g);
    double diff = 0, sup = 0;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      diff = std::max(diff, std::abs(r.rows[i].rho[static_cast<std::size_t>(k + 2)] - phi[i]));
      sup = std::max(sup, std::abs(phi[i]));
    }
    CHECK(diff / sup < 1e-2);
  }
  CHECK(s0.at(0, s0.grid().center()) == 0.0);
}

TEST_CASE("conservation and reality in the nonlinear flow") {
  SimConfig c = small(SimMode::FullNonlinear);
  c.epsilon = 0.3;
  const auto r = run_simulation(c, {}, {}, 5);
  CHECK(r.max_h00 <= 1e-12);
  CHECK(r.max_reality_defect <= 1e-10);
  CHECK(r.rows.back().tau == doctest::Approx(c.tau_end));
}

TEST_CASE("serial and parallel right-hand sides agree") {
  SimConfig c = small(SimMode::FullNonlinear);
  c.epsilon = 0.5;
  const auto s = init_state(c, {});
  SpectralState a = s, b = s;
  rhs(s, 0.7, c, a, Exec::Serial);
  rhs(s, 0.7, c, b, Exec::Parallel);
  for (std::size_t i = 0; i < a.data().size(); ++i) CHECK(a.data()[i] == b.data()[i]);
}

TEST_CASE("config validation and initial data") {
  SimConfig c = small(SimMode::FullNonlinear);
  c.xi_max = 3.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = small(SimMode::FullNonlinear);
  c.dtau = 0.07;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = small(SimMode::FullNonlinear);
  InitSpec bad;
  bad.coefficients = {{1, 1.0}, {-1, 2.0}};
  CHECK_THROWS_AS(init_state(c, bad), DomainError);
  InitSpec charged;
  charged.coefficients = {{0, 1.0}};
  CHECK_THROWS_AS(init_state(c, charged), DomainError);
  GevreyParams gp;
  InitSpec norm;
  norm.normalization = InitNormalization::GevreyNorm;
  const auto s = init_state(c, norm, gp);
  CHECK(gevrey_norm_phase_space(gp, s, gp.lambda0) == doctest::Approx(c.epsilon * c.epsilon));
  CHECK(sim_mode_from_string("full_nonlinear") == SimMode::FullNonlinear);
  CHECK(sim_mode_from_string("Linearized") == SimMode::Linearized);
  CHECK_THROWS(sim_mode_from_string("bogus"));
}

TEST_CASE("blow-up is reported with its time") {
  SimConfig c = small(SimMode::FullNonlinear);
  c.sign = Interaction::Attractive;
  c.k_max = 1;
  c.epsilon = 3.0;
  c.tau_end = 12.0;
  c.xi_max = c.required_xi_max();
  c.blowup_threshold = 1e6;
  CHECK_THROWS_AS(run_simulation(c, {}, {}, 100), BlowUpError);
}

TEST_CASE("artifact formats round-trip") {
  SimConfig c = small(SimMode::Linearized);
  const auto r = run_simulation(c, {}, {}, 50);
  const auto dir = std::filesystem::temp_directory_path() / "elandau_kinetic_io";
  std::filesystem::create_directories(dir);
  write_snapshots_bin(dir / "s.bin", r.snapshots);
  const auto f = read_snapshots_bin(dir / "s.bin");
  CHECK(f.n_modes == 5);
  CHECK(f.n_points == c.n_xi + 1);
  CHECK(f.tau.size() == r.snapshots.size());
  CHECK(f.xi_max == c.xi_max);
  const auto& last = r.snapshots.back();
  for (std::size_t i = 0; i < last.data().size(); i += 97) {
    CHECK(std::abs(std::complex<double>(f.data.back()[i]) - last.data()[i]) <= 1e-6 * std::abs(last.data()[i]) + 1e-30);
  }
  write_timeseries_csv(dir / "t.csv", r, c.k_max);
  std::ifstream is(dir / "t.csv");
  std::string header;
  std::getline(is, header);
  CHECK(header.rfind("tau,t,re_rho_m2,im_rho_m2,", 0) == 0);
  CHECK(header.find(",abs_rho1,z,F_tilde,G_tilde,") != std::string::npos);
  std::size_t lines = 0;
  for (std::string l; std::getline(is, l);) ++lines;
  CHECK(lines == r.rows.size());
  CHECK(mode_label(-3) == "m3");
  std::filesystem::remove_all(dir);
}
