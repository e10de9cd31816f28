#include "elandau/harness.hpp"

#include "elandau/kinetic_io.hpp"
#include "elandau/liouville_green.hpp"
#include "elandau/penrose.hpp"
#include "elandau/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace elandau {

namespace fs = std::filesystem;

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : "; ") + s;
  return out;
}

// Typed access to one JSON object that records every problem instead of
// stopping at the first.
class Reader {
 public:
  Reader(const json& j, std::string path, std::vector<std::string>& errors)
      : j_(j), path_(std::move(path)), errors_(errors) {
    if (!j_.is_null() && !j_.is_object()) fail("", "must be an object");
  }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  double number(const char* key, double fallback, const std::function<bool(double)>& ok = {},
                const char* reason = "") {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) {
      fail(key, "must be a number");
      return fallback;
    }
    const double x = v.get<double>();
    if (ok && !ok(x)) {
      fail(key, reason);
      return fallback;
    }
    return x;
  }

  long long integer(const char* key, long long fallback, const std::function<bool(long long)>& ok = {},
                    const char* reason = "") {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) {
      fail(key, "must be an integer");
      return fallback;
    }
    const auto x = v.get<long long>();
    if (ok && !ok(x)) {
      fail(key, reason);
      return fallback;
    }
    return x;
  }

  std::string text(const char* key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) {
      fail(key, "must be a string");
      return fallback;
    }
    return v.get<std::string>();
  }

  bool boolean(const char* key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) {
      fail(key, "must be a boolean");
      return fallback;
    }
    return v.get<bool>();
  }

  const json& sub(const char* key) const {
    static const json empty = json::object();
    return has(key) ? j_.at(key) : empty;
  }

  void only(std::initializer_list<const char*> allowed) {
    if (!j_.is_object()) return;
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j_.items()) {
      if (!ok.count(k)) fail(k.c_str(), "unknown field");
    }
  }

  void fail(const char* key, const std::string& reason) {
    std::string p = path_;
    if (key != nullptr && *key != '\0') p += (p.empty() ? "" : ".") + std::string(key);
    errors_.push_back(p + ": " + reason);
  }

  std::string child(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  json j_;
  std::string path_;
  std::vector<std::string>& errors_;
};

auto positive = [](double x) { return x > 0.0; };
auto nonneg = [](double x) { return x >= 0.0; };

}  // namespace

SchemaError::SchemaError(std::vector<std::string> fields)
    : std::runtime_error("invalid config: " + join(fields)), fields_(std::move(fields)) {}

// ---------------------------------------------------------------- decay fit

DecayFit fit_decay(std::span<const double> tau, std::span<const double> magnitude, const FitOptions& opts,
                   const ScaleFactorModel& model, int dim) {
  if (tau.size() != magnitude.size()) throw DomainError("fit_decay: tau and magnitude sizes differ");
  if (tau.size() < 3) throw DomainError("fit_decay: need at least three samples");
  if (!(opts.gamma > 0.0)) throw DomainError("fit_decay: gamma must be positive");
  double lo, hi;
  if (opts.window) {
    lo = opts.window->first;
    hi = opts.window->second;
  } else {
    if (!(opts.burn_in >= 0.0 && opts.burn_in < 1.0)) throw DomainError("fit_decay: burn_in must lie in [0, 1)");
    lo = tau.front() + opts.burn_in * (tau.back() - tau.front());
    hi = tau.back();
  }
  if (!(hi > lo)) throw DomainError("fit_decay: degenerate window");

  std::vector<double> mag(magnitude.begin(), magnitude.end());
  if (opts.upper_envelope) {
    for (std::size_t i = mag.size() - 1; i-- > 0;) mag[i] = std::max(mag[i], mag[i + 1]);
  }

  std::vector<double> x, y;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] < lo || tau[i] > hi) continue;
    if (!(mag[i] > 0.0)) {
      std::ostringstream os;
      os << "fit_decay: nonpositive magnitude " << mag[i] << " at tau = " << tau[i];
      throw DomainError(os.str());
    }
    double xi = 0.0;
    switch (opts.abscissa) {
      case FitAbscissa::Bracket: xi = std::pow(japanese_bracket(tau[i]), opts.gamma); break;
      case FitAbscissa::Plain: xi = std::pow(tau[i], opts.gamma); break;
      case FitAbscissa::TForm: {
        const double t = model.T_of_tau(tau[i]);
        xi = std::pow(t, opts.gamma * (1.0 - 2.0 * model.q()));
        break;
      }
    }
    double yi = std::log(mag[i]);
    if (opts.prefactor == PrefactorMode::AMinusD) yi += dim * std::log(model.a_of_T(tau[i]));
    x.push_back(xi);
    y.push_back(yi);
  }
  if (x.size() < 3) throw DomainError("fit_decay: degenerate window (fewer than three samples)");
  if (*std::max_element(x.begin(), x.end()) == *std::min_element(x.begin(), x.end())) {
    throw DomainError("fit_decay: degenerate window (constant abscissa)");
  }
  const LinearFit lf = fit_line(x, y);
  DecayFit f;
  f.gamma_used = opts.gamma;
  f.c_hat = -lf.slope;
  f.c0_hat = lf.intercept;
  // A perfectly flat series has no variance to explain.
  f.r2 = std::isfinite(lf.r2) ? std::clamp(lf.r2, 0.0, 1.0) : 1.0;
  f.window = {lo, hi};
  f.points = x.size();
  f.prefactor_mode = opts.prefactor;
  f.abscissa = opts.abscissa;
  f.non_exponential = f.r2 < 0.999;
  return f;
}

namespace {

const char* abscissa_name(FitAbscissa a) {
  switch (a) {
    case FitAbscissa::Bracket: return "bracket";
    case FitAbscissa::Plain: return "plain";
    case FitAbscissa::TForm: return "t_form";
  }
  return "?";
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json to_json(const DecayFit& f) {
  return json{{"gamma_used", f.gamma_used},
              {"c_hat", f.c_hat},
              {"c0_hat", f.c0_hat},
              {"r2", f.r2},
              {"window", json::array({f.window.first, f.window.second})},
              {"points", f.points},
              {"prefactor_mode", f.prefactor_mode == PrefactorMode::None ? "none" : "a_minus_d"},
              {"abscissa", abscissa_name(f.abscissa)},
              {"non_exponential", f.non_exponential}};
}

// ------------------------------------------------------------------ parsing

ScaleFactorModel parse_model(const json& j, std::vector<std::string>& errors) {
  Reader r(j, "model", errors);
  r.only({"kind", "q", "t0"});
  const std::string kind = r.text("kind", "constant");
  const double t0 = r.number("t0", 1.0, positive, "must be positive");
  if (kind == "constant") return ScaleFactorModel::constant(t0);
  if (kind != "power_law") {
    r.fail("kind", "must be \"power_law\" or \"constant\"");
    return ScaleFactorModel::constant(t0);
  }
  const double q = r.number("q", 0.25, [](double x) { return x >= 0.0 && x <= 0.5; }, "must lie in [0, 1/2]");
  return ScaleFactorModel::power_law(q, t0);
}

Equilibrium parse_equilibrium(const json& j, std::vector<std::string>& errors) {
  Reader r(j, "equilibrium", errors);
  r.only({"kind", "theta0", "temperature", "rho0", "dim"});
  const std::string kind = r.text("kind", "poisson");
  const auto dim = static_cast<int>(r.integer("dim", 1, [](long long d) { return d >= 1 && d <= 16; }, "must lie in [1, 16]"));
  if (kind == "maxwellian") {
    const double T = r.number("temperature", 1.0, positive, "must be positive");
    const double rho0 = r.number("rho0", 1.0, positive, "must be positive");
    return Equilibrium::maxwellian(T, rho0, dim);
  }
  if (kind != "poisson") r.fail("kind", "must be \"poisson\" or \"maxwellian\"");
  return Equilibrium::poisson(r.number("theta0", 1.0, positive, "must be positive"), dim);
}

Interaction parse_sign(const json& j, std::vector<std::string>& errors) {
  if (j.is_null()) return Interaction::Repulsive;
  if (!j.is_number_integer() || (j.get<int>() != 1 && j.get<int>() != -1)) {
    errors.push_back("sign: must be +1 (attractive) or -1 (repulsive)");
    return Interaction::Repulsive;
  }
  return interaction_from_eps(j.get<int>());
}

GevreyParams parse_gevrey(const json& j, std::vector<std::string>& errors) {
  Reader r(j, "gevrey", errors);
  r.only({"gamma", "sigma", "alpha", "lambda0", "lambda1", "delta", "theta0", "lambda_prime"});
  GevreyParams p;
  p.gamma = r.number("gamma", p.gamma);
  p.sigma = r.number("sigma", p.sigma);
  p.alpha = r.number("alpha", p.alpha);
  p.lambda0 = r.number("lambda0", p.lambda0);
  p.lambda1 = r.number("lambda1", p.lambda1);
  p.delta = r.number("delta", p.delta);
  p.theta0 = r.number("theta0", p.theta0);
  p.lambda_prime = r.number("lambda_prime", p.lambda_prime);
  try {
    p.validate();
  } catch (const DomainError& e) {
    errors.push_back(std::string("gevrey: ") + e.what());
  }
  return p;
}

FitOptions parse_fit(const json& j, std::vector<std::string>& errors) {
  Reader r(j, "fit", errors);
  r.only({"gamma", "abscissa", "prefactor", "burn_in", "window", "upper_envelope"});
  FitOptions f;
  f.gamma = r.number("gamma", f.gamma, positive, "must be positive");
  const std::string ab = r.text("abscissa", "bracket");
  if (ab == "bracket") f.abscissa = FitAbscissa::Bracket;
  else if (ab == "plain") f.abscissa = FitAbscissa::Plain;
  else if (ab == "t_form") f.abscissa = FitAbscissa::TForm;
  else r.fail("abscissa", "must be \"bracket\", \"plain\" or \"t_form\"");
  const std::string pf = r.text("prefactor", "none");
  if (pf == "none") f.prefactor = PrefactorMode::None;
  else if (pf == "a_minus_d") f.prefactor = PrefactorMode::AMinusD;
  else r.fail("prefactor", "must be \"none\" or \"a_minus_d\"");
  f.burn_in = r.number("burn_in", f.burn_in, [](double x) { return x >= 0.0 && x < 1.0; }, "must lie in [0, 1)");
  f.upper_envelope = r.boolean("upper_envelope", true);
  if (r.has("window")) {
    const json& w = j.at("window");
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number() ||
        !(w[1].get<double>() > w[0].get<double>())) {
      r.fail("window", "must be [lo, hi] with hi > lo");
    } else {
      f.window = std::make_pair(w[0].get<double>(), w[1].get<double>());
    }
  }
  return f;
}

namespace {

struct SimSetup {
  SimConfig cfg;
  InitSpec init;
  GevreyParams gp;
  FitOptions fit;
  std::size_t out_every = 1;
  std::size_t snapshot_stride = 1;
};

InitSpec parse_init(const json& j, std::vector<std::string>& errors) {
  Reader r(j, "init", errors);
  r.only({"modes", "width", "normalization"});
  InitSpec s;
  s.width = r.number("width", 1.0, positive, "must be positive");
  const std::string norm = r.text("normalization", "amplitude");
  if (norm == "amplitude") s.normalization = InitNormalization::Amplitude;
  else if (norm == "gevrey_norm") s.normalization = InitNormalization::GevreyNorm;
  else r.fail("normalization", "must be \"amplitude\" or \"gevrey_norm\"");
  if (r.has("modes")) {
    const json& m = j.at("modes");
    if (!m.is_array() || m.empty()) {
      r.fail("modes", "must be a nonempty array of {k, re, im}");
      return s;
    }
    s.coefficients.clear();
    for (std::size_t i = 0; i < m.size(); ++i) {
      const std::string p = r.child("modes") + "[" + std::to_string(i) + "]";
      Reader e(m[i], p, errors);
      e.only({"k", "re", "im"});
      const auto k = static_cast<int>(e.integer("k", 1));
      const std::complex<double> c(e.number("re", 0.0), e.number("im", 0.0));
      if (k == 0 && c != 0.0) {
        e.fail("k", "k = 0 must carry a zero coefficient (charge neutrality)");
        continue;
      }
      if (k < 0) {
        e.fail("k", "list k >= 1 only; the conjugate mode is implied by reality");
        continue;
      }
      s.coefficients[k] = c;
      s.coefficients[-k] = std::conj(c);
    }
  }
  return s;
}

SimSetup parse_sim(const json& cfg, SimMode default_mode, const ScaleFactorModel& model, const Equilibrium& eq,
                   Interaction sign, std::vector<std::string>& errors) {
  SimSetup s;
  Reader r(cfg.contains("sim") ? cfg.at("sim") : json(), "sim", errors);
  r.only({"k_max", "xi_max", "n_xi", "dtau", "tau_end", "mode", "epsilon", "dim_power", "out_every",
          "snapshot_stride", "blowup_threshold"});
  SimConfig& c = s.cfg;
  c.model = model;
  c.eq = eq;
  c.sign = sign;
  c.k_max = static_cast<int>(r.integer("k_max", 2, [](long long k) { return k >= 1 && k <= 64; }, "must lie in [1, 64]"));
  c.tau_end = r.number("tau_end", 8.0, positive, "must be positive");
  c.dtau = r.number("dtau", 0.01, positive, "must be positive");
  c.n_xi = static_cast<std::size_t>(
      r.integer("n_xi", 1024, [](long long n) { return n >= 64 && n % 2 == 0; }, "must be even and >= 64"));
  c.epsilon = r.number("epsilon", 1e-3, positive, "must be positive");
  c.dim_power = r.number("dim_power", 1.0);
  c.blowup_threshold = r.number("blowup_threshold", c.blowup_threshold, positive, "must be positive");
  c.mode = default_mode;
  if (r.has("mode")) {
    try {
      c.mode = sim_mode_from_string(r.text("mode", ""));
    } catch (const DomainError&) {
      r.fail("mode", "must be FreeStreaming, Linearized or FullNonlinear");
    }
  }
  c.xi_max = r.number("xi_max", c.required_xi_max(), positive, "must be positive");
  const auto steps = static_cast<long long>(std::llround(c.tau_end / c.dtau));
  const long long every_default = std::max<long long>(1, steps / 200);
  s.out_every = static_cast<std::size_t>(r.integer("out_every", every_default, [](long long n) { return n >= 1; }, "must be >= 1"));
  s.snapshot_stride = static_cast<std::size_t>(
      r.integer("snapshot_stride", std::max<long long>(1, steps / static_cast<long long>(s.out_every) / 50),
                [](long long n) { return n >= 1; }, "must be >= 1"));
  if (errors.empty()) {
    try {
      c.validate();
    } catch (const DomainError& e) {
      errors.push_back(std::string("sim: ") + e.what());
    }
  }
  s.init = parse_init(cfg.contains("init") ? cfg.at("init") : json(), errors);
  s.gp = parse_gevrey(cfg.contains("gevrey") ? cfg.at("gevrey") : json(), errors);
  s.fit = parse_fit(cfg.contains("fit") ? cfg.at("fit") : json(), errors);
  return s;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
  os << s;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

struct Context {
  json cfg;
  std::string experiment;
  fs::path out;
  std::uint64_t seed = 0;
  ScaleFactorModel model = ScaleFactorModel::constant();
  Equilibrium eq = Equilibrium::poisson(1.0, 1);
  Interaction sign = Interaction::Repulsive;
};

bool is_q0(const ScaleFactorModel& m) { return m.kind() == ExpansionKind::Constant || m.q() == 0.0; }

// ------------------------------------------------------------------ penrose

ExperimentOutcome run_penrose(const Context& ctx, std::vector<std::string>& errors) {
  Reader r(ctx.cfg.contains("penrose") ? ctx.cfg.at("penrose") : json(), "penrose", errors);
  r.only({"k_max", "n_scan", "omega_max", "tolerance", "n_interior_im", "dim", "a_t0", "closed_form_samples"});
  PenroseScanOptions o;
  o.k_max = r.number("k_max", 10.0, [](double x) { return x >= 1.0; }, "must be >= 1");
  o.n_scan = static_cast<int>(r.integer("n_scan", 512, [](long long n) { return n >= 64; }, "must be >= 64"));
  o.omega_max = r.number("omega_max", 0.0, nonneg, "must be >= 0");
  o.tolerance = r.number("tolerance", 1e-6, positive, "must be positive");
  o.n_interior_im = static_cast<int>(r.integer("n_interior_im", 65, [](long long n) { return n >= 0; }, "must be >= 0"));
  o.dim = static_cast<int>(r.integer("dim", 0, [](long long n) { return n >= 0; }, "must be >= 0"));
  const double a_t0 = r.number("a_t0", ctx.model.a(ctx.model.t0()), [](double x) { return x >= 1.0; }, "must be >= 1");
  const auto n_cf = r.integer("closed_form_samples", 100, [](long long n) { return n >= 0; }, "must be >= 0");
  if (!errors.empty()) throw SchemaError(errors);

  const PenroseReport rep = penrose_margin(ctx.eq, ctx.sign, o);
  json s;
  s["kappa"] = rep.kappa;
  s["stable"] = rep.stable;
  s["argmin_k"] = rep.argmin_k;
  s["argmin_lambda"] = complex_json(rep.argmin_lambda);
  s["root"] = rep.root ? complex_json(*rep.root) : json(nullptr);
  s["omega_max"] = rep.omega_max;
  s["scan_resolution"] = rep.scan_resolution;
  s["k_count"] = rep.k_range.size();
  s["tolerance"] = rep.tolerance;
  bool pass = true;

  const bool attractive = ctx.sign == Interaction::Attractive;
  if (ctx.eq.kind() == EquilibriumKind::PoissonFamily) {
    const double th = ctx.eq.theta0();
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> re(0.0, 5.0), im(-20.0, 20.0);
    const auto ks = rep.k_range;
    std::uniform_int_distribution<std::size_t> pick(0, ks.size() - 1);
    double worst = 0.0;
    for (long long i = 0; i < n_cf; ++i) {
      const std::complex<double> lam(re(rng), im(rng));
      const double k = ks[pick(rng)];
      const auto cf = 1.0 - 4.0 * kPi * eps_F(ctx.sign) / ((lam + th * k) * (lam + th * k));
      worst = std::max(worst, std::abs(dielectric(ctx.eq, ctx.sign, k, lam) - cf));
    }
    s["closed_form_max_error"] = worst;
    pass = pass && worst <= 1e-8;
    const double kmin = ks.front();
    const double w = 2.0 * std::sqrt(kPi);
    const bool expect_stable = !attractive || th * kmin > w;
    s["expected_stable"] = expect_stable;
    pass = pass && rep.stable == expect_stable;
    if (attractive && th * kmin < w) {
      const double expected = w - th * kmin;
      s["expected_root"] = expected;
      const double err = rep.root ? std::abs(*rep.root - std::complex<double>(expected, 0.0)) : INFINITY;
      s["root_error"] = finite_or_null(err);
      pass = pass && err <= 1e-6;
    }
  } else {
    const double T = ctx.eq.temperature(), rho0 = ctx.eq.rho0();
    s["jeans_length"] = jeans_length(T, rho0);
    // D(k, 0) = 1 - 4π eps_F rho0 / (T k²): attractive instability iff it
    // turns negative at the smallest lattice |k| = 1.
    const bool expect_stable = !attractive || 1.0 - 4.0 * kPi * rho0 / T > 0.0;
    s["expected_stable"] = expect_stable;
    pass = pass && rep.stable == expect_stable;
  }
  if (ctx.eq.dim() >= 5) {
    const PenroseReport ad = adapted_margin_d5(ctx.eq, a_t0, o.k_max, o);
    s["adapted_kappa"] = ad.kappa;
    s["adapted_stable"] = ad.stable;
    s["a_t0"] = a_t0;
  }

  std::ostringstream csv;
  csv << "k_abs,omega,re_D,im_D,abs_D\n";
  for (const auto& d : dielectric_trace(ctx.eq, ctx.sign, o)) {
    csv << format_g17(d.k_abs) << ',' << format_g17(d.omega) << ',' << format_g17(d.value.real()) << ','
        << format_g17(d.value.imag()) << ',' << format_g17(std::abs(d.value)) << '\n';
  }
  write_text(ctx.out / "dielectric_trace.csv", csv.str());
  return {s, pass, 0};
}

// ---------------------------------------------------------------- resolvent

ExperimentOutcome run_resolvent(const Context& ctx, std::vector<std::string>& errors) {
  Reader r(ctx.cfg.contains("resolvent") ? ctx.cfg.at("resolvent") : json(), "resolvent", errors);
  r.only({"k", "tau_max", "n", "fine_n", "fine_tau_max", "dim_power", "theta1_fraction", "growth_window"});
  const double k = r.number("k", 1.0, positive, "must be positive");
  const double tau_max = r.number("tau_max", 10.0, positive, "must be positive");
  const auto n = static_cast<std::size_t>(r.integer("n", 200, [](long long v) { return v >= 4 && v <= 4000; }, "must lie in [4, 4000]"));
  const bool attractive = ctx.sign == Interaction::Attractive;
  const double fine_tau_max = r.number("fine_tau_max", attractive ? std::max(15.0, tau_max) : tau_max, positive,
                                       "must be positive");
  const auto fine_n = static_cast<std::size_t>(
      r.integer("fine_n", static_cast<long long>(std::llround(fine_tau_max / 1e-3)),
                [](long long v) { return v >= 4; }, "must be >= 4"));
  const double p = r.number("dim_power", 1.0);
  const double theta1_frac = r.number("theta1_fraction", 0.25, [](double x) { return x > 0.0 && x <= 0.25; },
                                      "must lie in (0, 0.25]");
  std::pair<double, double> gw{5.0, 15.0};
  if (r.has("growth_window")) {
    const json& w = ctx.cfg.at("resolvent").at("growth_window");
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number()) {
      r.fail("growth_window", "must be [lo, hi]");
    } else {
      gw = {w[0].get<double>(), w[1].get<double>()};
    }
  }
  if (!errors.empty()) throw SchemaError(errors);

  const KernelFn kernel = mode_kernel(ctx.eq, ctx.model, ctx.sign, k, p);
  const TauGrid grid(tau_max, n);
  const ResolventTable table = resolvent_table(kernel, grid, k);
  json s;
  s["k"] = k;
  s["tau_max"] = tau_max;
  s["n"] = n;

  std::ostringstream csv;
  csv << "tau,tau_tilde,value\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (std::size_t i = j; i < grid.size(); ++i) {
      csv << format_g17(grid.node(i)) << ',' << format_g17(grid.node(j)) << ',' << format_g17(table.value(i, j))
          << '\n';
    }
  }
  write_text(ctx.out / "resolvent.csv", csv.str());

  bool pass = true;
  const bool poisson = ctx.eq.kind() == EquilibriumKind::PoissonFamily;
  if (poisson) {
    const ResolventBound b = check_resolvent_bound(table, ctx.model, ctx.eq.theta0(), k);
    s["C_fit"] = b.c_linear_quadratic;
    s["C_fit_s2_envelope"] = b.c_quadratic;
    pass = pass && std::isfinite(b.c_linear_quadratic);
    if (!attractive) {
      const double th1 = theta1_frac * ctx.eq.theta0();
      const double beta = std::isfinite(ctx.model.beta()) ? ctx.model.beta() : 0.0;
      const auto prof = damping_transfer_profile(table, th1, 1.5 * beta);
      s["theta1"] = th1;
      s["damping_transfer_sup"] = *std::max_element(prof.begin(), prof.end());
    }
  } else {
    s["C_fit"] = nullptr;
  }

  const TauGrid fine(fine_tau_max, fine_n);
  const auto col = resolvent_column(kernel, fine, 0);
  double sup_r = 0.0;
  for (double v : col) sup_r = std::max(sup_r, std::abs(v));
  double disagreement = 0.0;
  std::vector<double> ode, cf;
  if (poisson) {
    ode = resolvent_via_ode(ctx.eq, ctx.model, ctx.sign, k, 0.0, fine, p);
    for (std::size_t i = 0; i < col.size(); ++i) disagreement = std::max(disagreement, std::abs(col[i] - ode[i]));
    if (is_q0(ctx.model)) {
      cf.resize(col.size());
      for (std::size_t i = 0; i < col.size(); ++i) {
        cf[i] = closed_form_resolvent_q0(ctx.eq.theta0(), k, fine.node(i), ctx.sign);
        disagreement = std::max({disagreement, std::abs(col[i] - cf[i]), std::abs(ode[i] - cf[i])});
      }
    }
    s["route_max_disagreement"] = disagreement;
    s["route_max_rel_disagreement"] = disagreement / std::max(sup_r, 1e-8);
    s["routes"] = cf.empty() ? json::array({"table", "ode"}) : json::array({"table", "ode", "closed_form"});
    if (!cf.empty()) {
      pass = pass && disagreement <= 1e-4;
    } else {
      pass = pass && disagreement / std::max(sup_r, 1e-8) <= 1e-3;
    }
  } else {
    s["route_max_disagreement"] = nullptr;
  }
  s["fine_step"] = fine.step();

  s["growth_rate_fit"] = nullptr;
  if (attractive && gw.second <= fine_tau_max) {
    const auto nodes = fine.nodes();
    const LinearFit lf = fit_growth_rate(nodes, col, gw.first, gw.second);
    s["growth_rate_fit"] = lf.slope;
    s["growth_window"] = json::array({gw.first, gw.second});
    if (poisson && is_q0(ctx.model)) {
      const double expected = 2.0 * std::sqrt(kPi) - ctx.eq.theta0() * k;
      s["growth_rate_expected"] = expected;
      if (expected > 0.0) pass = pass && std::abs(lf.slope - expected) <= 0.02 * expected;
    }
  }

  std::ostringstream col_csv;
  col_csv << "s,table,ode,closed_form\n";
  const std::size_t stride = std::max<std::size_t>(1, fine.size() / 2000);
  for (std::size_t i = 0; i < fine.size(); i += stride) {
    col_csv << format_g17(fine.node(i)) << ',' << format_g17(col[i]) << ','
            << (ode.empty() ? "nan" : format_g17(ode[i])) << ',' << (cf.empty() ? "nan" : format_g17(cf[i])) << '\n';
  }
  write_text(ctx.out / "resolvent_column.csv", col_csv.str());
  return {s, pass, 0};
}

// ----------------------------------------------------------------------- lg

ExperimentOutcome run_lg(const Context& ctx, std::vector<std::string>& errors) {
  Reader r(ctx.cfg.contains("lg") ? ctx.cfg.at("lg") : json(), "lg", errors);
  r.only({"scale", "tau_min", "tau_max", "n"});
  const double scale = r.number("scale", 4.0 * kPi, positive, "must be positive");
  const double lo = r.number("tau_min", 0.0, nonneg, "must be >= 0");
  const double hi = r.number("tau_max", 20.0, positive, "must be positive");
  const auto n = static_cast<std::size_t>(r.integer("n", 2000, [](long long v) { return v >= 2; }, "must be >= 2"));
  if (!(hi > lo)) r.fail("tau_max", "must exceed tau_min");
  if (!errors.empty()) throw SchemaError(errors);

  const LGBasis basis = lg_basis_for_model(ctx.model, scale, lo, hi);
  std::vector<double> nodes(n + 1);
  for (std::size_t i = 0; i <= n; ++i) nodes[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
  nodes.back() = hi;
  const auto [w1, w2] = reference_fundamental_pair(basis, nodes);
  const auto phase = basis.phase_on(nodes);
  const auto budget = lg_error_budget_on(basis, nodes);

  std::ostringstream csv;
  csv << "x,w_reference,w_lg,budget,defect\n";
  double max_defect = 0.0, max_excess = -INFINITY;
  bool holds = true;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double a14 = std::pow(basis.a(nodes[i]), 0.25);
    const double w_lg = std::sin(phase[i]) / a14;
    const double defect = std::abs(w1[i].u * a14 - std::sin(phase[i]));
    max_defect = std::max(max_defect, defect);
    max_excess = std::max(max_excess, defect - budget[i].bound);
    if (defect > budget[i].bound + 1e-10) holds = false;
    csv << format_g17(nodes[i]) << ',' << format_g17(w1[i].u) << ',' << format_g17(w_lg) << ','
        << format_g17(budget[i].bound) << ',' << format_g17(defect) << '\n';
  }
  write_text(ctx.out / "lg.csv", csv.str());

  const double wr = wronskian_defect(w1, w2);
  json s;
  s["scale"] = scale;
  s["interval"] = json::array({lo, hi});
  s["max_defect"] = max_defect;
  s["max_defect_minus_budget"] = max_excess;
  s["budget_final"] = budget.back().bound;
  s["variation_final"] = budget.back().variation;
  s["budget_holds"] = holds;
  s["wronskian_defect"] = wr;
  if (ctx.model.kind() == ExpansionKind::PowerLaw && ctx.model.q() < 0.5) {
    const AdmissibilityReport adm = check_admissibility(ctx.model, 1e4, 64);
    s["lg_integral_unscaled"] = adm.lg_integral;
    s["variation_infinite"] = adm.lg_integral / std::sqrt(scale);
    s["example_formula_integral"] = adm.example_formula_integral;
  }
  return {s, holds && wr <= 1e-8, 0};
}

// -------------------------------------------------------------- simulations

json sim_summary(const SimSetup& st, const SimResult& res, json s) {
  s["mode"] = to_string(st.cfg.mode);
  s["rows"] = res.rows.size();
  s["max_h00"] = res.max_h00;
  s["max_reality_defect"] = res.max_reality_defect;
  s["abs_rho1_initial"] = res.rows.front().abs_rho1;
  s["abs_rho1_final"] = res.rows.back().abs_rho1;
  s["tau_final"] = res.rows.back().tau;
  double emb = 0.0, boot = -INFINITY;
  for (const auto& r : res.rows) {
    if (std::isfinite(r.diag_embedding)) emb = std::max(emb, r.diag_embedding);
    if (std::isfinite(r.diag_bootstrap)) boot = std::max(boot, r.diag_bootstrap);
  }
  s["embedding_max"] = emb;
  s["bootstrap_max"] = finite_or_null(boot);
  s["top_mode_amplitude_max"] = 0.0;
  for (const auto& r : res.rows) {
    s["top_mode_amplitude_max"] = std::max(s["top_mode_amplitude_max"].get<double>(), r.top_mode_amplitude);
  }

  std::vector<double> tau, mag;
  for (const auto& r : res.rows) {
    tau.push_back(r.tau);
    mag.push_back(r.abs_rho1);
  }
  try {
    s["decay_fit"] = to_json(fit_decay(tau, mag, st.fit, st.cfg.model, st.cfg.dim));
  } catch (const DomainError& e) {
    s["decay_fit"] = nullptr;
    s["decay_fit_error"] = e.what();
  }

  if (res.snapshots.size() >= 3) {
    const auto hinf = h_infinity_report(res.snapshots, st.gp, st.gp.lambda_prime);
    s["h_infinity_final_half_nonincreasing"] = hinf.final_half_nonincreasing;
  }
  return s;
}

void write_sim_artifacts(const Context& ctx, const SimSetup& st, const SimResult& res) {
  write_timeseries_csv(ctx.out / "timeseries.csv", res, st.cfg.k_max);
  std::ostringstream diag;
  diag << "tau,z,F,G,F_over_sqrtG\n";
  for (const auto& r : res.rows) {
    diag << format_g17(r.tau) << ',' << format_g17(r.z) << ',' << format_g17(r.F) << ',' << format_g17(r.G) << ','
         << format_g17(r.diag_embedding) << '\n';
  }
  write_text(ctx.out / "diagnostics.csv", diag.str());
  std::vector<SpectralState> snaps;
  for (std::size_t i = 0; i < res.snapshots.size(); i += st.snapshot_stride) snaps.push_back(res.snapshots[i]);
  if (!res.snapshots.empty() && (res.snapshots.size() - 1) % st.snapshot_stride != 0) snaps.push_back(res.snapshots.back());
  write_snapshots_bin(ctx.out / "snapshots.bin", snaps);
  if (res.snapshots.size() >= 3) {
    const auto hinf = h_infinity_report(res.snapshots, st.gp, st.gp.lambda_prime);
    std::ostringstream csv;
    csv << "tau,distance\n";
    for (const auto& r : hinf.rows) csv << format_g17(r.tau) << ',' << format_g17(r.distance) << '\n';
    write_text(ctx.out / "h_infinity.csv", csv.str());
  }
}

ExperimentOutcome run_sim(const Context& ctx, std::vector<std::string>& errors, bool linear) {
  SimSetup st = parse_sim(ctx.cfg, linear ? SimMode::Linearized : SimMode::FullNonlinear, ctx.model, ctx.eq, ctx.sign,
                          errors);
  if (linear && st.cfg.mode != SimMode::Linearized) errors.push_back("sim.mode: linear_decay runs Linearized only");
  if (!errors.empty()) throw SchemaError(errors);

  json s;
  SimResult res;
  try {
    res = run_simulation(st.cfg, st.init, st.gp, st.out_every);
  } catch (const BlowUpError& e) {
    s["blow_up"] = true;
    s["blow_up_tau"] = e.tau();
    s["error"] = e.what();
    return {s, false, 1};
  }
  s["blow_up"] = false;
  write_sim_artifacts(ctx, st, res);
  s = sim_summary(st, res, s);
  bool pass = res.max_h00 <= 1e-12 && res.max_reality_defect <= 1e-10;

  if (linear) {
    // Per mode, the Volterra route with source h_hat(0, k, k tau).
    const SpectralState init = init_state(st.cfg, st.init, st.gp);
    const std::size_t steps = st.cfg.steps();
    const TauGrid grid(st.cfg.tau_end, steps);
    json per_k = json::object();
    double worst = 0.0;
    for (int k = 1; k <= st.cfg.k_max; ++k) {
      std::vector<std::complex<double>> src(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        src[i] = interpolate_cubic<std::complex<double>>(init.grid(), init.row(k), k * grid.node(i));
      }
      const auto phi =
          solve_volterra(mode_kernel(st.cfg.eq, st.cfg.model, st.cfg.sign, k, st.cfg.dim_power), src, grid);
      double diff = 0.0, ref = 0.0;
      for (const auto& row : res.rows) {
        const auto i = static_cast<std::size_t>(std::llround(row.tau / st.cfg.dtau));
        diff = std::max(diff, std::abs(row.rho[static_cast<std::size_t>(k + st.cfg.k_max)] - phi[i]));
        ref = std::max(ref, std::abs(phi[i]));
      }
      const double rel = ref > 0.0 ? diff / ref : diff;
      per_k[std::to_string(k)] = rel;
      worst = std::max(worst, rel);
    }
    s["volterra_rel_error"] = per_k;
    s["volterra_max_rel_error"] = worst;
    pass = pass && worst <= 1e-2;
  }
  return {s, pass, 0};
}

}  // namespace

std::string canonical_experiment(const std::string& name) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '-', '_');
  static const std::set<std::string> known = {"penrose", "resolvent", "lg_verify", "linear_decay", "nonlinear_sim"};
  if (!known.count(n)) {
    throw SchemaError({"experiment: unknown experiment '" + name +
                       "' (expected penrose, resolvent, lg_verify, linear_decay or nonlinear_sim)"});
  }
  return n;
}

ExperimentOutcome run_experiment(const std::string& experiment, const json& config, const fs::path& out_dir,
                                 std::optional<std::uint64_t> seed) {
  Context ctx;
  ctx.experiment = canonical_experiment(experiment);
  std::vector<std::string> errors;
  if (!config.is_object()) throw SchemaError({"config: must be a JSON object"});
  ctx.cfg = config;
  Reader top(config, "", errors);
  top.only({"experiment", "seed", "model", "equilibrium", "sign", "penrose", "resolvent", "lg", "sim", "init",
            "gevrey", "fit", "out_dir"});
  if (config.contains("experiment")) {
    const json& e = config.at("experiment");
    if (!e.is_string()) {
      errors.push_back("experiment: must be a string");
    } else {
      try {
        if (canonical_experiment(e.get<std::string>()) != ctx.experiment) {
          errors.push_back("experiment: config names '" + e.get<std::string>() + "' but '" + experiment +
                           "' was requested");
        }
      } catch (const SchemaError& se) {
        errors.insert(errors.end(), se.fields().begin(), se.fields().end());
      }
    }
  }
  ctx.seed = seed ? *seed : static_cast<std::uint64_t>(top.integer("seed", 0, [](long long v) { return v >= 0; }, "must be >= 0"));
  try {
    ctx.model = parse_model(config.contains("model") ? config.at("model") : json(), errors);
    ctx.eq = parse_equilibrium(config.contains("equilibrium") ? config.at("equilibrium") : json(), errors);
  } catch (const DomainError& e) {
    errors.push_back(e.what());
  }
  ctx.sign = parse_sign(config.contains("sign") ? config.at("sign") : json(), errors);

  fs::path out = out_dir;
  if (out.empty()) {
    out = config.contains("out_dir") && config.at("out_dir").is_string() ? fs::path(config.at("out_dir").get<std::string>())
                                                                         : fs::path("out") / ctx.experiment;
  }
  ctx.out = out;

  // Sub-config errors are collected inside each runner before any work.
  ExperimentOutcome res;
  auto dispatch = [&]() {
    if (ctx.experiment == "penrose") return run_penrose(ctx, errors);
    if (ctx.experiment == "resolvent") return run_resolvent(ctx, errors);
    if (ctx.experiment == "lg_verify") return run_lg(ctx, errors);
    return run_sim(ctx, errors, ctx.experiment == "linear_decay");
  };
  if (!errors.empty()) throw SchemaError(errors);
  fs::create_directories(ctx.out);
  json echo = config;
  echo["experiment"] = ctx.experiment;
  echo["seed"] = ctx.seed;
  write_json(ctx.out / "config.json", echo);
  try {
    res = dispatch();
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    res.summary["error"] = e.what();
    res.pass = false;
    res.exit_code = 1;
  }
  json summary = {{"experiment", ctx.experiment}, {"seed", ctx.seed}};
  for (auto& [k, v] : res.summary.items()) summary[k] = v;
  summary["pass"] = res.pass;
  res.summary = summary;
  write_json(ctx.out / "summary.json", summary);
  return res;
}

}  // namespace elandau
