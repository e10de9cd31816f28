#pragma once

// Experiment orchestration: JSON config ingestion, decay fits, and the
// artifact directory (config echo, CSVs, summary.json) of each experiment.

#include "elandau/cosmology.hpp"
#include "elandau/equilibrium.hpp"
#include "elandau/gevrey.hpp"
#include "elandau/kinetic.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace elandau {

using json = nlohmann::json;

/// Config rejected; fields() names every offending entry.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(std::vector<std::string> fields);
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  std::vector<std::string> fields_;
};

enum class FitAbscissa {
  Bracket,  // ⟨tau⟩^gamma
  Plain,    // tau^gamma
  TForm,    // t^{gamma(1-2q)}, t = T(tau)
};
enum class PrefactorMode { None, AMinusD };

struct FitOptions {
  double gamma = 1.0;
  FitAbscissa abscissa = FitAbscissa::Bracket;
  PrefactorMode prefactor = PrefactorMode::None;
  /// Fraction of the tau range dropped at the start (ignored when window is set).
  double burn_in = 0.2;
  std::optional<std::pair<double, double>> window;
  /// Fit the running sup over later times instead of the raw series, which
  /// tames oscillations that pass close to zero.
  bool upper_envelope = false;
};

struct DecayFit {
  double gamma_used = 1.0;
  double c_hat = 0.0;
  double c0_hat = 0.0;
  double r2 = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  std::size_t points = 0;
  PrefactorMode prefactor_mode = PrefactorMode::None;
  FitAbscissa abscissa = FitAbscissa::Bracket;
  /// r2 < 0.999: the series is not exp(-c x) in the chosen abscissa.
  bool non_exponential = false;
};

/// log(magnitude / prefactor) = c0 - c x. The model supplies T and a for
/// the t-form abscissa and the a^{-dim} prefactor.
DecayFit fit_decay(std::span<const double> tau, std::span<const double> magnitude, const FitOptions& opts,
                   const ScaleFactorModel& model = ScaleFactorModel::constant(), int dim = 1);

json to_json(const DecayFit& f);

// Sub-config parsers; each appends "path: reason" entries to errors.
ScaleFactorModel parse_model(const json& j, std::vector<std::string>& errors);
Equilibrium parse_equilibrium(const json& j, std::vector<std::string>& errors);
Interaction parse_sign(const json& j, std::vector<std::string>& errors);
GevreyParams parse_gevrey(const json& j, std::vector<std::string>& errors);
FitOptions parse_fit(const json& j, std::vector<std::string>& errors);

struct ExperimentOutcome {
  json summary;
  bool pass = false;
  /// 0 on success, 1 when a module raised (summary.json is still written).
  int exit_code = 0;
};

/// Canonical names: penrose, resolvent, lg_verify, linear_decay,
/// nonlinear_sim (hyphens accepted). Throws SchemaError on bad configs.
std::string canonical_experiment(const std::string& name);

ExperimentOutcome run_experiment(const std::string& experiment, const json& config,
                                 const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed);

}  // namespace elandau
