#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dampo/dampo.hpp"
#include "toml.hpp"

namespace dampo::cli {

// Usage or schema problems; exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelSource { None, Parametric, Coupling, Ohmic, Density };

struct GridConfig {
  double start = 0.0;
  double stop = 20.0;
  int points = 201;
  bool log_spacing = false;
  std::vector<double> times;  // explicit list wins over start/stop/points

  std::vector<double> build() const;
};

struct RunConfig {
  ModelSource source = ModelSource::None;
  ParametricParams parametric;
  CouplingSpectrum coupling;  // coupling CSV, or filled from the Ohmic parameters
  std::string coupling_path;
  OhmicBath ohmic;
  std::string density_path;
  double density_tail = 4.0;

  double m = 1.0;
  std::optional<double> Omega0;
  std::optional<double> omega0;
  double beta = kZeroTemperature;

  GridConfig grid;
  double x0 = 1.0;
  double p0 = 0.0;

  quad::Options quad{1e-12, 0.0, 200000};
  double validation_tolerance = 1e-6;

  int n_modes = 300;
  std::optional<double> omega_max;
  double oracle_bound = 0.01;
  std::string bath_in;

  std::string csv_path, json_path, svg_path;

  toml::Document doc;  // resolved keys, echoed into output headers

  std::vector<std::string> echo() const;
};

// Reads the file (if any), applies `key=value` overrides, checks the schema.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

// Bare frequency of the model: given, derived from omega0 and kappa(0), or
// sqrt(<<w^2>>) for densities given directly.
double resolve_Omega0(const RunConfig& cfg);

// Coupling spectrum for bath-based models; ConfigError for densities given directly.
CouplingSpectrum bath_coupling(const RunConfig& cfg, double Omega0);

// The model's spectral density.
SpectralDensity build_density(const RunConfig& cfg, double Omega0);

}  // namespace dampo::cli
