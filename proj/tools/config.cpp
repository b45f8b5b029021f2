#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

namespace dampo::cli {

namespace {

using toml::Value;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> k{
      "model.parametric.Gamma", "model.parametric.gamma_plus", "model.parametric.gamma_minus",
      "model.coupling.path", "model.coupling.cutoff", "model.coupling.decay", "model.coupling.decay_scale",
      "model.ohmic.gamma", "model.ohmic.omega_c",
      "model.density.path", "model.density.tail_exponent",
      "oscillator.m", "oscillator.Omega0", "oscillator.omega0",
      "temperature.beta",
      "grid.start", "grid.stop", "grid.points", "grid.spacing", "grid.times",
      "initial.x0", "initial.p0",
      "quadrature.abs_tol", "quadrature.rel_tol", "quadrature.max_subdivisions", "quadrature.validation_tolerance",
      "oracle.n_modes", "oracle.omega_max", "oracle.bound", "oracle.bath",
      "output.csv", "output.json", "output.svg",
  };
  return k;
}

double number(const toml::Document& d, const std::string& key, double fallback) {
  const Value* v = d.find(key);
  if (!v) return fallback;
  if (v->kind != Value::Kind::Number) throw ConfigError(key + " must be a number");
  return v->number;
}

std::optional<double> optional_number(const toml::Document& d, const std::string& key) {
  if (!d.find(key)) return std::nullopt;
  return number(d, key, 0.0);
}

std::string text(const toml::Document& d, const std::string& key, const std::string& fallback = {}) {
  const Value* v = d.find(key);
  if (!v) return fallback;
  if (v->kind != Value::Kind::String) throw ConfigError(key + " must be a string");
  return v->string;
}

int integer(const toml::Document& d, const std::string& key, int fallback) {
  const double x = number(d, key, fallback);
  if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError(key + " must be an integer");
  return static_cast<int>(x);
}

// a number, or [re, im]
cplx rate(const toml::Document& d, const std::string& key) {
  const Value* v = d.find(key);
  if (!v) throw ConfigError(key + " is required");
  if (v->kind == Value::Kind::Number) return {v->number, 0.0};
  if (v->kind == Value::Kind::Array && v->array.size() == 2 && v->array[0].kind == Value::Kind::Number &&
      v->array[1].kind == Value::Kind::Number)
    return {v->array[0].number, v->array[1].number};
  throw ConfigError(key + " must be a number or [re, im]");
}

bool has_prefix(const toml::Document& d, const std::string& prefix) {
  return std::any_of(d.order.begin(), d.order.end(), [&](const std::string& k) { return k.rfind(prefix, 0) == 0; });
}

double beta_value(const toml::Document& d) {
  const Value* v = d.find("temperature.beta");
  if (!v) return kZeroTemperature;
  if (v->kind == Value::Kind::String && v->string == "inf") return kZeroTemperature;
  if (v->kind != Value::Kind::Number) throw ConfigError("temperature.beta must be a number or \"inf\"");
  if (!(v->number > 0.0)) throw ConfigError("temperature.beta must be positive");
  return v->number;
}

}  // namespace

std::vector<double> GridConfig::build() const {
  if (!times.empty()) return times;
  return log_spacing ? log_grid(start, stop, points) : linear_grid(start, stop, points);
}

std::vector<std::string> RunConfig::echo() const {
  std::vector<std::string> out;
  for (const auto& k : doc.order) out.push_back(k + " = " + doc.values.at(k).describe());
  return out;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  RunConfig cfg;
  try {
    if (!path.empty()) cfg.doc = toml::parse_file(path);
  } catch (const toml::ParseError& e) {
    throw ConfigError(e.what());
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + o + "'");
    cfg.doc.set(o.substr(0, eq), toml::parse_value(o.substr(eq + 1)));
  }
  const auto& d = cfg.doc;
  for (const auto& k : d.order)
    if (!known_keys().count(k)) throw ConfigError("unknown config key '" + k + "'");

  int sources = 0;
  for (const char* p : {"model.parametric.", "model.coupling.", "model.ohmic.", "model.density."})
    sources += has_prefix(d, p);
  if (sources > 1) throw ConfigError("exactly one model source is allowed");

  if (has_prefix(d, "model.parametric.")) {
    cfg.source = ModelSource::Parametric;
    cfg.parametric.Gamma = number(d, "model.parametric.Gamma", 0.0);
    cfg.parametric.gamma_plus = rate(d, "model.parametric.gamma_plus");
    cfg.parametric.gamma_minus = rate(d, "model.parametric.gamma_minus");
  } else if (has_prefix(d, "model.coupling.")) {
    cfg.source = ModelSource::Coupling;
    cfg.coupling_path = text(d, "model.coupling.path");
    if (cfg.coupling_path.empty()) throw ConfigError("model.coupling.path is required");
    cfg.coupling.cutoff = number(d, "model.coupling.cutoff", 0.0);
    const std::string decay = text(d, "model.coupling.decay", "none");
    if (decay == "exponential") {
      cfg.coupling.decay = DecayModel::Exponential;
      cfg.coupling.decay_scale = number(d, "model.coupling.decay_scale", 0.0);
      if (!(cfg.coupling.decay_scale > 0.0)) throw ConfigError("model.coupling.decay_scale must be positive");
    } else if (decay != "none") {
      throw ConfigError("model.coupling.decay must be \"none\" or \"exponential\"");
    }
  } else if (has_prefix(d, "model.ohmic.")) {
    cfg.source = ModelSource::Ohmic;
    cfg.ohmic.gamma = number(d, "model.ohmic.gamma", -1.0);
    cfg.ohmic.omega_c = number(d, "model.ohmic.omega_c", -1.0);
  } else if (has_prefix(d, "model.density.")) {
    cfg.source = ModelSource::Density;
    cfg.density_path = text(d, "model.density.path");
    if (cfg.density_path.empty()) throw ConfigError("model.density.path is required");
    cfg.density_tail = number(d, "model.density.tail_exponent", 4.0);
  }

  cfg.m = number(d, "oscillator.m", 1.0);
  if (!(cfg.m > 0.0)) throw ConfigError("oscillator.m must be positive");
  cfg.ohmic.m = cfg.m;
  if (cfg.source == ModelSource::Ohmic) {
    try {
      cfg.ohmic.check();
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  cfg.Omega0 = optional_number(d, "oscillator.Omega0");
  cfg.omega0 = optional_number(d, "oscillator.omega0");
  if (cfg.Omega0 && !(*cfg.Omega0 > 0.0)) throw ConfigError("oscillator.Omega0 must be positive");
  if (cfg.omega0 && !(*cfg.omega0 >= 0.0)) throw ConfigError("oscillator.omega0 must be non-negative");
  cfg.beta = beta_value(d);

  cfg.grid.start = number(d, "grid.start", cfg.grid.start);
  cfg.grid.stop = number(d, "grid.stop", cfg.grid.stop);
  cfg.grid.points = integer(d, "grid.points", cfg.grid.points);
  const std::string spacing = text(d, "grid.spacing", "linear");
  if (spacing != "linear" && spacing != "log") throw ConfigError("grid.spacing must be \"linear\" or \"log\"");
  cfg.grid.log_spacing = spacing == "log";
  if (const Value* t = d.find("grid.times")) {
    if (t->kind != Value::Kind::Array || t->array.empty()) throw ConfigError("grid.times must be a non-empty array");
    for (const auto& v : t->array) {
      if (v.kind != Value::Kind::Number || !(v.number >= 0.0)) throw ConfigError("grid.times must hold times >= 0");
      cfg.grid.times.push_back(v.number);
    }
    if (!std::is_sorted(cfg.grid.times.begin(), cfg.grid.times.end()))
      throw ConfigError("grid.times must be ascending");
  } else {
    if (cfg.grid.points < 2) throw ConfigError("grid.points must be at least 2");
    if (!(cfg.grid.start >= 0.0) || !(cfg.grid.stop > cfg.grid.start))
      throw ConfigError("grid needs 0 <= start < stop");
    if (cfg.grid.log_spacing && !(cfg.grid.start > 0.0)) throw ConfigError("log grid needs start > 0");
  }

  cfg.x0 = number(d, "initial.x0", cfg.x0);
  cfg.p0 = number(d, "initial.p0", cfg.p0);

  cfg.quad.abs_tol = number(d, "quadrature.abs_tol", cfg.quad.abs_tol);
  cfg.quad.rel_tol = number(d, "quadrature.rel_tol", cfg.quad.rel_tol);
  cfg.quad.max_subdivisions = integer(d, "quadrature.max_subdivisions", cfg.quad.max_subdivisions);
  cfg.validation_tolerance = number(d, "quadrature.validation_tolerance", cfg.validation_tolerance);
  if (!(cfg.quad.abs_tol > 0.0) || !(cfg.quad.rel_tol >= 0.0) || cfg.quad.max_subdivisions < 1 ||
      !(cfg.validation_tolerance > 0.0))
    throw ConfigError("quadrature tolerances must be positive");

  cfg.n_modes = integer(d, "oracle.n_modes", cfg.n_modes);
  cfg.omega_max = optional_number(d, "oracle.omega_max");
  if (cfg.omega_max && !(*cfg.omega_max > 0.0)) throw ConfigError("oracle.omega_max must be positive");
  cfg.oracle_bound = number(d, "oracle.bound", cfg.oracle_bound);
  if (!(cfg.oracle_bound > 0.0)) throw ConfigError("oracle.bound must be positive");
  cfg.bath_in = text(d, "oracle.bath");

  // table paths are relative to the config file
  if (!path.empty()) {
    const auto base = std::filesystem::path(path).parent_path();
    for (std::string* p : {&cfg.coupling_path, &cfg.density_path, &cfg.bath_in})
      if (!p->empty() && std::filesystem::path(*p).is_relative()) *p = (base / *p).string();
  }

  cfg.csv_path = text(d, "output.csv");
  cfg.json_path = text(d, "output.json");
  cfg.svg_path = text(d, "output.svg");
  return cfg;
}

double resolve_Omega0(const RunConfig& cfg) {
  switch (cfg.source) {
    case ModelSource::Ohmic:
      if (cfg.Omega0) return *cfg.Omega0;
      return std::sqrt(std::pow(cfg.omega0.value_or(1.0), 2) + cfg.ohmic.kappa0());
    case ModelSource::Coupling:
      if (!cfg.Omega0) throw ConfigError("oscillator.Omega0 is required for a coupling model");
      return *cfg.Omega0;
    case ModelSource::Parametric:
      return std::sqrt(closed_form_moments(cfg.parametric).omega0_sq);
    case ModelSource::Density: {
      const auto t = io::read_density_table(cfg.density_path);
      const auto sd = make_tabulated_density(t.omega_grid, t.values, cfg.density_tail);
      return std::sqrt(weighted_average(sd, [](double w) { return w * w; }));
    }
    case ModelSource::None: break;
  }
  throw ConfigError("no model section in the config");
}

CouplingSpectrum bath_coupling(const RunConfig& cfg, double Omega0) {
  if (cfg.source == ModelSource::Ohmic) return ohmic_coupling(cfg.ohmic, Omega0);
  if (cfg.source == ModelSource::Coupling) {
    CouplingSpectrum V = io::read_coupling(cfg.coupling_path);
    V.cutoff = cfg.coupling.cutoff;
    V.decay = cfg.coupling.decay;
    V.decay_scale = cfg.coupling.decay_scale;
    return V;
  }
  throw ConfigError("this command needs a bath model (model.ohmic or model.coupling)");
}

SpectralDensity build_density(const RunConfig& cfg, double Omega0) {
  switch (cfg.source) {
    case ModelSource::Parametric:
      return make_parametric_density(cfg.parametric.Gamma, cfg.parametric.gamma_plus, cfg.parametric.gamma_minus);
    case ModelSource::Density: {
      const auto t = io::read_density_table(cfg.density_path);
      return make_tabulated_density(t.omega_grid, t.values, cfg.density_tail);
    }
    case ModelSource::Coupling:
    case ModelSource::Ohmic: {
      FanoOptions opt;
      opt.validation.tolerance = cfg.validation_tolerance;
      return density_from_coupling(bath_coupling(cfg, Omega0), Omega0, opt);
    }
    case ModelSource::None: break;
  }
  throw ConfigError("no model section in the config");
}

}  // namespace dampo::cli
