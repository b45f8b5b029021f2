#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "svg.hpp"

#ifndef DAMPO_VERSION
#define DAMPO_VERSION "dev"
#endif

namespace dampo::cli {

using nlohmann::json;

namespace {

// stdout, or a file opened for writing
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw ConfigError("cannot write '" + path + "'");
  }
  std::ostream& operator*() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string primary_path(const Common& c, const std::string& configured) {
  return c.output.empty() ? configured : c.output;
}

std::vector<std::string> header(const std::string& command, const RunConfig& cfg) {
  std::vector<std::string> h{"dampo " DAMPO_VERSION " " + command};
  for (auto& l : cfg.echo()) h.push_back(l);
  return h;
}

void write_json(const Common& c, const RunConfig& cfg, const std::string& command, json body) {
  body["dampo"] = DAMPO_VERSION;
  body["command"] = command;
  body["config"] = cfg.echo();
  Output out(primary_path(c, cfg.json_path));
  *out << body.dump(2) << "\n";
}

json state_json(const GaussianState& s) {
  return {{"mean_x", s.mean_x}, {"mean_p", s.mean_p}, {"var_x", s.var_x}, {"var_p", s.var_p}, {"cov_xp", s.cov_xp}};
}

json beta_json(double beta) { return std::isinf(beta) ? json("inf") : json(beta); }

const char* source_name(ModelSource s) {
  switch (s) {
    case ModelSource::Parametric: return "parametric";
    case ModelSource::Coupling: return "coupling";
    case ModelSource::Ohmic: return "ohmic";
    case ModelSource::Density: return "density";
    case ModelSource::None: break;
  }
  return "none";
}

json report_json(const ValidationReport& r) {
  const auto& f = r.passed;
  return {{"normalization_residual", r.normalization_residual},
          {"pi_at_zero", r.pi_at_zero},
          {"min_value", r.min_value},
          {"second_moment", r.second_moment},
          {"mean_omega", r.mean_omega},
          {"mean_inv_omega", r.mean_inv_omega},
          {"cauchy_schwartz_product", r.cauchy_schwartz_product},
          {"passed",
           {{"normalization", f.normalization},
            {"pi_at_zero", f.pi_at_zero},
            {"non_negative", f.non_negative},
            {"second_moment_finite", f.second_moment_finite},
            {"second_moment_matches_hint", f.second_moment_matches_hint},
            {"mean_below_rms", f.mean_below_rms},
            {"cauchy_schwartz", f.cauchy_schwartz},
            {"all", f.all()}}}};
}

RunConfig load(const Common& c) { return load_config(c.config, c.overrides); }

double default_omega_max(const RunConfig& cfg, const CouplingSpectrum& V) {
  if (cfg.omega_max) return *cfg.omega_max;
  if (cfg.source == ModelSource::Ohmic) return 10.0 * cfg.ohmic.omega_c;
  return V.cutoff > 0.0 ? V.cutoff : V.omega_grid.back();
}

struct Deviation {
  double rms = 0.0;
  double max = 0.0;
};

// |a - b| relative to the largest |b|
Deviation deviation(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 0.0;
  for (double v : b) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  Deviation d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = std::abs(a[i] - b[i]) / scale;
    d.rms += e * e;
    d.max = std::max(d.max, e);
  }
  d.rms = std::sqrt(d.rms / static_cast<double>(a.size()));
  return d;
}

int count_extrema(const std::vector<double>& y) {
  int n = 0;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if ((y[i] - y[i - 1]) * (y[i + 1] - y[i]) < 0.0) ++n;
  return n;
}

}  // namespace

std::string bath_to_json(const DiscreteBath& b) {
  json j{{"n_modes", b.n_modes}, {"m", b.m},           {"Omega0", b.Omega0},
         {"omegas", b.omegas},   {"weights", b.weights}, {"couplings", b.couplings}};
  return j.dump(1);
}

DiscreteBath bath_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    DiscreteBath b;
    b.n_modes = j.at("n_modes").get<int>();
    b.m = j.at("m").get<double>();
    b.Omega0 = j.at("Omega0").get<double>();
    b.omegas = j.at("omegas").get<std::vector<double>>();
    b.weights = j.value("weights", std::vector<double>{});
    b.couplings = j.at("couplings").get<std::vector<double>>();
    b.check();
    return b;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad bath JSON: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(std::string("bad bath JSON: ") + e.what());
  }
}

int cmd_validate(const Common& c) {
  const RunConfig cfg = load(c);
  const double Omega0 = resolve_Omega0(cfg);
  json r{{"model", source_name(cfg.source)}, {"Omega0", Omega0}};
  bool ok = true;

  if (cfg.source == ModelSource::Ohmic) {
    const auto f = frequency_constraints(cfg.ohmic, Omega0, cfg.omega0);
    r["frequencies"] = {{"kappa0", f.kappa0},
                        {"Omega0_sq", f.Omega0_sq},
                        {"omega0_sq", f.omega0_sq},
                        {"omega0_nonnegative", f.omega0_nonnegative},
                        {"Omega0_bound", f.Omega0_bound},
                        {"consistent", f.consistent}};
    ok = ok && f.ok();
  }
  if (cfg.source == ModelSource::Ohmic || cfg.source == ModelSource::Coupling) {
    const auto p = positivity_check(bath_coupling(cfg, Omega0), Omega0);
    r["positivity"] = {{"integral", p.integral}, {"Omega0", Omega0}, {"ok", p.ok}};
    ok = ok && p.ok;
  }
  if (ok) {
    try {
      const SpectralDensity sd = build_density(cfg, Omega0);
      ValidationOptions opt;
      opt.tolerance = cfg.validation_tolerance;
      const auto rep = validate(sd, opt);
      r["density"] = report_json(rep);
      ok = rep.passed.all();
    } catch (const ValidationError& e) {
      r["density"] = report_json(e.report());
      r["error"] = e.what();
      ok = false;
    } catch (const Error& e) {
      r["error"] = e.what();
      ok = false;
    }
  }
  r["ok"] = ok;
  write_json(c, cfg, "validate", r);
  return ok ? kOk : kPhysics;
}

int cmd_moments(const Common& c) {
  const RunConfig cfg = load(c);
  const double Omega0 = resolve_Omega0(cfg);
  const SpectralDensity sd = build_density(cfg, Omega0);
  const AverageOptions opt;
  json r{{"model", source_name(cfg.source)}};
  auto moment = [&](const char* name, const std::function<double(double)>& f) {
    try {
      r[name] = weighted_average(sd, f, opt);
    } catch (const Error& e) {
      r[name] = nullptr;
      r["notes"].push_back(std::string(name) + ": " + e.what());
    }
  };
  moment("norm", [](double) { return 1.0; });
  moment("mean_omega", [](double w) { return w; });
  moment("mean_omega_sq", [](double w) { return w * w; });
  moment("mean_inv_omega", [](double w) { return 1.0 / w; });
  moment("mean_inv_omega_sq", [](double w) { return 1.0 / (w * w); });
  if (r["mean_omega_sq"].is_number()) r["Omega0"] = std::sqrt(r["mean_omega_sq"].get<double>());
  if (r["mean_inv_omega_sq"].is_number()) r["omega0"] = 1.0 / std::sqrt(r["mean_inv_omega_sq"].get<double>());
  if (cfg.source == ModelSource::Parametric) {
    const auto m = closed_form_moments(cfg.parametric);
    r["closed_form"] = {{"mean_omega", m.mean_omega},
                        {"mean_omega_sq", m.omega0_sq},
                        {"mean_inv_omega", m.mean_inv_omega},
                        {"mean_inv_omega_sq", m.mean_inv_omega_sq}};
  }
  write_json(c, cfg, "moments", r);
  return kOk;
}

int cmd_state(const Common& c) {
  const RunConfig cfg = load(c);
  const double Omega0 = resolve_Omega0(cfg);
  const SpectralDensity sd = build_density(cfg, Omega0);
  const AverageOptions opt;
  const GaussianState g = ground_state(sd, cfg.m, opt);
  const GaussianState s = std::isinf(cfg.beta) ? g : thermal_state(sd, cfg.m, cfg.beta, opt);
  const double inv_sq = weighted_average(sd, [](double w) { return 1.0 / (w * w); }, opt);
  const double omega0 = 1.0 / std::sqrt(inv_sq);
  const DiagonalForm dg = diagonal_form(s, cfg.m, std::isinf(cfg.beta));

  json r{{"model", source_name(cfg.source)},
         {"m", cfg.m},
         {"Omega0", Omega0},
         {"omega0", omega0},
         {"beta", beta_json(cfg.beta)},
         {"ground", state_json(g)},
         {"thermal", state_json(s)},
         {"energies",
          {{"ground_at_omega0", oscillator_energy(g, cfg.m, omega0)},
           {"ground_at_Omega0", oscillator_energy(g, cfg.m, Omega0)},
           {"thermal_at_omega0", oscillator_energy(s, cfg.m, omega0)},
           {"thermal_at_Omega0", oscillator_energy(s, cfg.m, Omega0)},
           {"kinetic", s.var_p / (2.0 * cfg.m)}}},
         {"diagonal",
          {{"omega_diag", dg.omega_diag},
           {"n_bar_c", dg.n_bar_c},
           {"T_eff", dg.T_eff},
           {"entropy", dg.entropy},
           {"mutual_information", dg.mutual_information ? json(*dg.mutual_information) : json(nullptr)}}},
         {"occupation",
          {{"symmetric", symmetric_moment(s, cfg.m, Omega0, 1, 1)}, {"normal", mean_occupation(s, cfg.m, Omega0)}}},
         {"fields",
          {{"ground", "oscillator moments in the global ground state"},
           {"thermal", "oscillator marginal of the global Gibbs state at beta (equals ground at beta = inf)"},
           {"omega0", "1/sqrt(<<w^-2>>), the long-time frequency"},
           {"Omega0", "sqrt(<<w^2>>), the short-time frequency"},
           {"energies", "<p^2>/2m + m f0^2 <x^2>/2 at f0 = omega0 and f0 = Omega0"},
           {"diagonal", "single-mode thermal form with the same covariance; entropy in nats"},
           {"mutual_information", "oscillator-bath mutual information, only for a pure global state"},
           {"occupation", "symmetric <a^dagger a> and normal-ordered <a^dagger a> at Omega0"}}}};
  write_json(c, cfg, "state", r);
  return kOk;
}

int cmd_evolve(const Common& c, bool classify, bool closed_form) {
  const RunConfig cfg = load(c);
  const double Omega0 = resolve_Omega0(cfg);
  const SpectralDensity sd = build_density(cfg, Omega0);
  const auto times = cfg.grid.build();
  EvolutionSeries series;
  if (closed_form) {
    if (cfg.source != ModelSource::Parametric) throw ConfigError("--closed-form needs a parametric model");
    series = closed_form_kernels(cfg.parametric, times);
  } else {
    KernelOptions opt;
    opt.quad = cfg.quad;
    series = kernels(sd, times, opt);
  }
  const bool converged = series.all_converged();
  series = evolve_means(cfg.x0, cfg.p0, cfg.m, std::move(series));

  std::vector<std::string> extra;
  if (classify) {
    try {
      // parametric models use their decay horizon rather than the output grid
      const auto rep = cfg.source == ModelSource::Parametric ? damping_report(sd) : damping_report(series);
      std::string line = std::string("damping: ") + to_string(rep.strict);
      if (rep.classical) line += std::string(" (classical: ") + to_string(*rep.classical) + ")";
      extra.push_back(line);
    } catch (const Error& e) {
      extra.push_back(std::string("damping: inconclusive (") + e.what() + ")");
    }
  }
  {
    Output out(primary_path(c, cfg.csv_path));
    io::write_series(*out, series, header("evolve", cfg));
    for (const auto& l : extra) *out << "# " << l << "\n";
  }
  if (!converged) {
    for (std::size_t i = 0; i < series.times.size(); ++i)
      if (!series.converged[i])
        std::cerr << fmt::format("quadrature did not converge at t = {} (error {:.3e})\n", io::format_double(series.times[i]),
                                 series.error[i]);
    return kPhysics;
  }
  return kOk;
}

int cmd_figures(const Common& c, const std::string& which, const std::string& out_dir, int points) {
  struct Fig {
    const char* id;
    ParametricParams p;
    double t_max;
  };
  const std::vector<Fig> figs{
      {"2a", {0.01, {0.75, 0.0}, {0.25, 0.0}}, 20.0},
      {"2b", {0.01, {0.5, 5.0}, {0.5, -5.0}}, 20.0},
      {"3a", {10.0, {0.75, 0.0}, {0.25, 0.0}}, 20.0},
      {"3b", {10.0, {0.5, 5.0}, {0.5, -5.0}}, 20.0},
      {"4", {10.0, {0.75, 0.0}, {0.25, 0.0}}, 2.0},
  };
  std::vector<const Fig*> chosen;
  for (const auto& f : figs)
    if (which == "all" || which == f.id) chosen.push_back(&f);
  if (chosen.empty()) throw ConfigError("unknown figure '" + which + "' (expected 2a, 2b, 3a, 3b, 4 or all)");
  if (points < 2) throw ConfigError("--points must be at least 2");
  const RunConfig cfg = load(c);  // only the quadrature section applies
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  bool converged = true;
  for (const Fig* f : chosen) {
    const auto times = linear_grid(0.0, f->t_max, points);
    const auto sd = make_parametric_density(f->p.Gamma, f->p.gamma_plus, f->p.gamma_minus);
    KernelOptions opt;
    opt.quad = cfg.quad;
    const auto q = kernels(sd, times, opt);
    converged = converged && q.all_converged();
    const auto e = closed_form_kernels(f->p, times);

    const auto fmt_rate = [](cplx g) {
      return g.imag() == 0.0 ? io::format_double(g.real())
                             : io::format_double(g.real()) + (g.imag() < 0 ? "-" : "+") +
                                   io::format_double(std::abs(g.imag())) + "i";
    };
    const std::string params = fmt::format("Gamma = {}, gamma+ = {}, gamma- = {}", io::format_double(f->p.Gamma),
                                           fmt_rate(f->p.gamma_plus), fmt_rate(f->p.gamma_minus));
    std::vector<std::string> stamp{"dampo " DAMPO_VERSION " figure " + std::string(f->id), params};

    io::CsvTable table;
    Plot plot;
    plot.x = times;
    plot.x_label = "t";
    plot.y_label = "<<cos wt>>";
    if (std::string(f->id) == "4") {
      const auto dashed = classical_comparison(f->p, times);
      table.header = {"t", "c", "classical"};
      table.columns = {times, q.c, dashed};
      plot.title = "short times: " + params;
      plot.curves = {{"c(t)", q.c, false}, {"classical", dashed, true}};
    } else {
      table.header = {"t", "c", "s", "d", "c_closed_form"};
      table.columns = {times, q.c, q.s, q.d, e.c};
      plot.title = params;
      plot.curves = {{"c(t)", q.c, false}};
      stamp.push_back(fmt::format("extrema of c: {}", count_extrema(q.c)));
    }
    table.comments = stamp;
    plot.stamp = stamp;
    const std::string base = (std::filesystem::path(out_dir) / (std::string("fig") + f->id)).string();
    {
      Output out(base + ".csv");
      io::write_csv(*out, table);
    }
    {
      Output out(base + ".svg");
      write_svg(*out, plot);
    }
    std::cout << base << ".csv\n" << base << ".svg\n";
  }
  return converged ? kOk : kPhysics;
}

int cmd_oracle_compare(const Common& c, int n_modes, double bound, const std::string& save_bath,
                       const std::string& load_bath) {
  RunConfig cfg = load(c);
  if (n_modes > 0) cfg.n_modes = n_modes;
  if (bound > 0.0) cfg.oracle_bound = bound;
  const std::string bath_path = load_bath.empty() ? cfg.bath_in : load_bath;

  DiscreteBath db;
  CouplingSpectrum V;
  double Omega0 = 0.0;
  if (!bath_path.empty()) {
    std::ifstream in(bath_path);
    if (!in) throw ConfigError("cannot open bath '" + bath_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    db = bath_from_json(ss.str());
    Omega0 = db.Omega0;
    cfg.m = db.m;
    if (cfg.source != ModelSource::None) V = bath_coupling(cfg, Omega0);
  } else {
    if (cfg.n_modes < 50) throw ConfigError("oracle.n_modes must be at least 50");
    Omega0 = resolve_Omega0(cfg);
    V = bath_coupling(cfg, Omega0);
    db = discretize(V, Omega0, cfg.m, cfg.n_modes, default_omega_max(cfg, V));
  }
  if (!save_bath.empty()) {
    Output out(save_bath);
    *out << bath_to_json(db) << "\n";
  }

  const bool coupled = db.positivity_sum() > 0.0;
  const double t_rec = recurrence_time(db);
  // an explicit grid.stop fixes the window, so coarse baths are judged on the same span
  const double horizon = cfg.doc.find("grid.stop") || !std::isfinite(t_rec) ? cfg.grid.stop : 0.5 * t_rec;
  const auto times = linear_grid(0.0, horizon, 201);
  const auto window = linear_grid(0.6 * horizon, horizon, 41);

  const auto disc = evolve_means_discrete(db, cfg.x0, cfg.p0, times);
  EvolutionSeries cont;
  GaussianState ref;
  const GaussianState initial = vacuum_state(cfg.m, Omega0);
  if (coupled) {
    if (V.omega_grid.empty()) throw ConfigError("comparing a loaded bath needs its model section");
    FanoOptions fo;
    fo.validation.tolerance = cfg.validation_tolerance;
    const auto sd = density_from_coupling(V, Omega0, fo);
    KernelOptions ko;
    ko.quad = cfg.quad;
    cont = evolve_means(cfg.x0, cfg.p0, cfg.m, kernels(sd, times, ko));
    ref = thermal_state(sd, cfg.m, cfg.beta);
  } else {
    cont.times = times;
    for (double t : times) {
      cont.c.push_back(std::cos(Omega0 * t));
      cont.s.push_back(std::sin(Omega0 * t) / Omega0);
      cont.d.push_back(Omega0 * std::sin(Omega0 * t));
    }
    cont = evolve_means(cfg.x0, cfg.p0, cfg.m, std::move(cont));
    ref = initial;  // the bath never reaches the oscillator
  }
  const Deviation dx = deviation(disc.mean_x, cont.mean_x);
  const Deviation dp = deviation(disc.mean_p, cont.mean_p);

  const auto tr = evolve_covariance_discrete(db, cfg.beta, initial, window);
  double vx = 0.0, vp = 0.0, cxp = 0.0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    vx += tr.var_x[i];
    vp += tr.var_p[i];
    cxp += tr.cov_xp[i];
  }
  const double n = static_cast<double>(window.size());
  vx /= n;
  vp /= n;
  cxp /= n;
  const double ex = std::abs(vx - ref.var_x) / ref.var_x;
  const double ep = std::abs(vp - ref.var_p) / ref.var_p;
  const double ec = std::abs(cxp - ref.cov_xp) / std::sqrt(ref.var_x * ref.var_p);
  const double cov_max = std::max({ex, ep, ec});
  const double cov_rms = std::sqrt((ex * ex + ep * ep + ec * ec) / 3.0);
  const double means_rms = std::max(dx.rms, dp.rms);
  const bool pass = means_rms <= cfg.oracle_bound && cov_rms <= cfg.oracle_bound;

  json r{{"n_modes", db.n_modes},
         {"Omega0", Omega0},
         {"omega_max", db.omegas.empty() ? 0.0 : *std::max_element(db.omegas.begin(), db.omegas.end())},
         {"beta", beta_json(cfg.beta)},
         {"recurrence_time", std::isfinite(t_rec) ? json(t_rec) : json("inf")},
         {"means", {{"horizon", horizon}, {"x", {{"rms", dx.rms}, {"max", dx.max}}}, {"p", {{"rms", dp.rms}, {"max", dp.max}}}}},
         {"covariance",
          {{"window", {window.front(), window.back()}},
           {"reference", coupled ? "continuum thermal state" : "initial state"},
           {"var_x", ex},
           {"var_p", ep},
           {"cov_xp", ec},
           {"rms", cov_rms},
           {"max", cov_max}}},
         {"bound", cfg.oracle_bound},
         {"pass", pass}};
  write_json(c, cfg, "oracle-compare", r);
  return pass ? kOk : kPhysics;
}

int cmd_kernel(const Common& c) {
  const RunConfig cfg = load(c);
  const auto times = cfg.grid.build();
  MemoryKernel k;
  if (cfg.source == ModelSource::Ohmic) {
    k = ohmic_kernel(cfg.ohmic, times);
  } else if (cfg.source == ModelSource::Coupling) {
    const double Omega0 = resolve_Omega0(cfg);
    const auto J = J_from_coupling(bath_coupling(cfg, Omega0), cfg.m, Omega0);
    KernelQuadOptions opt;
    opt.quad.max_subdivisions = cfg.quad.max_subdivisions;
    k = kernel_from_density(J, cfg.m, times, opt);
  } else {
    throw ConfigError("kernel needs a bath model (model.ohmic or model.coupling)");
  }
  auto h = header("kernel", cfg);
  h.push_back("kappa(0) = " + io::format_double(k.kappa0));
  try {
    h.push_back("integral of kappa = " + io::format_double(markov_damping(k)));
  } catch (const Error& e) {
    h.push_back(std::string("integral of kappa: ") + e.what());
  }
  Output out(primary_path(c, cfg.csv_path));
  io::write_kernel(*out, k, h);
  return kOk;
}

}  // namespace dampo::cli
