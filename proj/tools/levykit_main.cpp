// levykit: anisotropic jump-process toolkit.
//
// Verbs: preset / exponent / density / simulate / verify. Data goes to the
// --out file (CSV or JSON per verb), diagnostics to stderr, and every output
// gets a deterministic .manifest.json sidecar (wall time in a separate
// .timing.json so reruns stay byte-identical).
//
// Exit codes: 0 ok, 2 model-hypothesis failure, 3 numerical failure,
// 64 usage error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "levykit/bound_fits.hpp"
#include "levykit/common.hpp"
#include "levykit/density.hpp"
#include "levykit/model_io.hpp"
#include "levykit/presets.hpp"
#include "levykit/simulate.hpp"

using nlohmann::json;
using namespace levykit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitUsage = 64;

std::map<std::string, double> parse_kv(const std::string& s) {
  std::map<std::string, double> kv;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected key=value in --params, got '" + item + "'");
    kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return kv;
}

void write_manifest(const std::string& out_path, const std::string& verb,
                    const std::string& hash, const json& params,
                    double wall_seconds) {
  json man;
  man["schema"] = "levykit-manifest-1";
  man["verb"] = verb;
  man["model_hash"] = hash;
  man["parameters"] = params;
  man["tool_version"] = kVersion;
  man["outputs"] = json::array({out_path});
  std::ofstream mo(out_path + ".manifest.json");
  mo << man.dump(2) << "\n";
  json tim;
  tim["wall_seconds"] = wall_seconds;
  std::ofstream to(out_path + ".timing.json");
  to << tim.dump(2) << "\n";
}

SpectralMeasure default_mu(int d, const std::map<std::string, double>& kv) {
  const double mass = kv.count("mass") ? kv.at("mass") : 1.0;
  if (kv.count("onesided") && kv.at("onesided") != 0.0) {
    if (d != 1) throw std::invalid_argument("onesided spectral measure is 1-d only");
    return SpectralMeasure::atomic(1, {Vec{1.0}}, {mass});
  }
  if (kv.count("uniform") && kv.at("uniform") != 0.0)
    return SpectralMeasure::uniform(d, mass);
  // symmetric axis atoms
  std::vector<Vec> dirs;
  std::vector<double> ws;
  for (int a = 0; a < d; ++a) {
    dirs.push_back(axis_vec(d, a, 1.0));
    dirs.push_back(axis_vec(d, a, -1.0));
    ws.push_back(mass / (2.0 * d));
    ws.push_back(mass / (2.0 * d));
  }
  return SpectralMeasure::atomic(d, std::move(dirs), std::move(ws));
}

int cmd_preset(const std::string& name, const std::string& params_str,
               const std::string& emit) {
  const auto kv = parse_kv(params_str);
  const int d = kv.count("d") ? static_cast<int>(kv.at("d")) : 1;
  const double alpha = kv.count("alpha") ? kv.at("alpha") : 1.0;
  std::unique_ptr<LevyModel> model;
  if (name == "stable") {
    model = std::make_unique<LevyModel>(make_stable(d, alpha, default_mu(d, kv)));
  } else if (name == "layered") {
    const double mdec = kv.count("m") ? kv.at("m") : 3.0;
    model = std::make_unique<LevyModel>(make_layered(d, alpha, mdec, default_mu(d, kv)));
  } else if (name == "tempered") {
    const double lam = kv.count("lambda") ? kv.at("lambda") : 1.0;
    model = std::make_unique<LevyModel>(make_tempered(d, alpha, lam, default_mu(d, kv)));
  } else if (name == "relativistic") {
    const int res = kv.count("resolution") ? static_cast<int>(kv.at("resolution")) : 256;
    model = std::make_unique<LevyModel>(make_relativistic(d, alpha, res));
  } else {
    std::cerr << "unknown preset '" << name << "'\n";
    return kExitUsage;
  }
  const auto start = std::chrono::steady_clock::now();
  save_model(*model, emit);
  json params;
  params["name"] = name;
  params["params"] = params_str;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(emit, "preset", model_hash(*model), params, wall);
  std::cerr << "wrote " << emit << " (" << model->dim() << "-d, alpha " << model->alpha()
            << ")\n";
  return kExitOk;
}

int cmd_exponent(const LevyModel& m, const std::string& hash,
                 const std::vector<std::string>& xi_specs, bool closed_form,
                 const std::string& out) {
  const auto start = std::chrono::steady_clock::now();
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open for write: " + out);
  for (int k = 0; k < m.dim(); ++k) os << "xi" << (k + 1) << ",";
  os << "re_phi,im_phi\n";
  os.precision(15);
  for (const auto& spec : xi_specs) {
    Vec xi;
    std::stringstream ss(spec);
    std::string c;
    while (std::getline(ss, c, ',')) xi.push_back(std::stod(c));
    if (static_cast<int>(xi.size()) != m.dim())
      throw std::invalid_argument("--xi has wrong dimension: " + spec);
    const std::complex<double> phi =
        closed_form ? stable_exponent_closed_form(m.mu(), m.alpha(), xi)
                    : evaluate_exponent(m, xi);
    for (double v : xi) os << v << ",";
    os << phi.real() << "," << phi.imag() << "\n";
  }
  json params;
  params["xi_count"] = xi_specs.size();
  params["closed_form"] = closed_form;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(out, "exponent", hash, params, wall);
  return kExitOk;
}

int cmd_density(const LevyModel& m, const std::string& hash, double t, double tol,
                const std::string& out, const std::string& format) {
  const auto start = std::chrono::steady_clock::now();
  const GridSpec spec = design_grid(m, t, tol);
  DensityGrid g;

  const char* cache_dir = std::getenv("LEVYKIT_CACHE_DIR");
  std::size_t total = 1;
  for (int k = 0; k < m.dim(); ++k) total *= spec.n;
  if (cache_dir && total <= (std::size_t{1} << 21)) {
    std::ostringstream key;
    key << cache_dir << "/" << hash << "_n" << spec.n << "_d" << m.dim() << "_xi"
        << std::hexfloat << spec.xi_extent << ".lkexp";
    auto cached = load_exponent_grid(key.str(), hash, m.dim(), spec.n, spec.xi_extent);
    if (!cached) {
      ExponentEvaluator ev(m, spec.xi_extent * std::sqrt(double(m.dim())) * 1.01, tol);
      cached = make_exponent_grid(ev, m.dim(), spec.n, spec.xi_extent, hash, tol);
      save_exponent_grid(*cached, key.str());
      std::cerr << "exponent grid cached at " << key.str() << "\n";
    } else {
      std::cerr << "exponent grid loaded from cache\n";
    }
    g = invert_grid(*cached, t);
  } else {
    g = invert(m, t, spec, tol);
  }

  if (format == "bin")
    write_density_binary(g, out);
  else
    write_density_csv(g, out);
  json params;
  params["t"] = t;
  params["tol"] = tol;
  params["n"] = g.n;
  params["dx"] = g.dx;
  params["xi_extent"] = g.xi_extent;
  params["format"] = format;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(out, "density", hash, params, wall);
  std::cerr << "density lattice " << g.n << "^" << g.dim << ", mass " << g.total_mass
            << "\n";
  return kExitOk;
}

int cmd_simulate(const LevyModel& m, const std::string& hash, double t, std::size_t n,
                 std::uint64_t seed, const std::string& scheme, double r, double rho,
                 const std::string& out) {
  const auto start = std::chrono::steady_clock::now();
  SimConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  cfg.r = r;
  cfg.rho = rho;
  if (scheme == "gaussian") {
    cfg.scheme = SimConfig::Scheme::gaussian;
  } else if (scheme == "discard") {
    cfg.scheme = SimConfig::Scheme::discard;
  } else {
    std::cerr << "unknown scheme '" << scheme << "' (gaussian|discard)\n";
    return kExitUsage;
  }
  const SampleBatch batch = sample_increment(m, t, cfg);
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open for write: " + out);
  os << "index,";
  for (int k = 0; k < m.dim(); ++k) os << "x" << (k + 1) << ",";
  os << "jump_count\n";
  os.precision(12);
  for (std::size_t i = 0; i < batch.n; ++i) {
    os << i << ",";
    for (int k = 0; k < m.dim(); ++k)
      os << batch.x[i * static_cast<std::size_t>(m.dim()) + static_cast<std::size_t>(k)]
         << ",";
    os << batch.jump_counts[i] << "\n";
  }
  json params;
  params["t"] = t;
  params["n"] = n;
  params["seed"] = seed;
  params["scheme"] = scheme;
  params["r"] = batch.config.r;
  params["rho"] = rho;
  params["nu_bar_mass"] = batch.nu_bar_mass;
  params["mean_jump_count"] = batch.mean_jump_count;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(out, "simulate", hash, params, wall);
  std::cerr << "sampled " << n << " increments, mean jump count "
            << batch.mean_jump_count << "\n";
  return kExitOk;
}

json theorem1_report(const LevyModel& m) {
  const std::vector<double> base_t{0.05, 0.2, 1.0, 5.0, 25.0};
  std::vector<double> fine_t;
  for (std::size_t i = 0; i < base_t.size(); ++i) {
    fine_t.push_back(base_t[i]);
    if (i + 1 < base_t.size()) fine_t.push_back(std::sqrt(base_t[i] * base_t[i + 1]));
  }
  const DensityBoundFit coarse = fit_constants(m, base_t, 2);
  const DensityBoundFit fine = fit_constants(m, fine_t, 1);
  auto stab = [](double a, double b) {
    if (a <= 0.0 || b <= 0.0) return 1e308;
    return std::max(a / b, b / a);
  };
  const double s_small = stab(coarse.params.c, fine.params.c);
  const double s_large = stab(coarse.params.c1, fine.params.c1);
  json rep;
  rep["suite"] = "theorem1";
  rep["grid"]["t"] = base_t;
  rep["grid"]["t_refined"] = fine_t;
  rep["fitted_constants"]["c"] = fine.params.c;
  rep["fitted_constants"]["c1"] = fine.params.c1;
  rep["fitted_constants"]["c2"] = fine.params.c2;
  rep["fitted_constants"]["c3"] = fine.params.c3;
  rep["sup_ratio"] = std::max(fine.sup_ratio_small, fine.sup_ratio_large);
  rep["stability_factor_small_t"] = s_small;
  rep["stability_factor_large_t"] = s_large;
  rep["coverage_x"] =
      std::max(fine.coverage_small, fine.coverage_large);
  rep["window_clamped"] = fine.clamped;
  rep["pass"] = coarse.pass && fine.pass && s_small <= 2.0 && s_large <= 2.0;
  return rep;
}

json convpow_report(const LevyModel& m) {
  const ConvPowerReport a = convolution_power_check(m, 1.0, 4, std::size_t{1} << 16);
  const ConvPowerReport b = convolution_power_check(m, 1.0, 4, std::size_t{1} << 17);
  const double stab = (a.c_fit > 0 && b.c_fit > 0)
                          ? std::max(a.c_fit / b.c_fit, b.c_fit / a.c_fit)
                          : 1e308;
  json rep;
  rep["suite"] = "convpow";
  rep["grid"]["r"] = 1.0;
  rep["grid"]["n_max"] = 4;
  rep["fitted_constants"]["c"] = b.c_fit;
  rep["fitted_constants"]["psi"] = b.psi;
  rep["sup_ratio"] = b.c_fit;
  rep["lattice_refinement_factor"] = stab;
  rep["out_of_lattice_mass"] = b.out_of_lattice;
  rep["pass"] = a.pass && b.pass && stab <= 2.0;
  return rep;
}

json tails_report(const LevyModel& m) {
  // Bounded-support jump mix derived from the model directions.
  std::vector<Vec> atoms;
  std::vector<double> ws;
  const auto& dirs = m.mu().directions();
  const auto& mw = m.mu().weights();
  for (std::size_t a = 0; a < std::min<std::size_t>(dirs.size(), 8); ++a) {
    for (double s : {0.3, 0.55, 0.8}) {
      atoms.push_back(scaled(dirs[a], s));
      ws.push_back(mw[a] * (1.0 + s));
    }
  }
  const BoundedTailReport tail = bounded_support_tail_check(atoms, ws, 1000000, 20240601);
  const BoundedDensityReport dens = bounded_support_density_check(m, 1.0, 1.0, 5.0, 20.0);
  json rep;
  rep["suite"] = "tails";
  rep["grid"]["n_samples"] = tail.n;
  rep["grid"]["x_range"] = {dens.x_lo, dens.x_hi};
  rep["fitted_constants"]["c1_density"] = dens.c1_fit;
  rep["fitted_constants"]["m0"] = dens.m0;
  rep["fitted_constants"]["m1"] = dens.m1;
  rep["sup_ratio"] = dens.c1_fit;
  rep["tail_threshold"] = tail.threshold;
  rep["pass"] = tail.pass && dens.pass;
  return rep;
}

int cmd_verify(const LevyModel& m, const std::string& hash, const std::string& suite,
               const std::string& out) {
  const auto start = std::chrono::steady_clock::now();

  // Structural hypotheses gate every suite.
  const ValidationReport vr = validate_model(m);
  const LowerBoundFit lb = verify_lower_bound(m);
  if (!vr.all_pass() || !lb.pass) {
    std::cerr << "model hypothesis checks failed:\n";
    for (const auto& c : vr.checks)
      if (!c.pass) std::cerr << "  " << c.name << " (" << c.detail << ")\n";
    if (!lb.pass)
      std::cerr << "  exponent lower bound Re Phi >= c (|xi|^alpha ∧ |xi|^beta): "
                   "grid infimum "
                << lb.c_lower << "\n";
    return kExitValidation;
  }

  json rep;
  rep["schema"] = "levykit-report-1";
  rep["model_hash"] = hash;
  json suites = json::array();
  bool pass = true;
  if (suite == "theorem1" || suite == "all") {
    const json r = theorem1_report(m);
    pass = pass && r.at("pass").get<bool>();
    suites.push_back(r);
  }
  if (suite == "tails" || suite == "all") {
    const json r = tails_report(m);
    pass = pass && r.at("pass").get<bool>();
    suites.push_back(r);
  }
  if (suite == "convpow" || suite == "all") {
    const json r = convpow_report(m);
    pass = pass && r.at("pass").get<bool>();
    suites.push_back(r);
  }
  if (suites.empty()) {
    std::cerr << "unknown suite '" << suite << "' (theorem1|tails|convpow|all)\n";
    return kExitUsage;
  }
  rep["suite"] = suite;
  rep["suites"] = suites;
  rep["c_lower"] = lb.c_lower;
  rep["pass"] = pass;
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot open for write: " + out);
  os << rep.dump(2) << "\n";
  json params;
  params["suite"] = suite;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(out, "verify", hash, params, wall);
  std::cerr << "verify " << suite << ": " << (pass ? "pass" : "FAIL") << "\n";
  return pass ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levykit: anisotropic jump-process densities, samplers and bounds"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads (default: cores)");

  // preset
  auto* preset = app.add_subcommand("preset", "emit a ready-made model file");
  std::string preset_name, preset_params = "d=1,alpha=1", preset_emit = "model.json";
  preset->add_option("--name", preset_name, "stable|layered|tempered|relativistic")
      ->required();
  preset->add_option("--params", preset_params, "comma list: d=1,alpha=1,...");
  preset->add_option("--emit", preset_emit, "output model path")->required();

  // exponent
  auto* expo = app.add_subcommand("exponent", "evaluate the characteristic exponent");
  std::string expo_model, expo_out = "exponent.csv";
  std::vector<std::string> expo_xi;
  bool expo_closed = false;
  expo->add_option("--model", expo_model)->required();
  expo->add_option("--xi", expo_xi, "frequency point, comma-separated components")
      ->required();
  expo->add_flag("--closed-form", expo_closed, "use the stable closed form");
  expo->add_option("--out", expo_out);

  // density
  auto* dens = app.add_subcommand("density", "FFT transition density on a lattice");
  std::string dens_model, dens_out = "density.csv", dens_format = "csv";
  double dens_t = 1.0, dens_tol = 1e-10;
  dens->add_option("--model", dens_model)->required();
  dens->add_option("--t", dens_t)->required();
  dens->add_option("--tol", dens_tol);
  dens->add_option("--out", dens_out);
  dens->add_option("--format", dens_format, "csv|bin");

  // simulate
  auto* sim = app.add_subcommand("simulate", "sample process increments");
  std::string sim_model, sim_out = "samples.csv", sim_scheme = "gaussian";
  double sim_t = 1.0, sim_r = 0.0, sim_rho = 0.0;
  std::size_t sim_n = 10000;
  std::int64_t sim_seed = -1;
  sim->add_option("--model", sim_model)->required();
  sim->add_option("--t", sim_t)->required();
  sim->add_option("--n", sim_n);
  sim->add_option("--seed", sim_seed, "master seed (required; no silent entropy)");
  sim->add_option("--scheme", sim_scheme, "gaussian|discard");
  sim->add_option("--r", sim_r, "jump threshold (default h(t))");
  sim->add_option("--rho", sim_rho, "inner cutoff (discard scheme)");
  sim->add_option("--out", sim_out);

  // verify
  auto* ver = app.add_subcommand("verify", "certify the density bounds");
  std::string ver_model, ver_suite = "all", ver_out = "report.json";
  ver->add_option("--model", ver_model)->required();
  ver->add_option("--suite", ver_suite, "theorem1|tails|convpow|all");
  ver->add_option("--out", ver_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (threads > 0) set_max_threads(threads);

  try {
    if (preset->parsed()) return cmd_preset(preset_name, preset_params, preset_emit);

    if (expo->parsed()) {
      const LevyModel m = load_model(expo_model);
      return cmd_exponent(m, model_hash(m), expo_xi, expo_closed, expo_out);
    }
    if (dens->parsed()) {
      const LevyModel m = load_model(dens_model);
      return cmd_density(m, model_hash(m), dens_t, dens_tol, dens_out, dens_format);
    }
    if (sim->parsed()) {
      if (sim_seed < 0) {
        std::cerr << "simulate: --seed is required (no silent entropy)\n";
        return kExitUsage;
      }
      const LevyModel m = load_model(sim_model);
      return cmd_simulate(m, model_hash(m), sim_t, sim_n,
                          static_cast<std::uint64_t>(sim_seed), sim_scheme, sim_r,
                          sim_rho, sim_out);
    }
    if (ver->parsed()) {
      const LevyModel m = load_model(ver_model);
      return cmd_verify(m, model_hash(m), ver_suite, ver_out);
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
