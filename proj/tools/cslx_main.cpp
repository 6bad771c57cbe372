// cslx: collapse-model X-ray spectrum analysis tool.
//
// Subcommands: fit, limit, simulate, closure, compare, report.
// Exit codes: 0 success, 1 analysis failure (degenerate fit), 2 usage,
// I/O or parse error.

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cslx/constants.hpp"
#include "cslx/emission.hpp"
#include "cslx/errors.hpp"
#include "cslx/fit.hpp"
#include "cslx/limit.hpp"
#include "cslx/manifest.hpp"
#include "cslx/material.hpp"
#include "cslx/pseudo.hpp"
#include "cslx/random.hpp"
#include "cslx/spectrum.hpp"
#include "cslx/svg_plot.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

json load_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw cslx::ParseError("no such input: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw cslx::ParseError("malformed JSON '" + path.string() + "': " + e.what());
  }
  return j;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw cslx::ParseError("cannot open output file '" + path.string() + "'");
  out << content;
  if (!out) throw cslx::ParseError("write failed for '" + path.string() + "'");
}

void write_json_file(const fs::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::pair<double, double> parse_window(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= s.size())
    throw std::invalid_argument("window must be lo:hi in keV, got '" + s + "'");
  try {
    const double lo = std::stod(s.substr(0, colon));
    const double hi = std::stod(s.substr(colon + 1));
    return {lo, hi};
  } catch (const std::exception&) {
    throw std::invalid_argument("window must be lo:hi in keV, got '" + s + "'");
  }
}

// Config-file fallback: a flag given on the command line wins; otherwise the
// matching key from the config section applies.
const json* cfg_section(const json& cfg, const char* name) {
  if (cfg.is_object() && cfg.contains(name) && cfg.at(name).is_object())
    return &cfg.at(name);
  return nullptr;
}

template <typename T>
void fall_back(const CLI::Option* opt, const json* sec, const char* key, T& value) {
  if (opt != nullptr && opt->count() > 0) return;
  if (sec == nullptr || !sec->contains(key)) return;
  try {
    value = sec->at(key).get<T>();
  } catch (const json::exception& e) {
    throw cslx::ParseError(std::string("config key '") + key + "': " + e.what());
  }
}

// Window config values may be "lo:hi" or [lo, hi].
void fall_back_window(const CLI::Option* opt, const json* sec, std::string& value) {
  if (opt != nullptr && opt->count() > 0) return;
  if (sec == nullptr || !sec->contains("window")) return;
  const auto& w = sec->at("window");
  if (w.is_string()) {
    value = w.get<std::string>();
  } else if (w.is_array() && w.size() == 2) {
    value = fmt(w.at(0).get<double>()) + ":" + fmt(w.at(1).get<double>());
  } else {
    throw cslx::ParseError("config key 'window' must be \"lo:hi\" or [lo, hi]");
  }
}

std::string underscored(std::string s) {
  for (auto& c : s)
    if (c == '-') c = '_';
  return s;
}

struct GlobalOpts {
  std::string constants_mode_str = "paper-compat";
  std::string config_path;
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  bool plot = false;

  CLI::Option* mode_opt = nullptr;
  CLI::Option* output_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* plot_opt = nullptr;

  json cfg = json::object();
  cslx::ConstantsMode mode = cslx::ConstantsMode::paper_compat;
  cslx::PhysicalConstants constants{};

  void resolve() {
    if (!config_path.empty()) cfg = load_json_file(config_path);
    fall_back(mode_opt, &cfg, "constants_mode", constants_mode_str);
    fall_back(output_opt, &cfg, "output", output_dir);
    fall_back(seed_opt, &cfg, "seed", seed);
    fall_back(plot_opt, &cfg, "plot", plot);
    mode = cslx::constants_mode_from_string(underscored(constants_mode_str));
    constants = cslx::PhysicalConstants::with_mode(mode);
    if (cfg.contains("constants"))
      constants = cslx::PhysicalConstants::from_json(cfg.at("constants"), constants);
    constants.validate();
    fs::create_directories(output_dir);
  }

  fs::path out(const std::string& name) const {
    fs::path p(name);
    if (p.is_absolute()) return p;
    return fs::path(output_dir) / p;
  }

  json manifest_config(json extra) const {
    extra["constants_mode"] = cslx::to_string(mode);
    extra["constants"] = constants.to_json();
    extra["seed"] = seed;
    extra["output"] = output_dir;
    extra["plot"] = plot;
    return extra;
  }
};

// ---------------------------------------------------------------------------
// fit (shared with report)

struct FitOpts {
  std::string input;
  std::string window;
  std::string method = "wls";
  double exposure = 80.0;
  std::string normalization;

  CLI::Option* window_opt = nullptr;
  CLI::Option* method_opt = nullptr;
  CLI::Option* exposure_opt = nullptr;
  CLI::Option* norm_opt = nullptr;

  void merge_config(const json* sec) {
    fall_back_window(window_opt, sec, window);
    fall_back(method_opt, sec, "method", method);
    fall_back(exposure_opt, sec, "exposure", exposure);
    fall_back(norm_opt, sec, "normalization", normalization);
  }

  void register_options(CLI::App* sub) {
    sub->add_option("spectrum", input, "input spectrum CSV")->required();
    window_opt = sub->add_option("--window", window, "fit window lo:hi in keV");
    method_opt = sub->add_option("--method", method, "primary estimator")
                     ->check(CLI::IsMember({"wls", "poisson_mle"}));
    exposure_opt =
        sub->add_option("--exposure", exposure,
                        "exposure in kg day (overrides the sidecar; default 80)");
    norm_opt = sub->add_option("--normalization", normalization,
                               "value column meaning (overrides the sidecar)")
                   ->check(CLI::IsMember({"counts_per_bin", "counts_per_kev",
                                          "counts_per_kev_kg_day"}));
  }
};

struct FitOutcome {
  cslx::BinnedSpectrum spectrum;
  cslx::FitResult primary;
  std::optional<cslx::FitResult> cross;
};

cslx::BinnedSpectrum load_spectrum_resolved(const FitOpts& o) {
  if (!fs::exists(o.input)) throw cslx::ParseError("no such input: " + o.input);
  double exposure = o.exposure;
  auto norm = cslx::Normalization::counts_per_bin;
  const auto sidecar = cslx::sidecar_path_for(o.input);
  if (fs::exists(sidecar)) {
    const auto meta = load_json_file(sidecar);
    if ((o.exposure_opt == nullptr || o.exposure_opt->count() == 0) &&
        meta.contains("exposure_kg_day"))
      exposure = meta.at("exposure_kg_day").get<double>();
    if (o.normalization.empty() && meta.contains("normalization"))
      norm = cslx::normalization_from_string(meta.at("normalization").get<std::string>());
  }
  if (!o.normalization.empty()) norm = cslx::normalization_from_string(o.normalization);
  return cslx::load_spectrum_file(o.input, norm, exposure);
}

FitOutcome run_fit(const FitOpts& o) {
  auto s = load_spectrum_resolved(o);
  if (!o.window.empty()) {
    const auto [lo, hi] = parse_window(o.window);
    s = cslx::restrict_range(s, lo, hi);
  }
  const auto method = cslx::fit_method_from_string(o.method);
  FitOutcome out{std::move(s), {}, std::nullopt};
  out.primary = cslx::fit_alpha(out.spectrum, method);
  const auto other = method == cslx::FitMethod::wls ? cslx::FitMethod::poisson_mle
                                                    : cslx::FitMethod::wls;
  try {
    out.cross = cslx::fit_alpha(out.spectrum, other);
  } catch (const cslx::DegenerateFitError&) {
    out.cross = std::nullopt;  // the cross-check is advisory
  }
  return out;
}

json fit_report_json(const FitOutcome& f, const std::string& input,
                     const cslx::RunManifest& manifest) {
  json j = cslx::to_json(f.primary);
  j["cross_check"] = f.cross ? cslx::to_json(*f.cross) : json(nullptr);
  j["input"] = input;
  j["exposure_kg_day"] = f.spectrum.exposure_kg_day();
  j["n_bins"] = f.spectrum.size();
  j["total_counts"] = f.spectrum.total_counts();
  j["manifest"] = cslx::to_json(manifest);
  return j;
}

void print_fit(std::ostream& os, const FitOutcome& f) {
  os << "fit (" << cslx::to_string(f.primary.method)
     << "): alpha = " << f.primary.alpha_hat << " +- " << f.primary.alpha_err
     << ", chi2/ndf = " << f.primary.chi2 << "/" << f.primary.ndf << " = "
     << cslx::goodness(f.primary) << "\n";
  if (f.cross)
    os << "cross-check (" << cslx::to_string(f.cross->method)
       << "): alpha = " << f.cross->alpha_hat << " +- " << f.cross->alpha_err
       << ", chi2/ndf = " << cslx::goodness(*f.cross) << "\n";
  else
    os << "cross-check: degenerate on this input\n";
}

int cmd_fit(const GlobalOpts& g, const FitOpts& o) {
  const auto f = run_fit(o);
  const auto manifest = cslx::make_manifest(
      "fit", {o.input},
      g.manifest_config({{"window", o.window.empty() ? "full" : o.window},
                         {"method", o.method},
                         {"exposure_kg_day", f.spectrum.exposure_kg_day()},
                         {"normalization",
                          cslx::to_string(f.spectrum.normalization())}}));
  const auto path = g.out("fit.json");
  write_json_file(path, fit_report_json(f, o.input, manifest));
  print_fit(std::cout, f);
  std::cout << "wrote " << path.string() << "\n";
  if (g.plot) {
    cslx::PlotOptions po;
    po.title = fs::path(o.input).filename().string();
    const auto svg = g.out("fit.svg");
    write_text_file(svg, cslx::render_spectrum_svg(f.spectrum, &f.primary, po));
    std::cout << "wrote " << svg.string() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// limit (shared with report)

struct LimitOpts {
  double alpha = 0.0;
  double alpha_err = 0.0;
  std::string fit_path;
  int electrons = 4;
  bool mass_prop = false;
  std::string cl_mode = "point_estimate";
  double exposure = 80.0;

  CLI::Option* alpha_opt = nullptr;
  CLI::Option* alpha_err_opt = nullptr;
  CLI::Option* fit_opt = nullptr;
  CLI::Option* electrons_opt = nullptr;
  CLI::Option* mass_prop_opt = nullptr;
  CLI::Option* cl_mode_opt = nullptr;
  CLI::Option* exposure_opt = nullptr;

  void merge_config(const json* sec) {
    fall_back(alpha_opt, sec, "alpha", alpha);
    fall_back(alpha_err_opt, sec, "alpha_err", alpha_err);
    fall_back(fit_opt, sec, "fit", fit_path);
    fall_back(electrons_opt, sec, "electrons", electrons);
    fall_back(mass_prop_opt, sec, "mass_prop", mass_prop);
    fall_back(cl_mode_opt, sec, "cl_mode", cl_mode);
    fall_back(exposure_opt, sec, "exposure", exposure);
  }

  void register_options(CLI::App* sub, bool with_sources) {
    if (with_sources) {
      alpha_opt = sub->add_option("--alpha", alpha, "fitted amplitude in counts");
      alpha_err_opt =
          sub->add_option("--alpha-err", alpha_err, "1 sigma uncertainty on alpha");
      fit_opt = sub->add_option("--fit", fit_path, "fit report JSON to read alpha from")
                    ->excludes(alpha_opt);
      exposure_opt = sub->add_option("--exposure", exposure,
                                     "exposure in kg day (default 80)");
    }
    electrons_opt = sub->add_option("--electrons", electrons,
                                    "quasi-free electrons per atom (default 4)")
                        ->check(CLI::PositiveNumber);
    mass_prop_opt = sub->add_flag("--mass-prop", mass_prop,
                                  "mass-proportional coupling variant");
    cl_mode_opt = sub->add_option("--cl-mode", cl_mode,
                                  "how alpha enters the bound")
                      ->check(CLI::IsMember(
                          {"point_estimate", "plus_1sigma", "plus_1p645sigma"}));
  }
};

cslx::LimitResult run_limit(const GlobalOpts& g, const LimitOpts& o, double alpha,
                            double alpha_err) {
  cslx::LimitAssumptions a;
  a.n_quasi_free = o.electrons;
  a.mass_proportional = o.mass_prop;
  a.constants_mode = g.mode;
  a.cl_mode = cslx::cl_mode_from_string(o.cl_mode);
  a.exposure_kg_day = o.exposure;
  a.validate();
  const auto material = cslx::germanium(g.mode);
  return cslx::alpha_to_lambda(alpha, alpha_err, a,
                               cslx::per_electron_coefficient(g.constants),
                               material, g.constants);
}

std::string verdict(const cslx::Comparison& c) {
  if (c.boundary) return "BOUNDARY";
  return c.excluded ? "EXCLUDED" : "not excluded";
}

void print_comparisons(std::ostream& os, const cslx::LimitResult& limit) {
  os << "limit: lambda <= " << fmt(limit.lambda_upper_per_s) << " 1/s  ("
     << limit.assumptions.n_quasi_free << " electrons, "
     << (limit.assumptions.mass_proportional ? "mass-proportional"
                                             : "non-mass-proportional")
     << ", " << cslx::to_string(limit.assumptions.cl_mode) << ", "
     << cslx::to_string(limit.assumptions.constants_mode) << ")\n";
  const auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    else s += ' ';
    return s;
  };
  os << "  " << pad("reference", 58) << pad("value [1/s]", 16)
     << pad("verdict", 14) << "log10(limit/ref)\n";
  for (const auto& c : cslx::compare_models(limit)) {
    std::string name = c.name;
    if (!c.magnitude.empty()) name += " [10^" + c.magnitude + " x lambda_CSL]";
    os << "  " << pad(name, 58) << pad(fmt(c.reference_value_per_s), 16)
       << pad(verdict(c), 14) << fmt(c.log10_distance) << "\n";
  }
}

std::string comparisons_csv(const cslx::LimitResult& limit,
                            const cslx::RunManifest& manifest) {
  std::ostringstream out;
  out << "# manifest: " << cslx::to_json(manifest).dump() << "\n";
  out << "name,reference_value_or_magnitude,reference_value_per_s,excluded,"
         "boundary,log10_distance\n";
  for (const auto& c : cslx::compare_models(limit)) {
    out << c.name << ','
        << (c.magnitude.empty() ? fmt(c.reference_value_per_s) : c.magnitude)
        << ',' << fmt(c.reference_value_per_s) << ','
        << (c.excluded ? "true" : "false") << ','
        << (c.boundary ? "true" : "false") << ',' << fmt(c.log10_distance)
        << "\n";
  }
  return out.str();
}

int cmd_limit(const GlobalOpts& g, const LimitOpts& o) {
  double alpha = o.alpha;
  double alpha_err = o.alpha_err;
  const bool has_alpha = o.alpha_opt->count() > 0 ||
                         (o.fit_path.empty() && alpha > 0.0);
  if (!o.fit_path.empty()) {
    const auto j = load_json_file(o.fit_path);
    const json& f = j.contains("alpha_hat") ? j : j.at("fit");
    alpha = f.at("alpha_hat").get<double>();
    alpha_err = f.at("alpha_err").get<double>();
  } else if (!has_alpha) {
    throw cslx::ParseError("limit needs --alpha or --fit");
  }
  const auto limit = run_limit(g, o, alpha, alpha_err);
  const auto manifest = cslx::make_manifest(
      "limit", o.fit_path.empty() ? std::vector<std::string>{} :
                                    std::vector<std::string>{o.fit_path},
      g.manifest_config({{"alpha", alpha},
                         {"alpha_err", alpha_err},
                         {"electrons", o.electrons},
                         {"mass_prop", o.mass_prop},
                         {"cl_mode", o.cl_mode},
                         {"exposure_kg_day", o.exposure}}));
  json j = cslx::to_json(limit);
  j["alpha_err_used"] = alpha_err;
  if (!o.fit_path.empty()) j["fit_input"] = o.fit_path;
  j["manifest"] = cslx::to_json(manifest);
  const auto path = g.out("limit.json");
  write_json_file(path, j);
  print_comparisons(std::cout, limit);
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// simulate / closure

struct SimOpts {
  double lambda = 0.0;
  double alpha_equivalent = -1.0;
  double background = 0.0;
  double e_min = 4.5;
  double e_max = 48.5;
  int bins = 44;
  double exposure = 80.0;
  int electrons = 4;
  bool mass_prop = false;
  bool event_mode = false;
  std::uint64_t trial = 0;

  CLI::Option* lambda_opt = nullptr;
  CLI::Option* alpha_eq_opt = nullptr;
  CLI::Option* background_opt = nullptr;
  CLI::Option* e_min_opt = nullptr;
  CLI::Option* e_max_opt = nullptr;
  CLI::Option* bins_opt = nullptr;
  CLI::Option* exposure_opt = nullptr;
  CLI::Option* electrons_opt = nullptr;
  CLI::Option* mass_prop_opt = nullptr;
  CLI::Option* event_mode_opt = nullptr;
  CLI::Option* trial_opt = nullptr;

  void merge_config(const json* sec) {
    fall_back(lambda_opt, sec, "lambda", lambda);
    fall_back(alpha_eq_opt, sec, "alpha_equivalent", alpha_equivalent);
    fall_back(background_opt, sec, "background", background);
    fall_back(e_min_opt, sec, "e_min", e_min);
    fall_back(e_max_opt, sec, "e_max", e_max);
    fall_back(bins_opt, sec, "bins", bins);
    fall_back(exposure_opt, sec, "exposure", exposure);
    fall_back(electrons_opt, sec, "electrons", electrons);
    fall_back(mass_prop_opt, sec, "mass_prop", mass_prop);
    fall_back(event_mode_opt, sec, "event_mode", event_mode);
    fall_back(trial_opt, sec, "trial", trial);
  }

  void register_options(CLI::App* sub) {
    lambda_opt = sub->add_option("--lambda", lambda, "true collapse rate in 1/s");
    alpha_eq_opt = sub->add_option("--alpha-equivalent", alpha_equivalent,
                                   "choose lambda so the implied amplitude is this")
                       ->excludes(lambda_opt);
    background_opt = sub->add_option("--background", background,
                                     "flat background in counts/(keV kg day)");
    e_min_opt = sub->add_option("--e-min", e_min, "window low edge, keV");
    e_max_opt = sub->add_option("--e-max", e_max, "window high edge, keV");
    bins_opt = sub->add_option("--bins", bins, "number of uniform bins")
                   ->check(CLI::PositiveNumber);
    exposure_opt = sub->add_option("--exposure", exposure, "exposure in kg day");
    electrons_opt = sub->add_option("--electrons", electrons,
                                    "quasi-free electrons per atom")
                        ->check(CLI::PositiveNumber);
    mass_prop_opt = sub->add_flag("--mass-prop", mass_prop,
                                  "mass-proportional coupling variant");
    event_mode_opt = sub->add_flag("--event-mode", event_mode,
                                   "draw individual photon energies instead of "
                                   "per-bin Poisson counts");
    trial_opt = sub->add_option("--trial", trial, "trial index within the seed");
  }

  cslx::SimulationConfig to_config(const GlobalOpts& g) const {
    cslx::SimulationConfig cfg;
    cfg.background_rate = background;
    cfg.bin_edges_kev = cslx::uniform_edges(e_min, e_max, bins);
    cfg.exposure_kg_day = exposure;
    cfg.material = cslx::germanium(g.mode);
    cfg.assumptions.n_quasi_free = electrons;
    cfg.assumptions.mass_proportional = mass_prop;
    cfg.assumptions.constants_mode = g.mode;
    cfg.assumptions.exposure_kg_day = exposure;
    cfg.constants = g.constants;
    cfg.seed = g.seed;
    if (alpha_equivalent >= 0.0) {
      // invert alpha = K_eff * lambda * c * exposure
      double k_eff = cslx::per_electron_coefficient(g.constants);
      if (mass_prop) k_eff *= cslx::mass_prop_factor(g.constants);
      const double c = cslx::factor_c(cfg.material, electrons, g.constants);
      cfg.lambda_true = alpha_equivalent / (k_eff * c * exposure);
    } else {
      cfg.lambda_true = lambda;
    }
    cfg.validate();
    return cfg;
  }

  json echo(const cslx::SimulationConfig& cfg) const {
    return json{{"lambda_true", cfg.lambda_true},
                {"alpha_equivalent", cslx::alpha_equivalent(cfg)},
                {"background", background},
                {"e_min", e_min},
                {"e_max", e_max},
                {"bins", bins},
                {"exposure_kg_day", exposure},
                {"electrons", electrons},
                {"mass_prop", mass_prop},
                {"event_mode", event_mode}};
  }
};

int cmd_simulate(const GlobalOpts& g, const SimOpts& o) {
  const auto cfg = o.to_config(g);
  const auto s = o.event_mode ? cslx::simulate_spectrum_events(cfg, o.trial)
                              : cslx::simulate_spectrum(cfg, o.trial);
  auto echo = o.echo(cfg);
  echo["trial"] = o.trial;
  const auto manifest = cslx::make_manifest("simulate", {}, g.manifest_config(echo));
  const auto csv = g.out("spectrum.csv");
  const std::vector<std::string> comments = {
      "synthetic spectrum drawn from the 1/E emission model",
      std::string("generator: ") + (o.event_mode ? "event" : "binned") +
          ", rng: " + cslx::RandomStream::kAlgorithmId,
      "lambda_true = " + fmt(cfg.lambda_true) +
          " 1/s, alpha_equivalent = " + fmt(cslx::alpha_equivalent(cfg)),
      "seed = " + std::to_string(cfg.seed) + ", trial = " + std::to_string(o.trial),
      "manifest: " + cslx::to_json(manifest).dump(),
  };
  cslx::save_spectrum_file(s, csv, comments);
  json sidecar = {{"exposure_kg_day", s.exposure_kg_day()},
                  {"normalization", cslx::to_string(s.normalization())},
                  {"manifest", cslx::to_json(manifest)}};
  write_json_file(cslx::sidecar_path_for(csv), sidecar);
  std::cout << "simulated " << s.size() << " bins, total counts "
            << fmt(s.total_counts()) << "\n";
  std::cout << "wrote " << csv.string() << " and "
            << cslx::sidecar_path_for(csv).string() << "\n";
  return 0;
}

struct ClosureOpts {
  int trials = 200;
  std::string method = "poisson_mle";
  std::string cl_mode = "point_estimate";
  std::string trials_csv;

  CLI::Option* trials_opt = nullptr;
  CLI::Option* method_opt = nullptr;
  CLI::Option* cl_mode_opt = nullptr;
  CLI::Option* trials_csv_opt = nullptr;

  void merge_config(const json* sec) {
    fall_back(trials_opt, sec, "trials", trials);
    fall_back(method_opt, sec, "method", method);
    fall_back(cl_mode_opt, sec, "cl_mode", cl_mode);
    fall_back(trials_csv_opt, sec, "trials_csv", trials_csv);
  }

  void register_options(CLI::App* sub) {
    trials_opt = sub->add_option("--trials", trials, "number of pseudo-experiments")
                     ->check(CLI::PositiveNumber);
    method_opt = sub->add_option("--method", method, "fit estimator")
                     ->check(CLI::IsMember({"wls", "poisson_mle"}));
    cl_mode_opt = sub->add_option("--cl-mode", cl_mode, "limit mode per trial")
                      ->check(CLI::IsMember(
                          {"point_estimate", "plus_1sigma", "plus_1p645sigma"}));
    trials_csv_opt = sub->add_option("--trials-csv", trials_csv,
                                     "also dump per-trial results to this CSV");
  }
};

int cmd_closure(const GlobalOpts& g, const SimOpts& so, const ClosureOpts& o) {
  auto cfg = so.to_config(g);
  cfg.fit_method = cslx::fit_method_from_string(o.method);
  cfg.assumptions.cl_mode = cslx::cl_mode_from_string(o.cl_mode);
  std::vector<cslx::TrialRecord> records;
  const auto report = cslx::closure_study(
      cfg, o.trials, o.trials_csv.empty() ? nullptr : &records);

  auto echo = so.echo(cfg);
  echo["trials"] = o.trials;
  echo["method"] = o.method;
  echo["cl_mode"] = o.cl_mode;
  const auto manifest = cslx::make_manifest("closure", {}, g.manifest_config(echo));
  json j = cslx::to_json(report);
  j["config"] = echo;
  j["manifest"] = cslx::to_json(manifest);
  const auto path = g.out("closure.json");
  write_json_file(path, j);

  if (!o.trials_csv.empty()) {
    std::ostringstream csv;
    csv << "trial,alpha_hat,lambda_upper\n";
    for (const auto& r : records)
      csv << r.trial << ',' << fmt(r.alpha_hat) << ',' << fmt(r.lambda_upper) << "\n";
    write_text_file(g.out(o.trials_csv), csv.str());
    std::cout << "wrote " << g.out(o.trials_csv).string() << "\n";
  }

  std::cout << "closure: " << report.n_trials << " trials ("
            << report.n_degenerate << " degenerate), alpha_equivalent = "
            << fmt(report.alpha_equivalent) << "\n"
            << "  mean alpha = " << fmt(report.mean_alpha)
            << ", pull mean/sd = " << fmt(report.pull_mean) << "/"
            << fmt(report.pull_sd)
            << ", mean chi2/ndf = " << fmt(report.mean_chi2_per_ndf) << "\n";
  if (report.coverage_defined)
    std::cout << "  coverage(" << o.cl_mode << ") = " << fmt(report.coverage) << "\n";
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// compare

int cmd_compare(const GlobalOpts& g, const std::string& input) {
  if (!fs::exists(input)) throw cslx::ParseError("no such input: " + input);
  const auto limit = cslx::limit_result_from_json(load_json_file(input));
  const auto manifest =
      cslx::make_manifest("compare", {input}, g.manifest_config(json::object()));
  const auto path = g.out("compare.csv");
  write_text_file(path, comparisons_csv(limit, manifest));
  print_comparisons(std::cout, limit);
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// report: fit -> limit -> compare in one pass

int cmd_report(const GlobalOpts& g, const FitOpts& fo, const LimitOpts& lo) {
  const auto f = run_fit(fo);
  LimitOpts lo2 = lo;
  lo2.exposure = f.spectrum.exposure_kg_day();  // the spectrum sets the exposure
  const auto limit = run_limit(g, lo2, f.primary.alpha_hat, f.primary.alpha_err);

  const auto manifest = cslx::make_manifest(
      "report", {fo.input},
      g.manifest_config({{"window", fo.window.empty() ? "full" : fo.window},
                         {"method", fo.method},
                         {"exposure_kg_day", f.spectrum.exposure_kg_day()},
                         {"electrons", lo2.electrons},
                         {"mass_prop", lo2.mass_prop},
                         {"cl_mode", lo2.cl_mode}}));
  json jf = cslx::to_json(f.primary);
  jf["cross_check"] = f.cross ? cslx::to_json(*f.cross) : json(nullptr);
  json j = {{"input", fo.input},
            {"fit", jf},
            {"limit", cslx::to_json(limit)},
            {"manifest", cslx::to_json(manifest)}};
  const auto path = g.out("report.json");
  write_json_file(path, j);

  print_fit(std::cout, f);
  print_comparisons(std::cout, limit);
  std::cout << "wrote " << path.string() << "\n";
  if (g.plot) {
    cslx::PlotOptions po;
    po.title = fs::path(fo.input).filename().string();
    const auto svg = g.out("report.svg");
    write_text_file(svg, cslx::render_spectrum_svg(f.spectrum, &f.primary, po));
    std::cout << "wrote " << svg.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collapse-model X-ray spectrum analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cslx::kToolVersion);

  GlobalOpts g;
  g.mode_opt = app.add_option("--constants-mode", g.constants_mode_str,
                              "physical constants set")
                   ->check(CLI::IsMember({"exact", "paper-compat", "paper_compat"}));
  app.add_option("--config", g.config_path, "JSON config file (flags override it)");
  g.output_opt = app.add_option("--output", g.output_dir, "output directory");
  g.seed_opt = app.add_option("--seed", g.seed, "base RNG seed");
  g.plot_opt = app.add_flag("--plot", g.plot, "also write an SVG plot");

  FitOpts fit_opts;
  auto* fit_cmd = app.add_subcommand("fit", "fit the 1/E amplitude to a spectrum");
  fit_cmd->fallthrough();
  fit_opts.register_options(fit_cmd);

  LimitOpts limit_opts;
  auto* limit_cmd =
      app.add_subcommand("limit", "turn an amplitude into a collapse-rate bound");
  limit_cmd->fallthrough();
  limit_opts.register_options(limit_cmd, true);

  SimOpts sim_opts;
  auto* sim_cmd = app.add_subcommand("simulate", "generate a pseudo-spectrum");
  sim_cmd->fallthrough();
  sim_opts.register_options(sim_cmd);

  SimOpts closure_sim_opts;
  ClosureOpts closure_opts;
  auto* closure_cmd =
      app.add_subcommand("closure", "pseudo-experiment recovery study");
  closure_cmd->fallthrough();
  closure_sim_opts.register_options(closure_cmd);
  closure_opts.register_options(closure_cmd);

  std::string compare_input;
  auto* compare_cmd =
      app.add_subcommand("compare", "compare a limit report against references");
  compare_cmd->fallthrough();
  compare_cmd->add_option("limit_report", compare_input, "limit report JSON")
      ->required();

  FitOpts report_fit_opts;
  LimitOpts report_limit_opts;
  auto* report_cmd =
      app.add_subcommand("report", "fit, limit and compare in one pass");
  report_cmd->fallthrough();
  report_fit_opts.register_options(report_cmd);
  report_limit_opts.register_options(report_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    g.resolve();
    if (app.got_subcommand(fit_cmd)) {
      fit_opts.merge_config(cfg_section(g.cfg, "fit"));
      return cmd_fit(g, fit_opts);
    }
    if (app.got_subcommand(limit_cmd)) {
      limit_opts.merge_config(cfg_section(g.cfg, "limit"));
      return cmd_limit(g, limit_opts);
    }
    if (app.got_subcommand(sim_cmd)) {
      sim_opts.merge_config(cfg_section(g.cfg, "simulate"));
      return cmd_simulate(g, sim_opts);
    }
    if (app.got_subcommand(closure_cmd)) {
      closure_sim_opts.merge_config(cfg_section(g.cfg, "closure"));
      closure_opts.merge_config(cfg_section(g.cfg, "closure"));
      return cmd_closure(g, closure_sim_opts, closure_opts);
    }
    if (app.got_subcommand(compare_cmd)) {
      return cmd_compare(g, compare_input);
    }
    if (app.got_subcommand(report_cmd)) {
      report_fit_opts.merge_config(cfg_section(g.cfg, "report"));
      report_limit_opts.merge_config(cfg_section(g.cfg, "report"));
      return cmd_report(g, report_fit_opts, report_limit_opts);
    }
  } catch (const cslx::DegenerateFitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // unreachable with require_subcommand(1)
}
