#include "cslx/pseudo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cslx/emission.hpp"
#include "cslx/errors.hpp"
#include "cslx/random.hpp"

namespace cslx {

void SimulationConfig::validate() const {
  if (lambda_true < 0.0 || !std::isfinite(lambda_true))
    throw std::invalid_argument("SimulationConfig: lambda_true must be >= 0");
  if (background_rate < 0.0 || !std::isfinite(background_rate))
    throw std::invalid_argument("SimulationConfig: background_rate must be >= 0");
  if (!(exposure_kg_day > 0.0))
    throw std::invalid_argument("SimulationConfig: exposure must be > 0");
  if (bin_edges_kev.size() < 2)
    throw std::invalid_argument("SimulationConfig: need at least 2 bin edges");
  for (std::size_t i = 0; i < bin_edges_kev.size(); ++i) {
    if (!(bin_edges_kev[i] > 0.0))
      throw std::invalid_argument("SimulationConfig: bin edges must be positive");
    if (i > 0 && !(bin_edges_kev[i] > bin_edges_kev[i - 1]))
      throw std::invalid_argument("SimulationConfig: bin edges must be ascending");
  }
  constants.validate();
  material.validate();
  if (assumptions.n_quasi_free < 1)
    throw std::invalid_argument("SimulationConfig: n_quasi_free must be >= 1");
}

std::vector<double> uniform_edges(double e_lo_kev, double e_hi_kev, int n_bins) {
  if (!(e_lo_kev > 0.0) || !(e_lo_kev < e_hi_kev) || n_bins < 1)
    throw std::invalid_argument("uniform_edges: need 0 < e_lo < e_hi and n_bins >= 1");
  std::vector<double> edges(n_bins + 1);
  for (int i = 0; i <= n_bins; ++i)
    edges[i] = e_lo_kev + (e_hi_kev - e_lo_kev) * i / n_bins;
  return edges;
}

double sample_energy(double u, double e_lo_kev, double e_hi_kev) {
  if (!(e_lo_kev > 0.0) || !(e_lo_kev < e_hi_kev))
    throw std::domain_error("sample_energy: need 0 < e_lo < e_hi");
  if (u < 0.0 || u > 1.0)
    throw std::domain_error("sample_energy: u must be in [0, 1]");
  return e_lo_kev * std::pow(e_hi_kev / e_lo_kev, u);
}

double alpha_equivalent(const SimulationConfig& cfg) {
  cfg.validate();
  double k = per_electron_coefficient(cfg.constants);
  if (cfg.assumptions.mass_proportional) k *= mass_prop_factor(cfg.constants);
  const double c = factor_c(cfg.material, cfg.assumptions.n_quasi_free, cfg.constants);
  return k * cfg.lambda_true * c * cfg.exposure_kg_day;
}

std::vector<double> expected_bin_means(const SimulationConfig& cfg) {
  const double alpha = alpha_equivalent(cfg);
  const auto& e = cfg.bin_edges_kev;
  std::vector<double> mu(e.size() - 1);
  for (std::size_t i = 0; i + 1 < e.size(); ++i)
    mu[i] = alpha * std::log(e[i + 1] / e[i]) +
            cfg.background_rate * (e[i + 1] - e[i]) * cfg.exposure_kg_day;
  return mu;
}

BinnedSpectrum simulate_spectrum(const SimulationConfig& cfg, std::uint64_t trial) {
  const auto mu = expected_bin_means(cfg);
  RandomStream rng(cfg.seed, trial);
  const auto& e = cfg.bin_edges_kev;
  std::vector<double> lo(e.begin(), e.end() - 1);
  std::vector<double> hi(e.begin() + 1, e.end());
  std::vector<double> counts(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    counts[i] = static_cast<double>(rng.poisson(mu[i]));
  return BinnedSpectrum(std::move(lo), std::move(hi), std::move(counts),
                        cfg.exposure_kg_day, Normalization::counts_per_bin);
}

BinnedSpectrum simulate_spectrum_events(const SimulationConfig& cfg,
                                        std::uint64_t trial) {
  cfg.validate();
  const double alpha = alpha_equivalent(cfg);
  const auto& e = cfg.bin_edges_kev;
  const double e_lo = e.front(), e_hi = e.back();
  RandomStream rng(cfg.seed, trial);

  std::vector<double> counts(e.size() - 1, 0.0);
  auto bin_of = [&e](double energy) {
    const auto it = std::upper_bound(e.begin(), e.end(), energy);
    const std::ptrdiff_t idx = it - e.begin() - 1;
    return std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(e.size()) - 2);
  };

  const long long n_signal = rng.poisson(alpha * std::log(e_hi / e_lo));
  for (long long i = 0; i < n_signal; ++i)
    counts[bin_of(sample_energy(rng.uniform(), e_lo, e_hi))] += 1.0;

  const long long n_bkg =
      rng.poisson(cfg.background_rate * (e_hi - e_lo) * cfg.exposure_kg_day);
  for (long long i = 0; i < n_bkg; ++i)
    counts[bin_of(e_lo + (e_hi - e_lo) * rng.uniform())] += 1.0;

  std::vector<double> lo(e.begin(), e.end() - 1);
  std::vector<double> hi(e.begin() + 1, e.end());
  return BinnedSpectrum(std::move(lo), std::move(hi), std::move(counts),
                        cfg.exposure_kg_day, Normalization::counts_per_bin);
}

ClosureReport closure_study(const SimulationConfig& cfg, int n_trials,
                            std::vector<TrialRecord>* records) {
  if (n_trials < 1)
    throw std::invalid_argument("closure_study: n_trials must be >= 1");
  cfg.validate();

  LimitAssumptions assumptions = cfg.assumptions;
  assumptions.exposure_kg_day = cfg.exposure_kg_day;
  const double k = per_electron_coefficient(cfg.constants);
  const double alpha_true = alpha_equivalent(cfg);

  ClosureReport report;
  report.n_trials = n_trials;
  report.lambda_true = cfg.lambda_true;
  report.alpha_equivalent = alpha_true;
  report.fit_method = cfg.fit_method;
  report.seed = cfg.seed;
  report.rng_algorithm = RandomStream::kAlgorithmId;

  std::vector<double> alphas, lambdas;
  double sum_pull = 0.0, sum_pull2 = 0.0, sum_red_chi2 = 0.0;
  long long n_covered = 0;

  for (int t = 0; t < n_trials; ++t) {
    const BinnedSpectrum sp = simulate_spectrum(cfg, static_cast<std::uint64_t>(t));
    FitResult fit;
    try {
      fit = fit_alpha(sp, cfg.fit_method);
    } catch (const DegenerateFitError&) {
      ++report.n_degenerate;
      continue;
    }
    const LimitResult limit = alpha_to_lambda(fit.alpha_hat, fit.alpha_err,
                                              assumptions, k, cfg.material,
                                              cfg.constants);
    alphas.push_back(fit.alpha_hat);
    lambdas.push_back(limit.lambda_upper_per_s);
    const double pull = (fit.alpha_hat - alpha_true) / fit.alpha_err;
    sum_pull += pull;
    sum_pull2 += pull * pull;
    sum_red_chi2 += goodness(fit);
    if (limit.lambda_upper_per_s >= cfg.lambda_true) ++n_covered;
    if (records)
      records->push_back({static_cast<std::uint64_t>(t), fit.alpha_hat,
                          fit.alpha_err, limit.lambda_upper_per_s});
  }

  const std::size_t n = alphas.size();
  if (n > 0) {
    auto mean = [](const std::vector<double>& v) {
      double s = 0.0;
      for (const double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    auto median = [](std::vector<double> v) {
      const std::size_t mid = v.size() / 2;
      std::nth_element(v.begin(), v.begin() + mid, v.end());
      if (v.size() % 2 == 1) return v[mid];
      const double hi = v[mid];
      std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
      return 0.5 * (v[mid - 1] + hi);
    };
    report.mean_alpha = mean(alphas);
    report.median_alpha = median(alphas);
    report.mean_lambda = mean(lambdas);
    report.median_lambda = median(lambdas);
    report.pull_mean = sum_pull / static_cast<double>(n);
    report.pull_sd =
        n > 1 ? std::sqrt((sum_pull2 - sum_pull * sum_pull / static_cast<double>(n)) /
                          static_cast<double>(n - 1))
              : 0.0;
    report.mean_chi2_per_ndf = sum_red_chi2 / static_cast<double>(n);
    report.coverage = static_cast<double>(n_covered) / static_cast<double>(n);
    report.coverage_defined = true;
  }
  return report;
}

nlohmann::json to_json(const ClosureReport& r) {
  return nlohmann::json{{"n_trials", r.n_trials},
                        {"n_degenerate", r.n_degenerate},
                        {"lambda_true", r.lambda_true},
                        {"alpha_equivalent", r.alpha_equivalent},
                        {"mean_alpha", r.mean_alpha},
                        {"median_alpha", r.median_alpha},
                        {"mean_lambda", r.mean_lambda},
                        {"median_lambda", r.median_lambda},
                        {"pull_mean", r.pull_mean},
                        {"pull_sd", r.pull_sd},
                        {"mean_chi2_per_ndf", r.mean_chi2_per_ndf},
                        {"coverage", r.coverage},
                        {"coverage_defined", r.coverage_defined},
                        {"fit_method", to_string(r.fit_method)},
                        {"seed", r.seed},
                        {"rng_algorithm", r.rng_algorithm}};
}

}  // namespace cslx
