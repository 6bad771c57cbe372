#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "cslx/constants.hpp"
#include "cslx/fit.hpp"
#include "cslx/limit.hpp"
#include "cslx/material.hpp"
#include "cslx/spectrum.hpp"

namespace cslx {

/**
 * Configuration for pseudo-experiment generation. The signal shape is the
 * 1/E emission law; the optional background is flat in energy. Everything
 * downstream (fit method, limit assumptions) is carried here so a closure
 * study is a pure function of this struct.
 */
struct SimulationConfig {
  double lambda_true = 0.0;          // collapse rate driving the signal, 1/s
  double background_rate = 0.0;      // counts/(keV kg day)
  std::vector<double> bin_edges_kev; // contiguous binning, ascending
  double exposure_kg_day = 80.0;
  MaterialSpec material = germanium();
  LimitAssumptions assumptions{};    // exposure field is overridden by the one above
  PhysicalConstants constants{};
  FitMethod fit_method = FitMethod::poisson_mle;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

// Uniform binning helper: n bins over [e_lo, e_hi].
std::vector<double> uniform_edges(double e_lo_kev, double e_hi_kev, int n_bins);

/**
 * Inverse-CDF draw from the 1/E density on [e_lo, e_hi]:
 * E = e_lo * (e_hi/e_lo)^u. Throws std::domain_error unless
 * 0 < e_lo < e_hi and 0 <= u <= 1.
 */
double sample_energy(double u, double e_lo_kev, double e_hi_kev);

// Signal amplitude implied by the config: alpha = K_eff * lambda * c * exposure,
// the expected-counts coefficient of ln(e_hi/e_lo) per bin.
double alpha_equivalent(const SimulationConfig& cfg);

// Expected counts per bin, mu_i = alpha_eq * ln(hi/lo) + bkg * width * exposure.
std::vector<double> expected_bin_means(const SimulationConfig& cfg);

/**
 * Draws one pseudo-spectrum with per-bin Poisson counts. Deterministic in
 * (cfg.seed, trial): trial t uses the stream (seed, t), so concurrent or
 * out-of-order generation cannot change results.
 */
BinnedSpectrum simulate_spectrum(const SimulationConfig& cfg, std::uint64_t trial = 0);

// Event-by-event alternative: draws the total count, then individual photon
// energies via sample_energy (signal) and uniform draws (background), and
// bins them. Agrees in distribution with simulate_spectrum.
BinnedSpectrum simulate_spectrum_events(const SimulationConfig& cfg,
                                        std::uint64_t trial = 0);

struct TrialRecord {
  std::uint64_t trial;
  double alpha_hat;
  double alpha_err;
  double lambda_upper;
};

struct ClosureReport {
  int n_trials = 0;
  int n_degenerate = 0;  // trials whose fit failed; counted, not fatal
  double lambda_true = 0.0;
  double alpha_equivalent = 0.0;
  double mean_alpha = 0.0;
  double median_alpha = 0.0;
  double mean_lambda = 0.0;
  double median_lambda = 0.0;
  double pull_mean = 0.0;  // pulls (alpha_hat - alpha_true) / alpha_err
  double pull_sd = 0.0;
  double mean_chi2_per_ndf = 0.0;
  double coverage = 0.0;  // fraction of trials with lambda_upper >= lambda_true
  bool coverage_defined = false;
  FitMethod fit_method = FitMethod::poisson_mle;
  std::uint64_t seed = 0;
  std::string rng_algorithm;
};

/**
 * Runs simulate -> fit -> limit for n_trials pseudo-experiments and
 * aggregates recovery statistics. Degenerate fits are counted in the report
 * rather than thrown. Aggregation is order-independent; per-trial records
 * are appended to `records` when given.
 */
ClosureReport closure_study(const SimulationConfig& cfg, int n_trials,
                            std::vector<TrialRecord>* records = nullptr);

nlohmann::json to_json(const ClosureReport& r);

}  // namespace cslx
