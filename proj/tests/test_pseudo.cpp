#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cslx/emission.hpp"
#include "cslx/limit.hpp"
#include "cslx/pseudo.hpp"
#include "cslx/random.hpp"

using namespace cslx;

namespace {

// lambda_true that makes alpha_equivalent exactly 110 under paper-compat
// defaults (frozen from the inverted limit chain)
constexpr double kLambdaAlpha110 = 1.2966427418497633e-17;

SimulationConfig paper_like_config(int n_bins = 44) {
  SimulationConfig cfg;
  cfg.lambda_true = kLambdaAlpha110;
  cfg.bin_edges_kev = uniform_edges(4.5, 48.5, n_bins);
  cfg.exposure_kg_day = 80.0;
  cfg.material = germanium(ConstantsMode::paper_compat);
  cfg.constants = PhysicalConstants::with_mode(ConstantsMode::paper_compat);
  cfg.assumptions.constants_mode = ConstantsMode::paper_compat;
  cfg.seed = 20240817;
  return cfg;
}

}  // namespace

TEST_SUITE("pseudo") {

TEST_CASE("inverse-CDF energy sampling") {
  CHECK(sample_energy(0.0, 4.5, 48.5) == 4.5);
  CHECK(sample_energy(1.0, 4.5, 48.5) == doctest::Approx(48.5).epsilon(1e-12));
  CHECK(sample_energy(0.5, 4.5, 48.5) ==
        doctest::Approx(14.773286702694158).epsilon(1e-12));
  CHECK_THROWS_AS(sample_energy(-0.1, 4.5, 48.5), std::domain_error);
  CHECK_THROWS_AS(sample_energy(1.1, 4.5, 48.5), std::domain_error);
  CHECK_THROWS_AS(sample_energy(0.5, 0.0, 48.5), std::domain_error);
  CHECK_THROWS_AS(sample_energy(0.5, 5.0, 5.0), std::domain_error);
}

TEST_CASE("sampled energies follow the 1/E law (KS)") {
  const int n = 100000;
  RandomStream rng(99);
  std::vector<double> e(n);
  for (int i = 0; i < n; ++i) e[i] = sample_energy(rng.uniform(), 4.5, 48.5);
  std::sort(e.begin(), e.end());
  const double norm = std::log(48.5 / 4.5);
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = std::log(e[i] / 4.5) / norm;
    ks = std::max(ks, std::fabs(f - (i + 1) / double(n)));
    ks = std::max(ks, std::fabs(f - i / double(n)));
  }
  CHECK(ks < 1.63 / std::sqrt(double(n)));
}

TEST_CASE("uniform binning helper") {
  const auto edges = uniform_edges(4.5, 48.5, 44);
  REQUIRE(edges.size() == 45);
  CHECK(edges.front() == 4.5);
  CHECK(edges.back() == doctest::Approx(48.5).epsilon(1e-12));
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    CHECK(edges[i + 1] - edges[i] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(uniform_edges(4.5, 48.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(uniform_edges(5.0, 4.0, 10), std::invalid_argument);
}

TEST_CASE("implied amplitude and expected means") {
  auto cfg = paper_like_config();
  CHECK(alpha_equivalent(cfg) == doctest::Approx(110.0).epsilon(1e-9));

  SUBCASE("linear in lambda") {
    auto cfg2 = cfg;
    cfg2.lambda_true *= 3.0;
    CHECK(alpha_equivalent(cfg2) ==
          doctest::Approx(3.0 * alpha_equivalent(cfg)).epsilon(1e-12));
  }

  SUBCASE("total expected counts is the log integral") {
    const auto means = expected_bin_means(cfg);
    REQUIRE(means.size() == 44);
    double total = 0.0;
    for (double m : means) total += m;
    CHECK(total == doctest::Approx(110.0 * std::log(48.5 / 4.5)).epsilon(1e-9));
    CHECK(total == doctest::Approx(261.5).epsilon(2e-3));
  }

  SUBCASE("flat background adds width*exposure per bin") {
    auto cfg2 = cfg;
    cfg2.background_rate = 0.5;  // counts/(keV kg day)
    const auto base = expected_bin_means(cfg);
    const auto with_bkg = expected_bin_means(cfg2);
    for (std::size_t i = 0; i < base.size(); ++i)
      CHECK(with_bkg[i] - base[i] == doctest::Approx(0.5 * 1.0 * 80.0).epsilon(1e-9));
  }

  SUBCASE("monotone in lambda") {
    auto cfg2 = cfg;
    cfg2.lambda_true *= 1.5;
    const auto lo = expected_bin_means(cfg);
    const auto hi = expected_bin_means(cfg2);
    for (std::size_t i = 0; i < lo.size(); ++i) CHECK(hi[i] > lo[i]);
  }
}

TEST_CASE("simulated spectra") {
  SUBCASE("null config gives an empty spectrum") {
    auto cfg = paper_like_config();
    cfg.lambda_true = 0.0;
    const auto s = simulate_spectrum(cfg);
    CHECK(s.total_counts() == 0.0);
    CHECK(s.size() == 44);
    CHECK(s.exposure_kg_day() == 80.0);
    CHECK(s.normalization() == Normalization::counts_per_bin);
  }

  SUBCASE("same seed and trial are bit-identical") {
    const auto cfg = paper_like_config();
    const auto s1 = simulate_spectrum(cfg, 3);
    const auto s2 = simulate_spectrum(cfg, 3);
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s1.value(i) == s2.value(i));

    const auto s3 = simulate_spectrum(cfg, 4);
    bool differ = false;
    for (std::size_t i = 0; i < s1.size(); ++i)
      differ = differ || s1.value(i) != s3.value(i);
    CHECK(differ);
  }

  SUBCASE("per-bin sample means match the expectation") {
    auto cfg = paper_like_config(12);
    cfg.background_rate = 0.05;
    const auto mu = expected_bin_means(cfg);
    const int n_trials = 10000;
    std::vector<double> acc(mu.size(), 0.0);
    for (int t = 0; t < n_trials; ++t) {
      const auto s = simulate_spectrum(cfg, static_cast<std::uint64_t>(t));
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += s.counts(i);
    }
    for (std::size_t i = 0; i < acc.size(); ++i) {
      const double mean = acc[i] / n_trials;
      const double se = std::sqrt(mu[i] / n_trials);
      CHECK(std::fabs(mean - mu[i]) <= 3.0 * se);
    }
  }
}

TEST_CASE("event-by-event generator") {
  auto cfg = paper_like_config(8);
  cfg.lambda_true *= 20.0;  // bulk statistics for the comparison
  cfg.background_rate = 0.1;

  SUBCASE("deterministic") {
    const auto s1 = simulate_spectrum_events(cfg, 5);
    const auto s2 = simulate_spectrum_events(cfg, 5);
    for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s1.value(i) == s2.value(i));
  }

  SUBCASE("agrees in distribution with the binned generator") {
    const auto mu = expected_bin_means(cfg);
    const int n_trials = 2000;
    std::vector<double> acc_binned(mu.size(), 0.0), acc_event(mu.size(), 0.0);
    for (int t = 0; t < n_trials; ++t) {
      const auto sb = simulate_spectrum(cfg, static_cast<std::uint64_t>(t));
      const auto se = simulate_spectrum_events(cfg, static_cast<std::uint64_t>(t + n_trials));
      for (std::size_t i = 0; i < mu.size(); ++i) {
        acc_binned[i] += sb.counts(i);
        acc_event[i] += se.counts(i);
      }
    }
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double mb = acc_binned[i] / n_trials;
      const double me = acc_event[i] / n_trials;
      const double se_comb = std::sqrt(2.0 * mu[i] / n_trials);
      CHECK(std::fabs(mb - me) <= 4.0 * se_comb);
      CHECK(std::fabs(me - mu[i]) <= 4.0 * std::sqrt(mu[i] / n_trials));
    }
  }
}

TEST_CASE("config validation") {
  auto cfg = paper_like_config();
  cfg.lambda_true = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = paper_like_config();
  cfg.background_rate = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = paper_like_config();
  cfg.bin_edges_kev = {5.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = paper_like_config();
  cfg.bin_edges_kev = {5.0, 4.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = paper_like_config();
  cfg.exposure_kg_day = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("closure study") {
  SUBCASE("all-empty trials are counted as degenerate") {
    auto cfg = paper_like_config();
    cfg.lambda_true = 0.0;
    const auto r = closure_study(cfg, 1);
    CHECK(r.n_trials == 1);
    CHECK(r.n_degenerate == 1);
    CHECK_FALSE(r.coverage_defined);
  }

  SUBCASE("recovers the generated amplitude") {
    const auto cfg = paper_like_config();
    std::vector<TrialRecord> records;
    const auto r = closure_study(cfg, 200, &records);
    CHECK(r.n_trials == 200);
    CHECK(r.n_degenerate == 0);
    CHECK(r.alpha_equivalent == doctest::Approx(110.0).epsilon(1e-9));
    CHECK(r.lambda_true == kLambdaAlpha110);

    CHECK(std::fabs(r.mean_alpha / 110.0 - 1.0) <= 0.01);
    CHECK(std::fabs(r.median_alpha / 110.0 - 1.0) <= 0.05);
    CHECK(std::fabs(r.pull_mean) <= 0.2);
    CHECK(r.pull_sd >= 0.8);
    CHECK(r.pull_sd <= 1.2);
    CHECK(r.mean_chi2_per_ndf >= 0.8);
    CHECK(r.mean_chi2_per_ndf <= 1.2);
    CHECK(r.coverage_defined);
    // a point-estimate limit covers lambda_true about half the time
    CHECK(r.coverage >= 0.3);
    CHECK(r.coverage <= 0.7);
    CHECK(r.fit_method == FitMethod::poisson_mle);
    CHECK(r.rng_algorithm == RandomStream::kAlgorithmId);

    REQUIRE(static_cast<int>(records.size()) == 200);
    // with point_estimate the recorded limit is proportional to alpha_hat
    const double ratio = kLambdaAlpha110 / 110.0;
    for (const auto& rec : records) {
      CHECK(rec.lambda_upper ==
            doctest::Approx(rec.alpha_hat * ratio).epsilon(1e-9));
      CHECK(rec.alpha_err > 0.0);
    }
    // mean of recorded lambda matches the aggregate
    double lam_sum = 0.0;
    for (const auto& rec : records) lam_sum += rec.lambda_upper;
    CHECK(lam_sum / records.size() ==
          doctest::Approx(r.mean_lambda).epsilon(1e-12));
  }

  SUBCASE("one-sided 95% mode reaches its nominal coverage") {
    auto cfg = paper_like_config();
    cfg.assumptions.cl_mode = ClMode::plus_1p645sigma;
    const auto r = closure_study(cfg, 200);
    REQUIRE(r.coverage_defined);
    CHECK(r.coverage >= 0.90);
  }

  SUBCASE("reports are deterministic") {
    const auto cfg = paper_like_config();
    const auto r1 = closure_study(cfg, 50);
    const auto r2 = closure_study(cfg, 50);
    CHECK(to_json(r1).dump() == to_json(r2).dump());
  }

  SUBCASE("report serialization carries every field") {
    const auto cfg = paper_like_config();
    const auto j = to_json(closure_study(cfg, 20));
    for (const char* key :
         {"n_trials", "n_degenerate", "lambda_true", "alpha_equivalent",
          "mean_alpha", "median_alpha", "mean_lambda", "median_lambda",
          "pull_mean", "pull_sd", "mean_chi2_per_ndf", "coverage",
          "coverage_defined", "fit_method", "seed", "rng_algorithm"}) {
      CHECK_MESSAGE(j.contains(key), key);
    }
    CHECK(j.at("fit_method").get<std::string>() == "poisson_mle");
  }
}

}  // TEST_SUITE
