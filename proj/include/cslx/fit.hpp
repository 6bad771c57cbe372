#pragma once

#include <string>

#include <json.hpp>

#include "cslx/spectrum.hpp"

namespace cslx {

enum class FitMethod { wls, poisson_mle };

std::string to_string(FitMethod m);
FitMethod fit_method_from_string(const std::string& s);

/**
 * Result of fitting the amplitude of the 1/E model to a binned spectrum.
 * The model for the expected counts in bin i is alpha * ln(e_high/e_low),
 * so alpha_hat is in counts for the spectrum's full exposure. For the
 * Poisson method chi2 is the likelihood-ratio statistic
 * -2 ln(L(alpha_hat)/L_saturated).
 */
struct FitResult {
  double alpha_hat = 0.0;
  double alpha_err = 0.0;
  double chi2 = 0.0;
  int ndf = 0;
  FitMethod method = FitMethod::wls;
  double window_lo_kev = 0.0;
  double window_hi_kev = 0.0;
};

// Expected counts alpha * ln(e_hi/e_lo): the exact integral of alpha/E over
// the bin, never a bin-center approximation. Throws std::domain_error
// unless 0 < e_lo < e_hi.
double expected_counts(double alpha, double e_lo_kev, double e_hi_kev);

/**
 * Weighted least squares with Neyman weights 1/sigma_i^2,
 * sigma_i = max(sqrt(counts_i), 1):
 *
 *   alpha_hat = sum(w x y) / sum(w x^2),  x_i = ln(e_hi/e_lo), y_i = counts_i
 *   alpha_err = 1 / sqrt(sum(w x^2))
 *   chi2      = sum(w (y - alpha_hat x)^2),  ndf = bins - 1
 *
 * Needs at least two bins and a nonzero total; otherwise DegenerateFitError.
 */
FitResult fit_alpha_wls(const BinnedSpectrum& s);

/**
 * Poisson maximum likelihood with per-bin means alpha * x_i. For the pure
 * 1/E model the maximizer is closed-form:
 *
 *   alpha_hat = N_total / sum(x_i)   (= N / ln(Emax/Emin) for contiguous bins)
 *   alpha_err = alpha_hat / sqrt(N_total)
 *
 * chi2 is the likelihood-ratio statistic against the saturated model; ndf is
 * bins - 1, floored at 1 so the single-bin case stays representable.
 * Throws DegenerateFitError when the spectrum has no counts.
 */
FitResult fit_alpha_poisson(const BinnedSpectrum& s);

FitResult fit_alpha(const BinnedSpectrum& s, FitMethod method);

// Reduced chi-square chi2/ndf.
double goodness(const FitResult& f);

nlohmann::json to_json(const FitResult& f);
FitResult fit_result_from_json(const nlohmann::json& j);

}  // namespace cslx
