#include "cslx/fit.hpp"

#include <cmath>
#include <stdexcept>

#include "cslx/errors.hpp"

namespace cslx {

namespace {

struct BinData {
  std::vector<double> x;  // ln(e_hi/e_lo) per bin
  std::vector<double> y;  // raw counts per bin
  double total = 0.0;
};

BinData extract(const BinnedSpectrum& s) {
  BinData d;
  d.x.reserve(s.size());
  d.y.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    d.x.push_back(std::log(s.e_high(i) / s.e_low(i)));
    d.y.push_back(s.counts(i));
    d.total += d.y.back();
    if (!(s.e_low(i) > 0.0))
      throw std::domain_error("fit: bin edges must be positive for the 1/E model");
  }
  return d;
}

}  // namespace

std::string to_string(FitMethod m) {
  return m == FitMethod::wls ? "wls" : "poisson_mle";
}

FitMethod fit_method_from_string(const std::string& s) {
  if (s == "wls") return FitMethod::wls;
  if (s == "poisson_mle" || s == "poisson") return FitMethod::poisson_mle;
  throw std::invalid_argument("unknown fit method '" + s +
                              "' (expected wls or poisson_mle)");
}

double expected_counts(double alpha, double e_lo_kev, double e_hi_kev) {
  if (!(e_lo_kev > 0.0) || !(e_lo_kev < e_hi_kev))
    throw std::domain_error("expected_counts: need 0 < e_lo < e_hi");
  return alpha * std::log(e_hi_kev / e_lo_kev);
}

FitResult fit_alpha_wls(const BinnedSpectrum& s) {
  if (s.size() < 2)
    throw DegenerateFitError("wls fit needs at least 2 bins (ndf would be 0)");
  const BinData d = extract(s);
  if (d.total <= 0.0) throw DegenerateFitError("wls fit: all counts are zero");

  double sum_wxy = 0.0, sum_wxx = 0.0;
  std::vector<double> w(d.x.size());
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    const double sigma = std::max(std::sqrt(d.y[i]), 1.0);
    w[i] = 1.0 / (sigma * sigma);
    sum_wxy += w[i] * d.x[i] * d.y[i];
    sum_wxx += w[i] * d.x[i] * d.x[i];
  }
  FitResult f;
  f.alpha_hat = sum_wxy / sum_wxx;
  f.alpha_err = 1.0 / std::sqrt(sum_wxx);
  f.chi2 = 0.0;
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    const double r = d.y[i] - f.alpha_hat * d.x[i];
    f.chi2 += w[i] * r * r;
  }
  f.ndf = static_cast<int>(s.size()) - 1;
  f.method = FitMethod::wls;
  f.window_lo_kev = s.e_min();
  f.window_hi_kev = s.e_max();
  return f;
}

FitResult fit_alpha_poisson(const BinnedSpectrum& s) {
  const BinData d = extract(s);
  if (d.total <= 0.0) throw DegenerateFitError("poisson fit: zero total counts");

  double sum_x = 0.0;
  for (const double x : d.x) sum_x += x;

  FitResult f;
  f.alpha_hat = d.total / sum_x;
  f.alpha_err = f.alpha_hat / std::sqrt(d.total);
  // Likelihood-ratio statistic against the saturated model; bins with
  // y = 0 contribute 2*mu.
  double g = 0.0;
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    const double mu = f.alpha_hat * d.x[i];
    g += mu - d.y[i];
    if (d.y[i] > 0.0) g += d.y[i] * std::log(d.y[i] / mu);
  }
  f.chi2 = 2.0 * g;
  f.ndf = std::max(static_cast<int>(s.size()) - 1, 1);
  f.method = FitMethod::poisson_mle;
  f.window_lo_kev = s.e_min();
  f.window_hi_kev = s.e_max();
  return f;
}

FitResult fit_alpha(const BinnedSpectrum& s, FitMethod method) {
  return method == FitMethod::wls ? fit_alpha_wls(s) : fit_alpha_poisson(s);
}

double goodness(const FitResult& f) {
  if (f.ndf < 1) throw std::domain_error("goodness: ndf must be >= 1");
  return f.chi2 / f.ndf;
}

nlohmann::json to_json(const FitResult& f) {
  return nlohmann::json{{"alpha_hat", f.alpha_hat},
                        {"alpha_err", f.alpha_err},
                        {"chi2", f.chi2},
                        {"ndf", f.ndf},
                        {"chi2_per_ndf", goodness(f)},
                        {"method", to_string(f.method)},
                        {"window_kev", {f.window_lo_kev, f.window_hi_kev}}};
}

FitResult fit_result_from_json(const nlohmann::json& j) {
  FitResult f;
  try {
    f.alpha_hat = j.at("alpha_hat").get<double>();
    f.alpha_err = j.at("alpha_err").get<double>();
    f.chi2 = j.at("chi2").get<double>();
    f.ndf = j.at("ndf").get<int>();
    f.method = fit_method_from_string(j.at("method").get<std::string>());
    f.window_lo_kev = j.at("window_kev").at(0).get<double>();
    f.window_hi_kev = j.at("window_kev").at(1).get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed fit result: ") + e.what());
  }
  return f;
}

}  // namespace cslx
