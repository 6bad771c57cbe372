#include "cslx/limit.hpp"

#include <cmath>
#include <stdexcept>

#include "cslx/emission.hpp"
#include "cslx/errors.hpp"

namespace cslx {

std::string to_string(ClMode m) {
  switch (m) {
    case ClMode::point_estimate: return "point_estimate";
    case ClMode::plus_1sigma: return "plus_1sigma";
    case ClMode::plus_1p645sigma: return "plus_1p645sigma";
  }
  throw std::logic_error("unreachable");
}

ClMode cl_mode_from_string(const std::string& s) {
  if (s == "point_estimate") return ClMode::point_estimate;
  if (s == "plus_1sigma") return ClMode::plus_1sigma;
  if (s == "plus_1p645sigma") return ClMode::plus_1p645sigma;
  throw std::invalid_argument("unknown cl mode '" + s + "'");
}

void LimitAssumptions::validate() const {
  if (n_quasi_free < 1)
    throw std::invalid_argument("LimitAssumptions: n_quasi_free must be >= 1");
  if (!(exposure_kg_day > 0.0) || !std::isfinite(exposure_kg_day))
    throw std::invalid_argument("LimitAssumptions: exposure must be > 0");
}

double factor_c(const MaterialSpec& material, int n_quasi_free,
                const PhysicalConstants& constants) {
  material.validate();
  constants.validate();
  if (n_quasi_free < 1)
    throw std::invalid_argument("factor_c: n_quasi_free must be >= 1");
  return material.atoms_per_kg * constants.seconds_per_day * n_quasi_free;
}

int quasi_free_count(const MaterialSpec& material, double e_min_kev,
                     double safety_factor) {
  material.validate();
  if (material.shells.empty())
    throw std::invalid_argument("quasi_free_count: empty shell table");
  if (!(e_min_kev > 0.0))
    throw std::invalid_argument("quasi_free_count: e_min must be > 0");
  if (!(safety_factor > 1.0))
    throw std::invalid_argument("quasi_free_count: safety_factor must be > 1");
  const double threshold_ev = e_min_kev * 1000.0;
  int count = 0;
  for (const auto& sh : material.shells)
    if (sh.binding_ev * safety_factor <= threshold_ev) count += sh.occupancy;
  return count;
}

LimitResult alpha_to_lambda(double alpha, double alpha_err,
                            const LimitAssumptions& assumptions,
                            double k_per_electron, const MaterialSpec& material,
                            const PhysicalConstants& constants) {
  assumptions.validate();
  if (!(alpha > 0.0)) throw std::domain_error("alpha_to_lambda: alpha must be > 0");
  if (alpha_err < 0.0)
    throw std::domain_error("alpha_to_lambda: alpha_err must be >= 0");
  if (!(k_per_electron > 0.0))
    throw std::domain_error("alpha_to_lambda: coefficient K must be > 0");

  double alpha_eff = alpha;
  switch (assumptions.cl_mode) {
    case ClMode::point_estimate: break;
    case ClMode::plus_1sigma: alpha_eff += alpha_err; break;
    case ClMode::plus_1p645sigma: alpha_eff += 1.645 * alpha_err; break;
  }

  const double c = factor_c(material, assumptions.n_quasi_free, constants);
  double k_eff = k_per_electron;
  if (assumptions.mass_proportional) k_eff *= mass_prop_factor(constants);

  LimitResult result;
  result.lambda_upper_per_s =
      alpha_eff / (k_eff * c * assumptions.exposure_kg_day);
  result.assumptions = assumptions;
  result.alpha_used = alpha_eff;
  result.c_used = c;
  return result;
}

std::vector<ReferenceBound> reference_bounds() {
  // Orders of magnitude above lambda_CSL, as printed in the summary table.
  auto entry = [](std::string name, int lo, int hi) {
    ReferenceBound b;
    b.name = std::move(name);
    b.magnitude_lo = lo;
    b.magnitude_hi = hi;
    b.value_per_s = kLambdaCsl * std::pow(10.0, lo);
    return b;
  };
  return {
      entry("Fullerene diffraction", 12, 13),
      entry("Decay of supercurrents (SQUIDs)", 15, 15),
      entry("Spontaneous X-ray emission from Ge", 5, 5),
      entry("Proton decay", 19, 19),
      entry("Dissociation of cosmic hydrogen", 18, 18),
      entry("Heating of intergalactic medium (IGM)", 9, 9),
      entry("Heating of protons in the universe", 13, 13),
      entry("Heating of interstellar dust grains", 16, 16),
  };
}

namespace {

Comparison compare_one(const std::string& name, const std::string& magnitude,
                       double reference, double limit) {
  Comparison c;
  c.name = name;
  c.magnitude = magnitude;
  c.reference_value_per_s = reference;
  c.boundary = limit == reference;
  c.excluded = limit < reference;
  c.log10_distance = c.boundary ? 0.0 : std::log10(limit / reference);
  return c;
}

}  // namespace

std::vector<Comparison> compare_models(const LimitResult& limit) {
  const double lam = limit.lambda_upper_per_s;
  if (!(lam > 0.0)) throw std::domain_error("compare_models: limit must be > 0");
  std::vector<Comparison> out;
  out.push_back(compare_one("lambda_QMSL", "", kLambdaQmsl, lam));
  out.push_back(compare_one("lambda_CSL", "", kLambdaCsl, lam));
  for (const auto& b : reference_bounds()) {
    std::string mag = std::to_string(b.magnitude_lo);
    if (b.magnitude_hi != b.magnitude_lo)
      mag += "-" + std::to_string(b.magnitude_hi);
    out.push_back(compare_one(b.name, mag, b.value_per_s, lam));
  }
  return out;
}

FuReference fu_reference() {
  return {0.55e-16, "Fu-1997-Ge-11keV",
          "historical bound from the 11 keV germanium emission datum"};
}

nlohmann::json to_json(const std::vector<Comparison>& comparisons) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : comparisons) {
    arr.push_back(nlohmann::json{
        {"name", c.name},
        {"reference_value_or_magnitude",
         c.magnitude.empty() ? nlohmann::json(c.reference_value_per_s)
                             : nlohmann::json(c.magnitude)},
        {"reference_value_per_s", c.reference_value_per_s},
        {"excluded", c.excluded},
        {"boundary", c.boundary},
        {"log10_distance", c.log10_distance}});
  }
  return arr;
}

nlohmann::json to_json(const LimitResult& limit) {
  return nlohmann::json{
      {"lambda_upper_per_s", limit.lambda_upper_per_s},
      {"n_quasi_free", limit.assumptions.n_quasi_free},
      {"mass_proportional", limit.assumptions.mass_proportional},
      {"cl_mode", to_string(limit.assumptions.cl_mode)},
      {"constants_mode", to_string(limit.assumptions.constants_mode)},
      {"exposure_kg_day", limit.assumptions.exposure_kg_day},
      {"alpha_used", limit.alpha_used},
      {"c_used", limit.c_used},
      {"comparisons", to_json(compare_models(limit))}};
}

LimitResult limit_result_from_json(const nlohmann::json& j) {
  LimitResult r;
  try {
    r.lambda_upper_per_s = j.at("lambda_upper_per_s").get<double>();
    r.assumptions.n_quasi_free = j.at("n_quasi_free").get<int>();
    r.assumptions.mass_proportional = j.at("mass_proportional").get<bool>();
    r.assumptions.cl_mode = cl_mode_from_string(j.at("cl_mode").get<std::string>());
    r.assumptions.constants_mode =
        constants_mode_from_string(j.at("constants_mode").get<std::string>());
    r.assumptions.exposure_kg_day = j.at("exposure_kg_day").get<double>();
    r.alpha_used = j.at("alpha_used").get<double>();
    r.c_used = j.at("c_used").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed limit result: ") + e.what());
  }
  return r;
}

}  // namespace cslx
