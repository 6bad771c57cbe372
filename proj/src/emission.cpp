#include "cslx/emission.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cslx {

void EmissionModelParams::validate() const {
  constants.validate();
  if (lambda_per_s < 0.0 || !std::isfinite(lambda_per_s))
    throw std::invalid_argument("EmissionModelParams: lambda must be >= 0");
}

double per_electron_coefficient(const PhysicalConstants& constants) {
  constants.validate();
  const double a_nat = constants.correlation_length_inv_kev();
  return constants.alpha_em /
         (std::numbers::pi * a_nat * a_nat * constants.m_e_kev * constants.m_e_kev);
}

double mass_prop_factor(const PhysicalConstants& constants) {
  constants.validate();
  const double ratio = constants.m_e_kev / constants.m_n_kev;
  return ratio * ratio;
}

double rate_density(double e_kev, const EmissionModelParams& params) {
  params.validate();
  if (!(e_kev > 0.0))
    throw std::domain_error("rate_density: photon energy must be > 0 keV");
  double k = per_electron_coefficient(params.constants);
  if (params.mass_proportional) k *= mass_prop_factor(params.constants);
  return k * params.lambda_per_s / e_kev;
}

}  // namespace cslx
