#pragma once

#include "cslx/constants.hpp"

namespace cslx {

// Parameters of the collapse-induced emission model for one electron.
struct EmissionModelParams {
  double lambda_per_s = 0.0;   // collapse rate
  bool mass_proportional = false;
  PhysicalConstants constants{};

  void validate() const;  // throws std::invalid_argument
};

/**
 * Per-electron coefficient K of the emission law dGamma/dE = K * lambda / E,
 * for E in keV and lambda in 1/s. Dimensionless in natural units:
 * K = alpha_em / (pi * a_nat^2 * m_e^2) with a_nat = a / (hbar c).
 */
double per_electron_coefficient(const PhysicalConstants& constants);

// (m_e / m_N)^2, the rate suppression when the noise couples to mass density.
double mass_prop_factor(const PhysicalConstants& constants);

/**
 * Differential emission rate dGamma/dE in 1/(s*keV) per electron at photon
 * energy `e_kev`. Throws std::domain_error for e_kev <= 0.
 */
double rate_density(double e_kev, const EmissionModelParams& params);

}  // namespace cslx
