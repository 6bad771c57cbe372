#include "cslx/material.hpp"

#include <cmath>
#include <stdexcept>

namespace cslx {

void MaterialSpec::validate() const {
  if (!(atoms_per_kg > 0.0) || !std::isfinite(atoms_per_kg))
    throw std::invalid_argument("MaterialSpec: atoms_per_kg must be > 0");
  double prev = 0.0;
  for (const auto& sh : shells) {
    if (sh.occupancy <= 0)
      throw std::invalid_argument("MaterialSpec: shell occupancy must be positive");
    if (!(sh.binding_ev > 0.0))
      throw std::invalid_argument("MaterialSpec: binding energy must be positive");
    if (!(sh.binding_ev > prev))
      throw std::invalid_argument(
          "MaterialSpec: shells must be listed in increasing depth");
    prev = sh.binding_ev;
  }
}

MaterialSpec germanium(ConstantsMode mode) {
  constexpr double kAvogadro = 6.02214076e23;  // 1/mol
  constexpr double kMolarMassKg = 72.63e-3;    // kg/mol
  MaterialSpec ge;
  ge.name = "Ge";
  ge.atoms_per_kg =
      mode == ConstantsMode::paper_compat ? 8.9e24 : kAvogadro / kMolarMassKg;
  // Subshell binding energies in eV, outermost first. The 22 electrons down
  // to 3s (BE 180.1 eV) are the quasi-free set for a 4.5 keV threshold.
  ge.shells = {
      {"4p", 7.9, 2},     {"4s", 14.3, 2},     {"3d5/2", 29.2, 6},
      {"3d3/2", 29.8, 4}, {"3p3/2", 120.8, 4}, {"3p1/2", 124.9, 2},
      {"3s", 180.1, 2},   {"2p3/2", 1217.0, 4}, {"2p1/2", 1248.1, 2},
      {"2s", 1414.6, 2},  {"1s", 11103.1, 2},
  };
  return ge;
}

}  // namespace cslx
