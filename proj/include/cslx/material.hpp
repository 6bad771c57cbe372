#pragma once

#include <string>
#include <vector>

#include "cslx/constants.hpp"

namespace cslx {

struct Shell {
  std::string label;
  double binding_ev;  // electron binding energy, eV
  int occupancy;
};

// Target material: atom density plus the electron shell table used to decide
// which electrons count as quasi-free. Shells are listed in increasing
// depth, i.e. ascending binding energy.
struct MaterialSpec {
  std::string name;
  double atoms_per_kg = 0.0;
  std::vector<Shell> shells;

  void validate() const;  // throws std::invalid_argument
};

// Germanium. paper_compat uses the rounded atom density 8.9e24 /kg;
// exact computes it from Avogadro's number and the 72.63 g/mol molar mass.
MaterialSpec germanium(ConstantsMode mode = ConstantsMode::paper_compat);

}  // namespace cslx
