#include "cslx/constants.hpp"

#include <cmath>
#include <stdexcept>

#include "cslx/errors.hpp"

namespace cslx {

std::string to_string(ConstantsMode mode) {
  return mode == ConstantsMode::exact ? "exact" : "paper_compat";
}

ConstantsMode constants_mode_from_string(const std::string& s) {
  if (s == "exact") return ConstantsMode::exact;
  if (s == "paper_compat" || s == "paper-compat") return ConstantsMode::paper_compat;
  throw std::invalid_argument("unknown constants mode '" + s +
                              "' (expected exact or paper-compat)");
}

void PhysicalConstants::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string("PhysicalConstants: ") + name +
                                  " must be strictly positive");
  };
  positive(m_e_kev, "m_e_kev");
  positive(m_n_kev, "m_n_kev");
  positive(alpha_em, "alpha_em");
  positive(hbar_c_m_kev, "hbar_c_m_kev");
  positive(a_m, "a_m");
  positive(seconds_per_day, "seconds_per_day");
  if (!(m_e_kev < m_n_kev))
    throw std::invalid_argument("PhysicalConstants: m_e_kev must be below m_n_kev");
  if (!(alpha_em < 1.0))
    throw std::invalid_argument("PhysicalConstants: alpha_em must be below 1");
}

PhysicalConstants PhysicalConstants::with_mode(ConstantsMode mode) {
  PhysicalConstants c;
  c.seconds_per_day = mode == ConstantsMode::paper_compat ? 8.6e4 : 86400.0;
  return c;
}

PhysicalConstants PhysicalConstants::from_json(const nlohmann::json& j) {
  return from_json(j, PhysicalConstants{});
}

PhysicalConstants PhysicalConstants::from_json(const nlohmann::json& j,
                                               PhysicalConstants base) {
  if (!j.is_object()) throw ParseError("constants block must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number())
      throw ParseError("constants key '" + key + "' must be a number");
    const double v = value.get<double>();
    if (key == "m_e_kev")
      base.m_e_kev = v;
    else if (key == "m_n_kev")
      base.m_n_kev = v;
    else if (key == "alpha_em")
      base.alpha_em = v;
    else if (key == "a_m")
      base.a_m = v;
    else if (key == "seconds_per_day")
      base.seconds_per_day = v;
    else
      throw ParseError("unknown constants key '" + key + "'");
  }
  base.validate();
  return base;
}

nlohmann::json PhysicalConstants::to_json() const {
  return nlohmann::json{{"m_e_kev", m_e_kev},
                        {"m_n_kev", m_n_kev},
                        {"alpha_em", alpha_em},
                        {"hbar_c_m_kev", hbar_c_m_kev},
                        {"a_m", a_m},
                        {"seconds_per_day", seconds_per_day}};
}

}  // namespace cslx
