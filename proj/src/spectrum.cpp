#include "cslx/spectrum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cslx/errors.hpp"

namespace cslx {

namespace {

constexpr const char* kCsvHeader = "e_low_kev,e_high_kev,counts";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, long line) {
  const std::string t = trim(field);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw ParseError("non-numeric field '" + t + "'", line);
  return v;
}

// Shortest representation that round-trips the double exactly.
std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::counts_per_bin: return "counts_per_bin";
    case Normalization::counts_per_kev: return "counts_per_kev";
    case Normalization::counts_per_kev_kg_day: return "counts_per_kev_kg_day";
  }
  throw std::logic_error("unreachable");
}

Normalization normalization_from_string(const std::string& s) {
  if (s == "counts_per_bin") return Normalization::counts_per_bin;
  if (s == "counts_per_kev") return Normalization::counts_per_kev;
  if (s == "counts_per_kev_kg_day") return Normalization::counts_per_kev_kg_day;
  throw std::invalid_argument("unknown normalization '" + s + "'");
}

BinnedSpectrum::BinnedSpectrum(std::vector<double> e_low, std::vector<double> e_high,
                               std::vector<double> values, double exposure_kg_day,
                               Normalization normalization)
    : e_low_(std::move(e_low)),
      e_high_(std::move(e_high)),
      values_(std::move(values)),
      exposure_(exposure_kg_day),
      normalization_(normalization) {
  if (e_low_.empty()) throw std::invalid_argument("BinnedSpectrum: no bins");
  if (e_low_.size() != e_high_.size() || e_low_.size() != values_.size())
    throw std::invalid_argument("BinnedSpectrum: edge/value length mismatch");
  if (!(exposure_ > 0.0) || !std::isfinite(exposure_))
    throw std::invalid_argument("BinnedSpectrum: exposure must be > 0");
  for (std::size_t i = 0; i < e_low_.size(); ++i) {
    if (!std::isfinite(e_low_[i]) || !std::isfinite(e_high_[i]) ||
        !std::isfinite(values_[i]))
      throw std::invalid_argument("BinnedSpectrum: non-finite entry");
    if (!(e_low_[i] < e_high_[i]))
      throw std::invalid_argument("BinnedSpectrum: bin edges not strictly increasing");
    if (values_[i] < 0.0)
      throw std::invalid_argument("BinnedSpectrum: negative counts");
    if (i > 0 && !(e_low_[i] >= e_high_[i - 1]))
      throw std::invalid_argument("BinnedSpectrum: overlapping bins");
  }
}

double BinnedSpectrum::counts(std::size_t i) const {
  switch (normalization_) {
    case Normalization::counts_per_bin: return values_[i];
    case Normalization::counts_per_kev: return values_[i] * width(i);
    case Normalization::counts_per_kev_kg_day:
      return values_[i] * width(i) * exposure_;
  }
  throw std::logic_error("unreachable");
}

double BinnedSpectrum::total_counts() const {
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) total += counts(i);
  return total;
}

bool BinnedSpectrum::contiguous() const {
  for (std::size_t i = 1; i < size(); ++i)
    if (e_low_[i] != e_high_[i - 1]) return false;
  return true;
}

BinnedSpectrum load_spectrum(std::istream& in, Normalization normalization,
                             double exposure_kg_day) {
  std::vector<double> lo, hi, values;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!header_seen) {
      if (t != kCsvHeader)
        throw ParseError("expected header '" + std::string(kCsvHeader) + "'", line_no);
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream row(t);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 3)
      throw ParseError("expected 3 comma-separated fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    const double e_lo = parse_double(fields[0], line_no);
    const double e_hi = parse_double(fields[1], line_no);
    const double value = parse_double(fields[2], line_no);
    if (!(e_lo < e_hi))
      throw ParseError("descending or empty bin [" + fields[0] + "," + fields[1] + "]",
                       line_no);
    if (value < 0.0) throw ParseError("negative counts", line_no);
    if (!lo.empty() && !(e_lo >= hi.back()))
      throw ParseError("overlapping bins: bin starting at " + fields[0] +
                           " overlaps the previous bin",
                       line_no);
    lo.push_back(e_lo);
    hi.push_back(e_hi);
    values.push_back(value);
  }
  if (lo.empty()) throw ParseError("no bins");
  return BinnedSpectrum(std::move(lo), std::move(hi), std::move(values),
                        exposure_kg_day, normalization);
}

BinnedSpectrum load_spectrum_file(const std::filesystem::path& csv,
                                  Normalization normalization, double exposure_kg_day) {
  std::ifstream in(csv);
  if (!in) throw ParseError("cannot open spectrum file '" + csv.string() + "'");
  return load_spectrum(in, normalization, exposure_kg_day);
}

std::filesystem::path sidecar_path_for(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".json");
  return p;
}

BinnedSpectrum load_spectrum_with_sidecar(const std::filesystem::path& csv) {
  const auto meta_path = sidecar_path_for(csv);
  std::ifstream meta(meta_path);
  if (!meta)
    throw ParseError("cannot open sidecar metadata '" + meta_path.string() + "'");
  nlohmann::json j;
  try {
    meta >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("malformed sidecar '" + meta_path.string() + "': " + e.what());
  }
  if (!j.contains("exposure_kg_day") || !j["exposure_kg_day"].is_number())
    throw ParseError("sidecar missing numeric key exposure_kg_day");
  if (!j.contains("normalization") || !j["normalization"].is_string())
    throw ParseError("sidecar missing string key normalization");
  return load_spectrum_file(csv,
                            normalization_from_string(j["normalization"].get<std::string>()),
                            j["exposure_kg_day"].get<double>());
}

void save_spectrum(const BinnedSpectrum& s, std::ostream& out,
                   const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << "\n";
  out << kCsvHeader << "\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    out << format_double(s.e_low(i)) << ',' << format_double(s.e_high(i)) << ','
        << format_double(s.value(i)) << "\n";
}

void save_spectrum_file(const BinnedSpectrum& s, const std::filesystem::path& csv,
                        const std::vector<std::string>& comments) {
  std::ofstream out(csv);
  if (!out) throw std::runtime_error("cannot write '" + csv.string() + "'");
  save_spectrum(s, out, comments);
}

BinnedSpectrum restrict_range(const BinnedSpectrum& s, double e_lo_kev,
                              double e_hi_kev) {
  if (!(e_lo_kev < e_hi_kev))
    throw std::invalid_argument("restrict_range: window must have e_lo < e_hi");
  std::vector<double> lo, hi, values;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.e_low(i) >= e_lo_kev && s.e_high(i) <= e_hi_kev) {
      lo.push_back(s.e_low(i));
      hi.push_back(s.e_high(i));
      values.push_back(s.value(i));
    }
  }
  if (lo.empty())
    throw WindowError("restrict_range: no bins inside [" + std::to_string(e_lo_kev) +
                      ", " + std::to_string(e_hi_kev) + "] keV");
  return BinnedSpectrum(std::move(lo), std::move(hi), std::move(values),
                        s.exposure_kg_day(), s.normalization());
}

RateDensity to_rate_density(const BinnedSpectrum& s) {
  RateDensity out;
  out.rate.reserve(s.size());
  out.sigma.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double w = s.width(i);
    if (!(w > 0.0)) throw std::domain_error("to_rate_density: zero-width bin");
    const double n = s.counts(i);
    const double scale = 1.0 / (w * s.exposure_kg_day());
    out.rate.push_back(n * scale);
    out.sigma.push_back(std::max(std::sqrt(n), 1.0) * scale);
  }
  return out;
}

}  // namespace cslx
