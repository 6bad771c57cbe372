#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cslx {

// Meaning of the per-bin value column.
enum class Normalization { counts_per_bin, counts_per_kev, counts_per_kev_kg_day };

std::string to_string(Normalization n);
Normalization normalization_from_string(const std::string& s);

/**
 * A binned X-ray spectrum.
 *
 * Bins are intervals [e_low, e_high] in keV, strictly ascending and
 * non-overlapping. Gaps are allowed: restricting to an energy window drops
 * partially covered bins instead of splitting them, so the result need not
 * be contiguous.
 *
 * The per-bin value is stored exactly as declared by `normalization`;
 * raw observed counts are derived on demand. Writing a spectrum back out
 * therefore reproduces the input numbers bit-exactly.
 */
class BinnedSpectrum {
 public:
  BinnedSpectrum(std::vector<double> e_low, std::vector<double> e_high,
                 std::vector<double> values, double exposure_kg_day,
                 Normalization normalization = Normalization::counts_per_bin);

  std::size_t size() const { return e_low_.size(); }
  double e_low(std::size_t i) const { return e_low_[i]; }
  double e_high(std::size_t i) const { return e_high_[i]; }
  double width(std::size_t i) const { return e_high_[i] - e_low_[i]; }

  // Value as stored, in the declared normalization.
  double value(std::size_t i) const { return values_[i]; }

  // Raw observed counts in bin i (converts from the declared normalization).
  double counts(std::size_t i) const;
  double total_counts() const;

  double e_min() const { return e_low_.front(); }
  double e_max() const { return e_high_.back(); }
  bool contiguous() const;

  double exposure_kg_day() const { return exposure_; }
  Normalization normalization() const { return normalization_; }

 private:
  std::vector<double> e_low_;
  std::vector<double> e_high_;
  std::vector<double> values_;
  double exposure_ = 0.0;
  Normalization normalization_ = Normalization::counts_per_bin;
};

/**
 * Reads the documented CSV format: a header line
 * "e_low_kev,e_high_kev,counts", one bin per row, '#' starting comment
 * lines. Malformed rows raise ParseError with the offending line number.
 */
BinnedSpectrum load_spectrum(std::istream& in, Normalization normalization,
                             double exposure_kg_day);
BinnedSpectrum load_spectrum_file(const std::filesystem::path& csv,
                                  Normalization normalization, double exposure_kg_day);

// Sidecar metadata file (keys: exposure_kg_day, normalization) that
// accompanies spectrum.csv as spectrum.json.
std::filesystem::path sidecar_path_for(const std::filesystem::path& csv);
BinnedSpectrum load_spectrum_with_sidecar(const std::filesystem::path& csv);

void save_spectrum(const BinnedSpectrum& s, std::ostream& out,
                   const std::vector<std::string>& comments = {});
void save_spectrum_file(const BinnedSpectrum& s, const std::filesystem::path& csv,
                        const std::vector<std::string>& comments = {});

/**
 * Keeps exactly the bins fully contained in [e_lo, e_hi]; bins that only
 * partially overlap the window are dropped. Throws WindowError if nothing
 * survives, std::invalid_argument if e_lo >= e_hi.
 */
BinnedSpectrum restrict_range(const BinnedSpectrum& s, double e_lo_kev, double e_hi_kev);

// Per-bin counting rate in counts/(keV kg day) with Poisson uncertainties.
// The uncertainty uses the counting floor max(sqrt(n), 1) so empty bins do
// not get zero error.
struct RateDensity {
  std::vector<double> rate;
  std::vector<double> sigma;
};
RateDensity to_rate_density(const BinnedSpectrum& s);

}  // namespace cslx
