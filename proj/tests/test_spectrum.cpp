#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cslx/errors.hpp"
#include "cslx/material.hpp"
#include "cslx/random.hpp"
#include "cslx/spectrum.hpp"

using namespace cslx;

namespace {

BinnedSpectrum from_csv(const std::string& body, double exposure = 80.0,
                        Normalization n = Normalization::counts_per_bin) {
  std::istringstream in(body);
  return load_spectrum(in, n, exposure);
}

std::string to_csv(const BinnedSpectrum& s) {
  std::ostringstream out;
  save_spectrum(s, out);
  return out.str();
}

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("loads a single-bin file") {
  const auto s = from_csv("e_low_kev,e_high_kev,counts\n1.0,2.0,5\n");
  REQUIRE(s.size() == 1);
  CHECK(s.e_low(0) == 1.0);
  CHECK(s.e_high(0) == 2.0);
  CHECK(s.counts(0) == 5.0);
  CHECK(s.exposure_kg_day() == 80.0);
}

TEST_CASE("comments and blank lines are ignored") {
  const auto s = from_csv(
      "# synthetic fixture\n\ne_low_kev,e_high_kev,counts\n# mid comment\n4.5,5.5,12\n");
  REQUIRE(s.size() == 1);
  CHECK(s.counts(0) == 12.0);
}

TEST_CASE("parse errors carry the line number") {
  CHECK_THROWS_WITH_AS(from_csv("e_low_kev,e_high_kev,counts\n1,2,5\n1.5,3,4\n"),
                       doctest::Contains("line 3"), ParseError);
  CHECK_THROWS_WITH_AS(from_csv("e_low_kev,e_high_kev,counts\n1,2,abc\n"),
                       doctest::Contains("non-numeric"), ParseError);
  CHECK_THROWS_WITH_AS(from_csv("e_low_kev,e_high_kev,counts\n2,1,5\n"),
                       doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_AS(from_csv("e_low_kev,e_high_kev,counts\n1,2,-5\n"), ParseError);
  CHECK_THROWS_WITH_AS(from_csv(""), doctest::Contains("no bins"), ParseError);
  CHECK_THROWS_WITH_AS(from_csv("e_low_kev,e_high_kev,counts\n"),
                       doctest::Contains("no bins"), ParseError);
  CHECK_THROWS_AS(from_csv("energy,counts\n1,5\n"), ParseError);
  CHECK_THROWS_AS(from_csv("e_low_kev,e_high_kev,counts\n1,2\n"), ParseError);
}

TEST_CASE("invariants are enforced at construction") {
  CHECK_THROWS_AS(BinnedSpectrum({1.0}, {2.0}, {1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BinnedSpectrum({1.0}, {2.0}, {-1.0}, 80.0), std::invalid_argument);
  CHECK_THROWS_AS(BinnedSpectrum({1.0, 1.5}, {2.0, 3.0}, {1.0, 1.0}, 80.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(BinnedSpectrum({}, {}, {}, 80.0), std::invalid_argument);
  // gaps are fine
  CHECK_NOTHROW(BinnedSpectrum({1.0, 5.0}, {2.0, 6.0}, {1.0, 1.0}, 80.0));
}

TEST_CASE("restrict_range keeps exactly the contained bins") {
  const auto s = from_csv(
      "e_low_kev,e_high_kev,counts\n"
      "4,4.5,1\n4.5,5,2\n5,48,3\n48,48.5,4\n48.5,49,5\n");
  const auto r = restrict_range(s, 4.5, 48.5);
  REQUIRE(r.size() == 3);
  CHECK(r.e_low(0) == 4.5);
  CHECK(r.e_high(0) == 5.0);
  CHECK(r.e_low(2) == 48.0);
  CHECK(r.e_high(2) == 48.5);

  SUBCASE("partial-overlap bins are dropped, not split") {
    const auto r2 = restrict_range(s, 4.6, 48.5);
    CHECK(r2.size() == 2);  // the [4.5,5] bin only partially overlaps
    CHECK(r2.e_low(0) == 5.0);
  }

  SUBCASE("window containing everything is the identity") {
    const auto all = restrict_range(s, 0.0 + 1e-9, 100.0);
    CHECK(all.size() == s.size());
    CHECK(to_csv(all) == to_csv(s));
  }

  SUBCASE("idempotent") {
    const auto twice = restrict_range(r, 4.5, 48.5);
    CHECK(to_csv(twice) == to_csv(r));
  }

  SUBCASE("empty result raises a window error") {
    CHECK_THROWS_AS(restrict_range(s, 100.0, 200.0), WindowError);
  }

  CHECK_THROWS_AS(restrict_range(s, 10.0, 10.0), std::invalid_argument);
}

TEST_CASE("rate density and the counting floor") {
  const auto s = from_csv("e_low_kev,e_high_kev,counts\n1.0,2.0,80\n");
  const auto rd = to_rate_density(s);
  CHECK(rd.rate[0] == doctest::Approx(1.0));  // 80 / (1 keV * 80 kg day)
  CHECK(rd.sigma[0] == doctest::Approx(std::sqrt(80.0) / 80.0));

  const auto z = from_csv("e_low_kev,e_high_kev,counts\n1.0,2.0,0\n");
  const auto rdz = to_rate_density(z);
  CHECK(rdz.rate[0] == 0.0);
  CHECK(rdz.sigma[0] == doctest::Approx(1.0 / 80.0));  // sigma floor of 1 count
}

TEST_CASE("normalization conversions conserve total counts") {
  // 10 counts in [2,4] at 5 kg day, expressed three ways
  const auto per_bin = BinnedSpectrum({2.0}, {4.0}, {10.0}, 5.0,
                                      Normalization::counts_per_bin);
  const auto per_kev = BinnedSpectrum({2.0}, {4.0}, {5.0}, 5.0,
                                      Normalization::counts_per_kev);
  const auto per_kev_kg_day = BinnedSpectrum({2.0}, {4.0}, {1.0}, 5.0,
                                             Normalization::counts_per_kev_kg_day);
  CHECK(per_bin.counts(0) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(per_kev.counts(0) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(per_kev_kg_day.counts(0) == doctest::Approx(10.0).epsilon(1e-12));

  for (const auto* s : {&per_bin, &per_kev, &per_kev_kg_day}) {
    const auto rd = to_rate_density(*s);
    double recovered = 0.0;
    for (std::size_t i = 0; i < s->size(); ++i)
      recovered += rd.rate[i] * s->width(i) * s->exposure_kg_day();
    CHECK(recovered == doctest::Approx(s->total_counts()).epsilon(1e-9));
  }
}

TEST_CASE("save/load round trip is the identity (property)") {
  RandomStream rng(20240817);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> lo, hi, values;
    double edge = 0.5 + 10.0 * rng.uniform();
    const int n = 1 + static_cast<int>(rng.uniform() * 40);
    for (int i = 0; i < n; ++i) {
      if (rng.uniform() < 0.2) edge += rng.uniform();  // occasional gap
      const double w = 0.01 + rng.uniform();
      lo.push_back(edge);
      hi.push_back(edge + w);
      edge += w;
      values.push_back(std::floor(rng.uniform() * 1000.0) / 8.0);
    }
    const auto norm = static_cast<Normalization>(trial % 3);
    const BinnedSpectrum s(lo, hi, values, 0.1 + 100.0 * rng.uniform(), norm);

    std::istringstream in(to_csv(s));
    const auto back = load_spectrum(in, s.normalization(), s.exposure_kg_day());
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(back.e_low(i) == s.e_low(i));  // bit-exact via shortest round-trip
      CHECK(back.e_high(i) == s.e_high(i));
      CHECK(back.value(i) == s.value(i));
    }
  }
}

TEST_CASE("sidecar loading") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "cslx-spectrum-test";
  fs::create_directories(dir);
  const auto csv = dir / "spec.csv";
  {
    std::ofstream out(csv);
    out << "e_low_kev,e_high_kev,counts\n1,2,7\n";
    std::ofstream meta(dir / "spec.json");
    meta << R"({"exposure_kg_day": 12.5, "normalization": "counts_per_kev"})";
  }
  const auto s = load_spectrum_with_sidecar(csv);
  CHECK(s.exposure_kg_day() == 12.5);
  CHECK(s.normalization() == Normalization::counts_per_kev);
  CHECK(s.counts(0) == doctest::Approx(7.0));  // 7 per keV * 1 keV

  CHECK_THROWS_AS(load_spectrum_with_sidecar(dir / "absent.csv"), ParseError);
  fs::remove_all(dir);
}

TEST_CASE("germanium material") {
  const auto paper = germanium(ConstantsMode::paper_compat);
  CHECK(paper.atoms_per_kg == 8.9e24);
  const auto exact = germanium(ConstantsMode::exact);
  CHECK(exact.atoms_per_kg == doctest::Approx(8.2915e24).epsilon(1e-4));

  int electrons = 0;
  for (const auto& sh : paper.shells) electrons += sh.occupancy;
  CHECK(electrons == 32);
  CHECK_NOTHROW(paper.validate());

  MaterialSpec bad = paper;
  bad.shells[1].binding_ev = 1.0;  // breaks the depth ordering
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = paper;
  bad.atoms_per_kg = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

}  // TEST_SUITE
