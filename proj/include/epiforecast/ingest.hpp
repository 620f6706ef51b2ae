#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epiforecast/date.hpp"

namespace epi {

struct RegionKey {
  std::string country_name;
  std::string region_name;  // empty for country-level rows
  std::string geo_id;       // unique, nonempty

  auto operator<=>(const RegionKey&) const = default;
};

// The 12 intervention columns with their maximum ordinal levels.
struct NpiSchema {
  std::array<std::string, 12> names;
  std::array<int, 12> max_levels;

  static NpiSchema oxcgrt_default();
};

// Daily series for one region. All arrays share the length of `dates`,
// dates are contiguous (step of one day), cumulative counts are
// non-decreasing after repair.
struct RegionSeries {
  RegionKey key;
  long long population = 0;
  std::vector<Date> dates;
  std::vector<long long> confirmed_cases;   // cumulative
  std::vector<long long> confirmed_deaths;  // cumulative
  std::vector<std::array<int, 12>> npi;

  // Repair/fill provenance.
  int repaired_decreasing = 0;
  int filled_gap_days = 0;
  int filled_npi_cells = 0;
  int clamped_npi_values = 0;

  std::size_t size() const { return dates.size(); }
  void validate(const NpiSchema& schema) const;  // throws on broken invariants
};

// Six Hofstede scores, each in [0, 100].
struct CulturalProfile {
  std::array<double, 6> scores{};
};

struct CulturalTable {
  std::map<std::string, CulturalProfile> by_country;
  CulturalProfile mean_profile{};  // column-wise mean over present countries
  int skipped_rows = 0;

  // Subnational lookups resolve through the country name; countries absent
  // from the table get the mean profile with imputed=true.
  std::pair<CulturalProfile, bool> lookup(const std::string& country_name) const;
};

struct Dataset {
  NpiSchema schema;
  std::map<std::string, RegionSeries> regions;  // keyed by geo_id
  CulturalTable culture;

  const RegionSeries* find(const std::string& geo_id) const;
  std::vector<std::string> geo_ids() const;
};

// Header names in the source CSV; defaults match the OxCGRT latest file.
struct ColumnMap {
  std::string country = "CountryName";
  std::string region = "RegionName";
  std::string geo = "GeoID";
  std::string date = "Date";
  std::string cases = "ConfirmedCases";
  std::string deaths = "ConfirmedDeaths";
  std::string population = "Population";
};

struct ParseReport {
  int rows = 0;
  int bad_rows = 0;
  std::vector<std::string> row_errors;  // capped at 50 entries
  int regions_retained = 0;
  int regions_dropped = 0;

  void record_error(int row_index, const std::string& what);
};

// Parses an OxCGRT-format CSV. Empty NPI cells become 0, gaps in the
// cumulative series are forward-filled, decreasing cumulative counts are
// clamped to the running maximum, and regions without any reported case
// value are dropped. Throws when no region survives.
Dataset parse_oxcgrt(std::istream& in, const NpiSchema& schema,
                     const ColumnMap& columns = {}, ParseReport* report = nullptr);
Dataset parse_oxcgrt_text(std::string_view csv_text, const NpiSchema& schema,
                          const ColumnMap& columns = {}, ParseReport* report = nullptr);

// Cultural-dimension table: country column followed by six numeric columns.
CulturalTable load_cultural(std::istream& in, ParseReport* report = nullptr);
CulturalTable load_cultural_text(std::string_view csv_text, ParseReport* report = nullptr);

// Restricts every region to [start, end]; regions emptied by the slice are
// dropped. start > end is fatal.
Dataset date_slice(const Dataset& dataset, Date start, Date end);

// Versioned JSON snapshot for pipeline caching (schema in README).
std::string snapshot_to_json(const Dataset& dataset);
Dataset snapshot_from_json(std::string_view json_text);
void save_snapshot(const Dataset& dataset, const std::filesystem::path& path);
Dataset load_snapshot(const std::filesystem::path& path);

// Serializes regions back into the CSV schema parse_oxcgrt reads.
std::string write_oxcgrt_csv(const Dataset& dataset);

}  // namespace epi
