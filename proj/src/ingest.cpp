#include "epiforecast/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "epiforecast/csv.hpp"
#include "epiforecast/log.hpp"
#include "json.hpp"

namespace epi {

namespace {

bool parse_ll(const std::string& s, long long* out) {
  if (s.empty()) return false;
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc{} && ptr == s.data() + s.size()) {
    *out = v;
    return true;
  }
  // Some dumps carry counts as floats ("123.0").
  char* end = nullptr;
  double d = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(d)) return false;
  *out = static_cast<long long>(std::llround(d));
  return true;
}

bool parse_num(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  double d = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(d)) return false;
  *out = d;
  return true;
}

struct RawRow {
  Date date;
  std::optional<long long> cases;
  std::optional<long long> deaths;
  std::optional<long long> population;
  std::array<std::optional<int>, 12> npi;
  int source_row = 0;
};

struct RawRegion {
  RegionKey key;
  std::map<Date, RawRow> rows;  // last row wins per date
};

}  // namespace

NpiSchema NpiSchema::oxcgrt_default() {
  NpiSchema s;
  s.names = {"C1_School closing",
             "C2_Workplace closing",
             "C3_Cancel public events",
             "C4_Restrictions on gatherings",
             "C5_Close public transport",
             "C6_Stay at home requirements",
             "C7_Restrictions on internal movement",
             "C8_International travel controls",
             "H1_Public information campaigns",
             "H2_Testing policy",
             "H3_Contact tracing",
             "H6_Facial Coverings"};
  s.max_levels = {3, 3, 2, 4, 2, 3, 2, 4, 2, 3, 2, 4};
  return s;
}

void RegionSeries::validate(const NpiSchema& schema) const {
  if (key.geo_id.empty()) throw std::runtime_error("region has empty geo_id");
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("region " + key.geo_id + ": " + what);
  };
  if (population <= 0) fail("population must be positive");
  const std::size_t n = dates.size();
  if (confirmed_cases.size() != n || confirmed_deaths.size() != n || npi.size() != n)
    fail("array lengths differ");
  for (std::size_t t = 1; t < n; ++t) {
    if (dates[t] - dates[t - 1] != 1) fail("dates not contiguous");
    if (confirmed_cases[t] < confirmed_cases[t - 1]) fail("cases decrease");
    if (confirmed_deaths[t] < confirmed_deaths[t - 1]) fail("deaths decrease");
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (confirmed_cases[t] < 0 || confirmed_deaths[t] < 0) fail("negative count");
    for (int i = 0; i < 12; ++i)
      if (npi[t][i] < 0 || npi[t][i] > schema.max_levels[i])
        fail("npi level out of range");
  }
}

std::pair<CulturalProfile, bool> CulturalTable::lookup(
    const std::string& country_name) const {
  auto it = by_country.find(country_name);
  if (it != by_country.end()) return {it->second, false};
  return {mean_profile, true};
}

const RegionSeries* Dataset::find(const std::string& geo_id) const {
  auto it = regions.find(geo_id);
  return it == regions.end() ? nullptr : &it->second;
}

std::vector<std::string> Dataset::geo_ids() const {
  std::vector<std::string> out;
  out.reserve(regions.size());
  for (const auto& [geo, series] : regions) out.push_back(geo);
  return out;
}

void ParseReport::record_error(int row_index, const std::string& what) {
  ++bad_rows;
  if (row_errors.size() < 50)
    row_errors.push_back("row " + std::to_string(row_index) + ": " + what);
}

Dataset parse_oxcgrt(std::istream& in, const NpiSchema& schema,
                     const ColumnMap& columns, ParseReport* report) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_oxcgrt_text(buffer.str(), schema, columns, report);
}

Dataset parse_oxcgrt_text(std::string_view csv_text, const NpiSchema& schema,
                          const ColumnMap& columns, ParseReport* report) {
  ParseReport local;
  ParseReport& rep = report ? *report : local;

  CsvTable table = parse_csv(csv_text);
  auto need = [&](const std::string& name) {
    int idx = table.column(name);
    if (idx < 0) throw std::runtime_error("missing required column '" + name + "'");
    return idx;
  };
  const int c_country = need(columns.country);
  const int c_region = table.column(columns.region);  // cells may be absent entirely
  const int c_geo = table.column(columns.geo);
  const int c_date = need(columns.date);
  const int c_cases = need(columns.cases);
  const int c_deaths = need(columns.deaths);
  const int c_pop = need(columns.population);
  std::array<int, 12> c_npi{};
  for (int i = 0; i < 12; ++i) c_npi[i] = need(schema.names[i]);

  std::map<std::string, RawRegion> raw;
  int npi_cells_filled_at_parse = 0;

  for (std::size_t ri = 0; ri < table.rows.size(); ++ri) {
    const auto& row = table.rows[ri];
    const int row_index = static_cast<int>(ri) + 2;  // 1-based, after header
    ++rep.rows;
    auto cell = [&](int idx) -> const std::string& {
      static const std::string empty;
      return (idx >= 0 && idx < static_cast<int>(row.size())) ? row[idx] : empty;
    };

    RawRow parsed;
    parsed.source_row = row_index;
    if (!Date::try_parse(cell(c_date), &parsed.date)) {
      rep.record_error(row_index, "unparseable date '" + cell(c_date) + "'");
      continue;
    }
    bool bad = false;
    auto parse_count = [&](const std::string& s, const char* what,
                           std::optional<long long>* out) {
      if (s.empty()) return;
      long long v = 0;
      if (!parse_ll(s, &v)) {
        rep.record_error(row_index, std::string("non-numeric ") + what + " '" + s + "'");
        bad = true;
      } else {
        *out = v;
      }
    };
    parse_count(cell(c_pop), "population", &parsed.population);
    parse_count(cell(c_cases), "cases", &parsed.cases);
    parse_count(cell(c_deaths), "deaths", &parsed.deaths);
    for (int i = 0; i < 12 && !bad; ++i) {
      const std::string& s = cell(c_npi[i]);
      if (s.empty()) {
        ++npi_cells_filled_at_parse;  // missing NPI value becomes 0
        continue;
      }
      double v = 0;
      if (!parse_num(s, &v)) {
        rep.record_error(row_index, "non-numeric NPI value '" + s + "'");
        bad = true;
      } else {
        parsed.npi[i] = static_cast<int>(std::lround(v));
      }
    }
    if (bad) continue;

    std::string country = cell(c_country);
    std::string region = cell(c_region);
    std::string geo = cell(c_geo);
    if (geo.empty()) geo = region.empty() ? country : country + "__" + region;
    if (geo.empty()) {
      rep.record_error(row_index, "row has neither geo id nor country name");
      continue;
    }
    RawRegion& rr = raw[geo];
    rr.key = RegionKey{country, region, geo};
    rr.rows[parsed.date] = parsed;
  }

  Dataset ds;
  ds.schema = schema;
  for (auto& [geo, rr] : raw) {
    bool any_cases = false;
    std::optional<long long> population;
    for (const auto& [date, row] : rr.rows) {
      any_cases = any_cases || row.cases.has_value();
      if (!population && row.population && *row.population > 0)
        population = row.population;
    }
    if (!any_cases) {
      ++rep.regions_dropped;
      log::debug("dropping region ", geo, ": no reported case values");
      continue;
    }
    if (!population) {
      ++rep.regions_dropped;
      rep.record_error(rr.rows.begin()->second.source_row,
                       "region " + geo + " has no usable population value");
      continue;
    }

    RegionSeries series;
    series.key = rr.key;
    series.population = *population;
    series.filled_npi_cells = 0;

    const Date first = rr.rows.begin()->first;
    const Date last = rr.rows.rbegin()->first;
    long long cases = 0, deaths = 0;
    std::array<int, 12> npi{};
    for (Date d = first; d <= last; ++d) {
      auto it = rr.rows.find(d);
      if (it != rr.rows.end()) {
        const RawRow& row = it->second;
        if (row.cases) cases = *row.cases;
        if (row.deaths) deaths = *row.deaths;
        for (int i = 0; i < 12; ++i) {
          int level = row.npi[i].value_or(0);
          if (!row.npi[i]) ++series.filled_npi_cells;
          if (level < 0) {
            level = 0;
            ++series.clamped_npi_values;
          } else if (level > schema.max_levels[i]) {
            level = schema.max_levels[i];
            ++series.clamped_npi_values;
          }
          npi[i] = level;
        }
      } else {
        ++series.filled_gap_days;  // forward-fill counts and NPI levels
      }
      series.dates.push_back(d);
      series.confirmed_cases.push_back(cases);
      series.confirmed_deaths.push_back(deaths);
      series.npi.push_back(npi);
    }

    // Reporting corrections: clamp cumulative series to the running maximum.
    auto repair = [&](std::vector<long long>& xs) {
      long long running = 0;
      for (auto& x : xs) {
        if (x < 0) {
          x = 0;
          ++series.repaired_decreasing;
        }
        if (x < running) {
          x = running;
          ++series.repaired_decreasing;
        }
        running = x;
      }
    };
    repair(series.confirmed_cases);
    repair(series.confirmed_deaths);

    series.validate(schema);
    ds.regions.emplace(geo, std::move(series));
    ++rep.regions_retained;
  }

  if (ds.regions.empty())
    throw std::runtime_error("no region retained after parsing (" +
                             std::to_string(rep.bad_rows) + " bad rows)");
  log::info("parsed ", rep.rows, " rows, retained ", rep.regions_retained,
            " regions, dropped ", rep.regions_dropped, ", bad rows ", rep.bad_rows,
            ", filled NPI cells ", npi_cells_filled_at_parse);
  return ds;
}

CulturalTable load_cultural(std::istream& in, ParseReport* report) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_cultural_text(buffer.str(), report);
}

CulturalTable load_cultural_text(std::string_view csv_text, ParseReport* report) {
  ParseReport local;
  ParseReport& rep = report ? *report : local;

  CsvTable table = parse_csv(csv_text);
  if (table.header.size() < 7)
    throw std::runtime_error("cultural table needs a country column and 6 numeric columns, got " +
                             std::to_string(table.header.size()));

  CulturalTable result;
  std::array<double, 6> sums{};
  int count = 0;
  for (std::size_t ri = 0; ri < table.rows.size(); ++ri) {
    const auto& row = table.rows[ri];
    const int row_index = static_cast<int>(ri) + 2;
    ++rep.rows;
    if (row.empty() || row[0].empty()) {
      ++result.skipped_rows;
      continue;
    }
    CulturalProfile profile;
    bool complete = true;
    for (int i = 0; i < 6; ++i) {
      double v = 0;
      if (i + 1 >= static_cast<int>(row.size()) || !parse_num(row[i + 1], &v)) {
        complete = false;
        break;
      }
      if (v < 0.0 || v > 100.0)
        throw std::runtime_error("cultural score out of [0,100] at row " +
                                 std::to_string(row_index) + ": " + row[i + 1]);
      profile.scores[i] = v;
    }
    if (!complete) {
      ++result.skipped_rows;
      rep.record_error(row_index, "incomplete cultural row for '" + row[0] + "'");
      continue;
    }
    result.by_country[row[0]] = profile;
    for (int i = 0; i < 6; ++i) sums[i] += profile.scores[i];
    ++count;
  }
  if (count == 0) throw std::runtime_error("cultural table has no usable rows");
  for (int i = 0; i < 6; ++i) result.mean_profile.scores[i] = sums[i] / count;
  return result;
}

Dataset date_slice(const Dataset& dataset, Date start, Date end) {
  if (start > end)
    throw std::invalid_argument("date_slice: start " + start.to_string() +
                                " after end " + end.to_string());
  Dataset out;
  out.schema = dataset.schema;
  out.culture = dataset.culture;
  for (const auto& [geo, series] : dataset.regions) {
    if (series.dates.empty()) continue;
    Date lo = std::max(start, series.dates.front());
    Date hi = std::min(end, series.dates.back());
    if (lo > hi) continue;  // slice removed the whole region
    const std::size_t from = static_cast<std::size_t>(lo - series.dates.front());
    const std::size_t n = static_cast<std::size_t>(hi - lo) + 1;
    RegionSeries s;
    s.key = series.key;
    s.population = series.population;
    s.dates.assign(series.dates.begin() + from, series.dates.begin() + from + n);
    s.confirmed_cases.assign(series.confirmed_cases.begin() + from,
                             series.confirmed_cases.begin() + from + n);
    s.confirmed_deaths.assign(series.confirmed_deaths.begin() + from,
                              series.confirmed_deaths.begin() + from + n);
    s.npi.assign(series.npi.begin() + from, series.npi.begin() + from + n);
    s.repaired_decreasing = series.repaired_decreasing;
    s.filled_gap_days = series.filled_gap_days;
    s.filled_npi_cells = series.filled_npi_cells;
    s.clamped_npi_values = series.clamped_npi_values;
    out.regions.emplace(geo, std::move(s));
  }
  return out;
}

namespace {
constexpr int kSnapshotVersion = 1;
}

std::string snapshot_to_json(const Dataset& dataset) {
  nlohmann::json j;
  j["format"] = "epiforecast-dataset";
  j["version"] = kSnapshotVersion;
  j["schema"]["names"] = dataset.schema.names;
  j["schema"]["max_levels"] = dataset.schema.max_levels;

  nlohmann::json regions = nlohmann::json::array();
  for (const auto& [geo, s] : dataset.regions) {
    nlohmann::json r;
    r["geo_id"] = geo;
    r["country"] = s.key.country_name;
    r["region"] = s.key.region_name;
    r["population"] = s.population;
    r["start_date"] = s.dates.empty() ? "" : s.dates.front().to_string();
    r["cases"] = s.confirmed_cases;
    r["deaths"] = s.confirmed_deaths;
    r["npi"] = s.npi;
    r["provenance"] = {{"repaired_decreasing", s.repaired_decreasing},
                       {"filled_gap_days", s.filled_gap_days},
                       {"filled_npi_cells", s.filled_npi_cells},
                       {"clamped_npi_values", s.clamped_npi_values}};
    regions.push_back(std::move(r));
  }
  j["regions"] = std::move(regions);

  nlohmann::json countries;
  for (const auto& [name, profile] : dataset.culture.by_country)
    countries[name] = profile.scores;
  j["culture"]["countries"] = std::move(countries);
  j["culture"]["mean"] = dataset.culture.mean_profile.scores;
  j["culture"]["skipped_rows"] = dataset.culture.skipped_rows;
  return j.dump(1);
}

Dataset snapshot_from_json(std::string_view json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  if (j.value("format", "") != "epiforecast-dataset")
    throw std::runtime_error("not an epiforecast dataset snapshot");
  if (j.value("version", -1) != kSnapshotVersion)
    throw std::runtime_error("unsupported snapshot version");

  Dataset ds;
  j.at("schema").at("names").get_to(ds.schema.names);
  j.at("schema").at("max_levels").get_to(ds.schema.max_levels);
  for (const auto& r : j.at("regions")) {
    RegionSeries s;
    s.key.geo_id = r.at("geo_id").get<std::string>();
    s.key.country_name = r.at("country").get<std::string>();
    s.key.region_name = r.at("region").get<std::string>();
    s.population = r.at("population").get<long long>();
    r.at("cases").get_to(s.confirmed_cases);
    r.at("deaths").get_to(s.confirmed_deaths);
    r.at("npi").get_to(s.npi);
    Date start = Date::parse(r.at("start_date").get<std::string>());
    s.dates.resize(s.confirmed_cases.size());
    for (std::size_t t = 0; t < s.dates.size(); ++t) s.dates[t] = start + static_cast<int>(t);
    if (r.contains("provenance")) {
      const auto& p = r.at("provenance");
      s.repaired_decreasing = p.value("repaired_decreasing", 0);
      s.filled_gap_days = p.value("filled_gap_days", 0);
      s.filled_npi_cells = p.value("filled_npi_cells", 0);
      s.clamped_npi_values = p.value("clamped_npi_values", 0);
    }
    s.validate(ds.schema);
    ds.regions.emplace(s.key.geo_id, std::move(s));
  }
  for (const auto& [name, scores] : j.at("culture").at("countries").items()) {
    CulturalProfile p;
    scores.get_to(p.scores);
    ds.culture.by_country[name] = p;
  }
  j.at("culture").at("mean").get_to(ds.culture.mean_profile.scores);
  ds.culture.skipped_rows = j.at("culture").value("skipped_rows", 0);
  return ds;
}

void save_snapshot(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path.string());
  out << snapshot_to_json(dataset);
  if (!out) throw std::runtime_error("failed writing snapshot: " + path.string());
}

Dataset load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return snapshot_from_json(buffer.str());
}

std::string write_oxcgrt_csv(const Dataset& dataset) {
  std::string out;
  out += "CountryName,RegionName,GeoID,Date,ConfirmedCases,ConfirmedDeaths,Population";
  for (const auto& name : dataset.schema.names) {
    out += ',';
    out += csv_escape(name);
  }
  out += '\n';
  for (const auto& [geo, s] : dataset.regions) {
    for (std::size_t t = 0; t < s.size(); ++t) {
      out += csv_escape(s.key.country_name);
      out += ',';
      out += csv_escape(s.key.region_name);
      out += ',';
      out += csv_escape(geo);
      out += ',';
      out += s.dates[t].to_string();
      out += ',';
      out += std::to_string(s.confirmed_cases[t]);
      out += ',';
      out += std::to_string(s.confirmed_deaths[t]);
      out += ',';
      out += std::to_string(s.population);
      for (int i = 0; i < 12; ++i) {
        out += ',';
        out += std::to_string(s.npi[t][i]);
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace epi
