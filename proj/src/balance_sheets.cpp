#include "contagion/balance_sheets.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "contagion/csv.hpp"

namespace contagion {

namespace {

const char* term_class_name(term_class t) {
  switch (t) {
    case term_class::short_term: return "short";
    case term_class::medium_term: return "medium";
    case term_class::long_term: return "long";
    case term_class::gov_stock_3y: return "gov_stock_3y";
    case term_class::derivative: return "derivative";
    case term_class::impairment_loans: return "impairment_loans";
    case term_class::impairment_investments: return "impairment_investments";
  }
  return "?";
}

std::optional<term_class> parse_term_class(std::string_view name) {
  for (term_class t : {term_class::short_term, term_class::medium_term, term_class::long_term,
                       term_class::gov_stock_3y, term_class::derivative,
                       term_class::impairment_loans, term_class::impairment_investments}) {
    if (name == term_class_name(t)) return t;
  }
  return std::nullopt;
}

}  // namespace

term_mapping parse_term_mapping(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse_error, std::string("term mapping: ") + e.what());
  }
  if (!doc.is_object()) fail(errc::parse_error, "term mapping: expected a JSON object");
  term_mapping mapping;
  for (const auto& [code, value] : doc.items()) {
    if (!value.is_string()) {
      fail(errc::parse_error, "term mapping: value for \"" + code + "\" must be a string");
    }
    auto t = parse_term_class(value.get<std::string>());
    if (!t) {
      fail(errc::parse_error,
           "term mapping: unknown class \"" + value.get<std::string>() + "\" for \"" + code + "\"");
    }
    mapping.emplace(code, *t);
  }
  return mapping;
}

term_mapping load_term_mapping(const std::string& path) {
  try {
    return parse_term_mapping(read_text_file(path));
  } catch (const error& e) {
    if (e.code() == errc::parse_error) fail(errc::parse_error, path + ": " + e.what());
    throw;
  }
}

bucket_array categorize_line_items(const raw_line_items& raw, const term_mapping& mapping,
                                   bool clamp_negative) {
  bucket_array split{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  if (raw.liability_derivative_split) {
    split = *raw.liability_derivative_split;
    double total = split[0] + split[1] + split[2];
    if (split[0] < 0 || split[1] < 0 || split[2] < 0 || std::abs(total - 1.0) > 1e-9) {
      fail(errc::data_error, raw.bank_id + ": derivative split must be nonnegative and sum to 1");
    }
  }

  bucket_array buckets{0.0, 0.0, 0.0};
  double impair_medium = 0.0;
  double impair_long = 0.0;
  for (const auto& [code, amount] : raw.entries) {
    if (!std::isfinite(amount)) {
      fail(errc::data_error, raw.bank_id + ": non-finite amount for \"" + code + "\"");
    }
    auto it = mapping.find(code);
    if (it == mapping.end()) {
      fail(errc::data_error, raw.bank_id + ": unknown line item code \"" + code + "\"");
    }
    switch (it->second) {
      case term_class::short_term: buckets[0] += amount; break;
      case term_class::medium_term: buckets[1] += amount; break;
      case term_class::long_term: buckets[2] += amount; break;
      case term_class::gov_stock_3y:
        buckets[0] += amount / 3.0;
        buckets[1] += amount / 3.0;
        buckets[2] += amount / 3.0;
        break;
      case term_class::derivative:
        buckets[0] += amount * split[0];
        buckets[1] += amount * split[1];
        buckets[2] += amount * split[2];
        break;
      case term_class::impairment_loans: impair_medium += amount; break;
      case term_class::impairment_investments: impair_long += amount; break;
    }
  }
  buckets[1] -= impair_medium;
  buckets[2] -= impair_long;
  for (int e = 0; e < 3; ++e) {
    if (buckets[e] < 0.0) {
      if (!clamp_negative) {
        fail(errc::data_error, raw.bank_id + ": " +
                                   (e == 0 ? "short" : e == 1 ? "medium" : "long") +
                                   " bucket driven negative by deductions");
      }
      buckets[e] = 0.0;
    }
  }
  return buckets;
}

double compute_cet1_ratio(double capital, double total_assets) {
  if (!(total_assets > 0.0)) fail(errc::invalid_argument, "total assets must be positive");
  if (!(capital >= 0.0)) fail(errc::invalid_argument, "capital must be nonnegative");
  return capital / total_assets;
}

std::vector<double> estimate_cet1_series(const cet1_series& observed,
                                         const std::vector<month_t>& months) {
  const auto& obs = observed.observations;
  if (static_cast<int>(obs.size()) < min_cet1_observations) {
    fail(errc::data_error, observed.bank_id + ": fewer than " +
                               std::to_string(min_cet1_observations) + " ratio observations");
  }
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (i > 0 && obs[i - 1].first >= obs[i].first) {
      fail(errc::invalid_argument, observed.bank_id + ": observation months must strictly increase");
    }
    if (!(obs[i].second > 0.0) || obs[i].second > 1.0) {
      fail(errc::invalid_argument, observed.bank_id + ": ratios must lie in (0, 1]");
    }
  }

  double sum = 0.0;
  for (const auto& [_, ratio] : obs) sum += ratio;
  const double average = sum / static_cast<double>(obs.size());

  std::vector<double> out;
  out.reserve(months.size());
  for (month_t t : months) {
    // obs is sorted; find the first observation at or after t.
    auto hi = std::lower_bound(obs.begin(), obs.end(), t,
                               [](const auto& o, month_t m) { return o.first < m; });
    if (hi != obs.end() && hi->first == t) {
      out.push_back(hi->second);
    } else if (hi == obs.begin() || hi == obs.end()) {
      out.push_back(average);  // outside the observed span
    } else {
      auto lo = hi - 1;
      double k = static_cast<double>(t - lo->first);
      double gap = static_cast<double>(hi->first - lo->first);
      out.push_back(lo->second + k * (hi->second - lo->second) / gap);
    }
  }
  return out;
}

std::vector<double> system_snapshot::asset_vector() const {
  std::vector<double> assets;
  assets.reserve(banks.size());
  for (const auto& b : banks) assets.push_back(b.total_assets());
  return assets;
}

int system_snapshot::index_of(const std::string& bank_id) const {
  for (std::size_t i = 0; i < banks.size(); ++i) {
    if (banks[i].bank_id == bank_id) return static_cast<int>(i);
  }
  return -1;
}

system_snapshot build_system_snapshot(std::vector<bank_balance_sheet> sheets) {
  if (sheets.size() < 2) fail(errc::data_error, "a system needs at least two banks");
  const month_t month = sheets.front().month;
  for (const auto& s : sheets) {
    if (s.month != month) fail(errc::invalid_argument, "sheets span more than one month");
    for (double b : s.buckets) {
      if (!std::isfinite(b) || b < 0.0) {
        fail(errc::data_error, s.bank_id + ": asset buckets must be finite and nonnegative");
      }
    }
    if (!(s.total_assets() > 0.0)) fail(errc::data_error, s.bank_id + ": total assets must be positive");
    if (!(s.capital > 0.0)) fail(errc::data_error, s.bank_id + ": capital must be positive");
  }
  std::sort(sheets.begin(), sheets.end(), [](const auto& a, const auto& b) {
    double ta = a.total_assets();
    double tb = b.total_assets();
    if (ta != tb) return ta > tb;
    return a.bank_id < b.bank_id;
  });
  for (std::size_t i = 1; i < sheets.size(); ++i) {
    if (sheets[i].bank_id == sheets[i - 1].bank_id) {
      fail(errc::data_error, "duplicate bank id \"" + sheets[i].bank_id + "\"");
    }
  }
  return system_snapshot{month, std::move(sheets)};
}

namespace {

void reject(std::vector<finding>& findings, std::string where, std::string message) {
  findings.push_back({finding::kind::rejection, std::move(where), std::move(message)});
}

std::optional<double> parse_bucket_field(const std::string& text, bool clamp_negative,
                                         double& value_out) {
  auto v = parse_double(text);
  if (!v || !std::isfinite(*v)) return std::nullopt;
  value_out = (*v < 0.0 && clamp_negative) ? 0.0 : *v;
  return value_out;
}

}  // namespace

dataset load_dataset(const std::string& balance_csv_path,
                     const std::optional<std::string>& cet1_csv_path,
                     bool clamp_negative_buckets) {
  dataset data;

  const csv_table balance = read_csv_file(balance_csv_path);
  const std::vector<std::string> expected_header = {"month",        "bank_id",
                                                    "short_assets", "medium_assets",
                                                    "long_assets",  "cet1_capital"};
  if (balance.header != expected_header) {
    reject(data.findings, balance_csv_path,
           "unexpected header; want month,bank_id,short_assets,medium_assets,long_assets,cet1_capital");
    return data;
  }

  std::set<std::pair<month_t, std::string>> seen;
  std::set<month_t> months;
  for (std::size_t r = 0; r < balance.rows.size(); ++r) {
    const auto& row = balance.rows[r];
    const std::string where = balance_csv_path + ":" + std::to_string(balance.line_numbers[r]);
    if (row.size() != expected_header.size()) {
      reject(data.findings, where, "expected 6 fields, got " + std::to_string(row.size()));
      continue;
    }
    auto month = parse_month(row[0]);
    if (!month) {
      reject(data.findings, where, "bad month \"" + row[0] + "\" (want YYYY-MM)");
      continue;
    }
    if (row[1].empty()) {
      reject(data.findings, where, "empty bank_id");
      continue;
    }
    balance_row entry;
    entry.month = *month;
    entry.bank_id = row[1];
    entry.line = balance.line_numbers[r];
    bool ok = true;
    static const char* bucket_names[3] = {"short_assets", "medium_assets", "long_assets"};
    for (int e = 0; e < 3; ++e) {
      double value = 0.0;
      if (!parse_bucket_field(row[2 + e], clamp_negative_buckets, value)) {
        reject(data.findings, where, std::string("bad ") + bucket_names[e] + " \"" + row[2 + e] + "\"");
        ok = false;
        break;
      }
      if (value < 0.0) {
        reject(data.findings, where,
               std::string("negative ") + bucket_names[e] + " for bank " + entry.bank_id +
                   " month " + format_month(entry.month));
        ok = false;
        break;
      }
      entry.buckets[e] = value;
    }
    if (!ok) continue;
    double total = entry.buckets[0] + entry.buckets[1] + entry.buckets[2];
    if (!(total > 0.0)) {
      reject(data.findings, where, "zero total assets for bank " + entry.bank_id);
      continue;
    }
    if (!row[5].empty()) {
      auto capital = parse_double(row[5]);
      if (!capital || !std::isfinite(*capital)) {
        reject(data.findings, where, "bad cet1_capital \"" + row[5] + "\"");
        continue;
      }
      if (!(*capital > 0.0)) {
        reject(data.findings, where, "nonpositive capital for bank " + entry.bank_id);
        continue;
      }
      entry.capital = *capital;
    }
    if (!seen.insert({entry.month, entry.bank_id}).second) {
      reject(data.findings, where,
             "duplicate row for bank " + entry.bank_id + " month " + format_month(entry.month));
      continue;
    }
    months.insert(entry.month);
    data.rows.push_back(std::move(entry));
  }
  data.months.assign(months.begin(), months.end());

  // Ratio observations derived from capital columns first...
  std::map<std::string, std::map<month_t, double>> ratios;
  for (const auto& row : data.rows) {
    if (!row.capital) continue;
    double total = row.buckets[0] + row.buckets[1] + row.buckets[2];
    double ratio = *row.capital / total;
    if (ratio > 1.0) {
      reject(data.findings, balance_csv_path + ":" + std::to_string(row.line),
             "capital exceeds assets for bank " + row.bank_id + " month " + format_month(row.month));
      continue;
    }
    ratios[row.bank_id][row.month] = ratio;
  }

  // ...then explicit ratio rows, which win on a same-month conflict.
  if (cet1_csv_path) {
    const csv_table cet1 = read_csv_file(*cet1_csv_path);
    const std::vector<std::string> ratio_header = {"bank_id", "month", "cet1_ratio"};
    if (cet1.header != ratio_header) {
      reject(data.findings, *cet1_csv_path, "unexpected header; want bank_id,month,cet1_ratio");
    } else {
      std::set<std::pair<std::string, month_t>> seen_ratio;
      for (std::size_t r = 0; r < cet1.rows.size(); ++r) {
        const auto& row = cet1.rows[r];
        const std::string where = *cet1_csv_path + ":" + std::to_string(cet1.line_numbers[r]);
        if (row.size() != 3) {
          reject(data.findings, where, "expected 3 fields, got " + std::to_string(row.size()));
          continue;
        }
        if (row[0].empty()) {
          reject(data.findings, where, "empty bank_id");
          continue;
        }
        auto month = parse_month(row[1]);
        if (!month) {
          reject(data.findings, where, "bad month \"" + row[1] + "\" (want YYYY-MM)");
          continue;
        }
        auto ratio = parse_double(row[2]);
        if (!ratio || !std::isfinite(*ratio) || !(*ratio > 0.0) || *ratio > 1.0) {
          reject(data.findings, where, "cet1_ratio must lie in (0, 1], got \"" + row[2] + "\"");
          continue;
        }
        if (!seen_ratio.insert({row[0], *month}).second) {
          reject(data.findings, where,
                 "duplicate ratio for bank " + row[0] + " month " + format_month(*month));
          continue;
        }
        ratios[row[0]][*month] = *ratio;
      }
    }
  }

  for (auto& [bank_id, by_month] : ratios) {
    cet1_series series;
    series.bank_id = bank_id;
    series.observations.assign(by_month.begin(), by_month.end());
    data.ratios.emplace(bank_id, std::move(series));
  }

  // The exclusion rule: a bank needs at least three ratio observations.
  std::set<std::string> banks_present;
  for (const auto& row : data.rows) banks_present.insert(row.bank_id);
  for (const auto& bank_id : banks_present) {
    auto it = data.ratios.find(bank_id);
    std::size_t count = it == data.ratios.end() ? 0 : it->second.observations.size();
    if (count < static_cast<std::size_t>(min_cet1_observations)) {
      data.excluded_banks.insert(bank_id);
      data.findings.push_back({finding::kind::exclusion, bank_id,
                               "excluded: " + std::to_string(count) +
                                   " capital ratio observation(s), need " +
                                   std::to_string(min_cet1_observations)});
    }
  }

  return data;
}

monthly_snapshots assemble_snapshots(const dataset& data,
                                     const std::optional<month_range>& filter) {
  monthly_snapshots out;
  out.findings = data.findings;

  std::vector<month_t> grid;
  for (month_t m : data.months) {
    if (!filter || filter->contains(m)) grid.push_back(m);
  }
  if (grid.empty()) {
    out.findings.push_back({finding::kind::rejection, "months",
                            filter ? "no data months inside " + format_month(filter->first) + ".." +
                                         format_month(filter->last)
                                   : "no data months"});
    return out;
  }

  // Estimated ratio per (bank, grid month). Estimation uses the full data
  // month grid so a month filter never changes a bank's estimated series.
  std::map<std::string, std::vector<double>> estimated;
  for (const auto& [bank_id, series] : data.ratios) {
    if (data.excluded_banks.count(bank_id)) continue;
    estimated[bank_id] = estimate_cet1_series(series, data.months);
  }
  std::map<month_t, std::size_t> month_pos;
  for (std::size_t i = 0; i < data.months.size(); ++i) month_pos[data.months[i]] = i;

  std::map<month_t, std::vector<bank_balance_sheet>> by_month;
  for (const auto& row : data.rows) {
    if (data.excluded_banks.count(row.bank_id)) continue;
    if (filter && !filter->contains(row.month)) continue;
    auto est = estimated.find(row.bank_id);
    if (est == estimated.end()) continue;  // no ratio observations at all
    double total = row.buckets[0] + row.buckets[1] + row.buckets[2];
    double ratio = est->second[month_pos[row.month]];
    bank_balance_sheet sheet;
    sheet.bank_id = row.bank_id;
    sheet.month = row.month;
    sheet.buckets = row.buckets;
    sheet.capital = ratio * total;  // reconstructed capital level
    by_month[row.month].push_back(std::move(sheet));
  }

  for (month_t m : grid) {
    auto it = by_month.find(m);
    std::size_t n = it == by_month.end() ? 0 : it->second.size();
    if (n < 2) {
      out.findings.push_back({finding::kind::rejection, format_month(m),
                              "only " + std::to_string(n) +
                                  " admissible bank(s); a system needs at least 2"});
      continue;
    }
    out.snapshots.push_back(build_system_snapshot(std::move(it->second)));
    out.findings.push_back({finding::kind::note, format_month(m),
                            "system of " + std::to_string(n) + " banks"});
  }
  return out;
}

}  // namespace contagion
