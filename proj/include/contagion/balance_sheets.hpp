#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "contagion/errors.hpp"
#include "contagion/months.hpp"

namespace contagion {

// Buckets are indexed short = 0, medium = 1, long = 2 throughout.
using bucket_array = std::array<double, 3>;

struct bank_balance_sheet {
  std::string bank_id;
  month_t month = 0;
  bucket_array buckets{0.0, 0.0, 0.0};
  double capital = 0.0;

  double total_assets() const {
    return buckets[0] + buckets[1] + buckets[2];
  }
};

// Target of a line-item classification: one of the three buckets or a
// special handling rule.
enum class term_class {
  short_term,
  medium_term,
  long_term,
  gov_stock_3y,             // split one third into each bucket
  derivative,               // split per liability-side proportions
  impairment_loans,         // deducted from the medium bucket
  impairment_investments,   // deducted from the long bucket
};

using term_mapping = std::map<std::string, term_class, std::less<>>;

// JSON object: { "line_item_code": "short" | "medium" | "long" |
// "gov_stock_3y" | "derivative" | "impairment_loans" |
// "impairment_investments", ... }
term_mapping parse_term_mapping(const std::string& json_text);
term_mapping load_term_mapping(const std::string& path);

struct raw_line_items {
  std::string bank_id;
  month_t month = 0;
  std::vector<std::pair<std::string, double>> entries;
  // Liability-side derivative proportions (short, medium, long); equal
  // thirds are assumed when absent. Components must be >= 0 and sum to 1
  // within 1e-9.
  std::optional<bucket_array> liability_derivative_split;
};

// Classify raw amounts into the three maturity buckets. Impairments are
// deducted after all additive items. A deduction driving a bucket negative
// is a data error unless clamp_negative is set, in which case the bucket is
// floored at zero.
bucket_array categorize_line_items(const raw_line_items& raw,
                                   const term_mapping& mapping,
                                   bool clamp_negative = false);

// Unweighted capital ratio C = K / A.
double compute_cet1_ratio(double capital, double total_assets);

struct cet1_series {
  std::string bank_id;
  std::vector<std::pair<month_t, double>> observations;  // months strictly increasing
};

// Complete the ratio series over the requested months: observed months pass
// through, months between two observations are linearly interpolated, months
// outside the observed span get the mean of all observations. Requires at
// least three observations; fewer is an exclusion-level data error.
std::vector<double> estimate_cet1_series(const cet1_series& observed,
                                         const std::vector<month_t>& months);

inline constexpr int min_cet1_observations = 3;

struct system_snapshot {
  month_t month = 0;
  // Descending total assets, ties broken by bank_id; index in this vector is
  // the node index used by every downstream module.
  std::vector<bank_balance_sheet> banks;

  int size() const { return static_cast<int>(banks.size()); }
  std::vector<double> asset_vector() const;
  int index_of(const std::string& bank_id) const;  // -1 when absent
};

// Validates one month's sheets (same month, unique ids, positive assets and
// capital, N >= 2) and fixes the node ordering.
system_snapshot build_system_snapshot(std::vector<bank_balance_sheet> sheets);

// ---- file-level ingestion ----

struct balance_row {
  month_t month = 0;
  std::string bank_id;
  bucket_array buckets{0.0, 0.0, 0.0};
  std::optional<double> capital;
  std::size_t line = 0;
};

struct dataset {
  std::vector<balance_row> rows;
  std::map<std::string, cet1_series> ratios;  // merged observations per bank
  std::set<std::string> excluded_banks;       // fewer than 3 ratio observations
  std::vector<month_t> months;                // sorted unique months with rows
  std::vector<finding> findings;
};

// Balance CSV header: month,bank_id,short_assets,medium_assets,long_assets,
// cet1_capital (capital may be empty). Ratio CSV header:
// bank_id,month,cet1_ratio. Ratio observations are merged from both files;
// on a same-month conflict the ratio CSV wins. Structural problems become
// rejection findings, not exceptions; missing or unreadable files throw.
dataset load_dataset(const std::string& balance_csv_path,
                     const std::optional<std::string>& cet1_csv_path,
                     bool clamp_negative_buckets);

struct monthly_snapshots {
  std::vector<system_snapshot> snapshots;  // ascending month
  std::vector<finding> findings;           // dataset findings + assembly findings
};

// Estimate per-bank capital for every month in the dataset (restricted by
// the filter) and build one snapshot per month. Months whose bank count
// falls below 2 are dropped with a rejection finding.
monthly_snapshots assemble_snapshots(const dataset& data,
                                     const std::optional<month_range>& filter);

}  // namespace contagion
