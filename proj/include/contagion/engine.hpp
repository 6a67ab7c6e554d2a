#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contagion/balance_sheets.hpp"
#include "contagion/montecarlo.hpp"

namespace contagion {

inline constexpr std::uint64_t default_master_seed = 1;

struct run_config {
  std::string balance_csv;                 // required
  std::optional<std::string> cet1_csv;
  std::optional<std::string> mapping_path; // checked by validate, unused by runs
  std::optional<month_range> months;
  std::vector<structure_spec> structures;  // at least one
  scenario_config scenario;
  int m = 2000;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool clamp_negative_buckets = false;
  bool retain_alphas = false;

  std::uint64_t master_seed() const { return seed.value_or(default_master_seed); }
};

// Parses a config document, or a run manifest (the manifest embeds the
// resolved config under "config"). Relative data paths resolve against
// base_dir. Throws error(parse_error) on malformed JSON or bad values.
run_config parse_run_config(const std::string& json_text, const std::string& base_dir);
run_config load_run_config(const std::string& path);

std::string serialize_run_config(const run_config& config);

struct command_outputs {
  std::vector<std::string> files;  // paths written, in write order
};

class engine {
public:
  // Loads every referenced file and assembles monthly snapshots. Throws on
  // unreadable files or malformed config; data-level problems become
  // findings instead, so validation can report all of them.
  explicit engine(run_config config);

  const run_config& config() const { return config_; }
  const std::vector<finding>& findings() const { return findings_; }
  bool rejected() const { return has_rejections(findings_); }
  const std::vector<system_snapshot>& snapshots() const { return snapshots_; }

  std::string validation_report() const;

  // alpha_timeseries.csv + run_manifest.json (+ per-cell alpha_raw files
  // when retain_alphas). Refuses to run over a rejected dataset.
  command_outputs run(const std::string& out_dir, int jobs);

  // cascade_trace.csv for one seeded cascade; with profile also
  // alpha_profile.csv and size_groups.csv (full m-simulation per-bank
  // averages). structure_filter picks the configured structure by name.
  command_outputs shock(month_t month, const std::string& bank_id, bool want_trace,
                        bool want_profile, const std::optional<std::string>& structure_filter,
                        const std::string& out_dir, int jobs);

  // matrix_raw.csv, matrix_scaled.csv, matrix_summary.csv for one month and
  // one configured structure.
  command_outputs matrix(month_t month, const std::optional<std::string>& structure_filter,
                         const std::string& out_dir);

private:
  const system_snapshot& snapshot_at(month_t month) const;
  const structure_spec& pick_structure(const std::optional<std::string>& filter) const;
  void require_clean() const;

  run_config config_;
  std::vector<finding> findings_;
  std::vector<system_snapshot> snapshots_;
};

}  // namespace contagion
