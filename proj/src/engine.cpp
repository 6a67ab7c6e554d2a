#include "contagion/engine.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include <json.hpp>

#include "contagion/csv.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace contagion {

namespace {

[[noreturn]] void config_fail(const std::string& message) {
  fail(errc::parse_error, "config: " + message);
}

double require_number(const ordered_json& obj, const std::string& key, double fallback,
                      bool* present = nullptr) {
  if (!obj.contains(key)) {
    if (present) *present = false;
    return fallback;
  }
  if (present) *present = true;
  const auto& v = obj.at(key);
  if (!v.is_number()) config_fail("\"" + key + "\" must be a number");
  return v.get<double>();
}

std::string require_string(const ordered_json& obj, const std::string& key) {
  if (!obj.contains(key) || !obj.at(key).is_string()) {
    config_fail("\"" + key + "\" must be a string");
  }
  return obj.at(key).get<std::string>();
}

void check_keys(const ordered_json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) config_fail("unknown key \"" + key + "\" in " + context);
  }
}

std::string resolve_path(const std::string& path, const std::string& base_dir) {
  fs::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p.lexically_normal().string();
  return (fs::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

run_config parse_run_config(const std::string& json_text, const std::string& base_dir) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    config_fail(e.what());
  }
  if (!doc.is_object()) config_fail("top level must be a JSON object");

  // A run manifest embeds the resolved config it was produced from.
  if (doc.contains("command") && doc.contains("config")) {
    doc = doc.at("config");
    if (!doc.is_object()) config_fail("manifest \"config\" must be an object");
  }

  check_keys(doc,
             {"data", "months", "structures", "scenario", "m", "seed", "out_dir",
              "clamp_negative_buckets", "retain_alphas"},
             "config");

  run_config config;

  if (!doc.contains("data") || !doc.at("data").is_object()) {
    config_fail("\"data\" must be an object");
  }
  const auto& data = doc.at("data");
  check_keys(data, {"balance_sheets", "cet1_observations", "term_mapping"}, "data");
  config.balance_csv = resolve_path(require_string(data, "balance_sheets"), base_dir);
  if (data.contains("cet1_observations")) {
    config.cet1_csv = resolve_path(require_string(data, "cet1_observations"), base_dir);
  }
  if (data.contains("term_mapping")) {
    config.mapping_path = resolve_path(require_string(data, "term_mapping"), base_dir);
  }

  if (doc.contains("months")) {
    auto range = parse_month_range(require_string(doc, "months"));
    if (!range) config_fail("\"months\" must be \"YYYY-MM\" or \"YYYY-MM..YYYY-MM\"");
    config.months = *range;
  }

  if (!doc.contains("structures") || !doc.at("structures").is_array() ||
      doc.at("structures").empty()) {
    config_fail("\"structures\" must be a non-empty array");
  }
  for (const auto& entry : doc.at("structures")) {
    if (!entry.is_object()) config_fail("structure entries must be objects");
    check_keys(entry, {"kind", "base_p", "target_p_bar"}, "structure");
    structure_spec spec;
    auto kind = parse_structure(require_string(entry, "kind"));
    if (!kind) config_fail("unknown structure kind \"" + require_string(entry, "kind") + "\"");
    spec.kind = *kind;
    spec.base_p = require_number(entry, "base_p", 0.5);
    if (!(spec.base_p >= 0.0) || spec.base_p > 1.0) {
      config_fail("structure base_p must lie in [0, 1]");
    }
    bool has_target = false;
    spec.target_p_bar = require_number(entry, "target_p_bar", 0.0, &has_target);
    if (!has_target) config_fail("structure entries need \"target_p_bar\"");
    if (!(spec.target_p_bar > 0.0) || spec.target_p_bar > 1.0) {
      config_fail("structure target_p_bar must lie in (0, 1]");
    }
    config.structures.push_back(spec);
  }

  if (doc.contains("scenario")) {
    const auto& scenario = doc.at("scenario");
    if (!scenario.is_object()) config_fail("\"scenario\" must be an object");
    check_keys(scenario, {"s", "u", "g_s", "g_m", "g_l", "delta"}, "scenario");
    config.scenario.s = require_number(scenario, "s", config.scenario.s);
    config.scenario.u = require_number(scenario, "u", config.scenario.u);
    config.scenario.g_s = require_number(scenario, "g_s", config.scenario.g_s);
    config.scenario.g_m = require_number(scenario, "g_m", config.scenario.g_m);
    config.scenario.g_l = require_number(scenario, "g_l", config.scenario.g_l);
    config.scenario.delta = require_number(scenario, "delta", config.scenario.delta);
  }
  try {
    validate_scenario(config.scenario);
  } catch (const error& e) {
    config_fail(e.what());
  }

  if (doc.contains("m")) {
    if (!doc.at("m").is_number_integer() || doc.at("m").get<std::int64_t>() < 1) {
      config_fail("\"m\" must be a positive integer");
    }
    config.m = static_cast<int>(doc.at("m").get<std::int64_t>());
  }
  if (doc.contains("seed")) {
    const auto& seed = doc.at("seed");
    if (!seed.is_number_unsigned() &&
        !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
      config_fail("\"seed\" must be an unsigned integer");
    }
    config.seed = seed.get<std::uint64_t>();
  }
  if (doc.contains("out_dir")) {
    config.out_dir = require_string(doc, "out_dir");
  }
  if (doc.contains("clamp_negative_buckets")) {
    if (!doc.at("clamp_negative_buckets").is_boolean()) {
      config_fail("\"clamp_negative_buckets\" must be a boolean");
    }
    config.clamp_negative_buckets = doc.at("clamp_negative_buckets").get<bool>();
  }
  if (doc.contains("retain_alphas")) {
    if (!doc.at("retain_alphas").is_boolean()) config_fail("\"retain_alphas\" must be a boolean");
    config.retain_alphas = doc.at("retain_alphas").get<bool>();
  }

  return config;
}

run_config load_run_config(const std::string& path) {
  const std::string text = read_text_file(path);
  return parse_run_config(text, fs::path(path).parent_path().string());
}

namespace {

ordered_json config_to_json(const run_config& config) {
  ordered_json doc;
  ordered_json data;
  data["balance_sheets"] = config.balance_csv;
  if (config.cet1_csv) data["cet1_observations"] = *config.cet1_csv;
  if (config.mapping_path) data["term_mapping"] = *config.mapping_path;
  doc["data"] = std::move(data);
  if (config.months) {
    doc["months"] = format_month(config.months->first) + ".." + format_month(config.months->last);
  }
  ordered_json structures = ordered_json::array();
  for (const auto& spec : config.structures) {
    ordered_json entry;
    entry["kind"] = std::string(structure_name(spec.kind));
    if (spec.kind == structure_kind::erdos_renyi) entry["base_p"] = spec.base_p;
    entry["target_p_bar"] = spec.target_p_bar;
    structures.push_back(std::move(entry));
  }
  doc["structures"] = std::move(structures);
  ordered_json scenario;
  scenario["s"] = config.scenario.s;
  scenario["u"] = config.scenario.u;
  scenario["g_s"] = config.scenario.g_s;
  scenario["g_m"] = config.scenario.g_m;
  scenario["g_l"] = config.scenario.g_l;
  scenario["delta"] = config.scenario.delta;
  doc["scenario"] = std::move(scenario);
  doc["m"] = config.m;
  doc["seed"] = config.master_seed();
  doc["clamp_negative_buckets"] = config.clamp_negative_buckets;
  doc["retain_alphas"] = config.retain_alphas;
  return doc;
}

// Tracks files written by one command so a failure can take its partial
// outputs down with it.
class output_batch {
public:
  explicit output_batch(const std::string& out_dir) : dir_(out_dir) {
    std::error_code ec;
    fs::create_directories(dir_.empty() ? "." : dir_, ec);
    if (ec) fail(errc::io_error, "cannot create output directory " + out_dir);
  }

  std::string write(const std::string& name, const std::string& content) {
    const std::string path = (fs::path(dir_.empty() ? "." : dir_) / name).string();
    write_text_file(path, content);
    written_.push_back(path);
    return path;
  }

  void discard() noexcept {
    for (const auto& path : written_) {
      std::error_code ec;
      fs::remove(path, ec);
    }
    written_.clear();
  }

  const std::vector<std::string>& files() const { return written_; }

private:
  std::string dir_;
  std::vector<std::string> written_;
};

std::string manifest_text(const std::string& command, const run_config& config,
                          const ordered_json& args, const ordered_json& derived,
                          const std::vector<std::string>& outputs) {
  ordered_json doc;
  doc["artifact"] = "contagion";
  doc["version"] = "1.0.0";
  doc["command"] = command;
  if (!args.empty()) doc["args"] = args;
  doc["config"] = config_to_json(config);
  doc["derived"] = derived;
  doc["outputs"] = outputs;
  return doc.dump(2) + "\n";
}

std::string bool_field(bool v) { return v ? "1" : "0"; }

std::string matrix_csv(const system_snapshot& snapshot, const probability_matrix& m) {
  std::vector<std::string> header;
  header.reserve(snapshot.banks.size());
  for (const auto& bank : snapshot.banks) header.push_back(bank.bank_id);
  std::string text = csv_join(header) + "\n";
  for (int i = 0; i < m.size(); ++i) {
    std::vector<std::string> row;
    row.reserve(m.size());
    for (int j = 0; j < m.size(); ++j) row.push_back(format_double(m.at(i, j)));
    text += csv_join(row) + "\n";
  }
  return text;
}

}  // namespace

std::string serialize_run_config(const run_config& config) {
  return config_to_json(config).dump(2) + "\n";
}

engine::engine(run_config config) : config_(std::move(config)) {
  if (config_.structures.empty()) fail(errc::parse_error, "config: no structures");
  validate_scenario(config_.scenario);
  if (config_.m < 1) fail(errc::invalid_argument, "m must be >= 1");

  // Absolute data paths keep the echoed manifest reproducible from any
  // working directory.
  auto absolute = [](std::string& path) {
    path = fs::absolute(path).lexically_normal().string();
  };
  absolute(config_.balance_csv);
  if (config_.cet1_csv) absolute(*config_.cet1_csv);
  if (config_.mapping_path) absolute(*config_.mapping_path);

  // The mapping file participates only in classification of raw line items;
  // here it is checked for existence and well-formedness so `validate` can
  // flag a broken one.
  if (config_.mapping_path) {
    try {
      load_term_mapping(*config_.mapping_path);
    } catch (const error& e) {
      if (e.code() == errc::parse_error) {
        findings_.push_back({finding::kind::rejection, *config_.mapping_path, e.what()});
      } else {
        throw;
      }
    }
  }

  dataset data = load_dataset(config_.balance_csv, config_.cet1_csv, config_.clamp_negative_buckets);
  monthly_snapshots assembled = assemble_snapshots(data, config_.months);
  findings_.insert(findings_.end(), std::make_move_iterator(assembled.findings.begin()),
                   std::make_move_iterator(assembled.findings.end()));
  snapshots_ = std::move(assembled.snapshots);
}

std::string engine::validation_report() const {
  std::string report;
  std::size_t rejections = 0, exclusions = 0;
  for (const auto& f : findings_) {
    if (f.severity == finding::kind::rejection) ++rejections;
    if (f.severity == finding::kind::exclusion) ++exclusions;
  }
  report += "dataset: " + config_.balance_csv + "\n";
  if (!snapshots_.empty()) {
    report += "months: " + format_month(snapshots_.front().month) + ".." +
              format_month(snapshots_.back().month) + " (" + std::to_string(snapshots_.size()) +
              " usable)\n";
  } else {
    report += "months: none usable\n";
  }
  auto section = [&](finding::kind kind, const char* title) {
    bool any = false;
    for (const auto& f : findings_) {
      if (f.severity != kind) continue;
      if (!any) {
        report += std::string(title) + ":\n";
        any = true;
      }
      report += "  " + f.where + ": " + f.message + "\n";
    }
  };
  section(finding::kind::rejection, "rejections");
  section(finding::kind::exclusion, "exclusions");
  section(finding::kind::note, "coverage");
  report += "summary: " + std::to_string(rejections) + " rejection(s), " +
            std::to_string(exclusions) + " exclusion(s)\n";
  report += std::string("status: ") + (rejections ? "rejected" : "ok") + "\n";
  return report;
}

void engine::require_clean() const {
  if (rejected()) {
    fail(errc::data_error, "dataset has rejections; run `validate` for details");
  }
  if (snapshots_.empty()) fail(errc::data_error, "no usable months in the dataset");
}

const system_snapshot& engine::snapshot_at(month_t month) const {
  for (const auto& snapshot : snapshots_) {
    if (snapshot.month == month) return snapshot;
  }
  fail(errc::invalid_argument, "no snapshot for month " + format_month(month));
}

const structure_spec& engine::pick_structure(const std::optional<std::string>& filter) const {
  if (!filter) return config_.structures.front();
  auto kind = parse_structure(*filter);
  if (!kind) fail(errc::invalid_argument, "unknown structure \"" + *filter + "\"");
  for (const auto& spec : config_.structures) {
    if (spec.kind == *kind) return spec;
  }
  fail(errc::invalid_argument, "structure \"" + *filter + "\" is not in the config");
}

command_outputs engine::run(const std::string& out_dir, int jobs) {
  require_clean();
  output_batch batch(out_dir);
  try {
    std::string csv = "month,structure,alpha_bar\n";
    ordered_json cells = ordered_json::array();
    for (const auto& snapshot : snapshots_) {
      for (const auto& spec : config_.structures) {
        simulation_plan plan;
        plan.structure = spec;
        plan.scenario = config_.scenario;
        plan.m = config_.m;
        plan.master_seed = time_series_cell_seed(config_.master_seed(), snapshot.month, spec.kind);
        simulation_result result = run_plan(snapshot, plan, jobs, config_.retain_alphas);

        const std::string month_tag = format_month(snapshot.month);
        const std::string kind_name{structure_name(spec.kind)};
        csv += month_tag + "," + kind_name + "," + format_double(result.alpha_bar) + "\n";
        ordered_json cell;
        cell["month"] = month_tag;
        cell["structure"] = kind_name;
        cell["seed"] = plan.master_seed;
        cells.push_back(std::move(cell));

        if (config_.retain_alphas) {
          std::string raw = "sim_index,alpha\n";
          for (std::size_t k = 0; k < result.alphas.size(); ++k) {
            raw += std::to_string(k) + "," + format_double(result.alphas[k]) + "\n";
          }
          batch.write("alpha_raw_" + month_tag + "_" + kind_name + ".csv", raw);
        }
      }
    }
    batch.write("alpha_timeseries.csv", csv);

    ordered_json derived;
    derived["n_months"] = snapshots_.size();
    derived["cells"] = std::move(cells);
    std::vector<std::string> outputs = batch.files();
    batch.write("run_manifest.json",
                manifest_text("run", config_, ordered_json::object(), derived, outputs));
    return {batch.files()};
  } catch (...) {
    batch.discard();
    throw;
  }
}

command_outputs engine::shock(month_t month, const std::string& bank_id, bool want_trace,
                              bool want_profile, const std::optional<std::string>& structure_filter,
                              const std::string& out_dir, int jobs) {
  require_clean();
  const system_snapshot& snapshot = snapshot_at(month);
  const int initiator = snapshot.index_of(bank_id);
  if (initiator < 0) {
    fail(errc::invalid_argument,
         "bank \"" + bank_id + "\" is not in the " + format_month(month) + " system");
  }
  const structure_spec& spec = pick_structure(structure_filter);
  const std::uint64_t cell_seed = time_series_cell_seed(config_.master_seed(), month, spec.kind);

  output_batch batch(out_dir);
  try {
    ordered_json derived;
    derived["cell_seed"] = cell_seed;
    derived["initiator_index"] = initiator;

    // The audited cascade is simulation 0 of the cell's stream.
    {
      rng_stream stream(derive_seed(cell_seed, 0));
      probability_matrix probabilities = scale_probabilities(
          raw_probabilities(spec.kind, snapshot.asset_vector(), spec.base_p), spec.target_p_bar);
      directed_graph graph = sample_edges(probabilities, stream);
      cascade_result outcome = run_cascade(snapshot, graph, initiator, config_.scenario, true);
      derived["theta"] = outcome.theta;
      derived["alpha"] = outcome.alpha;

      if (want_trace) {
        std::string csv =
            "round,bank_id,loss_recap,loss_liquidity,loss_proximity,capital_after,defaulted\n";
        for (const auto& row : outcome.trace) {
          const bool all_zero =
              row.loss_recap == 0.0 && row.loss_liquidity == 0.0 && row.loss_proximity == 0.0;
          if (row.round > 0 && all_zero && !row.defaulted) continue;
          csv += std::to_string(row.round) + "," + csv_quote(snapshot.banks[row.bank].bank_id) +
                 "," + format_double(row.loss_recap) + "," + format_double(row.loss_liquidity) +
                 "," + format_double(row.loss_proximity) + "," +
                 format_double(row.capital_after) + "," + bool_field(row.defaulted) + "\n";
        }
        batch.write("cascade_trace.csv", csv);
      }
    }

    if (want_profile) {
      simulation_plan plan;
      plan.structure = spec;
      plan.scenario = config_.scenario;
      plan.m = config_.m;
      plan.master_seed = cell_seed;
      simulation_result result = run_plan(snapshot, plan, jobs, config_.retain_alphas);

      std::string profile = "bank_id,assets,alpha_bar_n\n";
      for (int i = 0; i < snapshot.size(); ++i) {
        profile += csv_quote(snapshot.banks[i].bank_id) + "," +
                   format_double(snapshot.banks[i].total_assets()) + "," +
                   format_double(result.alpha_bar_n[i]) + "\n";
      }
      batch.write("alpha_profile.csv", profile);

      std::string groups_csv = "group,rank_lo,rank_hi,mean_alpha_bar_n\n";
      for (const auto& group :
           size_group_profile(result, default_group_boundaries(snapshot.size()))) {
        groups_csv += group.label + "," + std::to_string(group.rank_lo) + "," +
                      std::to_string(group.rank_hi) + "," +
                      format_double(group.mean_alpha_bar_n) + "\n";
      }
      batch.write("size_groups.csv", groups_csv);

      if (config_.retain_alphas) {
        std::string raw = "sim_index,alpha\n";
        for (std::size_t k = 0; k < result.alphas.size(); ++k) {
          raw += std::to_string(k) + "," + format_double(result.alphas[k]) + "\n";
        }
        batch.write("alpha_raw.csv", raw);
      }
      derived["alpha_bar"] = result.alpha_bar;
    }

    ordered_json args;
    args["month"] = format_month(month);
    args["bank_id"] = bank_id;
    args["structure"] = std::string(structure_name(spec.kind));
    args["trace"] = want_trace;
    args["profile"] = want_profile;
    std::vector<std::string> outputs = batch.files();
    batch.write("run_manifest.json", manifest_text("shock", config_, args, derived, outputs));
    return {batch.files()};
  } catch (...) {
    batch.discard();
    throw;
  }
}

command_outputs engine::matrix(month_t month, const std::optional<std::string>& structure_filter,
                               const std::string& out_dir) {
  require_clean();
  const system_snapshot& snapshot = snapshot_at(month);
  const structure_spec& spec = pick_structure(structure_filter);

  probability_matrix raw = raw_probabilities(spec.kind, snapshot.asset_vector(), spec.base_p);
  const double p_bar_0 = average_probability(raw);
  probability_matrix scaled = scale_probabilities(raw, spec.target_p_bar);
  const double achieved = average_probability(scaled);

  output_batch batch(out_dir);
  try {
    batch.write("matrix_raw.csv", matrix_csv(snapshot, raw));
    batch.write("matrix_scaled.csv", matrix_csv(snapshot, scaled));
    std::string summary = "month,structure,p_bar_0,target_p_bar,achieved_p_bar\n";
    summary += format_month(month) + "," + std::string(structure_name(spec.kind)) + "," +
               format_double(p_bar_0) + "," + format_double(spec.target_p_bar) + "," +
               format_double(achieved) + "\n";
    batch.write("matrix_summary.csv", summary);

    ordered_json args;
    args["month"] = format_month(month);
    args["structure"] = std::string(structure_name(spec.kind));
    ordered_json derived;
    derived["p_bar_0"] = p_bar_0;
    derived["achieved_p_bar"] = achieved;
    std::vector<std::string> outputs = batch.files();
    batch.write("run_manifest.json", manifest_text("matrix", config_, args, derived, outputs));
    return {batch.files()};
  } catch (...) {
    batch.discard();
    throw;
  }
}

}  // namespace contagion
