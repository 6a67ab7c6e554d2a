// Command-line front end. Talks to the engine exclusively through the C API;
// config handling happens here so flag overrides stay a CLI concern.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "contagion.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_runtime = 2;

struct cli_options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::optional<std::string> out_dir;
  std::optional<std::string> months;
  std::optional<std::string> structure;
  bool trace = false;
  bool profile = false;
  bool clamp_negative_buckets = false;
  std::string bank_id;
};

void add_common_flags(CLI::App* cmd, cli_options& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config or run manifest")->required();
  cmd->add_option("--seed", opts.seed,
                  "master seed (overrides config; env CONTAGION_SEED is the fallback)");
  cmd->add_option("--jobs", opts.jobs, "worker threads (output is identical for any value)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", opts.out_dir, "output directory (overrides config out_dir)");
  cmd->add_option("--months", opts.months, "month filter, YYYY-MM or YYYY-MM..YYYY-MM");
  cmd->add_flag("--clamp-negative-buckets", opts.clamp_negative_buckets,
                "floor negative asset buckets at zero instead of rejecting them");
}

int exit_code_for(contagion_status status) {
  switch (status) {
    case CONTAGION_OK:
      return exit_ok;
    case CONTAGION_VALIDATION_FAILED:
      return exit_validation;
    default:
      return exit_runtime;
  }
}

int fail_runtime(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return exit_runtime;
}

struct merged_config {
  std::string text;
  std::string out_dir = ".";           // --out, else config out_dir, else "."
  std::optional<std::string> months;   // --months, else config months
};

// Applies flag overrides on top of the config document. Precedence for the
// seed: --seed, then config, then CONTAGION_SEED, then the built-in default.
std::optional<merged_config> merge_config(const cli_options& opts, std::string& error_out) {
  std::ifstream in(opts.config_path, std::ios::binary);
  if (!in) {
    error_out = "cannot open config " + opts.config_path;
    return std::nullopt;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();

  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(buffer.str());
  } catch (const nlohmann::json::exception& e) {
    error_out = opts.config_path + ": " + e.what();
    return std::nullopt;
  }
  if (!doc.is_object()) {
    error_out = opts.config_path + ": top level must be a JSON object";
    return std::nullopt;
  }
  if (doc.contains("command") && doc.contains("config")) doc = doc.at("config");
  if (!doc.is_object()) {
    error_out = opts.config_path + ": manifest \"config\" must be an object";
    return std::nullopt;
  }

  if (opts.seed) {
    doc["seed"] = *opts.seed;
  } else if (!doc.contains("seed")) {
    if (const char* env = std::getenv("CONTAGION_SEED")) {
      try {
        doc["seed"] = std::stoull(env);
      } catch (...) {
        error_out = std::string("CONTAGION_SEED is not an unsigned integer: ") + env;
        return std::nullopt;
      }
    }
  }
  if (opts.months) doc["months"] = *opts.months;
  if (opts.clamp_negative_buckets) doc["clamp_negative_buckets"] = true;

  merged_config merged;
  if (opts.out_dir) {
    merged.out_dir = *opts.out_dir;
  } else if (doc.contains("out_dir") && doc.at("out_dir").is_string()) {
    merged.out_dir = doc.at("out_dir").get<std::string>();
  }
  if (doc.contains("months") && doc.at("months").is_string()) {
    merged.months = doc.at("months").get<std::string>();
  }
  merged.text = doc.dump();
  return merged;
}

struct engine_handle {
  contagion_engine* ptr = nullptr;
  ~engine_handle() { contagion_engine_destroy(ptr); }
};

int make_engine(const merged_config& merged, const cli_options& opts, engine_handle& handle) {
  const std::string base_dir =
      std::filesystem::path(opts.config_path).parent_path().string();
  handle.ptr = contagion_engine_create(merged.text.c_str(), base_dir.c_str());
  if (handle.ptr == nullptr) return fail_runtime(contagion_last_error());
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"banking-system contagion simulator"};
  app.require_subcommand(1);

  cli_options opts;
  auto* validate_cmd = app.add_subcommand("validate", "check data files and report findings");
  add_common_flags(validate_cmd, opts);

  auto* run_cmd = app.add_subcommand("run", "systemic risk time series over months and structures");
  add_common_flags(run_cmd, opts);

  auto* shock_cmd = app.add_subcommand("shock", "single-bank shock: cascade trace and profile");
  add_common_flags(shock_cmd, opts);
  shock_cmd->add_option("bank", opts.bank_id, "initiating bank id")->required();
  shock_cmd->add_option("--structure", opts.structure, "structure name from the config");
  shock_cmd->add_flag("--trace", opts.trace, "write the cascade round trace");
  shock_cmd->add_flag("--profile", opts.profile, "write per-bank averages and size groups");

  auto* matrix_cmd = app.add_subcommand("matrix", "export connection probability matrices");
  add_common_flags(matrix_cmd, opts);
  matrix_cmd->add_option("--structure", opts.structure, "structure name from the config");

  CLI11_PARSE(app, argc, argv);

  std::string merge_error;
  auto merged = merge_config(opts, merge_error);
  if (!merged) return fail_runtime(merge_error);

  engine_handle engine;
  if (int rc = make_engine(*merged, opts, engine); rc != exit_ok) return rc;

  if (app.got_subcommand(validate_cmd)) {
    char* report = nullptr;
    contagion_status status = contagion_engine_validate(engine.ptr, &report);
    if (report != nullptr) {
      std::cout << report;
      contagion_string_free(report);
    }
    if (status != CONTAGION_OK && status != CONTAGION_VALIDATION_FAILED) {
      std::cerr << "error: " << contagion_last_error() << "\n";
    }
    return exit_code_for(status);
  }

  if (app.got_subcommand(run_cmd)) {
    contagion_status status = contagion_engine_run(engine.ptr, merged->out_dir.c_str(), opts.jobs);
    if (status != CONTAGION_OK) {
      std::cerr << "error: " << contagion_last_error() << "\n";
      return exit_code_for(status);
    }
    std::cout << "wrote alpha_timeseries.csv and run_manifest.json to " << merged->out_dir << "\n";
    return exit_ok;
  }

  // shock and matrix address one month; reuse --months with a single-month value.
  auto single_month = [&]() -> std::optional<std::string> {
    if (!merged->months) return std::nullopt;
    auto sep = merged->months->find("..");
    if (sep == std::string::npos) return merged->months;
    std::string first = merged->months->substr(0, sep);
    std::string last = merged->months->substr(sep + 2);
    if (first == last) return first;
    return std::nullopt;
  };

  if (app.got_subcommand(shock_cmd) || app.got_subcommand(matrix_cmd)) {
    auto month = single_month();
    if (!month) {
      return fail_runtime("this command needs one month: pass --months YYYY-MM");
    }
    contagion_status status;
    if (app.got_subcommand(shock_cmd)) {
      status = contagion_engine_shock(engine.ptr, month->c_str(), opts.bank_id.c_str(),
                                      opts.trace ? 1 : 0, opts.profile ? 1 : 0,
                                      opts.structure ? opts.structure->c_str() : nullptr,
                                      merged->out_dir.c_str(), opts.jobs);
    } else {
      status = contagion_engine_matrix(engine.ptr, month->c_str(),
                                       opts.structure ? opts.structure->c_str() : nullptr,
                                       merged->out_dir.c_str());
    }
    if (status != CONTAGION_OK) {
      std::cerr << "error: " << contagion_last_error() << "\n";
      return exit_code_for(status);
    }
    std::cout << "outputs written to " << merged->out_dir << "\n";
    return exit_ok;
  }

  return exit_runtime;  // unreachable: a subcommand is required
}
