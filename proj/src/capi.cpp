#include "contagion.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "contagion/engine.hpp"

using namespace contagion;

namespace {

thread_local std::string last_error_message;

void set_last_error(const std::string& message) { last_error_message = message; }

contagion_status status_from(errc code) {
  switch (code) {
    case errc::parse_error:
    case errc::data_error:
      return CONTAGION_VALIDATION_FAILED;
    case errc::io_error:
      return CONTAGION_IO_ERROR;
    case errc::invalid_argument:
      return CONTAGION_INVALID_ARGUMENT;
    case errc::internal_error:
      return CONTAGION_INTERNAL_ERROR;
  }
  return CONTAGION_INTERNAL_ERROR;
}

// Runs fn, translating exceptions into statuses and the thread-local message.
template <typename Fn>
contagion_status guarded(Fn&& fn) {
  try {
    fn();
    return CONTAGION_OK;
  } catch (const error& e) {
    set_last_error(e.what());
    return status_from(e.code());
  } catch (const std::bad_alloc&) {
    set_last_error("out of memory");
    return CONTAGION_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    set_last_error(e.what());
    return CONTAGION_INTERNAL_ERROR;
  } catch (...) {
    set_last_error("unknown error");
    return CONTAGION_INTERNAL_ERROR;
  }
}

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) return nullptr;
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

}  // namespace

struct contagion_engine {
  explicit contagion_engine(run_config config) : impl(std::move(config)) {}
  engine impl;
};

extern "C" {

const char* contagion_version(void) { return "1.0.0"; }

const char* contagion_last_error(void) { return last_error_message.c_str(); }

void contagion_string_free(char* text) { std::free(text); }

contagion_engine* contagion_engine_create(const char* config_json, const char* base_dir) {
  if (config_json == nullptr) {
    set_last_error("config_json must not be NULL");
    return nullptr;
  }
  contagion_engine* handle = nullptr;
  contagion_status status = guarded([&] {
    run_config config = parse_run_config(config_json, base_dir ? base_dir : "");
    handle = new contagion_engine(std::move(config));
  });
  return status == CONTAGION_OK ? handle : nullptr;
}

void contagion_engine_destroy(contagion_engine* engine) { delete engine; }

contagion_status contagion_engine_validate(contagion_engine* engine, char** report_out) {
  if (engine == nullptr) {
    set_last_error("engine must not be NULL");
    return CONTAGION_INVALID_ARGUMENT;
  }
  return guarded([&] {
    std::string report = engine->impl.validation_report();
    if (report_out != nullptr) *report_out = copy_string(report);
    if (engine->impl.rejected()) fail(errc::data_error, "dataset has rejections");
  });
}

contagion_status contagion_engine_run(contagion_engine* engine, const char* out_dir, int jobs) {
  if (engine == nullptr || out_dir == nullptr) {
    set_last_error("engine and out_dir must not be NULL");
    return CONTAGION_INVALID_ARGUMENT;
  }
  return guarded([&] { engine->impl.run(out_dir, jobs); });
}

contagion_status contagion_engine_shock(contagion_engine* engine, const char* month,
                                        const char* bank_id, int with_trace, int with_profile,
                                        const char* structure, const char* out_dir, int jobs) {
  if (engine == nullptr || month == nullptr || bank_id == nullptr || out_dir == nullptr) {
    set_last_error("engine, month, bank_id, and out_dir must not be NULL");
    return CONTAGION_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto parsed = parse_month(month);
    if (!parsed) fail(errc::invalid_argument, std::string("bad month \"") + month + "\"");
    std::optional<std::string> filter;
    if (structure != nullptr) filter = structure;
    engine->impl.shock(*parsed, bank_id, with_trace != 0, with_profile != 0, filter, out_dir,
                       jobs);
  });
}

contagion_status contagion_engine_matrix(contagion_engine* engine, const char* month,
                                         const char* structure, const char* out_dir) {
  if (engine == nullptr || month == nullptr || out_dir == nullptr) {
    set_last_error("engine, month, and out_dir must not be NULL");
    return CONTAGION_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto parsed = parse_month(month);
    if (!parsed) fail(errc::invalid_argument, std::string("bad month \"") + month + "\"");
    std::optional<std::string> filter;
    if (structure != nullptr) filter = structure;
    engine->impl.matrix(*parsed, filter, out_dir);
  });
}

contagion_status contagion_probability_matrix(int kind, int n, const double* assets,
                                              double base_p, double target_p_bar, double* out) {
  if (assets == nullptr || out == nullptr) {
    set_last_error("assets and out must not be NULL");
    return CONTAGION_INVALID_ARGUMENT;
  }
  if (kind < 0 || kind >= structure_kind_count) {
    set_last_error("unknown structure kind");
    return CONTAGION_INVALID_ARGUMENT;
  }
  return guarded([&] {
    std::vector<double> asset_vec(assets, assets + n);
    probability_matrix m =
        raw_probabilities(static_cast<structure_kind>(kind), asset_vec, base_p);
    if (target_p_bar > 0.0) m = scale_probabilities(std::move(m), target_p_bar);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(i) * n + j] = m.at(i, j);
    }
  });
}

contagion_status contagion_run_cascade(int n, const double* buckets, const double* capitals,
                                       const uint8_t* adjacency, int initiator, double s,
                                       double u, double g_s, double g_m, double g_l,
                                       double delta, int* theta_out, double* alpha_out) {
  if (buckets == nullptr || capitals == nullptr || adjacency == nullptr) {
    set_last_error("buckets, capitals, and adjacency must not be NULL");
    return CONTAGION_INVALID_ARGUMENT;
  }
  return guarded([&] {
    if (n < 2) fail(errc::invalid_argument, "need at least two banks");
    if (initiator < 0 || initiator >= n) fail(errc::invalid_argument, "initiator out of range");
    std::vector<bank_balance_sheet> sheets(n);
    for (int i = 0; i < n; ++i) {
      // Synthetic ids preserving the caller's indexing: build_system_snapshot
      // sorts by assets, so the engine-facing order is re-derived below.
      sheets[i].bank_id = "bank_" + std::to_string(i);
      sheets[i].month = 0;
      sheets[i].buckets = {buckets[i * 3 + 0], buckets[i * 3 + 1], buckets[i * 3 + 2]};
      sheets[i].capital = capitals[i];
    }
    system_snapshot snapshot = build_system_snapshot(std::move(sheets));
    // Map caller index -> node index after the sort.
    std::vector<int> node_of(n, -1);
    for (int node = 0; node < n; ++node) {
      const std::string& id = snapshot.banks[node].bank_id;
      int caller = std::stoi(id.substr(5));
      node_of[caller] = node;
    }
    directed_graph graph = make_graph(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && adjacency[static_cast<std::size_t>(i) * n + j] != 0) {
          add_edge(graph, node_of[i], node_of[j]);
        }
      }
    }
    scenario_config scenario{s, u, g_s, g_m, g_l, delta};
    cascade_result outcome = run_cascade(snapshot, graph, node_of[initiator], scenario);
    if (theta_out != nullptr) *theta_out = outcome.theta;
    if (alpha_out != nullptr) *alpha_out = outcome.alpha;
  });
}

}  // extern "C"
