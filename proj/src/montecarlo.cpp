#include "contagion/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "contagion/errors.hpp"

namespace contagion {

simulation_row run_simulation(const system_snapshot& snapshot, const structure_spec& structure,
                              const scenario_config& scenario, rng_stream& rng) {
  const int n = snapshot.size();
  probability_matrix probabilities =
      scale_probabilities(raw_probabilities(structure.kind, snapshot.asset_vector(), structure.base_p),
                          structure.target_p_bar);
  const directed_graph graph = sample_edges(probabilities, rng);

  simulation_row row;
  row.theta.resize(n);
  std::int64_t total = 0;
  for (int initiator = 0; initiator < n; ++initiator) {
    cascade_result outcome = run_cascade(snapshot, graph, initiator, scenario);
    row.theta[initiator] = outcome.theta;
    total += outcome.theta;
  }
  row.alpha = static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(n));
  return row;
}

simulation_result run_plan(const system_snapshot& snapshot, const simulation_plan& plan,
                           int jobs, bool retain_alphas) {
  if (plan.m < 1) fail(errc::invalid_argument, "simulation count m must be >= 1");
  validate_scenario(plan.scenario);
  const int n = snapshot.size();
  const int m = plan.m;

  std::vector<simulation_row> rows(m);
  const int workers = std::max(1, std::min(jobs, m));
  if (workers == 1) {
    for (int k = 0; k < m; ++k) {
      rng_stream stream(derive_seed(plan.master_seed, static_cast<std::uint64_t>(k)));
      rows[k] = run_simulation(snapshot, plan.structure, plan.scenario, stream);
    }
  } else {
    // Work stealing over simulation indices; every simulation's stream is
    // derived from its index alone, so scheduling cannot affect results.
    std::atomic<int> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const int k = cursor.fetch_add(1);
          if (k >= m) return;
          rng_stream stream(derive_seed(plan.master_seed, static_cast<std::uint64_t>(k)));
          rows[k] = run_simulation(snapshot, plan.structure, plan.scenario, stream);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  // Reduce in simulation order with integer accumulators: the aggregate is
  // exact, so it cannot depend on how the simulations were scheduled.
  simulation_result result;
  result.n_banks = n;
  result.m = m;
  std::int64_t grand_theta = 0;
  std::vector<std::int64_t> theta_sum(n, 0);
  if (retain_alphas) result.alphas.reserve(m);
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < n; ++i) {
      theta_sum[i] += rows[k].theta[i];
      grand_theta += rows[k].theta[i];
    }
    if (retain_alphas) result.alphas.push_back(rows[k].alpha);
  }
  result.alpha_bar = static_cast<double>(grand_theta) /
                     (static_cast<double>(m) * static_cast<double>(n) * static_cast<double>(n));
  result.alpha_bar_n.resize(n);
  for (int i = 0; i < n; ++i) {
    result.alpha_bar_n[i] =
        static_cast<double>(theta_sum[i]) / (static_cast<double>(m) * static_cast<double>(n));
  }
  return result;
}

std::uint64_t time_series_cell_seed(std::uint64_t master_seed, month_t month,
                                    structure_kind kind) {
  return derive_seed(derive_seed(master_seed, static_cast<std::uint64_t>(month)),
                     static_cast<std::uint64_t>(static_cast<int>(kind)));
}

std::vector<timeseries_cell> run_time_series(const std::vector<system_snapshot>& snapshots,
                                             const std::vector<structure_spec>& structures,
                                             const scenario_config& scenario, int m,
                                             std::uint64_t master_seed, int jobs) {
  if (snapshots.empty()) fail(errc::invalid_argument, "need at least one monthly snapshot");
  if (structures.empty()) fail(errc::invalid_argument, "need at least one structure");
  std::vector<timeseries_cell> cells;
  cells.reserve(snapshots.size() * structures.size());
  for (const auto& snapshot : snapshots) {
    for (const auto& structure : structures) {
      simulation_plan plan;
      plan.structure = structure;
      plan.scenario = scenario;
      plan.m = m;
      plan.master_seed = time_series_cell_seed(master_seed, snapshot.month, structure.kind);
      simulation_result result = run_plan(snapshot, plan, jobs);
      cells.push_back({snapshot.month, structure.kind, result.alpha_bar, plan.master_seed});
    }
  }
  return cells;
}

std::vector<int> default_group_boundaries(int n) {
  std::vector<int> boundaries;
  for (int b : {4, 5, 13}) {
    if (b < n) boundaries.push_back(b);
  }
  return boundaries;
}

std::vector<size_group> size_group_profile(const simulation_result& result,
                                           const std::vector<int>& boundaries) {
  const int n = result.n_banks;
  if (n < 1 || static_cast<int>(result.alpha_bar_n.size()) != n) {
    fail(errc::invalid_argument, "result carries no per-bank averages");
  }
  int previous = 0;
  for (int b : boundaries) {
    if (b <= previous || b >= n) {
      fail(errc::invalid_argument, "group boundaries must be strictly increasing and below N");
    }
    previous = b;
  }

  static const char* labels[4] = {"large", "medium", "small", "very_small"};
  std::vector<size_group> groups;
  int lo = 1;
  for (std::size_t gi = 0; gi <= boundaries.size(); ++gi) {
    const int hi = gi < boundaries.size() ? boundaries[gi] : n;
    double sum = 0.0;
    for (int rank = lo; rank <= hi; ++rank) sum += result.alpha_bar_n[rank - 1];
    size_group group;
    group.label = gi < 4 && boundaries.size() == 3 ? labels[gi] : "group_" + std::to_string(gi + 1);
    group.rank_lo = lo;
    group.rank_hi = hi;
    group.mean_alpha_bar_n = sum / static_cast<double>(hi - lo + 1);
    groups.push_back(std::move(group));
    lo = hi + 1;
  }
  return groups;
}

}  // namespace contagion
