#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "contagion/cascade.hpp"

namespace contagion {

struct simulation_plan {
  structure_spec structure;
  scenario_config scenario;
  int m = 2000;
  std::uint64_t master_seed = 0;
};

struct simulation_result {
  int n_banks = 0;
  int m = 0;
  double alpha_bar = 0.0;             // mean over simulations of alpha
  std::vector<double> alpha_bar_n;    // mean over simulations of theta_n / N, per initiator
  std::vector<double> alphas;         // per-simulation alpha, kept only on request
};

struct simulation_row {
  double alpha = 0.0;          // sum_n theta_n / N^2 for one sampled graph
  std::vector<int> theta;      // theta_n per initiating bank
};

// One graph sample, every bank once as initiator against a fresh copy of the
// snapshot. The stream is consumed only by edge sampling.
simulation_row run_simulation(const system_snapshot& snapshot, const structure_spec& structure,
                              const scenario_config& scenario, rng_stream& rng);

// m independent simulations; simulation k runs on a stream seeded
// derive_seed(master_seed, k), and results are reduced in index order, so
// the result is bit-identical for any jobs count.
simulation_result run_plan(const system_snapshot& snapshot, const simulation_plan& plan,
                           int jobs = 1, bool retain_alphas = false);

struct timeseries_cell {
  month_t month = 0;
  structure_kind kind = structure_kind::erdos_renyi;
  double alpha_bar = 0.0;
  std::uint64_t seed = 0;  // the derived per-cell seed, echoed for audit
};

// One cell per (month, structure). Cell seeds key on the absolute month
// number and the structure kind's fixed id, so adding months or structures
// never perturbs existing cells.
std::vector<timeseries_cell> run_time_series(const std::vector<system_snapshot>& snapshots,
                                             const std::vector<structure_spec>& structures,
                                             const scenario_config& scenario, int m,
                                             std::uint64_t master_seed, int jobs = 1);

std::uint64_t time_series_cell_seed(std::uint64_t master_seed, month_t month,
                                    structure_kind kind);

struct size_group {
  std::string label;
  int rank_lo = 0;  // 1-based asset ranks, inclusive
  int rank_hi = 0;
  double mean_alpha_bar_n = 0.0;
};

// Boundaries are the last rank of each group except the final one, e.g.
// {4, 5, 13} splits ranks into 1-4, 5, 6-13, 14-N. Must be strictly
// increasing and below N.
std::vector<size_group> size_group_profile(const simulation_result& result,
                                           const std::vector<int>& boundaries);

// Largest four, fifth, sixth through thirteenth, remainder; degrades
// gracefully for small N by dropping boundaries that no longer fit.
std::vector<int> default_group_boundaries(int n);

}  // namespace contagion
