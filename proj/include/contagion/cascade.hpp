#pragma once

#include <vector>

#include "contagion/balance_sheets.hpp"
#include "contagion/network.hpp"

namespace contagion {

struct scenario_config {
  double s = 0.4;       // initial shock, fraction of the shocked bank's assets
  double u = 0.3;       // share of a shortfall levied on the survivors
  double g_s = 0.015;   // liquidity write-down rates per bucket
  double g_m = 0.015;
  double g_l = 0.015;
  double delta = 0.015; // proximity (trust) factor

  double g(int bucket) const { return bucket == 0 ? g_s : bucket == 1 ? g_m : g_l; }
};

// Throws error(invalid_argument) unless s in (0,1], u in [0,1], g_* >= 0,
// delta >= 0, and everything is finite.
void validate_scenario(const scenario_config& config);

struct trace_row {
  int round = 0;  // 0 is the initial shock; propagation rounds count from 1
  int bank = 0;
  double loss_recap = 0.0;
  double loss_liquidity = 0.0;
  double loss_proximity = 0.0;
  double capital_after = 0.0;
  bool defaulted = false;
};

struct cascade_result {
  int theta = 0;       // defaults including the initiator
  double alpha = 0.0;  // theta / N
  int rounds = 0;      // propagation rounds executed (not counting the shock)
  std::vector<trace_row> trace;  // filled only when requested
};

struct shock_outcome {
  bool defaulted = false;
  double shortfall = 0.0;
};

// S = s * (b0 + b1 + b2). Default when S >= capital (capital exhausted to
// zero counts as failure); otherwise capital -= S and every bucket is scaled
// by (1 - s).
shock_outcome apply_initial_shock(bucket_array& buckets, double& capital, double s);

// Levy u * shortfall split across survivors pro rata by total assets;
// returned losses sum to u * shortfall.
std::vector<double> recap_losses(double shortfall, double u,
                                 const std::vector<double>& alive_assets);

// One bank's loss from a single defaulter's liquidity shock:
// sum_e b[e] * (1 - exp(-g_e)).
double liquidity_loss(const bucket_array& buckets, const scenario_config& config);

// One bank's loss from a single defaulter's proximity shock at graph
// distance d: sum_e b[e] * (1 - exp(-delta / d)); d = distance_unreachable
// or delta = 0 gives zero.
double proximity_loss(const bucket_array& buckets, int distance, double delta);

// Run one full cascade from one initiator.
//
// Round semantics: every bank that defaulted in the previous round is
// processed in ascending node order against the same start-of-round alive
// set. Per defaulter, each survivor's recapitalisation loss uses
// start-of-round assets, while liquidity and proximity losses read the
// survivor's current buckets (so same-round defaulters compound
// multiplicatively on the buckets). Buckets are written down per defaulter:
// each bucket loses its liquidity part, its proximity part, and a pro-rata
// share of the recapitalisation levy, floored at zero. Capital is only
// compared at round end: survivors whose accumulated round loss reaches
// their start-of-round capital default together, carrying loss - capital as
// the next round's shortfall. Defaulted banks leave the graph, so distances
// are recomputed per defaulter over the survivors plus that defaulter.
//
// The trace (when requested) contains one row for the initiator (round 0)
// and one row per survivor per round, defaulters marked.
cascade_result run_cascade(const system_snapshot& snapshot, const directed_graph& graph,
                           int initiator, const scenario_config& config,
                           bool want_trace = false);

}  // namespace contagion
