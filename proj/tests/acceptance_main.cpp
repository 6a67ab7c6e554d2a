// Acceptance gate. Runs ten end-to-end checks against hard numeric targets
// and prints one PASS/FAIL line per check. Exits nonzero if any check fails.
//
// Usage: acceptance_runner <cli-binary> <source-dir>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "contagion/balance_sheets.hpp"
#include "contagion/cascade.hpp"
#include "contagion/csv.hpp"
#include "contagion/montecarlo.hpp"
#include "contagion/network.hpp"
#include "contagion/rng.hpp"

using namespace contagion;
namespace fs = std::filesystem;

namespace {

std::string cli_path;
std::string source_dir;

struct check_result {
  bool pass = false;
  std::string detail;
};

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::string two_digits(int i) {
  std::string s = std::to_string(i);
  return s.size() < 2 ? "0" + s : s;
}

system_snapshot random_system(std::mt19937_64& rng, int n) {
  std::vector<bank_balance_sheet> sheets(n);
  for (int i = 0; i < n; ++i) {
    sheets[i].bank_id = "b" + two_digits(i);
    sheets[i].month = 0;
    for (int e = 0; e < 3; ++e) sheets[i].buckets[e] = uniform_in(rng, 1.0, 100.0);
    sheets[i].capital = uniform_in(rng, 0.02, 0.6) * sheets[i].total_assets();
  }
  return build_system_snapshot(std::move(sheets));
}

std::string format_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f s", s);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Baseline floor: 26 undercapitalised banks, negligible propagation, so
//    every cascade stops at the initiator and the indicator sits at 1/26.

check_result baseline_floor() {
  std::vector<bank_balance_sheet> sheets(26);
  for (int i = 0; i < 26; ++i) {
    const double assets = 1000.0 - 25.0 * i;
    sheets[i].bank_id = "b" + two_digits(i);
    sheets[i].month = 0;
    for (int e = 0; e < 3; ++e) sheets[i].buckets[e] = assets / 3.0;
    sheets[i].capital = 0.1 * assets;  // ratio 0.1, well under the 0.4 shock
  }
  system_snapshot snapshot = build_system_snapshot(std::move(sheets));

  simulation_plan plan;
  plan.structure = {structure_kind::erdos_renyi, 0.5, 0.5};
  plan.scenario.s = 0.4;
  plan.scenario.u = 1e-9;
  plan.scenario.g_s = plan.scenario.g_m = plan.scenario.g_l = 1e-9;
  plan.scenario.delta = 1e-9;
  plan.m = 100;
  plan.master_seed = 20260814;

  simulation_result result = run_plan(snapshot, plan, 1);
  const double expected = 1.0 / 26.0;
  const double diff = std::abs(result.alpha_bar - expected);

  std::ostringstream detail;
  detail << "alpha_bar=" << format_double(result.alpha_bar) << " vs 1/26, |diff|=" << diff
         << " (tolerance 1e-6, m=100)";
  return {diff <= 1e-6, detail.str()};
}

// ---------------------------------------------------------------------------
// 2. Zero-propagation identity: with u=g=delta=0 the indicator collapses to
//    (number of banks whose shock clears their capital) / N^2, exactly.

check_result zero_propagation_identity() {
  std::mt19937_64 rng(0xC0FFEEu);
  int exact = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 29);
    system_snapshot snapshot = random_system(rng, n);

    simulation_plan plan;
    plan.structure.kind = static_cast<structure_kind>(rng() % 6);
    plan.structure.base_p = uniform_in(rng, 0.0, 1.0);
    plan.structure.target_p_bar = uniform_in(rng, 0.05, 1.0);
    plan.scenario.s = uniform_in(rng, 0.05, 1.0);
    plan.scenario.u = 0.0;
    plan.scenario.g_s = plan.scenario.g_m = plan.scenario.g_l = 0.0;
    plan.scenario.delta = 0.0;
    plan.m = 7;
    plan.master_seed = derive_seed(0xABCD, static_cast<std::uint64_t>(trial));

    simulation_result result = run_plan(snapshot, plan, 1);

    int defaultable = 0;
    for (const auto& bank : snapshot.banks) {
      if (plan.scenario.s * bank.total_assets() >= bank.capital) ++defaultable;
    }
    const double expected =
        static_cast<double>(defaultable) / (static_cast<double>(n) * static_cast<double>(n));
    worst = std::max(worst, std::abs(result.alpha_bar - expected));
    if (result.alpha_bar == expected) ++exact;
  }
  std::ostringstream detail;
  detail << exact << "/50 systems equal defaultable/N^2 exactly, worst |diff|=" << worst;
  return {exact == 50, detail.str()};
}

// ---------------------------------------------------------------------------
// 3. Scaling: the rescaled matrix hits the target average to 1e-12, keeps
//    entries in [0,1] and a zero diagonal, and preserves entry ordering.

check_result scaling_properties() {
  std::mt19937_64 rng(0x5CA1Eu);
  const double targets[4] = {0.1, 0.5, 0.8, 1.0};
  int matrices = 0;
  double worst = 0.0;
  bool in_range = true, zero_diag = true, order_kept = true;

  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 38);
    std::vector<double> assets(n);
    for (double& a : assets) a = uniform_in(rng, 1.0, 1000.0);
    const double base_p = uniform_in(rng, 0.0, 1.0);

    for (int kind = 0; kind < structure_kind_count; ++kind) {
      probability_matrix raw =
          raw_probabilities(static_cast<structure_kind>(kind), assets, base_p);
      std::vector<int> order;
      order.reserve(static_cast<std::size_t>(n) * n - n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (i != j) order.push_back(i * n + j);
        }
      }
      auto raw_at = [&](int k) { return raw.at(k / n, k % n); };
      std::sort(order.begin(), order.end(),
                [&](int x, int y) { return raw_at(x) < raw_at(y); });

      for (double target : targets) {
        probability_matrix scaled = scale_probabilities(raw, target);
        ++matrices;
        worst = std::max(worst, std::abs(average_probability(scaled) - target));
        auto scaled_at = [&](int k) { return scaled.at(k / n, k % n); };
        for (int i = 0; i < n; ++i) {
          if (scaled.at(i, i) != 0.0) zero_diag = false;
          for (int j = 0; j < n; ++j) {
            const double p = scaled.at(i, j);
            if (!(p >= 0.0 && p <= 1.0)) in_range = false;
          }
        }
        for (std::size_t k = 1; k < order.size(); ++k) {
          const int lo = order[k - 1], hi = order[k];
          if (scaled_at(hi) < scaled_at(lo)) order_kept = false;
          if (raw_at(lo) == raw_at(hi) && scaled_at(lo) != scaled_at(hi)) order_kept = false;
        }
      }
    }
  }
  std::ostringstream detail;
  detail << matrices << " matrices, worst |avg-target|=" << worst
         << (in_range ? ", range ok" : ", RANGE BROKEN")
         << (zero_diag ? ", diagonal ok" : ", DIAGONAL BROKEN")
         << (order_kept ? ", ordering kept" : ", ORDERING BROKEN");
  return {worst <= 1e-12 && in_range && zero_diag && order_kept, detail.str()};
}

// ---------------------------------------------------------------------------
// 4. Straight-line cascade oracle: an independent flat re-derivation of the
//    cascade over 3 banks must agree bit-for-bit with run_cascade across all
//    64 directed graphs, a 27-point parameter grid, and all initiators.

namespace straightline {

struct row {
  int round;
  int bank;
  double l1, l2, l3, capital_after;
  bool defaulted;
};

struct outcome {
  int theta = 0;
  std::vector<row> rows;
};

outcome cascade3(const double buckets_in[3][3], const double caps_in[3], const bool adj[3][3],
                 int initiator, double s, double u, double g, double delta) {
  double b[3][3];
  double cap[3];
  bool alive[3];
  for (int i = 0; i < 3; ++i) {
    for (int e = 0; e < 3; ++e) b[i][e] = buckets_in[i][e];
    cap[i] = caps_in[i];
    alive[i] = true;
  }

  outcome out;
  const double a_init = b[initiator][0] + b[initiator][1] + b[initiator][2];
  const double shock = s * a_init;
  const bool hit = shock >= cap[initiator];
  double after0;
  if (hit) {
    after0 = -(shock - cap[initiator]);
  } else {
    cap[initiator] = cap[initiator] - shock;
    for (int e = 0; e < 3; ++e) b[initiator][e] = b[initiator][e] * (1.0 - s);
    after0 = cap[initiator];
  }
  out.rows.push_back({0, initiator, 0.0, 0.0, 0.0, after0, hit});
  if (!hit) return out;

  alive[initiator] = false;
  out.theta = 1;
  int pend_bank[3] = {initiator, 0, 0};
  double pend_sf[3] = {shock - caps_in[initiator], 0.0, 0.0};
  int pend_n = 1;

  const double lf = 1.0 - std::exp(-g);
  int round = 0;

  while (pend_n > 0) {
    if (!alive[0] && !alive[1] && !alive[2]) break;
    ++round;

    double a0[3] = {0, 0, 0}, c0[3] = {0, 0, 0};
    double acc1[3] = {0, 0, 0}, acc2[3] = {0, 0, 0}, acc3[3] = {0, 0, 0};
    double t0 = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (!alive[i]) continue;
      a0[i] = b[i][0] + b[i][1] + b[i][2];
      c0[i] = cap[i];
      t0 += a0[i];
    }

    for (int k = 0; k < pend_n; ++k) {
      const int q = pend_bank[k];
      const double sf = pend_sf[k];

      // all-pairs distances restricted to living intermediaries; the
      // defaulter is reachable only as an endpoint
      int d[3][3];
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) d[i][j] = i == j ? 0 : (adj[i][j] ? 1 : 99);
      }
      for (int mid = 0; mid < 3; ++mid) {
        if (!alive[mid] || mid == q) continue;
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            if (d[i][mid] + d[mid][j] < d[i][j]) d[i][j] = d[i][mid] + d[mid][j];
          }
        }
      }

      for (int i = 0; i < 3; ++i) {
        if (!alive[i]) continue;
        const double l1 = t0 > 0.0 ? u * sf * a0[i] / t0 : 0.0;
        const double bi[3] = {b[i][0], b[i][1], b[i][2]};
        const double tot = bi[0] + bi[1] + bi[2];

        double l2 = 0.0;
        for (int e = 0; e < 3; ++e) l2 += bi[e] * lf;

        const int di = d[i][q] >= 99 ? -1 : d[i][q];
        const double pf = di == -1 ? 0.0 : 1.0 - std::exp(-delta / static_cast<double>(di));
        double l3 = 0.0;
        for (int e = 0; e < 3; ++e) l3 += bi[e] * pf;

        for (int e = 0; e < 3; ++e) {
          const double w = bi[e] * lf + bi[e] * pf + (tot > 0.0 ? l1 * bi[e] / tot : 0.0);
          double nb = bi[e] - w;
          if (nb < 0.0) nb = 0.0;
          b[i][e] = nb;
        }

        acc1[i] += l1;
        acc2[i] += l2;
        acc3[i] += l3;
      }
    }

    int next_bank[3] = {0, 0, 0};
    double next_sf[3] = {0, 0, 0};
    int next_n = 0;
    for (int i = 0; i < 3; ++i) {
      if (!alive[i]) continue;
      const double total = acc1[i] + acc2[i] + acc3[i];
      const double after = c0[i] - total;
      const bool dead = total >= c0[i];
      cap[i] = after;
      out.rows.push_back({round, i, acc1[i], acc2[i], acc3[i], after, dead});
      if (dead) {
        next_bank[next_n] = i;
        next_sf[next_n] = total - c0[i];
        ++next_n;
      }
    }
    for (int k = 0; k < next_n; ++k) alive[next_bank[k]] = false;
    out.theta += next_n;
    pend_n = next_n;
    for (int k = 0; k < next_n; ++k) {
      pend_bank[k] = next_bank[k];
      pend_sf[k] = next_sf[k];
    }
  }
  return out;
}

}  // namespace straightline

check_result cascade_oracle() {
  const double buckets[3][3] = {{150.0, 100.0, 50.0}, {60.0, 50.0, 40.0}, {40.0, 30.0, 20.0}};
  const double capitals[3] = {70.0, 24.0, 36.0};

  std::vector<bank_balance_sheet> sheets(3);
  const char* ids[3] = {"a", "b", "c"};
  for (int i = 0; i < 3; ++i) {
    sheets[i].bank_id = ids[i];
    sheets[i].month = 0;
    for (int e = 0; e < 3; ++e) sheets[i].buckets[e] = buckets[i][e];
    sheets[i].capital = capitals[i];
  }
  // assets 300 > 150 > 90, so snapshot order matches the arrays above
  system_snapshot snapshot = build_system_snapshot(std::move(sheets));

  const int pair_i[6] = {0, 0, 1, 1, 2, 2};
  const int pair_j[6] = {1, 2, 0, 2, 0, 1};
  const double s_grid[3] = {0.2, 0.4, 0.8};
  const double u_grid[3] = {0.0, 0.3, 1.0};
  const double g_grid[3] = {0.0, 0.01, 0.3};
  const double d_grid[3] = {0.0, 0.01, 0.2};

  long cases = 0, mismatches = 0;
  for (int bits = 0; bits < 64; ++bits) {
    directed_graph graph = make_graph(3);
    bool adj[3][3] = {{false, false, false}, {false, false, false}, {false, false, false}};
    for (int k = 0; k < 6; ++k) {
      if (bits & (1 << k)) {
        add_edge(graph, pair_i[k], pair_j[k]);
        adj[pair_i[k]][pair_j[k]] = true;
      }
    }
    for (double s : s_grid) {
      for (double u : u_grid) {
        for (int pk = 0; pk < 3; ++pk) {
          scenario_config config;
          config.s = s;
          config.u = u;
          config.g_s = config.g_m = config.g_l = g_grid[pk];
          config.delta = d_grid[pk];
          for (int initiator = 0; initiator < 3; ++initiator) {
            ++cases;
            cascade_result got = run_cascade(snapshot, graph, initiator, config, true);
            straightline::outcome want = straightline::cascade3(
                buckets, capitals, adj, initiator, s, u, g_grid[pk], d_grid[pk]);

            bool ok = got.theta == want.theta && got.trace.size() == want.rows.size();
            if (ok) {
              for (std::size_t r = 0; r < want.rows.size(); ++r) {
                const trace_row& a = got.trace[r];
                const straightline::row& b = want.rows[r];
                if (a.round != b.round || a.bank != b.bank || a.defaulted != b.defaulted ||
                    !same_bits(a.loss_recap, b.l1) || !same_bits(a.loss_liquidity, b.l2) ||
                    !same_bits(a.loss_proximity, b.l3) ||
                    !same_bits(a.capital_after, b.capital_after)) {
                  ok = false;
                  break;
                }
              }
            }
            if (!ok) ++mismatches;
          }
        }
      }
    }
  }
  std::ostringstream detail;
  detail << cases << " cascades (64 graphs x 27 parameter points x 3 initiators), "
         << mismatches << " bitwise mismatches";
  return {mismatches == 0, detail.str()};
}

// ---------------------------------------------------------------------------
// 5. Monotonicity: default counts never shrink when a parameter grows or an
//    edge is added, over randomized systems, graphs, and scenarios.

check_result monotonicity_suite() {
  std::mt19937_64 rng(0xB16B00B5u);
  const int trials = 1200;
  long comparisons = 0, violations = 0;
  std::string first_violation;

  for (int t = 0; t < trials; ++t) {
    const int n = 3 + static_cast<int>(rng() % 6);
    system_snapshot snapshot = random_system(rng, n);

    directed_graph graph = make_graph(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && uniform_in(rng, 0.0, 1.0) < 0.4) add_edge(graph, i, j);
      }
    }

    scenario_config base;
    base.s = uniform_in(rng, 0.05, 0.95);
    base.u = uniform_in(rng, 0.0, 0.9);
    base.g_s = uniform_in(rng, 0.0, 0.2);
    base.g_m = uniform_in(rng, 0.0, 0.2);
    base.g_l = uniform_in(rng, 0.0, 0.2);
    base.delta = uniform_in(rng, 0.0, 0.2);
    const int initiator = static_cast<int>(rng() % n);

    const int theta0 = run_cascade(snapshot, graph, initiator, base).theta;

    for (int p = 0; p < 6; ++p) {
      scenario_config bumped = base;
      const double step = uniform_in(rng, 0.01, 0.25);
      switch (p) {
        case 0: bumped.s = std::min(1.0, base.s + step); break;
        case 1: bumped.u = std::min(1.0, base.u + step); break;
        case 2: bumped.g_s = base.g_s + step; break;
        case 3: bumped.g_m = base.g_m + step; break;
        case 4: bumped.g_l = base.g_l + step; break;
        case 5: bumped.delta = base.delta + step; break;
      }
      const int theta1 = run_cascade(snapshot, graph, initiator, bumped).theta;
      ++comparisons;
      if (theta1 < theta0) {
        ++violations;
        if (first_violation.empty()) {
          std::ostringstream note;
          note << "trial " << t << " param " << p << ": theta " << theta0 << " -> " << theta1;
          first_violation = note.str();
        }
      }
    }

    directed_graph denser = graph;
    int added = 0;
    for (int attempt = 0; attempt < 12 && added < 3; ++attempt) {
      const int i = static_cast<int>(rng() % n);
      const int j = static_cast<int>(rng() % n);
      if (i == j || denser.has_edge(i, j)) continue;
      add_edge(denser, i, j);
      ++added;
    }
    if (added > 0) {
      const int theta2 = run_cascade(snapshot, denser, initiator, base).theta;
      ++comparisons;
      if (theta2 < theta0) {
        ++violations;
        if (first_violation.empty()) {
          std::ostringstream note;
          note << "trial " << t << " edges: theta " << theta0 << " -> " << theta2;
          first_violation = note.str();
        }
      }
    }
  }
  std::ostringstream detail;
  detail << trials << " triples, " << comparisons << " ordered comparisons, " << violations
         << " violations";
  if (!first_violation.empty()) detail << " (first: " << first_violation << ")";
  return {violations == 0, detail.str()};
}

// ---------------------------------------------------------------------------
// 6. Structure collapse: at target average 1 every structure yields the
//    complete graph, so all six give identical results for identical seeds.

check_result structure_collapse() {
  std::mt19937_64 rng(0xFACADEu);
  int agreeing = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 10);
    system_snapshot snapshot = random_system(rng, n);
    const std::uint64_t seed = derive_seed(777, static_cast<std::uint64_t>(trial));

    bool equal = true;
    simulation_result reference;
    for (int kind = 0; kind < structure_kind_count; ++kind) {
      simulation_plan plan;
      plan.structure = {static_cast<structure_kind>(kind), 0.37, 1.0};
      plan.m = 5;
      plan.master_seed = seed;
      simulation_result result = run_plan(snapshot, plan, 2);
      if (kind == 0) {
        reference = result;
        continue;
      }
      if (result.alpha_bar != reference.alpha_bar) equal = false;
      if (result.alpha_bar_n != reference.alpha_bar_n) equal = false;
    }
    if (equal) ++agreeing;
  }
  std::ostringstream detail;
  detail << agreeing << "/10 systems: all six structures exactly equal at target 1.0";
  return {agreeing == 10, detail.str()};
}

// ---------------------------------------------------------------------------
// 7. Size ordering: on a core-periphery system with one common capital
//    ratio, knock-on severity grows with the initiating bank's size group.

check_result size_ordering() {
  const double core_periphery[26] = {4000, 3500, 3000, 2500, 1200, 1050, 900, 780, 700,
                                     640,  580,  520,  470,  420,  380,  340, 300, 260,
                                     230,  200,  170,  150,  130,  110,  90,  70};
  std::vector<bank_balance_sheet> sheets(26);
  for (int i = 0; i < 26; ++i) {
    const double a = core_periphery[i];
    sheets[i].bank_id = "b" + two_digits(i);
    sheets[i].month = 0;
    sheets[i].buckets = {0.4 * a, 0.35 * a, 0.25 * a};
    sheets[i].capital = 0.2 * a;  // one capital ratio across the system
  }
  system_snapshot snapshot = build_system_snapshot(std::move(sheets));

  simulation_plan plan;
  plan.structure = {structure_kind::flight_to_quality, 0.5, 0.5};
  plan.scenario.s = 0.5;
  plan.scenario.u = 0.9;
  plan.scenario.g_s = plan.scenario.g_m = plan.scenario.g_l = 0.1;
  plan.scenario.delta = 0.1;
  plan.m = 2000;
  plan.master_seed = 424242;

  const int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  simulation_result result = run_plan(snapshot, plan, jobs);
  std::vector<size_group> groups = size_group_profile(result, default_group_boundaries(26));

  bool ordered = groups.size() == 4;
  std::ostringstream detail;
  for (std::size_t k = 0; ordered && k + 1 < groups.size(); ++k) {
    // groups run largest first; severity must not increase down the list
    if (groups[k].mean_alpha_bar_n < groups[k + 1].mean_alpha_bar_n) ordered = false;
  }
  const bool separated =
      groups.size() == 4 && groups.front().mean_alpha_bar_n > groups.back().mean_alpha_bar_n;
  for (const auto& group : groups) {
    detail << group.label << "=" << format_double(group.mean_alpha_bar_n) << " ";
  }
  detail << (ordered ? "(non-decreasing toward large)" : "(ORDER BROKEN)");
  return {ordered && separated, detail.str()};
}

// ---------------------------------------------------------------------------
// 8. Ratio estimation on the bundled sector table: pass-through at observed
//    months, interpolants inside their brackets, variance within the bound.

check_result ratio_estimation() {
  csv_table table = read_csv_file(source_dir + "/tests/data/cet1_ratios_sa.csv");
  std::map<std::string, cet1_series> by_bank;
  std::set<month_t> month_set;
  for (const auto& row : table.rows) {
    const auto month = parse_month(row[1]);
    const auto value = parse_double(row[2]);
    if (!month || !value) return {false, "unparseable fixture row"};
    auto& series = by_bank[row[0]];
    series.bank_id = row[0];
    series.observations.push_back({*month, *value});
    month_set.insert(*month);
  }
  const std::vector<month_t> grid(month_set.begin(), month_set.end());

  int banks_used = 0;
  bool idempotent = true, bracketed = true;
  double max_variance = 0.0;
  for (auto& [bank_id, series] : by_bank) {
    std::sort(series.observations.begin(), series.observations.end());
    if (series.observations.size() < static_cast<std::size_t>(min_cet1_observations)) continue;
    ++banks_used;

    const std::vector<double> estimated = estimate_cet1_series(series, grid);

    std::map<month_t, double> observed(series.observations.begin(), series.observations.end());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      auto hit = observed.find(grid[k]);
      if (hit != observed.end() && estimated[k] != hit->second) idempotent = false;
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
      auto above = observed.lower_bound(grid[k]);
      if (above == observed.end() || above == observed.begin()) continue;
      if (above->first == grid[k]) continue;
      auto below = std::prev(above);
      const double lo = std::min(below->second, above->second);
      const double hi = std::max(below->second, above->second);
      if (estimated[k] < lo - 1e-12 || estimated[k] > hi + 1e-12) bracketed = false;
    }

    double mean = 0.0;
    for (double v : estimated) mean += v;
    mean /= static_cast<double>(estimated.size());
    double variance = 0.0;
    for (double v : estimated) variance += (v - mean) * (v - mean);
    variance /= static_cast<double>(estimated.size());
    max_variance = std::max(max_variance, variance);
  }

  std::ostringstream detail;
  detail << banks_used << " banks with >=3 observations"
         << (idempotent ? ", observed months pass through" : ", PASS-THROUGH BROKEN")
         << (bracketed ? ", interpolants bracketed" : ", BRACKETING BROKEN")
         << ", max variance=" << max_variance << " (bound 0.00344)";
  return {banks_used == 26 && idempotent && bracketed && max_variance <= 0.00344, detail.str()};
}

// ---------------------------------------------------------------------------
// 9. Determinism through the command line: replaying a run manifest with
//    different worker counts must reproduce the time series byte for byte.

check_result determinism_cli() {
  const fs::path tmp = fs::temp_directory_path() / "contagion_acceptance_replay";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  auto run_cli = [&](const std::string& config, const fs::path& out, int jobs) {
    std::ostringstream cmd;
    cmd << "\"" << cli_path << "\" run --config \"" << config << "\" --out \"" << out.string()
        << "\" --jobs " << jobs << " > /dev/null 2>&1";
    return std::system(cmd.str().c_str());
  };
  auto slurp = [](const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };

  if (run_cli(source_dir + "/data/sample/config.json", tmp / "seed", 2) != 0) {
    return {false, "seeding run failed"};
  }
  const std::string manifest = (tmp / "seed" / "run_manifest.json").string();
  if (run_cli(manifest, tmp / "a", 1) != 0) return {false, "replay with --jobs 1 failed"};
  if (run_cli(manifest, tmp / "b", 7) != 0) return {false, "replay with --jobs 7 failed"};

  const std::string seed_csv = slurp(tmp / "seed" / "alpha_timeseries.csv");
  const std::string a_csv = slurp(tmp / "a" / "alpha_timeseries.csv");
  const std::string b_csv = slurp(tmp / "b" / "alpha_timeseries.csv");
  const bool identical = !a_csv.empty() && a_csv == b_csv && a_csv == seed_csv;

  std::ostringstream detail;
  detail << "3 runs (--jobs 2/1/7), alpha_timeseries.csv " << a_csv.size() << " bytes, "
         << (identical ? "byte-identical" : "DIFFER");
  return {identical, detail.str()};
}

// ---------------------------------------------------------------------------
// 10. Liquidity anchors: a single default trims survivor buckets by exactly
//     1-e^(-g); the stated percentage anchors allow 0.02pp of slack.

check_result liquidity_anchors() {
  std::vector<bank_balance_sheet> sheets(2);
  sheets[0] = {"survivor", 0, {100.0, 100.0, 100.0}, 50.0};
  sheets[1] = {"failing", 0, {30.0, 30.0, 30.0}, 1.0};
  system_snapshot snapshot = build_system_snapshot(std::move(sheets));
  directed_graph graph = make_graph(2);  // no edges: no proximity channel

  struct anchor {
    double g;
    double stated_pct;
  };
  const anchor anchors[2] = {{0.01, 1.0}, {0.03, 3.0}};

  bool all_ok = true;
  std::ostringstream detail;
  for (const anchor& a : anchors) {
    scenario_config config;
    config.s = 0.4;
    config.u = 0.0;
    config.g_s = config.g_m = config.g_l = a.g;
    config.delta = 0.0;

    cascade_result result = run_cascade(snapshot, graph, 1, config, true);
    double measured = -1.0;
    for (const auto& row : result.trace) {
      if (row.round == 1 && row.bank == 0) measured = row.loss_liquidity / 300.0;
    }
    const double closed_form = 1.0 - std::exp(-a.g);
    const bool matches_form = std::abs(measured - closed_form) <= 1e-12;
    const double diff_pp = std::abs(measured * 100.0 - a.stated_pct);
    const bool within = diff_pp <= 0.02;
    if (!(matches_form && within)) all_ok = false;
    detail << "g=" << format_double(a.g) << ": reduction " << measured * 100.0 << "% vs stated "
           << a.stated_pct << "% (diff " << diff_pp << "pp" << (within ? ", ok" : ", exceeds 0.02pp")
           << "); ";
  }
  return {all_ok, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <cli-binary> <source-dir>\n", argv[0]);
    return 2;
  }
  cli_path = argv[1];
  source_dir = argv[2];

  struct criterion {
    const char* name;
    check_result (*run)();
    double budget_seconds;  // 0 means no stated budget
  };
  const criterion criteria[10] = {
      {"baseline floor 1/26", baseline_floor, 1.0},
      {"zero-propagation identity", zero_propagation_identity, 5.0},
      {"probability scaling", scaling_properties, 0.0},
      {"cascade oracle, bit-for-bit", cascade_oracle, 10.0},
      {"monotonicity", monotonicity_suite, 30.0},
      {"structure collapse at full connectivity", structure_collapse, 0.0},
      {"knock-on severity by size group", size_ordering, 120.0},
      {"capital ratio estimation", ratio_estimation, 0.0},
      {"replay determinism across --jobs", determinism_cli, 0.0},
      {"liquidity percentage anchors", liquidity_anchors, 0.0},
  };

  int failures = 0;
  for (int i = 0; i < 10; ++i) {
    const auto start = std::chrono::steady_clock::now();
    check_result result;
    try {
      result = criteria[i].run();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = result.pass;
    std::string timing = format_seconds(seconds);
    if (criteria[i].budget_seconds > 0.0) {
      timing += seconds < criteria[i].budget_seconds ? ", within budget" : ", OVER BUDGET";
      if (seconds >= criteria[i].budget_seconds) pass = false;
    }
    if (!pass) ++failures;
    std::printf("criterion %2d: %s  %s: %s [%s]\n", i + 1, pass ? "PASS" : "FAIL",
                criteria[i].name, result.detail.c_str(), timing.c_str());
  }
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
