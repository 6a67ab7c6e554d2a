#include "contagion/cascade.hpp"

#include <cmath>

#include "contagion/errors.hpp"

namespace contagion {

void validate_scenario(const scenario_config& config) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(config.s) || !(config.s > 0.0) || config.s > 1.0) {
    fail(errc::invalid_argument, "shock fraction s must lie in (0, 1]");
  }
  if (!finite(config.u) || config.u < 0.0 || config.u > 1.0) {
    fail(errc::invalid_argument, "recapitalisation share u must lie in [0, 1]");
  }
  if (!finite(config.g_s) || config.g_s < 0.0 || !finite(config.g_m) || config.g_m < 0.0 ||
      !finite(config.g_l) || config.g_l < 0.0) {
    fail(errc::invalid_argument, "liquidity parameters must be >= 0");
  }
  if (!finite(config.delta) || config.delta < 0.0) {
    fail(errc::invalid_argument, "proximity factor delta must be >= 0");
  }
}

shock_outcome apply_initial_shock(bucket_array& buckets, double& capital, double s) {
  const double assets = buckets[0] + buckets[1] + buckets[2];
  const double shock = s * assets;
  if (shock >= capital) {
    return {true, shock - capital};
  }
  capital = capital - shock;
  for (int e = 0; e < 3; ++e) buckets[e] = buckets[e] * (1.0 - s);
  return {false, 0.0};
}

std::vector<double> recap_losses(double shortfall, double u,
                                 const std::vector<double>& alive_assets) {
  if (!(shortfall >= 0.0)) fail(errc::invalid_argument, "shortfall must be >= 0");
  double total = 0.0;
  for (double a : alive_assets) total += a;
  std::vector<double> losses(alive_assets.size(), 0.0);
  if (!(total > 0.0)) return losses;
  for (std::size_t i = 0; i < alive_assets.size(); ++i) {
    losses[i] = u * shortfall * alive_assets[i] / total;
  }
  return losses;
}

double liquidity_loss(const bucket_array& buckets, const scenario_config& config) {
  double loss = 0.0;
  for (int e = 0; e < 3; ++e) {
    loss += buckets[e] * (1.0 - std::exp(-config.g(e)));
  }
  return loss;
}

double proximity_loss(const bucket_array& buckets, int distance, double delta) {
  if (distance == distance_unreachable) return 0.0;
  if (distance <= 0) fail(errc::internal_error, "proximity distance must be positive");
  const double factor = 1.0 - std::exp(-delta / static_cast<double>(distance));
  double loss = 0.0;
  for (int e = 0; e < 3; ++e) {
    loss += buckets[e] * factor;
  }
  return loss;
}

cascade_result run_cascade(const system_snapshot& snapshot, const directed_graph& graph,
                           int initiator, const scenario_config& config, bool want_trace) {
  const int n = snapshot.size();
  if (graph.n != n) fail(errc::invalid_argument, "graph size does not match the system");
  if (initiator < 0 || initiator >= n) fail(errc::invalid_argument, "initiator out of range");
  validate_scenario(config);

  std::vector<bucket_array> buckets(n);
  std::vector<double> capital(n);
  std::vector<char> alive(n, 1);
  for (int i = 0; i < n; ++i) {
    buckets[i] = snapshot.banks[i].buckets;
    capital[i] = snapshot.banks[i].capital;
  }

  cascade_result result;
  shock_outcome shock = apply_initial_shock(buckets[initiator], capital[initiator], config.s);
  if (want_trace) {
    // capital - S is -(shortfall) when the shock default fires.
    double after = shock.defaulted ? -shock.shortfall : capital[initiator];
    result.trace.push_back({0, initiator, 0.0, 0.0, 0.0, after, shock.defaulted});
  }
  if (!shock.defaulted) {
    result.theta = 0;
    result.alpha = 0.0;
    return result;
  }
  alive[initiator] = 0;

  // (bank, shortfall) carried into the next round.
  std::vector<std::pair<int, double>> pending{{initiator, shock.shortfall}};
  int theta = 1;
  int round = 0;

  const double lfac[3] = {1.0 - std::exp(-config.g_s), 1.0 - std::exp(-config.g_m),
                          1.0 - std::exp(-config.g_l)};

  std::vector<double> a0(n, 0.0), c0(n, 0.0);
  std::vector<double> acc1(n), acc2(n), acc3(n);

  while (!pending.empty()) {
    bool any_alive = false;
    for (int i = 0; i < n; ++i) {
      if (alive[i]) { any_alive = true; break; }
    }
    if (!any_alive) break;
    ++round;

    double t0 = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      a0[i] = buckets[i][0] + buckets[i][1] + buckets[i][2];
      c0[i] = capital[i];
      acc1[i] = acc2[i] = acc3[i] = 0.0;
      t0 += a0[i];
    }

    for (const auto& [defaulter, shortfall] : pending) {
      const std::vector<int> dist = shortest_distances_to(graph, defaulter, alive);
      for (int i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        const double l1 = t0 > 0.0 ? config.u * shortfall * a0[i] / t0 : 0.0;

        const bucket_array b = buckets[i];
        const double tot = b[0] + b[1] + b[2];

        double l2 = 0.0;
        for (int e = 0; e < 3; ++e) l2 += b[e] * lfac[e];

        const int d = dist[i];
        if (d == 0) fail(errc::internal_error, "alive bank at distance zero");
        const double pfac =
            d == distance_unreachable ? 0.0 : 1.0 - std::exp(-config.delta / static_cast<double>(d));
        double l3 = 0.0;
        for (int e = 0; e < 3; ++e) l3 += b[e] * pfac;

        for (int e = 0; e < 3; ++e) {
          const double w = b[e] * lfac[e] + b[e] * pfac + (tot > 0.0 ? l1 * b[e] / tot : 0.0);
          double nb = b[e] - w;
          if (nb < 0.0) nb = 0.0;
          buckets[i][e] = nb;
        }

        acc1[i] += l1;
        acc2[i] += l2;
        acc3[i] += l3;
      }
    }

    std::vector<std::pair<int, double>> next;
    for (int i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      const double total = acc1[i] + acc2[i] + acc3[i];
      const double after = c0[i] - total;
      const bool defaulted = total >= c0[i];
      capital[i] = after;
      if (want_trace) {
        result.trace.push_back({round, i, acc1[i], acc2[i], acc3[i], after, defaulted});
      }
      if (defaulted) next.push_back({i, total - c0[i]});
    }
    for (const auto& [bank, _] : next) alive[bank] = 0;
    theta += static_cast<int>(next.size());
    pending = std::move(next);
  }

  result.theta = theta;
  result.alpha = static_cast<double>(theta) / static_cast<double>(n);
  result.rounds = round;
  return result;
}

}  // namespace contagion
