#include "contagion/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "contagion/errors.hpp"

namespace contagion {

std::string_view structure_name(structure_kind kind) {
  switch (kind) {
    case structure_kind::erdos_renyi: return "ErdosRenyi";
    case structure_kind::flight_to_quality: return "FlightToQuality";
    case structure_kind::disassortative: return "Disassortative";
    case structure_kind::assortative: return "Assortative";
    case structure_kind::tiered_i: return "TieredI";
    case structure_kind::tiered_ii: return "TieredII";
  }
  return "?";
}

std::optional<structure_kind> parse_structure(std::string_view name) {
  for (int k = 0; k < structure_kind_count; ++k) {
    auto kind = static_cast<structure_kind>(k);
    if (name == structure_name(kind)) return kind;
  }
  return std::nullopt;
}

probability_matrix raw_probabilities(structure_kind kind, const std::vector<double>& assets,
                                     double base_p) {
  const int n = static_cast<int>(assets.size());
  if (n < 2) fail(errc::invalid_argument, "need at least two banks");
  for (double a : assets) {
    if (!std::isfinite(a) || !(a > 0.0)) fail(errc::invalid_argument, "assets must be positive");
  }
  if (kind == structure_kind::erdos_renyi && (!(base_p >= 0.0) || base_p > 1.0)) {
    fail(errc::invalid_argument, "base probability must lie in [0, 1]");
  }

  double max_asset = *std::max_element(assets.begin(), assets.end());

  // Pair-level denominators for the ratio-based structures.
  double max_ratio = 0.0;
  double max_pair_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      max_ratio = std::max(max_ratio, std::max(assets[i] / assets[j], assets[j] / assets[i]));
      max_pair_sum = std::max(max_pair_sum, assets[i] + assets[j]);
    }
  }

  probability_matrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double p = 0.0;
      switch (kind) {
        case structure_kind::erdos_renyi:
          p = base_p;
          break;
        case structure_kind::flight_to_quality:
          p = assets[j] / max_asset;
          break;
        case structure_kind::disassortative:
          p = std::max(assets[i] / assets[j], assets[j] / assets[i]) / max_ratio;
          break;
        case structure_kind::assortative:
          p = std::min(assets[i], assets[j]) / std::max(assets[i], assets[j]);
          break;
        case structure_kind::tiered_i:
          p = (assets[i] + assets[j]) / max_pair_sum;
          break;
        case structure_kind::tiered_ii:
          p = (assets[i] + assets[j] + std::max(assets[i] - assets[j], 0.0)) / (3.0 * max_asset);
          break;
      }
      m.at(i, j) = p;
    }
  }
  return m;
}

double average_probability(const probability_matrix& m) {
  const int n = m.size();
  if (n < 2) fail(errc::invalid_argument, "need at least two banks");
  long double sum = 0.0L;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) sum += m.at(i, j);
    }
  }
  return static_cast<double>(sum / (static_cast<long double>(n) * (n - 1)));
}

probability_matrix scale_probabilities(probability_matrix m, double target_p_bar) {
  if (!(target_p_bar > 0.0) || target_p_bar > 1.0) {
    fail(errc::invalid_argument, "target average probability must lie in (0, 1]");
  }
  const int n = m.size();
  const double p0 = average_probability(m);
  if (p0 == target_p_bar) return m;
  if (p0 > target_p_bar) {
    // Proportional shrink; zeros stay zero.
    const double factor = target_p_bar / p0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) m.at(i, j) = m.at(i, j) * factor;
      }
    }
  } else {
    // Affine pull toward 1; entries already at 1 are fixed points. An
    // all-zero matrix degenerates to the uniform target, which we accept.
    const double factor = (1.0 - target_p_bar) / (1.0 - p0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) m.at(i, j) = 1.0 - (1.0 - m.at(i, j)) * factor;
      }
    }
  }
  return m;
}

directed_graph make_graph(int n) {
  directed_graph g;
  g.n = n;
  g.out_edges.resize(n);
  g.in_edges.resize(n);
  return g;
}

void add_edge(directed_graph& g, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= g.n || j >= g.n) {
    fail(errc::invalid_argument, "edge endpoints out of range");
  }
  auto& out = g.out_edges[i];
  auto pos = std::lower_bound(out.begin(), out.end(), j);
  if (pos != out.end() && *pos == j) return;
  out.insert(pos, j);
  auto& in = g.in_edges[j];
  in.insert(std::lower_bound(in.begin(), in.end(), i), i);
}

bool directed_graph::has_edge(int i, int j) const {
  const auto& out = out_edges[i];
  return std::binary_search(out.begin(), out.end(), j);
}

std::size_t directed_graph::edge_count() const {
  std::size_t count = 0;
  for (const auto& out : out_edges) count += out.size();
  return count;
}

directed_graph sample_edges(const probability_matrix& m, rng_stream& rng) {
  const int n = m.size();
  directed_graph g = make_graph(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      // Always draw, even for p = 0 or 1, to keep streams aligned across
      // structures sharing a seed. u < p makes p = 1 certain and p = 0
      // impossible since u lies in [0, 1).
      double u = rng.uniform01();
      if (u < m.at(i, j)) {
        g.out_edges[i].push_back(j);
        g.in_edges[j].push_back(i);
      }
    }
  }
  // Row-major construction already yields sorted lists.
  return g;
}

std::vector<int> shortest_distances_to(const directed_graph& g, int target,
                                       const std::vector<char>& alive) {
  std::vector<int> dist(g.n, distance_unreachable);
  if (target < 0 || target >= g.n) fail(errc::invalid_argument, "target out of range");
  dist[target] = 0;
  std::deque<int> queue{target};
  // BFS over reversed edges: expanding v via u -> v edges discovers the
  // shortest u -> ... -> target paths. Dead banks never enter the queue, so
  // paths cannot pass through them.
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int u : g.in_edges[v]) {
      if (u == target || !alive[u] || dist[u] != distance_unreachable) continue;
      dist[u] = dist[v] + 1;
      queue.push_back(u);
    }
  }
  return dist;
}

}  // namespace contagion
