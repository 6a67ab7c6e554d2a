#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "contagion/rng.hpp"

namespace contagion {

// Values are stable identifiers (used in seed derivation and the C API);
// do not renumber.
enum class structure_kind : int {
  erdos_renyi = 0,
  flight_to_quality = 1,
  disassortative = 2,
  assortative = 3,
  tiered_i = 4,
  tiered_ii = 5,
};

inline constexpr int structure_kind_count = 6;

std::string_view structure_name(structure_kind kind);
std::optional<structure_kind> parse_structure(std::string_view name);

struct structure_spec {
  structure_kind kind = structure_kind::erdos_renyi;
  double base_p = 0.5;        // only ErdosRenyi reads this
  double target_p_bar = 0.5;  // must lie in (0, 1]
};

class probability_matrix {
public:
  probability_matrix() = default;
  explicit probability_matrix(int n) : n_(n), entries_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  double at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * n_ + j]; }
  double& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& data() const { return entries_; }

private:
  int n_ = 0;
  std::vector<double> entries_;
};

// Connection probabilities before scaling. All six formulas are ratios of
// asset values, so the result is invariant under uniform asset rescaling.
// Requires n >= 2 and strictly positive assets.
probability_matrix raw_probabilities(structure_kind kind,
                                     const std::vector<double>& assets,
                                     double base_p);

// Mean of the n(n-1) off-diagonal entries.
double average_probability(const probability_matrix& m);

// Move the off-diagonal average onto the target while keeping entries in
// [0,1] and zeros on the diagonal: proportional shrink when the current
// average is above target, affine pull toward 1 when below.
probability_matrix scale_probabilities(probability_matrix m, double target_p_bar);

struct directed_graph {
  int n = 0;
  std::vector<std::vector<int>> out_edges;  // sorted neighbor lists
  std::vector<std::vector<int>> in_edges;

  bool has_edge(int i, int j) const;
  std::size_t edge_count() const;
};

directed_graph make_graph(int n);
void add_edge(directed_graph& g, int i, int j);

// Independent Bernoulli draw per ordered pair, row-major iteration, exactly
// one uniform consumed per off-diagonal pair regardless of outcome (keeps
// streams aligned across structures with the same seed).
directed_graph sample_edges(const probability_matrix& m, rng_stream& rng);

inline constexpr int distance_unreachable = -1;

// d(i, target): length of the shortest directed path i -> target that uses
// only banks flagged alive as intermediate hops (the target itself is always
// admitted). Breadth-first over reversed edges. Unreachable nodes get the
// distance_unreachable sentinel, which downstream loss formulas read as an
// infinite distance (zero loss).
std::vector<int> shortest_distances_to(const directed_graph& g, int target,
                                       const std::vector<char>& alive);

}  // namespace contagion
