#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "banditlink/channel.hpp"

namespace banditlink {

// Undirected confusability graph on command symbols: x ~ x' iff some output
// is reachable from both. Dense symmetric adjacency, empty diagonal.
class ConfusabilityGraph {
 public:
  ConfusabilityGraph(int order, std::vector<std::uint8_t> adjacency);
  static ConfusabilityGraph from_support(const SupportSet& support);
  static ConfusabilityGraph cycle(int order);
  static ConfusabilityGraph complete(int order);

  int order() const noexcept { return v_; }
  bool adjacent(int a, int b) const {
    return adj_[static_cast<std::size_t>(a) * v_ + b] != 0;
  }
  int degree(int a) const;

 private:
  int v_;
  std::vector<std::uint8_t> adj_;
};

// n-fold strong-product power of a base graph. Vertices are mixed-radix
// tuples over the base vertex set with coordinate 0 least significant:
// id = sum_i x_i * k^i. Adjacency is answered coordinate-wise from the base
// (distinct tuples, every coordinate equal or adjacent); nothing is
// materialized, so only the vertex-count cap bounds n.
class StrongPower {
 public:
  StrongPower(const ConfusabilityGraph& base, int n, std::int64_t vertex_cap = 1'000'000);

  std::int64_t order() const noexcept { return order_; }
  int blocklength() const noexcept { return n_; }
  const ConfusabilityGraph& base() const noexcept { return base_; }

  bool adjacent(std::int64_t a, std::int64_t b) const;
  std::vector<int> tuple_of(std::int64_t id) const;
  std::int64_t id_of(const std::vector<int>& tuple) const;

 private:
  ConfusabilityGraph base_;
  int n_;
  std::int64_t order_;
};

// Sorted vertex list, pairwise non-adjacent in the host graph; adjacency is
// re-checked on construction and NotIndependent is thrown on any violation.
class IndependentSet {
 public:
  IndependentSet(const ConfusabilityGraph& g, std::vector<std::int64_t> members);
  IndependentSet(const StrongPower& g, std::vector<std::int64_t> members);

  const std::vector<std::int64_t>& members() const noexcept { return members_; }
  std::int64_t universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return members_.size(); }

 private:
  std::vector<std::int64_t> members_;
  std::int64_t universe_;
};

struct AlphaResult {
  std::int64_t value = 0;             // independence number (or bound when !exact)
  std::vector<std::int64_t> witness;  // sorted members achieving `value`
  bool exact = true;
};

// Exact maximum independent set by branch and bound (greedy seed, clique
// cover bound, degree-ordered vertices). Throws CapExceeded above solver_cap
// vertices; use greedy_independent_set for a labeled lower bound instead.
AlphaResult independence_number(const ConfusabilityGraph& g, std::int64_t solver_cap = 4096);
AlphaResult independence_number(const StrongPower& g, std::int64_t solver_cap = 4096);

// Greedy lower bound (min-degree-first), exact = false.
AlphaResult greedy_independent_set(const ConfusabilityGraph& g);
AlphaResult greedy_independent_set(const StrongPower& g);

// M(n) = alpha of the n-th strong power.
std::int64_t message_count(const ConfusabilityGraph& g, int n,
                           std::int64_t vertex_cap = 1'000'000,
                           std::int64_t solver_cap = 4096);

// Smallest n with M(n) >= messages, searched over n = 1..n_max.
struct BlocklengthResult {
  enum class Reason { found, graph_complete, cap_exceeded };
  std::optional<int> blocklength;
  Reason reason = Reason::found;
  std::string note;
};

BlocklengthResult minimal_blocklength(const ConfusabilityGraph& g, std::int64_t messages,
                                      int n_max = 8,
                                      std::int64_t vertex_cap = 1'000'000,
                                      std::int64_t solver_cap = 4096);

// True iff the graph is complete (single vertex included). Then
// alpha(G^n) = 1 for every n and no blocklength reaches two messages.
bool is_zero_capacity(const ConfusabilityGraph& g);

}  // namespace banditlink
