#include "banditlink/graphs.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "banditlink/errors.hpp"

namespace banditlink {

ConfusabilityGraph::ConfusabilityGraph(int order, std::vector<std::uint8_t> adjacency)
    : v_(order), adj_(std::move(adjacency)) {
  if (v_ < 1) throw ConfigError("graph needs at least one vertex");
  if (adj_.size() != static_cast<std::size_t>(v_) * v_)
    throw ConfigError("adjacency buffer has wrong size");
  for (int i = 0; i < v_; ++i) {
    if (adj_[static_cast<std::size_t>(i) * v_ + i] != 0)
      throw ConfigError("self loop in confusability graph");
    for (int j = i + 1; j < v_; ++j) {
      if (adj_[static_cast<std::size_t>(i) * v_ + j] != adj_[static_cast<std::size_t>(j) * v_ + i])
        throw ConfigError("asymmetric adjacency");
    }
  }
}

ConfusabilityGraph ConfusabilityGraph::from_support(const SupportSet& support) {
  const int k = support.k();
  std::vector<std::uint8_t> adj(static_cast<std::size_t>(k) * k, 0);
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      if (support.intersects(a, b)) {
        adj[static_cast<std::size_t>(a) * k + b] = 1;
        adj[static_cast<std::size_t>(b) * k + a] = 1;
      }
    }
  }
  return ConfusabilityGraph(k, std::move(adj));
}

ConfusabilityGraph ConfusabilityGraph::cycle(int order) {
  if (order < 3) throw ConfigError("cycle needs at least 3 vertices");
  std::vector<std::uint8_t> adj(static_cast<std::size_t>(order) * order, 0);
  for (int i = 0; i < order; ++i) {
    const int j = (i + 1) % order;
    adj[static_cast<std::size_t>(i) * order + j] = 1;
    adj[static_cast<std::size_t>(j) * order + i] = 1;
  }
  return ConfusabilityGraph(order, std::move(adj));
}

ConfusabilityGraph ConfusabilityGraph::complete(int order) {
  std::vector<std::uint8_t> adj(static_cast<std::size_t>(order) * order, 1);
  for (int i = 0; i < order; ++i) adj[static_cast<std::size_t>(i) * order + i] = 0;
  return ConfusabilityGraph(order, std::move(adj));
}

int ConfusabilityGraph::degree(int a) const {
  int d = 0;
  for (int j = 0; j < v_; ++j) d += adj_[static_cast<std::size_t>(a) * v_ + j] != 0;
  return d;
}

StrongPower::StrongPower(const ConfusabilityGraph& base, int n, std::int64_t vertex_cap)
    : base_(base), n_(n) {
  if (n_ < 1) throw ConfigError("strong power needs n >= 1");
  std::int64_t order = 1;
  for (int i = 0; i < n_; ++i) {
    order *= base_.order();
    if (order > vertex_cap)
      throw CapExceeded("strong power would have " + std::to_string(base_.order()) + "^" +
                        std::to_string(n_) + " vertices, above the cap of " +
                        std::to_string(vertex_cap));
  }
  order_ = order;
}

bool StrongPower::adjacent(std::int64_t a, std::int64_t b) const {
  if (a == b) return false;
  const int k = base_.order();
  for (int i = 0; i < n_; ++i) {
    const int xa = static_cast<int>(a % k);
    const int xb = static_cast<int>(b % k);
    if (xa != xb && !base_.adjacent(xa, xb)) return false;
    a /= k;
    b /= k;
  }
  return true;
}

std::vector<int> StrongPower::tuple_of(std::int64_t id) const {
  std::vector<int> t(static_cast<std::size_t>(n_));
  const int k = base_.order();
  for (int i = 0; i < n_; ++i) {
    t[static_cast<std::size_t>(i)] = static_cast<int>(id % k);
    id /= k;
  }
  return t;
}

std::int64_t StrongPower::id_of(const std::vector<int>& tuple) const {
  if (static_cast<int>(tuple.size()) != n_) throw ConfigError("tuple length != blocklength");
  std::int64_t id = 0;
  const int k = base_.order();
  for (int i = n_ - 1; i >= 0; --i) {
    if (tuple[static_cast<std::size_t>(i)] < 0 || tuple[static_cast<std::size_t>(i)] >= k)
      throw ConfigError("tuple coordinate out of range");
    id = id * k + tuple[static_cast<std::size_t>(i)];
  }
  return id;
}

namespace {

template <class Adjacent>
void validate_independent(std::vector<std::int64_t>& members, std::int64_t universe,
                          Adjacent&& adjacent) {
  std::sort(members.begin(), members.end());
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] < 0 || members[i] >= universe)
      throw ConfigError("independent-set member out of range");
    if (i > 0 && members[i] == members[i - 1])
      throw ConfigError("duplicate independent-set member");
  }
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      if (adjacent(members[i], members[j]))
        throw NotIndependent("members " + std::to_string(members[i]) + " and " +
                             std::to_string(members[j]) + " are adjacent");
}

}  // namespace

IndependentSet::IndependentSet(const ConfusabilityGraph& g, std::vector<std::int64_t> members)
    : members_(std::move(members)), universe_(g.order()) {
  validate_independent(members_, universe_, [&](std::int64_t a, std::int64_t b) {
    return g.adjacent(static_cast<int>(a), static_cast<int>(b));
  });
}

IndependentSet::IndependentSet(const StrongPower& g, std::vector<std::int64_t> members)
    : members_(std::move(members)), universe_(g.order()) {
  validate_independent(members_, universe_,
                       [&](std::int64_t a, std::int64_t b) { return g.adjacent(a, b); });
}

namespace {

// Dense bitset rows; the solver works on the complement (max independent set
// in G = max clique in the complement of G).
struct BitGraph {
  int n = 0;
  int words = 0;
  std::vector<std::uint64_t> rows;  // n * words

  std::uint64_t* row(int v) { return rows.data() + static_cast<std::size_t>(v) * words; }
  const std::uint64_t* row(int v) const { return rows.data() + static_cast<std::size_t>(v) * words; }
  void set(int a, int b) { row(a)[b >> 6] |= 1ULL << (b & 63); }
  bool get(int a, int b) const { return (row(a)[b >> 6] >> (b & 63)) & 1ULL; }
};

struct CliqueSolver {
  const BitGraph& g;  // complement adjacency
  int words;
  std::vector<int> best;  // best clique found so far
  std::vector<int> current;
  // Per-depth scratch. Sized n + 1 up front: expand() recurses while holding
  // references into these pools, so they must never reallocate.
  std::vector<std::vector<int>> order_pool;
  std::vector<std::vector<int>> color_pool;

  explicit CliqueSolver(const BitGraph& graph)
      : g(graph),
        words(graph.words),
        order_pool(static_cast<std::size_t>(graph.n) + 1),
        color_pool(static_cast<std::size_t>(graph.n) + 1) {}

  // Greedy sequential coloring of candidate set P (as bitset); emits vertices
  // ordered by color, returning per-position color numbers (1-based). The
  // color number bounds the clique extension achievable from that vertex.
  void color_sort(const std::uint64_t* p, std::vector<int>& order, std::vector<int>& colors) {
    order.clear();
    colors.clear();
    std::vector<std::uint64_t> uncolored(p, p + words);
    std::vector<std::uint64_t> wave(static_cast<std::size_t>(words));
    int color = 0;
    while (true) {
      bool any = false;
      for (int w = 0; w < words; ++w) {
        wave[static_cast<std::size_t>(w)] = uncolored[static_cast<std::size_t>(w)];
        any = any || wave[static_cast<std::size_t>(w)] != 0;
      }
      if (!any) break;
      ++color;
      for (int w = 0; w < words; ++w) {
        while (wave[static_cast<std::size_t>(w)]) {
          const int bit = std::countr_zero(wave[static_cast<std::size_t>(w)]);
          const int v = (w << 6) | bit;
          wave[static_cast<std::size_t>(w)] &= wave[static_cast<std::size_t>(w)] - 1;
          uncolored[static_cast<std::size_t>(w)] &= ~(1ULL << bit);
          order.push_back(v);
          colors.push_back(color);
          // Remove v's neighbours from this color wave.
          const std::uint64_t* nv = g.row(v);
          for (int w2 = 0; w2 < words; ++w2) wave[static_cast<std::size_t>(w2)] &= ~nv[static_cast<std::size_t>(w2)];
        }
      }
    }
  }

  void expand(std::vector<std::uint64_t>& p, int depth) {
    auto& order = order_pool[static_cast<std::size_t>(depth)];
    auto& colors = color_pool[static_cast<std::size_t>(depth)];
    color_sort(p.data(), order, colors);
    for (int idx = static_cast<int>(order.size()) - 1; idx >= 0; --idx) {
      if (current.size() + static_cast<std::size_t>(colors[static_cast<std::size_t>(idx)]) <= best.size())
        return;  // color bound prunes this and all earlier vertices
      const int v = order[static_cast<std::size_t>(idx)];
      current.push_back(v);
      std::vector<std::uint64_t> next(static_cast<std::size_t>(words));
      const std::uint64_t* nv = g.row(v);
      bool empty = true;
      for (int w = 0; w < words; ++w) {
        next[static_cast<std::size_t>(w)] = p[static_cast<std::size_t>(w)] & nv[static_cast<std::size_t>(w)];
        empty = empty && next[static_cast<std::size_t>(w)] == 0;
      }
      if (empty) {
        if (current.size() > best.size()) best = current;
      } else {
        expand(next, depth + 1);
      }
      current.pop_back();
      p[static_cast<std::size_t>(v >> 6)] &= ~(1ULL << (v & 63));
    }
  }
};

template <class Adjacent>
AlphaResult solve_alpha(std::int64_t order, std::int64_t solver_cap, Adjacent&& adjacent) {
  if (order > solver_cap)
    throw CapExceeded("independence solver capped at " + std::to_string(solver_cap) +
                      " vertices, got " + std::to_string(order));
  const int n = static_cast<int>(order);
  BitGraph comp;
  comp.n = n;
  comp.words = (n + 63) / 64;
  comp.rows.assign(static_cast<std::size_t>(n) * comp.words, 0);
  std::vector<int> gdeg(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (adjacent(i, j)) {
        ++gdeg[static_cast<std::size_t>(i)];
        ++gdeg[static_cast<std::size_t>(j)];
      } else {
        comp.set(i, j);
        comp.set(j, i);
      }
    }
  }
  // Branching order: low original-graph degree first (vertices likely to sit
  // in large independent sets get explored first). Applied by relabeling.
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int a, int b) { return gdeg[static_cast<std::size_t>(a)] < gdeg[static_cast<std::size_t>(b)]; });
  std::vector<int> inv_perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) inv_perm[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;
  BitGraph relabeled;
  relabeled.n = n;
  relabeled.words = comp.words;
  relabeled.rows.assign(static_cast<std::size_t>(n) * comp.words, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && comp.get(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]))
        relabeled.set(i, j);

  CliqueSolver solver(relabeled);
  // Greedy seed in relabeled order.
  {
    std::vector<std::uint64_t> avail(static_cast<std::size_t>(relabeled.words), 0);
    for (int v = 0; v < n; ++v) avail[static_cast<std::size_t>(v >> 6)] |= 1ULL << (v & 63);
    for (int v = 0; v < n; ++v) {
      if ((avail[static_cast<std::size_t>(v >> 6)] >> (v & 63)) & 1ULL) {
        solver.best.push_back(v);
        for (int w = 0; w < relabeled.words; ++w)
          avail[static_cast<std::size_t>(w)] &= relabeled.row(v)[static_cast<std::size_t>(w)];
      }
    }
  }
  std::vector<std::uint64_t> p(static_cast<std::size_t>(relabeled.words), 0);
  for (int v = 0; v < n; ++v) p[static_cast<std::size_t>(v >> 6)] |= 1ULL << (v & 63);
  solver.expand(p, 0);

  AlphaResult res;
  res.exact = true;
  res.value = static_cast<std::int64_t>(solver.best.size());
  res.witness.reserve(solver.best.size());
  for (int v : solver.best) res.witness.push_back(perm[static_cast<std::size_t>(v)]);
  std::sort(res.witness.begin(), res.witness.end());
  return res;
}

template <class Adjacent>
AlphaResult solve_greedy(std::int64_t order, Adjacent&& adjacent) {
  // Static min-degree-first greedy: one O(n^2) degree pass, one O(n^2)
  // blocking pass. A lower bound only; callers get exact = false.
  const std::int64_t n = order;
  std::vector<std::int64_t> deg(static_cast<std::size_t>(n), 0);
  for (std::int64_t v = 0; v < n; ++v)
    for (std::int64_t u = v + 1; u < n; ++u)
      if (adjacent(v, u)) {
        ++deg[static_cast<std::size_t>(v)];
        ++deg[static_cast<std::size_t>(u)];
      }
  std::vector<std::int64_t> by_degree(static_cast<std::size_t>(n));
  std::iota(by_degree.begin(), by_degree.end(), std::int64_t{0});
  std::stable_sort(by_degree.begin(), by_degree.end(), [&](std::int64_t a, std::int64_t b) {
    return deg[static_cast<std::size_t>(a)] < deg[static_cast<std::size_t>(b)];
  });
  std::vector<char> blocked(static_cast<std::size_t>(n), 0);
  AlphaResult res;
  res.exact = false;
  for (std::int64_t v : by_degree) {
    if (blocked[static_cast<std::size_t>(v)]) continue;
    res.witness.push_back(v);
    for (std::int64_t u = 0; u < n; ++u)
      if (!blocked[static_cast<std::size_t>(u)] && u != v && adjacent(v, u))
        blocked[static_cast<std::size_t>(u)] = 1;
  }
  std::sort(res.witness.begin(), res.witness.end());
  res.value = static_cast<std::int64_t>(res.witness.size());
  return res;
}

}  // namespace

AlphaResult independence_number(const ConfusabilityGraph& g, std::int64_t solver_cap) {
  return solve_alpha(g.order(), solver_cap,
                     [&](int a, int b) { return g.adjacent(a, b); });
}

AlphaResult independence_number(const StrongPower& g, std::int64_t solver_cap) {
  return solve_alpha(g.order(), solver_cap,
                     [&](int a, int b) { return g.adjacent(a, b); });
}

AlphaResult greedy_independent_set(const ConfusabilityGraph& g) {
  return solve_greedy(g.order(), [&](std::int64_t a, std::int64_t b) {
    return g.adjacent(static_cast<int>(a), static_cast<int>(b));
  });
}

AlphaResult greedy_independent_set(const StrongPower& g) {
  return solve_greedy(g.order(), [&](std::int64_t a, std::int64_t b) { return g.adjacent(a, b); });
}

std::int64_t message_count(const ConfusabilityGraph& g, int n, std::int64_t vertex_cap,
                           std::int64_t solver_cap) {
  const StrongPower power(g, n, vertex_cap);
  return independence_number(power, solver_cap).value;
}

bool is_zero_capacity(const ConfusabilityGraph& g) {
  for (int i = 0; i < g.order(); ++i)
    for (int j = i + 1; j < g.order(); ++j)
      if (!g.adjacent(i, j)) return false;
  return true;  // vacuously true for a single vertex
}

BlocklengthResult minimal_blocklength(const ConfusabilityGraph& g, std::int64_t messages,
                                      int n_max, std::int64_t vertex_cap,
                                      std::int64_t solver_cap) {
  BlocklengthResult out;
  if (messages < 1) throw ConfigError("minimal_blocklength needs messages >= 1");
  if (messages == 1) {  // a single message needs one use of anything
    out.blocklength = 1;
    return out;
  }
  if (is_zero_capacity(g)) {
    out.reason = BlocklengthResult::Reason::graph_complete;
    out.note = "graph is complete; no blocklength separates two messages";
    return out;
  }
  for (int n = 1; n <= n_max; ++n) {
    std::int64_t m;
    try {
      m = message_count(g, n, vertex_cap, solver_cap);
    } catch (const CapExceeded& e) {
      out.reason = BlocklengthResult::Reason::cap_exceeded;
      out.note = e.what();
      return out;
    }
    if (m >= messages) {
      out.blocklength = n;
      return out;
    }
  }
  out.reason = BlocklengthResult::Reason::cap_exceeded;
  out.note = "no blocklength up to n_max = " + std::to_string(n_max) + " reaches " +
             std::to_string(messages) + " messages";
  return out;
}

}  // namespace banditlink
