#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "banditlink/channel.hpp"
#include "banditlink/errors.hpp"
#include "banditlink/graphs.hpp"

using namespace banditlink;

namespace {

// dense adjacency for the Petersen graph (outer cycle, inner star, spokes)
ConfusabilityGraph petersen() {
  std::vector<std::uint8_t> adj(100, 0);
  auto link = [&](int a, int b) {
    adj[static_cast<std::size_t>(a) * 10 + b] = 1;
    adj[static_cast<std::size_t>(b) * 10 + a] = 1;
  };
  for (int i = 0; i < 5; ++i) {
    link(i, (i + 1) % 5);          // outer C5
    link(5 + i, 5 + (i + 2) % 5);  // inner pentagram
    link(i, 5 + i);                // spokes
  }
  return ConfusabilityGraph(10, std::move(adj));
}

}  // namespace

TEST_CASE("graph construction and validation") {
  CHECK_THROWS_AS(ConfusabilityGraph(0, {}), ConfigError);
  CHECK_THROWS_AS(ConfusabilityGraph(2, {0, 1, 1}), ConfigError);
  CHECK_THROWS_AS(ConfusabilityGraph(2, {1, 0, 0, 0}), ConfigError);  // self loop
  CHECK_THROWS_AS(ConfusabilityGraph(2, {0, 1, 0, 0}), ConfigError);  // asymmetric
  const auto g = ConfusabilityGraph::cycle(5);
  CHECK(g.order() == 5);
  CHECK(g.adjacent(0, 1));
  CHECK(g.adjacent(4, 0));
  CHECK(!g.adjacent(0, 2));
  CHECK(g.degree(3) == 2);
  CHECK_THROWS_AS(ConfusabilityGraph::cycle(2), ConfigError);

  const auto k4 = ConfusabilityGraph::complete(4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(k4.adjacent(a, b) == (a != b));
  CHECK(ConfusabilityGraph::complete(1).order() == 1);
}

TEST_CASE("typewriter support graph is the k-cycle") {
  for (int k : {4, 5, 6, 9}) {
    const SupportSet s(make_typewriter(k, 0.2));
    const auto g = ConfusabilityGraph::from_support(s);
    const auto c = ConfusabilityGraph::cycle(k);
    REQUIRE(g.order() == k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) CHECK(g.adjacent(a, b) == c.adjacent(a, b));
  }
}

TEST_CASE("strong power adjacency matches the definition") {
  const auto c5 = ConfusabilityGraph::cycle(5);
  const StrongPower p(c5, 2);
  REQUIRE(p.order() == 25);
  CHECK(p.blocklength() == 2);
  for (std::int64_t a = 0; a < 25; ++a) {
    const auto ta = p.tuple_of(a);
    for (std::int64_t b = 0; b < 25; ++b) {
      const auto tb = p.tuple_of(b);
      bool expect = (a != b);
      for (int i = 0; i < 2 && expect; ++i)
        if (ta[i] != tb[i] && !c5.adjacent(ta[i], tb[i])) expect = false;
      CHECK(p.adjacent(a, b) == expect);
    }
  }
}

TEST_CASE("strong power tuple ids are little-endian mixed radix") {
  const StrongPower p(ConfusabilityGraph::cycle(5), 2);
  CHECK(p.id_of({1, 2}) == 11);  // 1 + 2 * 5
  CHECK(p.tuple_of(11) == std::vector<int>{1, 2});
  for (std::int64_t id = 0; id < 25; ++id) CHECK(p.id_of(p.tuple_of(id)) == id);
  CHECK_THROWS_AS(p.id_of({1}), ConfigError);
  CHECK_THROWS_AS(p.id_of({1, 5}), ConfigError);
  CHECK_THROWS_AS(StrongPower(ConfusabilityGraph::cycle(5), 0), ConfigError);
}

TEST_CASE("strong power refuses to exceed the vertex cap") {
  CHECK_THROWS_AS(StrongPower(ConfusabilityGraph::cycle(10), 7, 1'000'000), CapExceeded);
  CHECK_NOTHROW(StrongPower(ConfusabilityGraph::cycle(10), 6, 1'000'000));
}

TEST_CASE("independent set validation") {
  const auto c5 = ConfusabilityGraph::cycle(5);
  CHECK_NOTHROW(IndependentSet(c5, {0, 2}));
  CHECK_THROWS_AS(IndependentSet(c5, {0, 1}), NotIndependent);
  CHECK_THROWS_AS(IndependentSet(c5, {0, 0}), ConfigError);
  CHECK_THROWS_AS(IndependentSet(c5, {0, 7}), ConfigError);
  const StrongPower p(c5, 2);
  CHECK_NOTHROW(IndependentSet(p, {p.id_of({0, 0}), p.id_of({2, 2})}));
  CHECK_NOTHROW(IndependentSet(p, {p.id_of({0, 0}), p.id_of({0, 2})}));  // coords equal or far
  CHECK_THROWS_AS(IndependentSet(p, {p.id_of({0, 0}), p.id_of({0, 1})}), NotIndependent);
  CHECK_THROWS_AS(IndependentSet(p, {p.id_of({0, 0}), p.id_of({4, 1})}), NotIndependent);
}

TEST_CASE("independence numbers of small graphs") {
  CHECK(independence_number(ConfusabilityGraph::cycle(4)).value == 2);
  CHECK(independence_number(ConfusabilityGraph::cycle(5)).value == 2);
  CHECK(independence_number(ConfusabilityGraph::cycle(6)).value == 3);
  CHECK(independence_number(ConfusabilityGraph::cycle(7)).value == 3);
  CHECK(independence_number(ConfusabilityGraph::complete(6)).value == 1);
  CHECK(independence_number(petersen()).value == 4);

  // empty graph: alpha = order
  ConfusabilityGraph empty(5, std::vector<std::uint8_t>(25, 0));
  const auto r = independence_number(empty);
  CHECK(r.value == 5);
  CHECK(r.exact);
  CHECK(r.witness.size() == 5);
}

TEST_CASE("independence witness is always a valid set of the stated size") {
  for (int k : {4, 5, 6, 7, 8}) {
    const auto g = ConfusabilityGraph::cycle(k);
    const auto r = independence_number(g);
    CHECK(r.exact);
    CHECK(static_cast<std::int64_t>(r.witness.size()) == r.value);
    CHECK_NOTHROW(IndependentSet(g, r.witness));
  }
}

TEST_CASE("independence numbers of strong powers") {
  const auto c5 = ConfusabilityGraph::cycle(5);
  const auto c6 = ConfusabilityGraph::cycle(6);
  const auto c4 = ConfusabilityGraph::cycle(4);

  const auto a52 = independence_number(StrongPower(c5, 2));
  CHECK(a52.value == 5);
  CHECK(a52.exact);
  CHECK_NOTHROW(IndependentSet(StrongPower(c5, 2), a52.witness));

  CHECK(independence_number(StrongPower(c6, 2)).value == 9);
  CHECK(independence_number(StrongPower(c4, 2)).value == 4);
  // even cycles obey alpha(C^n) = (k/2)^n; empty-complement behavior on powers
  CHECK(independence_number(StrongPower(c4, 3)).value == 8);
  CHECK(independence_number(StrongPower(c6, 1)).value == 3);
}

TEST_CASE("solver cap throws instead of silently approximating") {
  const StrongPower p(ConfusabilityGraph::cycle(5), 6);  // 15625 > 4096
  CHECK_THROWS_AS(independence_number(p), CapExceeded);
  CHECK_THROWS_AS(independence_number(p, 4096), CapExceeded);
}

TEST_CASE("greedy bound is valid and labeled inexact") {
  const auto p = StrongPower(ConfusabilityGraph::cycle(5), 2);
  const auto greedy = greedy_independent_set(p);
  const auto exact = independence_number(p);
  CHECK(!greedy.exact);
  CHECK(greedy.value >= 1);
  CHECK(greedy.value <= exact.value);
  CHECK(static_cast<std::int64_t>(greedy.witness.size()) == greedy.value);
  CHECK_NOTHROW(IndependentSet(p, greedy.witness));

  // greedy also works where the exact solver is capped; any greedy order
  // reaches at least order / (max degree + 1) = 7776 / 243 = 32
  const StrongPower big(ConfusabilityGraph::cycle(6), 5);
  const auto g5 = greedy_independent_set(big);
  CHECK(!g5.exact);
  CHECK(g5.value >= 32);
  CHECK_NOTHROW(IndependentSet(big, g5.witness));
}

TEST_CASE("message counts per blocklength") {
  const auto c5 = ConfusabilityGraph::cycle(5);
  CHECK(message_count(c5, 1) == 2);
  CHECK(message_count(c5, 2) == 5);
  const auto c6 = ConfusabilityGraph::cycle(6);
  CHECK(message_count(c6, 1) == 3);
  CHECK(message_count(c6, 2) == 9);
}

TEST_CASE("minimal blocklength search") {
  const auto c5 = ConfusabilityGraph::cycle(5);
  const auto c6 = ConfusabilityGraph::cycle(6);

  auto r = minimal_blocklength(c5, 5);
  REQUIRE(r.blocklength.has_value());
  CHECK(*r.blocklength == 2);
  CHECK(r.reason == BlocklengthResult::Reason::found);

  r = minimal_blocklength(c6, 6);
  REQUIRE(r.blocklength.has_value());
  CHECK(*r.blocklength == 2);

  r = minimal_blocklength(c5, 2);
  REQUIRE(r.blocklength.has_value());
  CHECK(*r.blocklength == 1);

  // one message rides for free on any graph
  r = minimal_blocklength(ConfusabilityGraph::complete(4), 1);
  REQUIRE(r.blocklength.has_value());
  CHECK(*r.blocklength == 1);

  // complete graph never reaches two messages
  r = minimal_blocklength(ConfusabilityGraph::complete(4), 2);
  CHECK(!r.blocklength.has_value());
  CHECK(r.reason == BlocklengthResult::Reason::graph_complete);

  // a target out of reach within the caps reports the cap, not a wrong
  // answer: with solver_cap 600 the search exhausts n = 1..3 (alpha 2, 5,
  // 10) and stops when n = 4 would need 625 vertices
  r = minimal_blocklength(c5, 1'000'000, 8, 1'000'000, 600);
  CHECK(!r.blocklength.has_value());
  CHECK(r.reason == BlocklengthResult::Reason::cap_exceeded);
  CHECK(!r.note.empty());

  CHECK_THROWS_AS(minimal_blocklength(c5, 0), ConfigError);
}

TEST_CASE("zero-capacity detection") {
  CHECK(is_zero_capacity(ConfusabilityGraph::complete(3)));
  CHECK(is_zero_capacity(ConfusabilityGraph::complete(1)));
  CHECK(!is_zero_capacity(ConfusabilityGraph::cycle(5)));
  // a two-symbol typewriter confuses everything: zero capacity
  CHECK(is_zero_capacity(ConfusabilityGraph::from_support(SupportSet(make_typewriter(2, 0.1)))));
}
