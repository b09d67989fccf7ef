#include <vector>

#include "cfn/dag.hpp"
#include "cfn/oracle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cfn;
using namespace cfn::testing;

namespace {

std::vector<Domain> domains_of(std::vector<int> sizes) { return full_domains(sizes); }

}  // namespace

TEST_CASE("a single leaf") {
  FilterDag dag;
  dag.set_root(dag.add_leaf(0, {2, 5}));
  CHECK_NOTHROW(dag.validate());
  const auto domains = domains_of({2});
  CHECK(dag.minimum(domains) == 2);
  dag.build_min_plus(domains);
  CHECK(dag.min_given(0, 0) == 2);
  CHECK(dag.min_given(0, 1) == 5);
}

TEST_CASE("min over identical-scope leaves") {
  FilterDag dag;
  const int a = dag.add_leaf(0, {3, kSignedInf});
  const int b = dag.add_leaf(0, {1, kSignedInf});
  dag.set_root(dag.add_min({a, b}));
  CHECK_NOTHROW(dag.validate());
  CHECK(dag.minimum(domains_of({2})) == 1);
}

TEST_CASE("sum of disjoint leaves conditions one and minimizes the other") {
  FilterDag dag;
  const int a = dag.add_leaf(0, {4, 1, 6});
  const int b = dag.add_leaf(1, {5, 2});
  dag.set_root(dag.add_sum({a, b}));
  CHECK_NOTHROW(dag.validate());
  auto domains = domains_of({3, 2});
  dag.build_min_plus(domains);
  CHECK(dag.minimum() == 3);
  CHECK(dag.min_given(0, 0) == 6);
  CHECK(dag.min_given(0, 2) == 8);
  CHECK(dag.min_given(1, 0) == 6);
}

TEST_CASE("pruned values are top by convention") {
  FilterDag dag;
  dag.set_root(dag.add_leaf(0, {2, 5}));
  auto domains = domains_of({2});
  domains[0].remove(1);
  dag.build_min_plus(domains);
  CHECK(is_inf(dag.min_given(0, 1)));
  CHECK(dag.min_given(0, 0) == 2);
}

TEST_CASE("structural validation errors") {
  SUBCASE("overlapping sum") {
    FilterDag dag;
    const int a = dag.add_leaf(0, {1, 2});
    const int b = dag.add_leaf(0, {0, 0});
    dag.set_root(dag.add_raw(DagNode{DagNodeKind::sum, {0}, -1, {}, 0, {a, b}}));
    try {
      dag.validate();
      FAIL("expected an error");
    } catch (const DagError& e) {
      CHECK(e.code() == DagError::Code::aggregator_precondition);
    }
  }
  SUBCASE("min over different scopes") {
    FilterDag dag;
    const int a = dag.add_leaf(0, {1, 2});
    const int b = dag.add_leaf(1, {0, 0});
    dag.set_root(dag.add_raw(DagNode{DagNodeKind::min, {0, 1}, -1, {}, 0, {a, b}}));
    CHECK_THROWS_AS(dag.validate(), DagError);
  }
  SUBCASE("scope that does not compose") {
    FilterDag dag;
    const int a = dag.add_leaf(0, {1, 2});
    const int b = dag.add_leaf(1, {0, 0});
    dag.set_root(dag.add_raw(DagNode{DagNodeKind::sum, {0, 1, 2}, -1, {}, 0, {a, b}}));
    try {
      dag.validate();
      FAIL("expected an error");
    } catch (const DagError& e) {
      CHECK(e.code() == DagError::Code::scope_composition);
    }
  }
  SUBCASE("leaf with a wider scope") {
    FilterDag dag;
    dag.set_root(dag.add_raw(DagNode{DagNodeKind::leaf, {0, 1}, 0, {1, 2}, 0, {}}));
    try {
      dag.validate();
      FAIL("expected an error");
    } catch (const DagError& e) {
      CHECK(e.code() == DagError::Code::non_unary_leaf);
    }
  }
  SUBCASE("cycle") {
    FilterDag dag;
    const int leaf = dag.add_leaf(0, {1, 2});
    dag.add_raw(DagNode{DagNodeKind::min, {0}, -1, {}, 0, {leaf, 2}});
    dag.add_raw(DagNode{DagNodeKind::min, {0}, -1, {}, 0, {1}});
    dag.set_root(2);
    try {
      dag.validate();
      FAIL("expected an error");
    } catch (const DagError& e) {
      CHECK(e.code() == DagError::Code::not_a_dag);
    }
  }
}

TEST_CASE("projection and the inverse extension restore the tables") {
  FilterDag dag;
  const int a = dag.add_leaf(0, {4, 1, 6});
  const int b = dag.add_leaf(1, {5, 2});
  dag.set_root(dag.add_sum({a, b}));
  auto domains = domains_of({3, 2});
  dag.build_min_plus(domains);
  std::vector<SignedCost> before;
  for (int v = 0; v < 3; ++v) before.push_back(dag.min_given(0, v));
  dag.project(0, 2, 0);
  dag.project(0, 2, 1);
  CHECK(dag.min_given(0, 2) == before[2] - 1);
  CHECK(dag.minimum() == 3);
  dag.project(0, 2, -1);
  for (int v = 0; v < 3; ++v) CHECK(dag.min_given(0, v) == before[static_cast<std::size_t>(v)]);
  CHECK_THROWS_AS(dag.project(0, 0, 7), PreconditionError);
}

TEST_CASE("dump is deterministic") {
  auto build = [] {
    FilterDag dag;
    const int a = dag.add_leaf(0, {4, 1});
    const int b = dag.add_leaf(1, {5, 2});
    dag.set_root(dag.add_sum({a, b}));
    return dag.dump();
  };
  CHECK(build() == build());
  CHECK_FALSE(build().empty());
}

TEST_CASE("built DAGs equal the oracle before and after leaf shifts") {
  Rng rng(31);
  const char* kinds[] = {"among", "regular", "wregular", "grammar", "wmax", "wmin"};
  for (int trial = 0; trial < 120; ++trial) {
    const int n = rng.uniform(1, 5);
    const int d = rng.uniform(1, 3);
    auto func = random_global(rng, kinds[trial % 6], n, d);
    auto domains = full_domains(func->domain_sizes());
    for (auto& dom : domains) {
      for (int v : dom.values()) {
        if (dom.size() > 1 && rng.uniform(0, 3) == 0) dom.remove(v);
      }
    }
    FilterDag& dag = func->dag();
    CHECK_NOTHROW(dag.validate());
    CHECK(to_cost(dag.minimum(domains)) == brute_force_min(*func, domains).cost);
    dag.build_min_plus(domains);
    SignedCost marginal = kSignedInf;
    for (int pos = 0; pos < n; ++pos) {
      for (int v = 0; v < d; ++v) {
        const SignedCost given = dag.min_given(pos, v);
        CHECK(to_cost(given) == brute_force_conditioned_min(*func, domains, pos, v));
        if (pos == 0) marginal = std::min(marginal, given);
      }
    }
    CHECK(marginal == dag.minimum());

    // Legal projections through the function keep the DAG exact.
    for (int step = 0; step < 6; ++step) {
      const int pos = rng.uniform(0, n - 1);
      const auto values = domains[static_cast<std::size_t>(pos)].values();
      const int v = values[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(values.size()) - 1))];
      const SignedCost bound = func->dag().min_given(pos, v);
      if (is_inf(bound) || bound <= 0) continue;
      func->shift(pos, v, rng.uniform(1, static_cast<int>(std::min<SignedCost>(bound, 5))));
    }
    FilterDag& shifted = func->dag();
    CHECK_NOTHROW(shifted.validate());
    CHECK(to_cost(shifted.minimum()) == brute_force_min(*func, domains).cost);
    FilterDag fresh = shifted;
    fresh.invalidate();
    fresh.build_min_plus(domains);
    for (int pos = 0; pos < n; ++pos) {
      for (int v = 0; v < d; ++v) {
        CHECK(to_cost(shifted.min_given(pos, v)) == brute_force_conditioned_min(*func, domains, pos, v));
        CHECK(shifted.min_given(pos, v) == fresh.min_given(pos, v));
      }
    }
  }
}
