#include <vector>

#include "cfn/cost.hpp"
#include "cfn/model.hpp"
#include "cfn/oracle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cfn;

TEST_CASE("cost addition saturates at top") {
  CHECK(cost_add(3, 4) == 7);
  CHECK(cost_add(kInfinity, 1) == kInfinity);
  CHECK(cost_add(6, 5, 10) == 10);
  for (Cost x : {Cost{0}, Cost{1}, Cost{17}, kInfinity}) CHECK(cost_add(0, x) == x);
}

TEST_CASE("cost subtraction") {
  CHECK(cost_sub(7, 4) == 3);
  CHECK(cost_sub(kInfinity, 3) == kInfinity);
  CHECK_THROWS_AS(cost_sub(5, 7), PreconditionError);
  CHECK(cost_shift(5, -3) == 8);
  CHECK(cost_shift(5, 3) == 2);
}

TEST_CASE("cost algebra laws hold on a grid") {
  const Cost top = 40;
  const std::vector<Cost> values{0, 1, 2, 5, 13, 20, 39, 40};
  for (Cost a : values) {
    for (Cost b : values) {
      CHECK(cost_add(a, b, top) == cost_add(b, a, top));
      if (cost_add(a, b, top) < top) CHECK(cost_sub(cost_add(a, b, top), b, top) == a);
      for (Cost c : values) {
        CHECK(cost_add(cost_add(a, b, top), c, top) == cost_add(a, cost_add(b, c, top), top));
        if (a <= c) CHECK(cost_add(a, b, top) <= cost_add(c, b, top));
      }
    }
  }
}

TEST_CASE("scopes must be strictly increasing") {
  CHECK_NOTHROW(check_scope({0, 2, 5}));
  CHECK_THROWS_AS(check_scope({2, 1}), PreconditionError);
  CHECK_THROWS_AS(check_scope({1, 1}), PreconditionError);
}

TEST_CASE("eval_total") {
  SUBCASE("empty network") {
    Cfn cfn;
    CHECK(eval_total(cfn, std::vector<int>{}) == 0);
  }
  SUBCASE("single unary") {
    Cfn cfn;
    cfn.add_variable("x", 2);
    cfn.set_unary(0, 0, 2);
    CHECK(eval_total(cfn, std::vector<int>{0}) == 2);
  }
  SUBCASE("w_zero plus a binary table") {
    Cfn cfn;
    cfn.add_variable("x", 2);
    cfn.add_variable("y", 2);
    cfn.set_w_zero(1);
    auto t = std::make_unique<TableFunction>(Scope{0, 1}, std::vector<int>{2, 2}, 0);
    t->set(std::vector<int>{0, 1}, 3);
    cfn.add_function(std::move(t));
    CHECK(eval_total(cfn, std::vector<int>{0, 1}) == 4);
    CHECK(eval_total(cfn, std::vector<int>{1, 1}) == 1);
  }
  SUBCASE("saturates at the network top") {
    Cfn cfn(10);
    cfn.add_variable("x", 1);
    cfn.set_w_zero(6);
    cfn.set_unary(0, 0, 7);
    CHECK(eval_total(cfn, std::vector<int>{0}) == 10);
  }
}

TEST_CASE("brute force minimum") {
  Cfn cfn;
  cfn.add_variable("x", 2);
  auto unary = std::make_unique<TableFunction>(Scope{0}, std::vector<int>{2}, 0);
  unary->set(std::vector<int>{0}, 2);
  cfn.add_function(std::move(unary));
  auto r = brute_force_min(cfn.function(0), cfn.domains());
  CHECK(r.cost == 0);
  CHECK(r.witness == std::vector<int>{1});

  TableFunction hard(Scope{0}, {2}, kInfinity);
  auto h = brute_force_min(hard, cfn.domains());
  CHECK(h.cost == kInfinity);
  CHECK(h.witness == std::vector<int>{0});
  CHECK(brute_force_min(hard, cfn.domains()).witness == h.witness);
}

TEST_CASE("brute force minimum of among over three boolean variables matches the closed form") {
  const std::vector<int> sizes{2, 2, 2};
  for (int lb = 0; lb <= 3; ++lb) {
    for (int ub = lb; ub <= 3; ++ub) {
      AmongFunction func(make_among({0, 1, 2}, {1}, lb, ub), sizes);
      const auto domains = full_domains(sizes);
      // Any count 0..3 is reachable, so the minimum is 0.
      CHECK(brute_force_min(func, domains).cost == 0);
    }
  }
}

TEST_CASE("brute force minimum enforces the enumeration cap") {
  TableFunction t(Scope{0, 1, 2}, {10, 10, 10}, 0);
  CHECK_THROWS_AS(brute_force_min(t, full_domains(std::vector<int>{10, 10, 10}), 100), CapExceeded);
}

TEST_CASE("brute force solve") {
  SUBCASE("all zero") {
    Cfn cfn;
    cfn.add_variable("x", 3);
    cfn.add_variable("y", 2);
    auto r = brute_force_solve(cfn);
    CHECK(r.cost == 0);
    CHECK(r.witness == std::vector<int>{0, 0});
  }
  SUBCASE("separable unaries") {
    Cfn cfn;
    for (int i = 0; i < 3; ++i) cfn.add_variable("x" + std::to_string(i), 3);
    Cost expected = 0;
    Rng rng(5);
    for (int i = 0; i < 3; ++i) {
      Cost low = kInfinity;
      for (int v = 0; v < 3; ++v) {
        const Cost c = static_cast<Cost>(rng.uniform(1, 9));
        cfn.set_unary(i, v, c);
        low = std::min(low, c);
      }
      expected += low;
    }
    CHECK(brute_force_solve(cfn).cost == expected);
  }
}
