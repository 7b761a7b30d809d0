#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "topo/builtins.hpp"
#include "topo/evaluate.hpp"
#include "topo/logic.hpp"
#include "topo/structures.hpp"

using namespace topo;

namespace {

Topology sierpinski() { return make_topology(2, {0b00, 0b01, 0b11}); }
Topology discrete(int n) {
  std::vector<Mask> opens;
  for (Mask m = 0; m <= full_mask(n); ++m) opens.push_back(m);
  return make_topology(n, opens);
}
Topology indiscrete(int n) { return make_topology(n, {0, full_mask(n)}); }

const Environment kEmpty = Environment::hard_wired(0);

// Comparability components of the specialization preorder: the connected
// components of a finite space.
std::vector<int> component_ids(const Preorder& q) {
  std::vector<int> comp(q.n, -1);
  int next = 0;
  for (int start = 0; start < q.n; ++start) {
    if (comp[start] >= 0) continue;
    comp[start] = next;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int y = stack.back();
      stack.pop_back();
      for (int x = 0; x < q.n; ++x) {
        if (comp[x] >= 0) continue;
        if (q.leq(x, y) || q.leq(y, x)) {
          comp[x] = next;
          stack.push_back(x);
        }
      }
    }
    ++next;
  }
  return comp;
}

}  // namespace

TEST_CASE("spec evaluation examples") {
  CHECK(evaluate(discrete(2), builtin_t0(), kEmpty));
  CHECK_FALSE(evaluate(indiscrete(2), builtin_t0(), kEmpty));

  auto even = parse_formula("count[2,0] x. x = x", Dialect::TCMSOL);
  REQUIRE(even.ok());
  CHECK(evaluate(indiscrete(4), even.formula, kEmpty));
  CHECK_FALSE(evaluate(indiscrete(3), even.formula, kEmpty));

  Environment one_const = Environment::hard_wired(1);
  CHECK(evaluate(sierpinski(), builtin_minimal_open_const(1), one_const));
  // On the indiscrete space {a1} is not open.
  CHECK_FALSE(
      evaluate(indiscrete(2), builtin_minimal_open_const(1), one_const));
}

TEST_CASE("count_points_satisfying") {
  auto self = parse_formula("x = x", Dialect::TCMSOL, {{"x", Sort::point}});
  REQUIRE(self.ok());
  CHECK(count_points_satisfying(discrete(5), self.formula, "x", kEmpty) == 5);

  // Every nonempty open set of the Sierpinski space contains point 1.
  auto apart = parse_formula("ex open U. (x in U & ~(a1 in U))",
                             Dialect::TCMSOL, {{"x", Sort::point}});
  REQUIRE(apart.ok());
  CHECK(count_points_satisfying(sierpinski(), apart.formula, "x",
                                Environment::hard_wired(1)) == 0);

  auto in_s = parse_formula("x in S", Dialect::TCMSOL,
                            {{"x", Sort::point}, {"S", Sort::point_set}});
  REQUIRE(in_s.ok());
  Environment env = kEmpty;
  env.bindings["S"] = Value::of_set(0b101);
  CHECK(count_points_satisfying(discrete(3), in_s.formula, "x", env) == 2);
}

TEST_CASE("CountMod agrees with count_points_satisfying everywhere") {
  auto body = parse_formula("ex open U. (x in U & ~(y in U))", Dialect::TCMSOL,
                            {{"x", Sort::point}, {"y", Sort::point}});
  REQUIRE(body.ok());
  for (int n = 1; n <= 3; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      Topology t = alpha_prime(q);
      for (int y = 0; y < n; ++y) {
        Environment env = kEmpty;
        env.bindings["y"] = Value::of_point(y);
        int count = count_points_satisfying(t, body.formula, "x", env);
        for (int m = 1; m <= 4; ++m) {
          for (int a = 0; a < m; ++a) {
            auto counted = mk_count_mod(m, a, "x", body.formula);
            CHECK(evaluate(t, counted, env) == (count % m == a));
          }
        }
      }
    });
  }
}

TEST_CASE("quantifier duality on randomized instances") {
  oracle::SplitMix64 rng(0xd0a1);
  auto member_x = [](Sort s, const std::string& v) {
    return mk_member(PointTerm::variable("x"), v, s);
  };
  std::vector<FormulaPtr> bodies = {
      member_x(Sort::open_set, "U"),
      mk_and(member_x(Sort::open_set, "U"),
             mk_not(mk_point_eq(PointTerm::variable("x"),
                                PointTerm::variable("x")))),
      mk_iff(member_x(Sort::open_set, "U"), member_x(Sort::point_set, "S")),
  };
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + (int)rng.below(3);
    std::vector<Preorder> pres;
    for_each_preorder(n, [&](const Preorder& q) { pres.push_back(q); });
    Topology t = alpha_prime(pres[rng.below(pres.size())]);
    Environment env = kEmpty;
    env.bindings["x"] = Value::of_point((int)rng.below(n));
    env.bindings["S"] = Value::of_set((Mask)rng.below(full_mask(n) + 1));
    for (const auto& body : bodies) {
      for (Sort sort : {Sort::point, Sort::open_set, Sort::point_set}) {
        std::string var =
            sort == Sort::point ? "x" : sort == Sort::open_set ? "U" : "S";
        auto not_exists = mk_not(mk_exists(var, sort, body));
        auto all_not = mk_forall(var, sort, mk_not(body));
        Environment inner = env;
        inner.bindings.erase(var);
        if (sort != Sort::open_set) inner.bindings["U"] = Value::of_open(0);
        CHECK(evaluate(t, not_exists, inner) == evaluate(t, all_not, inner));
      }
    }
  }
}

TEST_CASE("builtin t0 iff the specialization preorder is antisymmetric") {
  for (int n = 0; n <= 4; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      Topology t = alpha_prime(q);
      bool antisym = true;
      for (int x = 0; x < n && antisym; ++x)
        for (int y = 0; y < n; ++y)
          if (x != y && q.leq(x, y) && q.leq(y, x)) {
            antisym = false;
            break;
          }
      REQUIRE(evaluate(t, builtin_t0(), kEmpty) == antisym);
    });
  }
}

TEST_CASE("builtin t1 iff every co-singleton is open") {
  for (int n = 0; n <= 4; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      Topology t = alpha_prime(q);
      bool co_singletons_open = true;
      for (int x = 0; x < n; ++x)
        if (!t.is_open(full_mask(n) & ~(Mask{1} << x))) {
          co_singletons_open = false;
          break;
        }
      REQUIRE(evaluate(t, builtin_t1(), kEmpty) == co_singletons_open);
    });
  }
}

TEST_CASE("builtin connected iff the comparability graph is connected") {
  CHECK(evaluate(sierpinski(), builtin_connected(), kEmpty));
  for (int n = 0; n <= 4; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      Topology t = alpha_prime(q);
      auto comp = component_ids(q);
      bool connected = true;
      for (int id : comp)
        if (id != 0) connected = false;
      REQUIRE(evaluate(t, builtin_connected(), kEmpty) == connected);
    });
  }
}

TEST_CASE("builtin even_set_not_open against a direct subset scan") {
  for (int n = 0; n <= 4; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      Topology t = alpha_prime(q);
      bool witness = false;
      for (Mask s = 0;; ++s) {
        if (popcount(s) % 2 == 0 && !t.is_open(s)) {
          witness = true;
          break;
        }
        if (s == full_mask(n)) break;
      }
      REQUIRE(evaluate(t, builtin_even_set_not_open(), kEmpty) == witness);
    });
  }
}

TEST_CASE("different_components matches the component oracle") {
  Environment env = Environment::hard_wired(2);
  for (int n = 2; n <= 4; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      Topology t = alpha_prime(q);
      auto comp = component_ids(q);
      bool expect = comp[0] != comp[1];
      REQUIRE(evaluate(t, builtin_different_components(2), env) == expect);
      // And same_component is its complement on the same pair.
      Environment pts = env;
      pts.bindings["x"] = Value::of_point(0);
      pts.bindings["y"] = Value::of_point(1);
      REQUIRE(evaluate(t, builtin_same_component("x", "y"), pts) == !expect);
    });
  }
}

TEST_CASE("pairwise_separated and smallest_open") {
  Environment env2 = Environment::hard_wired(2);
  CHECK(evaluate(discrete(2), builtin_pairwise_separated(2), env2));
  CHECK_FALSE(evaluate(sierpinski(), builtin_pairwise_separated(2), env2));

  Environment env = kEmpty;
  env.bindings["x"] = Value::of_point(1);
  env.bindings["U"] = Value::of_open(0b11);
  CHECK(evaluate(sierpinski(), builtin_smallest_open("x", "U"), env));
  env.bindings["x"] = Value::of_point(0);
  CHECK_FALSE(evaluate(sierpinski(), builtin_smallest_open("x", "U"), env));
  env.bindings["U"] = Value::of_open(0b01);
  CHECK(evaluate(sierpinski(), builtin_smallest_open("x", "U"), env));

  // smallest_open(x,U) holds exactly when U = U_x, on every small topology.
  for (int n = 1; n <= 3; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      Topology t = alpha_prime(q);
      for (int x = 0; x < n; ++x) {
        Mask ux = minimal_open_set(t, x);
        for (Mask open : t.opens) {
          Environment e = kEmpty;
          e.bindings["x"] = Value::of_point(x);
          e.bindings["U"] = Value::of_open(open);
          REQUIRE(evaluate(t, builtin_smallest_open("x", "U"), e) ==
                  (open == ux));
        }
      }
    });
  }
}

TEST_CASE("evaluation errors") {
  auto f = parse_formula("x = x", Dialect::TCMSOL, {{"x", Sort::point}});
  REQUIRE(f.ok());
  CHECK_THROWS_AS(evaluate(discrete(2), f.formula, kEmpty), EvalError);

  Environment env = kEmpty;
  env.bindings["x"] = Value::of_set(0b1);  // wrong sort
  CHECK_THROWS_AS(evaluate(discrete(2), f.formula, env), EvalError);

  auto leq = parse_formula("all point x. x <= x", Dialect::CMSOL);
  REQUIRE(leq.ok());
  CHECK_THROWS_AS(evaluate(discrete(2), leq.formula, kEmpty), EvalError);

  // Caps: point-set quantifiers cap at 6 by default, FOL at 10.
  auto mso = parse_formula("ex set S. ex point x. x in S", Dialect::TCMSOL);
  REQUIRE(mso.ok());
  Preorder big_identity{7, {}};
  for (int i = 0; i < 7; ++i) big_identity.below.push_back(Mask{1} << i);
  Topology big = alpha_prime(big_identity);
  CHECK_THROWS_AS(evaluate(big, mso.formula, kEmpty), EvalError);
  CHECK(evaluate(big, builtin_t0(), kEmpty));  // FOL-style still fine at n=7

  // Open-set binding must name an open set.
  auto member = parse_formula("a1 in U", Dialect::TCMSOL,
                              {{"U", Sort::open_set}});
  REQUIRE(member.ok());
  Environment bound = Environment::hard_wired(1);
  bound.bindings["U"] = Value::of_open(0b10);
  CHECK_THROWS_AS(evaluate(sierpinski(), member.formula, bound), EvalError);
}

TEST_CASE("evaluation is deterministic and input-order invariant") {
  // Canonicalization makes extensionality literal: any ordering of the opens
  // yields the same canonical structure, hence the same value.
  auto v1 = validate_topology(2, {0b11, 0b01, 0b00});
  auto v2 = validate_topology(2, {0b00, 0b01, 0b11});
  REQUIRE(v1.ok());
  REQUIRE(v2.ok());
  CHECK(*v1.topology == *v2.topology);
  CHECK(evaluate(*v1.topology, builtin_t0(), kEmpty) ==
        evaluate(*v2.topology, builtin_t0(), kEmpty));
  CHECK(evaluate(*v1.topology, builtin_t0(), kEmpty) ==
        evaluate(*v1.topology, builtin_t0(), kEmpty));
}

TEST_CASE("check_basis_invariance") {
  Environment one = Environment::hard_wired(1);
  // Witnessed both ways: some basis element contains a1.
  auto f = parse_formula("ex open U. a1 in U", Dialect::TCMSOL);
  REQUIRE(f.ok());
  for (int n = 1; n <= 3; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      REQUIRE(check_basis_invariance(alpha_prime(q), f.formula, one));
    });
  }

  // True over the opens of the discrete space (U = X), false over its
  // minimal basis (singletons only).
  auto all_in = parse_formula("ex open U. all point x. x in U",
                              Dialect::TCMSOL);
  REQUIRE(all_in.ok());
  CHECK_FALSE(check_basis_invariance(discrete(2), all_in.formula));
  CHECK(check_basis_invariance(indiscrete(3), all_in.formula));

  // t0 is basis-invariant on every small topology: re-evaluating over the
  // basis gives the same truth value.
  for (int n = 0; n <= 3; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      Topology t = alpha_prime(q);
      REQUIRE(check_basis_invariance(t, builtin_t0(), kEmpty));
    });
  }

  auto mso = parse_formula("ex set S. ex point x. x in S", Dialect::TCMSOL);
  REQUIRE(mso.ok());
  CHECK_THROWS_AS(check_basis_invariance(discrete(2), mso.formula), EvalError);
}

TEST_CASE("open-extension monotonicity of an existential separation formula") {
  // f = "some open set holds a1 but not a2": preserved when passing to a
  // larger space of which the current one is an open substructure.
  auto f = parse_formula("ex open U. (a1 in U & ~(a2 in U))", Dialect::TCMSOL);
  REQUIRE(f.ok());
  Environment env = Environment::hard_wired(2);
  int pairs = 0;
  for (int n = 2; n <= 4; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      Topology t2 = alpha_prime(q);
      for (Mask open : t2.opens) {
        if (!has_point(open, 0) || !has_point(open, 1)) continue;
        std::vector<int> embedding;
        for (int p = 0; p < n; ++p)
          if (has_point(open, p)) embedding.push_back(p);
        // The two smallest points of the image are 1 and 2, so hard-wired
        // constants agree across the embedding.
        std::set<Mask> traces;
        for (Mask o : t2.opens) {
          Mask pulled = 0;
          for (size_t i = 0; i < embedding.size(); ++i)
            if (has_point(o, embedding[i])) pulled |= Mask{1} << i;
          traces.insert(pulled);
        }
        Topology t{(int)embedding.size(), {traces.begin(), traces.end()}};
        REQUIRE(is_open_substructure(t, t2, embedding));
        ++pairs;
        if (evaluate(t, f.formula, env)) REQUIRE(evaluate(t2, f.formula, env));
      }
    });
  }
  CHECK(pairs > 100);
}
