#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "topo/builtins.hpp"
#include "topo/evaluate.hpp"
#include "topo/structures.hpp"
#include "topo/translate.hpp"
#include "topo/verify.hpp"

using namespace topo;

namespace {

const Environment kEmpty = Environment::hard_wired(0);

Topology sierpinski() { return make_topology(2, {0b00, 0b01, 0b11}); }

}  // namespace

TEST_CASE("phi_sharp rewrites <= into containment in every open set") {
  auto leq = parse_formula("x <= y", Dialect::CMSOL,
                           {{"x", Sort::point}, {"y", Sort::point}});
  REQUIRE(leq.ok());
  FormulaPtr translated = phi_sharp(leq.formula);
  CHECK(translated->kind == NodeKind::Forall);
  CHECK(translated->var_sort == Sort::open_set);
  CHECK(translated->child->kind == NodeKind::Implies);
  CHECK(translated->child->child->kind == NodeKind::Member);
  // y's membership is the premise, x's the conclusion.
  CHECK(translated->child->child->lhs.var == "y");
  CHECK(translated->child->child2->lhs.var == "x");

  // Pointwise: x <= y in alpha(t) iff the translation holds in t.
  for (int n = 1; n <= 3; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      Topology t = alpha_prime(q);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          Environment env = kEmpty;
          env.bindings["x"] = Value::of_point(x);
          env.bindings["y"] = Value::of_point(y);
          REQUIRE(evaluate(t, translated, env) == q.leq(x, y));
        }
    });
  }
}

TEST_CASE("phi_sharp of reflexivity is true on every small topology") {
  auto refl = parse_formula("all point x. x <= x", Dialect::CMSOL);
  REQUIRE(refl.ok());
  FormulaPtr translated = phi_sharp(refl.formula);
  for (int n = 0; n <= 3; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      REQUIRE(evaluate(alpha_prime(q), translated, kEmpty));
    });
  }
}

TEST_CASE("phi_sharp is the identity on formulas without <=") {
  auto f = parse_formula("all point x. ex point y. (x = y & count[2,0] z. z = x)",
                         Dialect::CMSOL);
  REQUIRE(f.ok());
  CHECK(structurally_equal(phi_sharp(f.formula), f.formula));
}

TEST_CASE("phi_sharp avoids capturing open-set variables of the input") {
  // An input that already uses the name _V0 for a point variable.
  auto f = parse_formula("all point _V0. _V0 <= _V0", Dialect::CMSOL);
  REQUIRE(f.ok());
  FormulaPtr translated = phi_sharp(f.formula);
  auto diags = check_well_sorted(translated, Dialect::TCMSOL, ConstantTable{});
  CHECK(diags.empty());
  for (int n = 1; n <= 2; ++n)
    for_each_preorder(n, [&](const Preorder& q) {
      REQUIRE(evaluate(alpha_prime(q), translated, kEmpty));
    });
}

TEST_CASE("psi_sharp guards bound open-set quantifiers with the down-set condition") {
  auto f = parse_formula("ex open U. a1 in U", Dialect::TCMSOL);
  REQUIRE(f.ok());
  FormulaPtr translated = psi_sharp(f.formula);
  CHECK(translated->kind == NodeKind::Exists);
  CHECK(translated->var_sort == Sort::point_set);
  CHECK(translated->child->kind == NodeKind::And);  // guard & body

  // True on every preorder: take U = below(a1).
  Environment env = Environment::hard_wired(1);
  for (int n = 1; n <= 3; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      REQUIRE(evaluate(q, translated, env));
    });
  }
}

TEST_CASE("psi_sharp of t0 holds exactly on posets") {
  FormulaPtr translated = psi_sharp(builtin_t0());
  auto diags = check_well_sorted(translated, Dialect::CMSOL, ConstantTable{});
  CHECK(diags.empty());
  for (int n = 0; n <= 4; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      bool antisym = true;
      for (int x = 0; x < n && antisym; ++x)
        for (int y = 0; y < n; ++y)
          if (x != y && q.leq(x, y) && q.leq(y, x)) {
            antisym = false;
            break;
          }
      REQUIRE(evaluate(q, translated, kEmpty) == antisym);
    });
  }
}

TEST_CASE("psi_sharp is the identity on formulas without open-set constructs") {
  auto f = parse_formula(
      "ex set S. (count[3,1] x. x in S & all point y. y = y)",
      Dialect::TCMSOL);
  REQUIRE(f.ok());
  CHECK(structurally_equal(psi_sharp(f.formula), f.formula));
}

TEST_CASE("psi_sharp guards free open-set variables at each atom") {
  auto f = parse_formula("a1 in U", Dialect::TCMSOL, {{"U", Sort::open_set}});
  REQUIRE(f.ok());
  FormulaPtr translated = psi_sharp(f.formula);
  CHECK(translated->kind == NodeKind::And);  // guard & U(a1)

  // With U bound to a down-set containing a1 it holds; with a non-down-set
  // value the guard rejects it.
  Preorder chain{2, {0b01, 0b11}};  // 1 <= 2
  Environment env = Environment::hard_wired(1);
  env.bindings["U"] = Value::of_set(0b01);  // {1}, a down-set
  CHECK(evaluate(chain, translated, env));
  env.bindings["U"] = Value::of_set(0b10);  // {2}, not a down-set
  CHECK_FALSE(evaluate(chain, translated, env));
}

TEST_CASE("the down-set guard recognizes exactly the opens of alpha_prime") {
  TranslationScheme psi = psi_scheme();
  for (int n = 0; n <= 4; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      Topology t = alpha_prime(q);
      for (Mask s = 0;; ++s) {
        Environment env = kEmpty;
        env.bindings["U"] = Value::of_set(s);
        REQUIRE(evaluate(q, psi.open_def, env) == t.is_open(s));
        if (s == full_mask(n)) break;
      }
    });
  }
}

TEST_CASE("psi_basic defines the basic open sets below(x)") {
  TranslationScheme psi = psi_scheme();
  for (int n = 1; n <= 3; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      for (int x = 0; x < n; ++x) {
        for (Mask s = 0; s <= full_mask(n); ++s) {
          Environment env = kEmpty;
          env.bindings["x"] = Value::of_point(x);
          env.bindings["U"] = Value::of_set(s);
          REQUIRE(evaluate(q, psi.basic_def, env) == (s == q.below[x]));
        }
      }
    });
  }
}

TEST_CASE("structure maps are alpha and alpha_prime") {
  CHECK(phi_star(sierpinski()) == alpha(sierpinski()));
  Preorder identity{2, {0b01, 0b10}};
  CHECK(psi_star(identity) == alpha_prime(identity));
  for (int n = 0; n <= 4; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      REQUIRE(phi_star(psi_star(q)) == q);
    });
  }
}

TEST_CASE("semantic transfer for the CMSOL suite (theorem direction ii)") {
  for (const auto& entry : cmsol_suite()) {
    FormulaPtr translated = phi_sharp(entry.formula);
    CHECK(check_well_sorted(translated, Dialect::TCMSOL,
                            ConstantTable{entry.r})
              .empty());
    Environment env = Environment::hard_wired(entry.r);
    for (int n = entry.r; n <= 3; ++n) {
      for_each_preorder(n, [&](const Preorder& q) {
        Topology t = alpha_prime(q);
        REQUIRE(evaluate(alpha(t), entry.formula, env) ==
                evaluate(t, translated, env));
      });
    }
  }
}

TEST_CASE("semantic transfer for the TCMSOL suite (theorem direction iii)") {
  for (const auto& entry : tcmsol_suite()) {
    FormulaPtr translated = psi_sharp(entry.formula);
    CHECK(check_well_sorted(translated, Dialect::CMSOL,
                            ConstantTable{entry.r})
              .empty());
    Environment env = Environment::hard_wired(entry.r);
    for (int n = entry.r; n <= 3; ++n) {
      for_each_preorder(n, [&](const Preorder& q) {
        REQUIRE(evaluate(alpha_prime(q), entry.formula, env) ==
                evaluate(q, translated, env));
      });
    }
  }
}

TEST_CASE("counting transfer: topologies with sigma = preorders with psi#(sigma)") {
  for (const auto& entry : tcmsol_suite()) {
    FormulaPtr translated = psi_sharp(entry.formula);
    Environment env = Environment::hard_wired(entry.r);
    for (int n = entry.r; n <= 4; ++n) {
      std::uint64_t over_topologies = 0, over_preorders = 0;
      for_each_preorder(n, [&](const Preorder& q) {
        if (evaluate(alpha_prime(q), entry.formula, env)) ++over_topologies;
        if (evaluate(q, translated, env)) ++over_preorders;
      });
      REQUIRE(over_topologies == over_preorders);
    }
  }
}

TEST_CASE("psi_sharp keeps shadowed open-set binders separate") {
  // The inner U shadows the outer one; both become point-set binders.
  auto f = parse_formula(
      "ex open U. (a1 in U & ex open U. all point w. (w in U -> w = a1))",
      Dialect::TCMSOL);
  REQUIRE(f.ok());
  FormulaPtr translated = psi_sharp(f.formula);
  CHECK(check_well_sorted(translated, Dialect::CMSOL, ConstantTable{1}).empty());
  Environment env = Environment::hard_wired(1);
  for (int n = 1; n <= 3; ++n) {
    for_each_preorder(n, [&](const Preorder& q) {
      REQUIRE(evaluate(alpha_prime(q), f.formula, env) ==
              evaluate(q, translated, env));
    });
  }
}

TEST_CASE("psi_sharp rejects CMSOL input") {
  auto leq = parse_formula("all point x. x <= x", Dialect::CMSOL);
  REQUIRE(leq.ok());
  CHECK_THROWS_AS(psi_sharp(leq.formula), std::invalid_argument);
}
