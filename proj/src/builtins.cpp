#include "topo/builtins.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace topo {

namespace {

PointTerm pv(const std::string& v) { return PointTerm::variable(v); }
PointTerm pc(int i) { return PointTerm::constant(i); }

// Parameterized builtins splice caller-chosen variables into bodies with
// internal binders; collisions would capture them.
void reject_internal_names(std::initializer_list<std::string> params,
                           std::initializer_list<std::string> internals) {
  for (const auto& p : params)
    for (const auto& i : internals)
      if (p == i)
        throw std::invalid_argument("variable name '" + p +
                                    "' collides with an internal binder");
}

FormulaPtr member(const std::string& x, const std::string& U) {
  return mk_member(pv(x), U, Sort::open_set);
}
FormulaPtr member(PointTerm t, const std::string& U) {
  return mk_member(t, U, Sort::open_set);
}

// ex point w. w in U
FormulaPtr nonempty(const std::string& U) {
  return mk_exists("w", Sort::point, member("w", U));
}

// all point w. ~(w in U & w in V)
FormulaPtr disjoint(const std::string& U, const std::string& V) {
  return mk_forall("w", Sort::point,
                   mk_not(mk_and(member("w", U), member("w", V))));
}

// all point w. (w in V -> w in U)
FormulaPtr subset(const std::string& V, const std::string& U) {
  return mk_forall("w", Sort::point,
                   mk_implies(member("w", V), member("w", U)));
}

// all point w. ~(w in V)
FormulaPtr empty_set(const std::string& V) {
  return mk_forall("w", Sort::point, mk_not(member("w", V)));
}

// ex open V. all point w. (w in V <-> ~(w in U))
FormulaPtr complement_open(const std::string& U) {
  return mk_exists(
      "V", Sort::open_set,
      mk_forall("w", Sort::point,
                mk_iff(member("w", "V"), mk_not(member("w", U)))));
}

}  // namespace

FormulaPtr builtin_true() {
  return mk_forall("x", Sort::point, mk_point_eq(pv("x"), pv("x")));
}

FormulaPtr builtin_t0() {
  // Some open set contains exactly one of any two distinct points.
  auto separated = mk_or(
      mk_and(member("x", "U"), mk_not(member("y", "U"))),
      mk_and(mk_not(member("x", "U")), member("y", "U")));
  return mk_forall(
      "x", Sort::point,
      mk_forall("y", Sort::point,
                mk_implies(mk_not(mk_point_eq(pv("x"), pv("y"))),
                           mk_exists("U", Sort::open_set, separated))));
}

FormulaPtr builtin_t1() {
  // Every co-singleton is open: for each point x some open set holds
  // exactly the points different from x.
  auto co_singleton = mk_forall(
      "y", Sort::point,
      mk_iff(member("y", "U"), mk_not(mk_point_eq(pv("y"), pv("x")))));
  return mk_forall("x", Sort::point,
                   mk_exists("U", Sort::open_set, co_singleton));
}

FormulaPtr builtin_connected() {
  // No two non-empty disjoint open sets cover the space.
  auto covers = mk_forall("w", Sort::point,
                          mk_or(member("w", "U"), member("w", "V")));
  auto split = mk_and_all(
      {nonempty("U"), nonempty("V"), disjoint("U", "V"), covers});
  return mk_not(
      mk_exists("U", Sort::open_set, mk_exists("V", Sort::open_set, split)));
}

FormulaPtr builtin_smallest_open(const std::string& x, const std::string& U) {
  reject_internal_names({x, U}, {"V", "w"});
  // U contains x and is contained in every open set containing x.
  auto minimal = mk_forall(
      "V", Sort::open_set,
      mk_implies(member(x, "V"),
                 mk_forall("w", Sort::point,
                           mk_implies(member("w", U), member("w", "V")))));
  return mk_and(member(x, U), minimal);
}

FormulaPtr builtin_minimal_open_const(int r) {
  if (r < 1 || r > 9)
    throw std::invalid_argument("minimal_open_const needs 1 <= r <= 9");
  // {a1,...,ar} is a minimal non-empty open set.
  std::vector<FormulaPtr> contains;
  for (int i = 1; i <= r; ++i) contains.push_back(member(pc(i), "U"));
  std::vector<FormulaPtr> not_const;
  for (int i = 1; i <= r; ++i)
    not_const.push_back(mk_not(mk_point_eq(pv("x"), pc(i))));
  auto only_consts = mk_forall(
      "x", Sort::point,
      mk_implies(mk_and_all(not_const), mk_not(member("x", "U"))));
  auto minimal = mk_forall(
      "V", Sort::open_set,
      mk_implies(subset("V", "U"),
                 mk_or(mk_set_eq("V", "U", Sort::open_set), empty_set("V"))));
  std::vector<FormulaPtr> parts = contains;
  parts.push_back(only_consts);
  parts.push_back(minimal);
  return mk_exists("U", Sort::open_set, mk_and_all(parts));
}

FormulaPtr builtin_pairwise_separated(int r) {
  if (r < 1 || r > 9)
    throw std::invalid_argument("pairwise_separated needs 1 <= r <= 9");
  // Pairwise disjoint open sets U1..Ur with ai in Ui.
  std::vector<std::string> names;
  for (int i = 1; i <= r; ++i) names.push_back("U" + std::to_string(i));
  std::vector<FormulaPtr> parts;
  for (int i = 0; i < r; ++i) parts.push_back(member(pc(i + 1), names[i]));
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      parts.push_back(disjoint(names[i], names[j]));
  FormulaPtr body = mk_and_all(parts);
  for (int i = r - 1; i >= 0; --i)
    body = mk_exists(names[i], Sort::open_set, body);
  return body;
}

FormulaPtr builtin_different_components(int r) {
  if (r < 2 || r > 9)
    throw std::invalid_argument("different_components needs 2 <= r <= 9");
  // In a finite space components and quasi-components coincide, so ai and aj
  // lie in different components iff some clopen set splits them.
  std::vector<FormulaPtr> parts;
  for (int i = 1; i <= r; ++i) {
    for (int j = i + 1; j <= r; ++j) {
      auto split = mk_and_all({builtin_clopen("U"), member(pc(i), "U"),
                               mk_not(member(pc(j), "U"))});
      parts.push_back(mk_exists("U", Sort::open_set, split));
    }
  }
  return mk_and_all(parts);
}

FormulaPtr builtin_even_set_not_open() {
  // A point set of even cardinality that no open set matches extensionally.
  auto even = mk_count_mod(2, 0, "x", mk_member(pv("x"), "S", Sort::point_set));
  auto matches = mk_forall(
      "x", Sort::point,
      mk_iff(member("x", "U"), mk_member(pv("x"), "S", Sort::point_set)));
  auto not_open = mk_not(mk_exists("U", Sort::open_set, matches));
  return mk_exists("S", Sort::point_set, mk_and(even, not_open));
}

FormulaPtr builtin_clopen(const std::string& U) {
  reject_internal_names({U}, {"V", "w"});
  return complement_open(U);
}

FormulaPtr builtin_same_component(const std::string& x, const std::string& y) {
  reject_internal_names({x, y}, {"U", "V", "w"});
  // Every clopen set contains both or neither.
  auto together = mk_iff(member(x, "U"), member(y, "U"));
  return mk_forall("U", Sort::open_set,
                   mk_implies(builtin_clopen("U"), together));
}

namespace {

struct SpecParts {
  std::string name;
  std::vector<std::string> args;
};

SpecParts split_spec(const std::string& spec) {
  SpecParts out;
  auto lp = spec.find('(');
  if (lp == std::string::npos) {
    out.name = spec;
    return out;
  }
  if (spec.back() != ')')
    throw std::invalid_argument("malformed builtin spec: " + spec);
  out.name = spec.substr(0, lp);
  std::string inner = spec.substr(lp + 1, spec.size() - lp - 2);
  std::string cur;
  for (char c : inner) {
    if (c == ',') {
      out.args.push_back(cur);
      cur.clear();
    } else if (!std::isspace((unsigned char)c)) {
      cur += c;
    }
  }
  if (!cur.empty()) out.args.push_back(cur);
  return out;
}

int int_arg(const SpecParts& p, size_t i) {
  if (i >= p.args.size())
    throw std::invalid_argument("builtin " + p.name + " needs a parameter");
  try {
    return std::stoi(p.args[i]);
  } catch (...) {
    throw std::invalid_argument("builtin " + p.name +
                                " needs an integer parameter");
  }
}

std::string var_arg(const SpecParts& p, size_t i) {
  if (i >= p.args.size())
    throw std::invalid_argument("builtin " + p.name + " needs a variable");
  return p.args[i];
}

}  // namespace

Builtin make_builtin(const std::string& spec) {
  SpecParts p = split_spec(spec);
  Builtin b;
  if (p.name == "true") {
    b.formula = builtin_true();
  } else if (p.name == "t0") {
    b.formula = builtin_t0();
  } else if (p.name == "t1") {
    b.formula = builtin_t1();
  } else if (p.name == "connected") {
    b.formula = builtin_connected();
  } else if (p.name == "smallest_open") {
    auto x = var_arg(p, 0), U = var_arg(p, 1);
    b.formula = builtin_smallest_open(x, U);
    b.free_vars = {{x, Sort::point}, {U, Sort::open_set}};
  } else if (p.name == "minimal_open_const") {
    b.r = int_arg(p, 0);
    b.formula = builtin_minimal_open_const(b.r);
  } else if (p.name == "pairwise_separated") {
    b.r = int_arg(p, 0);
    b.formula = builtin_pairwise_separated(b.r);
  } else if (p.name == "different_components") {
    b.r = int_arg(p, 0);
    b.formula = builtin_different_components(b.r);
  } else if (p.name == "even_set_not_open") {
    b.formula = builtin_even_set_not_open();
  } else if (p.name == "clopen") {
    auto U = var_arg(p, 0);
    b.formula = builtin_clopen(U);
    b.free_vars = {{U, Sort::open_set}};
  } else if (p.name == "same_component") {
    auto x = var_arg(p, 0), y = var_arg(p, 1);
    b.formula = builtin_same_component(x, y);
    b.free_vars = {{x, Sort::point}, {y, Sort::point}};
  } else {
    throw std::invalid_argument("unknown builtin: " + p.name);
  }
  return b;
}

std::vector<std::string> builtin_names() {
  return {"true",
          "t0",
          "t1",
          "connected",
          "smallest_open(x,U)",
          "minimal_open_const(r)",
          "pairwise_separated(r)",
          "different_components(r)",
          "even_set_not_open",
          "clopen(U)",
          "same_component(x,y)"};
}

}  // namespace topo
