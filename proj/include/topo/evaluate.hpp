#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "topo/logic.hpp"
#include "topo/structures.hpp"

namespace topo {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A runtime binding: a point (0-based) or a set of points. Open-set values
// are masks that must name open sets of the structure under evaluation.
struct Value {
  Sort sort = Sort::point;
  int point = 0;
  Mask mask = 0;

  static Value of_point(int p) { return Value{Sort::point, p, 0}; }
  static Value of_open(Mask m) { return Value{Sort::open_set, 0, m}; }
  static Value of_set(Mask m) { return Value{Sort::point_set, 0, m}; }
};

struct Environment {
  ConstantTable constants;
  // Interpretation of a1..ar as 0-based points; hard-wired mode fixes
  // constant_points[i] = i. Size must be >= the largest index used.
  std::vector<int> constant_points;
  std::map<std::string, Value> bindings;

  static Environment hard_wired(int r) {
    Environment env;
    env.constants = ConstantTable{r, ConstantTable::Mode::hard_wired};
    for (int i = 0; i < r; ++i) env.constant_points.push_back(i);
    return env;
  }
};

// Work caps: point quantifiers only scale with n, point-set quantifiers with
// 2^n, so the latter get a lower ceiling.
struct EvalLimits {
  int fol_cap = 10;
  int mso_cap = 6;
};

// Tarskian evaluation on a topology (TCMSOL/TFOL formulas). Open-set
// quantifiers range over the opens list, point-set quantifiers over all 2^n
// subsets in ascending mask order, point quantifiers over the ground set.
bool evaluate(const Topology& t, const FormulaPtr& f, const Environment& env,
              const EvalLimits& limits = {});

// Same on a preorder (CMSOL/FOL formulas).
bool evaluate(const Preorder& q, const FormulaPtr& f, const Environment& env,
              const EvalLimits& limits = {});

// |{x : f}| with var bound to each point in turn; f's other free variables
// come from env.
int count_points_satisfying(const Topology& t, const FormulaPtr& f,
                            const std::string& var, const Environment& env,
                            const EvalLimits& limits = {});
int count_points_satisfying(const Preorder& q, const FormulaPtr& f,
                            const std::string& var, const Environment& env,
                            const EvalLimits& limits = {});

// True iff f (a TFOL sentence, possibly with hard-wired constants in env)
// has the same truth value when open-set quantifiers range over t's opens
// and when they range over its minimal basis.
bool check_basis_invariance(const Topology& t, const FormulaPtr& f,
                            const Environment& env = Environment::hard_wired(0),
                            const EvalLimits& limits = {});

}  // namespace topo
