#pragma once

#include <string>
#include <vector>

#include "topo/logic.hpp"

namespace topo {

// Builtin TCMSOL formulas for properties of finite topological spaces.
// Parameterized builtins take free variables (smallest_open, clopen,
// same_component) or a constant count r (minimal_open_const,
// pairwise_separated, different_components).

FormulaPtr builtin_true();                // all point x. x = x
FormulaPtr builtin_t0();
FormulaPtr builtin_t1();
FormulaPtr builtin_connected();
FormulaPtr builtin_smallest_open(const std::string& x, const std::string& U);
FormulaPtr builtin_minimal_open_const(int r);
FormulaPtr builtin_pairwise_separated(int r);
FormulaPtr builtin_different_components(int r);
FormulaPtr builtin_even_set_not_open();
FormulaPtr builtin_clopen(const std::string& U);
FormulaPtr builtin_same_component(const std::string& x, const std::string& y);

struct Builtin {
  FormulaPtr formula;
  int r = 0;  // constants required
  std::map<std::string, Sort> free_vars;
};

// Looks up a builtin by surface spec: "t0", "different_components(2)",
// "smallest_open(x,U)", "clopen(U)", ... Throws std::invalid_argument for
// unknown names or out-of-range parameters.
Builtin make_builtin(const std::string& spec);

std::vector<std::string> builtin_names();

}  // namespace topo
