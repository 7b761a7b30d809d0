#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace topo {

// Variable sorts. Point variables range over the ground set, open-set
// variables over the topology's open sets, point-set variables over all
// subsets of the ground set.
enum class Sort { point, open_set, point_set };

// TCMSOL: two-sorted logic of topologies (E atoms, open-set and point-set
// quantifiers, modular counting). CMSOL: one binary relation <= with
// point-set quantifiers and modular counting. TFOL / FOL: the same without
// point-set quantification and without modular counting.
enum class Dialect { TCMSOL, CMSOL, TFOL, FOL };

std::string to_string(Sort s);
std::string to_string(Dialect d);
std::optional<Dialect> dialect_from_string(const std::string& s);

// Constant symbols a1..ar. Hard-wired on [r+n]: a_i denotes point i.
struct ConstantTable {
  enum class Mode { hard_wired, free };
  int r = 0;
  Mode mode = Mode::hard_wired;
};

// A point-valued term: a variable or a constant a1..a9.
struct PointTerm {
  bool is_constant = false;
  int constant_index = 0;  // 1-based, constants only
  std::string var;

  static PointTerm variable(std::string name) {
    PointTerm t;
    t.var = std::move(name);
    return t;
  }
  static PointTerm constant(int index) {
    PointTerm t;
    t.is_constant = true;
    t.constant_index = index;
    return t;
  }
  bool operator==(const PointTerm&) const = default;
};

enum class NodeKind {
  PointEq,   // t1 = t2
  SetEq,     // A = B, same set sort
  Member,    // t in A; MemberOpen when set_sort == open_set, MemberSet else
  Leq,       // t1 <= t2
  Not,
  And,
  Or,
  Implies,
  Iff,
  Forall,
  Exists,
  CountMod,  // count[m,a] x. body — |{x : body}| ≡ a (mod m)
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  NodeKind kind;

  PointTerm lhs, rhs;       // PointEq, Leq, Member (lhs only)
  std::string set_a, set_b; // SetEq; Member uses set_a
  Sort set_sort = Sort::open_set;  // resolved sort of set_a/set_b

  FormulaPtr child, child2; // unary/binary connectives; quantifier body in child

  std::string var;          // bound variable for Forall/Exists/CountMod
  Sort var_sort = Sort::point;
  int mod_m = 0, mod_a = 0; // CountMod parameters
};

// Node builders. Quantifier sorts are fixed at the binder; CountMod binds a
// point variable only (m >= 1, 0 <= a < m enforced).
FormulaPtr mk_point_eq(PointTerm a, PointTerm b);
FormulaPtr mk_set_eq(std::string a, std::string b, Sort set_sort);
FormulaPtr mk_member(PointTerm p, std::string set, Sort set_sort);
FormulaPtr mk_leq(PointTerm a, PointTerm b);
FormulaPtr mk_not(FormulaPtr f);
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_forall(std::string var, Sort sort, FormulaPtr body);
FormulaPtr mk_exists(std::string var, Sort sort, FormulaPtr body);
FormulaPtr mk_count_mod(int m, int a, std::string var, FormulaPtr body);

// Conjunction / disjunction of a list; empty list is not allowed.
FormulaPtr mk_and_all(std::vector<FormulaPtr> fs);
FormulaPtr mk_or_all(std::vector<FormulaPtr> fs);

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

// Free variables with their sorts (sorts as used; a variable must be used
// consistently for the formula to be well-sorted).
std::map<std::string, Sort> free_variables(const FormulaPtr& f);

// All variable names occurring anywhere (bound or free).
std::set<std::string> all_variable_names(const FormulaPtr& f);

// Largest constant index used; 0 if none.
int max_constant_index(const FormulaPtr& f);

struct Diagnostic {
  int line = 0, col = 0;  // 1-based; 0 when not tied to input text
  std::string message;
};

struct ParseResult {
  FormulaPtr formula;  // null on failure
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return formula != nullptr; }
};

// Parses the surface syntax:
//   atoms        x = y   x in U   U = V   x <= y   (constants a1..a9)
//   connectives  ~  &  |  ->  <->      (precedence ~ > & > | > -> > <->,
//                                       right-associative arrows)
//   quantifiers  all point x. f   ex open U. f   ex set S. f
//                count[m,a] x. f
// Variable sorts come from binders; free variables must be declared in
// `free_vars`. Constructs outside `dialect` are rejected. `#` starts a
// comment running to end of line.
ParseResult parse_formula(const std::string& text, Dialect dialect,
                          const std::map<std::string, Sort>& free_vars = {});

// Canonical rendering; parse_formula(render_formula(f)) is structurally
// equal to f.
std::string render_formula(const FormulaPtr& f);

// Empty iff every variable is bound or declared, sorts are consistent,
// constant indices are <= constants.r, and no construct exceeds the dialect.
std::vector<Diagnostic> check_well_sorted(
    const FormulaPtr& f, Dialect dialect, const ConstantTable& constants,
    const std::map<std::string, Sort>& free_vars = {});

// The weakest dialect admitting the formula, given the sorts of its free
// variables; nullopt if it mixes <= with topological constructs.
std::optional<Dialect> weakest_dialect(
    const FormulaPtr& f, const std::map<std::string, Sort>& free_vars = {});

bool uses_point_set_quantifier(const FormulaPtr& f);
bool uses_count_mod(const FormulaPtr& f);

}  // namespace topo
