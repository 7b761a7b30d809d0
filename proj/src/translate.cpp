#include "topo/translate.hpp"

#include <stdexcept>

namespace topo {

namespace {

// Draws names unused anywhere in the formula being rewritten.
class FreshNames {
 public:
  explicit FreshNames(const FormulaPtr& f) : used_(all_variable_names(f)) {}

  std::string draw(const char* stem) {
    for (int i = 0;; ++i) {
      std::string name = std::string("_") + stem + std::to_string(i);
      if (used_.insert(name).second) return name;
    }
  }

 private:
  std::set<std::string> used_;
};

// all open V. (y in V -> x in V): x lies in every open set containing y,
// i.e. U_x is contained in U_y.
FormulaPtr leq_as_open_containment(const PointTerm& x, const PointTerm& y,
                                   const std::string& v) {
  return mk_forall(v, Sort::open_set,
                   mk_implies(mk_member(y, v, Sort::open_set),
                              mk_member(x, v, Sort::open_set)));
}

// all a. all b. ((U(b) & a <= b) -> U(a)): U is a down-set, i.e. a union of
// basic open sets.
FormulaPtr down_set_guard(const std::string& U, const std::string& a,
                          const std::string& b) {
  auto premise = mk_and(mk_member(PointTerm::variable(b), U, Sort::point_set),
                        mk_leq(PointTerm::variable(a), PointTerm::variable(b)));
  auto body = mk_implies(premise,
                         mk_member(PointTerm::variable(a), U, Sort::point_set));
  return mk_forall(a, Sort::point, mk_forall(b, Sort::point, body));
}

struct PhiSharp {
  FreshNames fresh;

  FormulaPtr map(const FormulaPtr& f) {
    switch (f->kind) {
      case NodeKind::Leq:
        return leq_as_open_containment(f->lhs, f->rhs, fresh.draw("V"));
      case NodeKind::PointEq:
        return mk_point_eq(f->lhs, f->rhs);
      case NodeKind::SetEq:
        return mk_set_eq(f->set_a, f->set_b, f->set_sort);
      case NodeKind::Member:
        return mk_member(f->lhs, f->set_a, f->set_sort);
      case NodeKind::Not:
        return mk_not(map(f->child));
      case NodeKind::And:
        return mk_and(map(f->child), map(f->child2));
      case NodeKind::Or:
        return mk_or(map(f->child), map(f->child2));
      case NodeKind::Implies:
        return mk_implies(map(f->child), map(f->child2));
      case NodeKind::Iff:
        return mk_iff(map(f->child), map(f->child2));
      case NodeKind::Forall:
        return mk_forall(f->var, f->var_sort, map(f->child));
      case NodeKind::Exists:
        return mk_exists(f->var, f->var_sort, map(f->child));
      case NodeKind::CountMod:
        return mk_count_mod(f->mod_m, f->mod_a, f->var, map(f->child));
    }
    throw std::logic_error("unreachable");
  }
};

struct PsiSharp {
  FreshNames fresh;
  // Open-set variables bound on the current path: their guard already sits
  // at the binder. Free open-set variables get a per-atom guard.
  std::vector<std::string> guarded;

  bool is_guarded(const std::string& name) const {
    for (auto it = guarded.rbegin(); it != guarded.rend(); ++it)
      if (*it == name) return true;
    return false;
  }

  FormulaPtr guard(const std::string& U) {
    return down_set_guard(U, fresh.draw("x"), fresh.draw("y"));
  }

  FormulaPtr map(const FormulaPtr& f) {
    switch (f->kind) {
      case NodeKind::Leq:
        throw std::invalid_argument("input to the quasi-order direction is "
                                    "TCMSOL and cannot contain <=");
      case NodeKind::PointEq:
        return mk_point_eq(f->lhs, f->rhs);
      case NodeKind::SetEq: {
        auto eq = mk_set_eq(f->set_a, f->set_b, Sort::point_set);
        if (f->set_sort != Sort::open_set) return eq;
        FormulaPtr out = eq;
        if (!is_guarded(f->set_b)) out = mk_and(guard(f->set_b), out);
        if (!is_guarded(f->set_a)) out = mk_and(guard(f->set_a), out);
        return out;
      }
      case NodeKind::Member: {
        auto member = mk_member(f->lhs, f->set_a, Sort::point_set);
        if (f->set_sort != Sort::open_set || is_guarded(f->set_a))
          return member;
        return mk_and(guard(f->set_a), member);
      }
      case NodeKind::Not:
        return mk_not(map(f->child));
      case NodeKind::And:
        return mk_and(map(f->child), map(f->child2));
      case NodeKind::Or:
        return mk_or(map(f->child), map(f->child2));
      case NodeKind::Implies:
        return mk_implies(map(f->child), map(f->child2));
      case NodeKind::Iff:
        return mk_iff(map(f->child), map(f->child2));
      case NodeKind::Forall:
      case NodeKind::Exists: {
        if (f->var_sort != Sort::open_set) {
          // A point or point-set binder shadows any outer open-set variable
          // of the same name.
          bool shadows = is_guarded(f->var);
          if (shadows) guarded.push_back("");  // placeholder keeps depth
          auto body = map(f->child);
          if (shadows) guarded.pop_back();
          return f->kind == NodeKind::Forall
                     ? mk_forall(f->var, f->var_sort, body)
                     : mk_exists(f->var, f->var_sort, body);
        }
        guarded.push_back(f->var);
        auto body = map(f->child);
        guarded.pop_back();
        if (f->kind == NodeKind::Exists)
          return mk_exists(f->var, Sort::point_set,
                           mk_and(guard(f->var), body));
        return mk_forall(f->var, Sort::point_set,
                         mk_implies(guard(f->var), body));
      }
      case NodeKind::CountMod:
        return mk_count_mod(f->mod_m, f->mod_a, f->var, map(f->child));
    }
    throw std::logic_error("unreachable");
  }
};

}  // namespace

TranslationScheme phi_scheme() {
  TranslationScheme s;
  s.universe = mk_point_eq(PointTerm::variable("x"), PointTerm::variable("x"));
  s.leq_def = leq_as_open_containment(PointTerm::variable("x"),
                                      PointTerm::variable("y"), "V");
  return s;
}

TranslationScheme psi_scheme() {
  TranslationScheme s;
  s.universe = mk_point_eq(PointTerm::variable("x"), PointTerm::variable("x"));
  // U(y) <-> y <= x: U holds exactly the points below x.
  s.basic_def = mk_forall(
      "y", Sort::point,
      mk_iff(mk_member(PointTerm::variable("y"), "U", Sort::point_set),
             mk_leq(PointTerm::variable("y"), PointTerm::variable("x"))));
  s.open_def = down_set_guard("U", "x", "y");
  return s;
}

FormulaPtr phi_sharp(const FormulaPtr& cmsol) {
  PhiSharp t{FreshNames(cmsol)};
  return t.map(cmsol);
}

FormulaPtr psi_sharp(const FormulaPtr& tcmsol) {
  PsiSharp t{FreshNames(tcmsol), {}};
  return t.map(tcmsol);
}

Preorder phi_star(const Topology& t) { return alpha(t); }

Topology psi_star(const Preorder& q) { return alpha_prime(q); }

}  // namespace topo
