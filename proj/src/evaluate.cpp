#include "topo/evaluate.hpp"

#include <optional>
#include <unordered_map>
#include <unordered_set>

namespace topo {

namespace {

// One evaluation pass over a fixed structure, environment and formula.
// Closed subformulas (no free variables) are memoized per pass; inside
// quantifier loops this avoids re-evaluating constant subtrees.
class Evaluator {
 public:
  Evaluator(const Topology* t, const Preorder* q, const Environment& env)
      : topo_(t), pre_(q), env_(env) {
    n_ = t ? t->n : q->n;
    if (t)
      for (Mask m : t->opens) open_set_.insert(m);
  }

  bool run(const FormulaPtr& f) {
    scope_.clear();
    closed_memo_.clear();
    return eval(f);
  }

  void check_caps(const FormulaPtr& f, const EvalLimits& limits) const {
    int cap = uses_point_set_quantifier(f) ? limits.mso_cap : limits.fol_cap;
    if (n_ > cap)
      throw EvalError("ground-set size " + std::to_string(n_) +
                      " exceeds the evaluation cap " + std::to_string(cap));
  }

  void bind(const std::string& name, Value v) { scope_.emplace_back(name, v); }
  void unbind() { scope_.pop_back(); }

  bool eval(const FormulaPtr& f) {
    if (!f) throw EvalError("null formula");
    switch (f->kind) {
      case NodeKind::PointEq:
        return point(f->lhs) == point(f->rhs);
      case NodeKind::Leq: {
        if (!pre_) throw EvalError("<= atom evaluated on a topology");
        return pre_->leq(point(f->lhs), point(f->rhs));
      }
      case NodeKind::SetEq:
        return set_value(f->set_a, f->set_sort) ==
               set_value(f->set_b, f->set_sort);
      case NodeKind::Member: {
        int p = point(f->lhs);
        return has_point(set_value(f->set_a, f->set_sort), p);
      }
      case NodeKind::Not:
        return !eval_memo(f->child);
      case NodeKind::And:
        return eval_memo(f->child) && eval_memo(f->child2);
      case NodeKind::Or:
        return eval_memo(f->child) || eval_memo(f->child2);
      case NodeKind::Implies:
        return !eval_memo(f->child) || eval_memo(f->child2);
      case NodeKind::Iff:
        return eval_memo(f->child) == eval_memo(f->child2);
      case NodeKind::Forall:
        return quantify(f, /*universal=*/true);
      case NodeKind::Exists:
        return quantify(f, /*universal=*/false);
      case NodeKind::CountMod: {
        int count = 0;
        for (int p = 0; p < n_; ++p) {
          bind(f->var, Value::of_point(p));
          if (eval_memo(f->child)) ++count;
          unbind();
        }
        return count % f->mod_m == f->mod_a % f->mod_m;
      }
    }
    throw EvalError("unreachable formula kind");
  }

 private:
  const Topology* topo_;
  const Preorder* pre_;
  const Environment& env_;
  int n_;
  std::unordered_set<Mask> open_set_;
  std::vector<std::pair<std::string, Value>> scope_;
  std::unordered_map<const Formula*, bool> closed_memo_;
  std::unordered_map<const Formula*, bool> is_closed_;

  bool closed(const FormulaPtr& f) {
    auto it = is_closed_.find(f.get());
    if (it != is_closed_.end()) return it->second;
    bool c = free_variables(f).empty();
    is_closed_.emplace(f.get(), c);
    return c;
  }

  bool eval_memo(const FormulaPtr& f) {
    if (!f) throw EvalError("null formula");
    if (!closed(f)) return eval(f);
    auto it = closed_memo_.find(f.get());
    if (it != closed_memo_.end()) return it->second;
    bool v = eval(f);
    closed_memo_.emplace(f.get(), v);
    return v;
  }

  Value lookup(const std::string& name, Sort wanted) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) {
        if (it->second.sort != wanted)
          throw EvalError("variable '" + name + "' bound at sort " +
                          to_string(it->second.sort) + " but used as " +
                          to_string(wanted));
        return it->second;
      }
    auto it = env_.bindings.find(name);
    if (it == env_.bindings.end())
      throw EvalError("unbound free variable '" + name + "'");
    if (it->second.sort != wanted)
      throw EvalError("variable '" + name + "' bound at sort " +
                      to_string(it->second.sort) + " but used as " +
                      to_string(wanted));
    return it->second;
  }

  int point(const PointTerm& t) const {
    if (t.is_constant) {
      int idx = t.constant_index;
      if (idx < 1 || idx > (int)env_.constant_points.size())
        throw EvalError("constant a" + std::to_string(idx) +
                        " has no interpretation");
      int p = env_.constant_points[idx - 1];
      if (p < 0 || p >= n_)
        throw EvalError("constant a" + std::to_string(idx) +
                        " denotes a point outside the ground set");
      return p;
    }
    Value v = lookup(t.var, Sort::point);
    if (v.point < 0 || v.point >= n_)
      throw EvalError("point binding for '" + t.var + "' is out of range");
    return v.point;
  }

  Mask set_value(const std::string& name, Sort sort) const {
    Value v = lookup(name, sort);
    if (sort == Sort::open_set && topo_ && !open_set_.count(v.mask))
      throw EvalError("open-set binding for '" + name +
                      "' is not an open set of the structure");
    return v.mask;
  }

  bool quantify(const FormulaPtr& f, bool universal) {
    auto visit = [&](Value v) {
      bind(f->var, v);
      bool r = eval_memo(f->child);
      unbind();
      return r;
    };
    switch (f->var_sort) {
      case Sort::point: {
        for (int p = 0; p < n_; ++p)
          if (visit(Value::of_point(p)) != universal) return !universal;
        return universal;
      }
      case Sort::open_set: {
        if (!topo_) throw EvalError("open-set quantifier on a preorder");
        for (Mask m : opens_view())
          if (visit(Value::of_open(m)) != universal) return !universal;
        return universal;
      }
      case Sort::point_set: {
        const Mask full = full_mask(n_);
        for (Mask m = 0;; ++m) {
          if (visit(Value::of_set(m)) != universal) return !universal;
          if (m == full) break;
        }
        return universal;
      }
    }
    throw EvalError("unreachable sort");
  }

 public:
  // Range of the open-set quantifiers; swapped for the minimal basis by
  // check_basis_invariance.
  std::optional<std::vector<Mask>> opens_override;

 private:
  const std::vector<Mask>& opens_view() const {
    if (opens_override) return *opens_override;
    return topo_->opens;
  }
};

void require_no_diagnostics(const FormulaPtr& f, const Environment& env,
                            Dialect dialect) {
  std::map<std::string, Sort> frees;
  for (const auto& [name, value] : env.bindings)
    frees.emplace(name, value.sort);
  auto diags =
      check_well_sorted(f, dialect, env.constants, frees);
  if (!diags.empty()) throw EvalError(diags.front().message);
}

}  // namespace

bool evaluate(const Topology& t, const FormulaPtr& f, const Environment& env,
              const EvalLimits& limits) {
  require_no_diagnostics(f, env, Dialect::TCMSOL);
  Evaluator ev(&t, nullptr, env);
  ev.check_caps(f, limits);
  return ev.run(f);
}

bool evaluate(const Preorder& q, const FormulaPtr& f, const Environment& env,
              const EvalLimits& limits) {
  require_no_diagnostics(f, env, Dialect::CMSOL);
  Evaluator ev(nullptr, &q, env);
  ev.check_caps(f, limits);
  return ev.run(f);
}

namespace {

template <typename Structure>
int count_satisfying(const Structure& s, const FormulaPtr& f,
                     const std::string& var, const Environment& env,
                     const EvalLimits& limits) {
  int count = 0;
  Environment local = env;
  for (int p = 0; p < s.n; ++p) {
    local.bindings[var] = Value::of_point(p);
    if (evaluate(s, f, local, limits)) ++count;
  }
  return count;
}

}  // namespace

int count_points_satisfying(const Topology& t, const FormulaPtr& f,
                            const std::string& var, const Environment& env,
                            const EvalLimits& limits) {
  return count_satisfying(t, f, var, env, limits);
}

int count_points_satisfying(const Preorder& q, const FormulaPtr& f,
                            const std::string& var, const Environment& env,
                            const EvalLimits& limits) {
  return count_satisfying(q, f, var, env, limits);
}

bool check_basis_invariance(const Topology& t, const FormulaPtr& f,
                            const Environment& env, const EvalLimits& limits) {
  if (uses_point_set_quantifier(f) || uses_count_mod(f))
    throw EvalError("basis invariance is defined for TFOL formulas only");
  require_no_diagnostics(f, env, Dialect::TFOL);

  Evaluator over_opens(&t, nullptr, env);
  over_opens.check_caps(f, limits);
  bool full = over_opens.run(f);

  Evaluator over_basis(&t, nullptr, env);
  over_basis.opens_override = minimal_basis(t);
  bool basis = over_basis.run(f);

  return full == basis;
}

}  // namespace topo
