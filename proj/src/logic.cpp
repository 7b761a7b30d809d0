#include "topo/logic.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace topo {

std::string to_string(Sort s) {
  switch (s) {
    case Sort::point: return "point";
    case Sort::open_set: return "open";
    case Sort::point_set: return "set";
  }
  return "?";
}

std::string to_string(Dialect d) {
  switch (d) {
    case Dialect::TCMSOL: return "TCMSOL";
    case Dialect::CMSOL: return "CMSOL";
    case Dialect::TFOL: return "TFOL";
    case Dialect::FOL: return "FOL";
  }
  return "?";
}

std::optional<Dialect> dialect_from_string(const std::string& s) {
  if (s == "TCMSOL" || s == "tcmsol") return Dialect::TCMSOL;
  if (s == "CMSOL" || s == "cmsol") return Dialect::CMSOL;
  if (s == "TFOL" || s == "tfol") return Dialect::TFOL;
  if (s == "FOL" || s == "fol") return Dialect::FOL;
  return std::nullopt;
}

namespace {

FormulaPtr node(NodeKind kind) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  return f;
}

Formula* mut(FormulaPtr& p) { return const_cast<Formula*>(p.get()); }

}  // namespace

FormulaPtr mk_point_eq(PointTerm a, PointTerm b) {
  auto f = node(NodeKind::PointEq);
  mut(f)->lhs = std::move(a);
  mut(f)->rhs = std::move(b);
  return f;
}

FormulaPtr mk_set_eq(std::string a, std::string b, Sort set_sort) {
  if (set_sort == Sort::point)
    throw std::invalid_argument("SetEq takes set-sorted variables");
  auto f = node(NodeKind::SetEq);
  mut(f)->set_a = std::move(a);
  mut(f)->set_b = std::move(b);
  mut(f)->set_sort = set_sort;
  return f;
}

FormulaPtr mk_member(PointTerm p, std::string set, Sort set_sort) {
  if (set_sort == Sort::point)
    throw std::invalid_argument("membership needs a set-sorted variable");
  auto f = node(NodeKind::Member);
  mut(f)->lhs = std::move(p);
  mut(f)->set_a = std::move(set);
  mut(f)->set_sort = set_sort;
  return f;
}

FormulaPtr mk_leq(PointTerm a, PointTerm b) {
  auto f = node(NodeKind::Leq);
  mut(f)->lhs = std::move(a);
  mut(f)->rhs = std::move(b);
  return f;
}

FormulaPtr mk_not(FormulaPtr f) {
  auto g = node(NodeKind::Not);
  mut(g)->child = std::move(f);
  return g;
}

namespace {
FormulaPtr binary(NodeKind k, FormulaPtr a, FormulaPtr b) {
  auto f = node(k);
  mut(f)->child = std::move(a);
  mut(f)->child2 = std::move(b);
  return f;
}
}  // namespace

FormulaPtr mk_and(FormulaPtr a, FormulaPtr b) { return binary(NodeKind::And, std::move(a), std::move(b)); }
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b) { return binary(NodeKind::Or, std::move(a), std::move(b)); }
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b) { return binary(NodeKind::Implies, std::move(a), std::move(b)); }
FormulaPtr mk_iff(FormulaPtr a, FormulaPtr b) { return binary(NodeKind::Iff, std::move(a), std::move(b)); }

FormulaPtr mk_forall(std::string var, Sort sort, FormulaPtr body) {
  auto f = node(NodeKind::Forall);
  mut(f)->var = std::move(var);
  mut(f)->var_sort = sort;
  mut(f)->child = std::move(body);
  return f;
}

FormulaPtr mk_exists(std::string var, Sort sort, FormulaPtr body) {
  auto f = node(NodeKind::Exists);
  mut(f)->var = std::move(var);
  mut(f)->var_sort = sort;
  mut(f)->child = std::move(body);
  return f;
}

FormulaPtr mk_count_mod(int m, int a, std::string var, FormulaPtr body) {
  if (m < 1) throw std::invalid_argument("count modulus must be >= 1");
  if (a < 0 || a >= m)
    throw std::invalid_argument("count residue must satisfy 0 <= a < m");
  auto f = node(NodeKind::CountMod);
  mut(f)->mod_m = m;
  mut(f)->mod_a = a;
  mut(f)->var = std::move(var);
  mut(f)->var_sort = Sort::point;
  mut(f)->child = std::move(body);
  return f;
}

FormulaPtr mk_and_all(std::vector<FormulaPtr> fs) {
  if (fs.empty()) throw std::invalid_argument("empty conjunction");
  FormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = mk_and(acc, fs[i]);
  return acc;
}

FormulaPtr mk_or_all(std::vector<FormulaPtr> fs) {
  if (fs.empty()) throw std::invalid_argument("empty disjunction");
  FormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = mk_or(acc, fs[i]);
  return acc;
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::PointEq:
    case NodeKind::Leq:
      return a->lhs == b->lhs && a->rhs == b->rhs;
    case NodeKind::SetEq:
      return a->set_a == b->set_a && a->set_b == b->set_b &&
             a->set_sort == b->set_sort;
    case NodeKind::Member:
      return a->lhs == b->lhs && a->set_a == b->set_a &&
             a->set_sort == b->set_sort;
    case NodeKind::Not:
      return structurally_equal(a->child, b->child);
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Implies:
    case NodeKind::Iff:
      return structurally_equal(a->child, b->child) &&
             structurally_equal(a->child2, b->child2);
    case NodeKind::Forall:
    case NodeKind::Exists:
      return a->var == b->var && a->var_sort == b->var_sort &&
             structurally_equal(a->child, b->child);
    case NodeKind::CountMod:
      return a->mod_m == b->mod_m && a->mod_a == b->mod_a &&
             a->var == b->var && structurally_equal(a->child, b->child);
  }
  return false;
}

namespace {

void collect_free(const FormulaPtr& f, std::map<std::string, Sort>& bound,
                  std::map<std::string, Sort>& out) {
  if (!f) return;
  auto see = [&](const std::string& name, Sort sort) {
    if (!bound.count(name)) out.emplace(name, sort);
  };
  auto see_term = [&](const PointTerm& t) {
    if (!t.is_constant) see(t.var, Sort::point);
  };
  switch (f->kind) {
    case NodeKind::PointEq:
    case NodeKind::Leq:
      see_term(f->lhs);
      see_term(f->rhs);
      break;
    case NodeKind::SetEq:
      see(f->set_a, f->set_sort);
      see(f->set_b, f->set_sort);
      break;
    case NodeKind::Member:
      see_term(f->lhs);
      see(f->set_a, f->set_sort);
      break;
    case NodeKind::Not:
      collect_free(f->child, bound, out);
      break;
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Implies:
    case NodeKind::Iff:
      collect_free(f->child, bound, out);
      collect_free(f->child2, bound, out);
      break;
    case NodeKind::Forall:
    case NodeKind::Exists:
    case NodeKind::CountMod: {
      auto it = bound.find(f->var);
      std::optional<Sort> shadowed;
      if (it != bound.end()) shadowed = it->second;
      bound[f->var] = f->var_sort;
      collect_free(f->child, bound, out);
      if (shadowed)
        bound[f->var] = *shadowed;
      else
        bound.erase(f->var);
      break;
    }
  }
}

}  // namespace

std::map<std::string, Sort> free_variables(const FormulaPtr& f) {
  std::map<std::string, Sort> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> all_variable_names(const FormulaPtr& f) {
  std::set<std::string> out;
  if (!f) return out;
  if (!f->lhs.is_constant && !f->lhs.var.empty()) out.insert(f->lhs.var);
  if (!f->rhs.is_constant && !f->rhs.var.empty()) out.insert(f->rhs.var);
  if (!f->set_a.empty()) out.insert(f->set_a);
  if (!f->set_b.empty()) out.insert(f->set_b);
  if (!f->var.empty()) out.insert(f->var);
  for (const auto& c : {f->child, f->child2}) {
    auto sub = all_variable_names(c);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

int max_constant_index(const FormulaPtr& f) {
  if (!f) return 0;
  int m = 0;
  if (f->lhs.is_constant) m = std::max(m, f->lhs.constant_index);
  if (f->rhs.is_constant) m = std::max(m, f->rhs.constant_index);
  m = std::max(m, max_constant_index(f->child));
  m = std::max(m, max_constant_index(f->child2));
  return m;
}

// ---------------------------------------------------------------------------
// Lexer / parser
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
  Ident, Constant, Int,
  Eq, Leq, Not, And, Or, Implies, Iff,
  LParen, RParen, LBracket, RBracket, Comma, Dot,
  KwAll, KwEx, KwCount, KwPoint, KwOpen, KwSet, KwIn,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int value = 0;  // Int / Constant
  int line = 1, col = 1;
};

struct ParseAbort {
  Diagnostic diag;
};

[[noreturn]] void abort_parse(const Token& at, std::string msg) {
  throw ParseAbort{Diagnostic{at.line, at.col, std::move(msg)}};
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok k, std::string s, int v = 0) {
    out.push_back(Token{k, std::move(s), v, line, col});
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') { ++line; col = 1; ++i; continue; }
    if (std::isspace((unsigned char)c)) { ++col; ++i; continue; }
    if (c == '#') {  // comment to end of line
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    int start_col = col;
    auto two = text.substr(i, 2);
    auto three = text.substr(i, 3);
    if (three == "<->") {
      push(Tok::Iff, three); out.back().col = start_col;
      i += 3; col += 3; continue;
    }
    if (two == "->") { push(Tok::Implies, two); i += 2; col += 2; continue; }
    if (two == "<=") { push(Tok::Leq, two); i += 2; col += 2; continue; }
    switch (c) {
      case '=': push(Tok::Eq, "="); ++i; ++col; continue;
      case '~': push(Tok::Not, "~"); ++i; ++col; continue;
      case '&': push(Tok::And, "&"); ++i; ++col; continue;
      case '|': push(Tok::Or, "|"); ++i; ++col; continue;
      case '(': push(Tok::LParen, "("); ++i; ++col; continue;
      case ')': push(Tok::RParen, ")"); ++i; ++col; continue;
      case '[': push(Tok::LBracket, "["); ++i; ++col; continue;
      case ']': push(Tok::RBracket, "]"); ++i; ++col; continue;
      case ',': push(Tok::Comma, ","); ++i; ++col; continue;
      case '.': push(Tok::Dot, "."); ++i; ++col; continue;
      default: break;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t j = i;
      while (j < text.size() && std::isdigit((unsigned char)text[j])) ++j;
      std::string num = text.substr(i, j - i);
      push(Tok::Int, num, std::stoi(num));
      col += (int)(j - i);
      i = j;
      continue;
    }
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum((unsigned char)text[j]) || text[j] == '_'))
        ++j;
      std::string word = text.substr(i, j - i);
      col += (int)(j - i);
      i = j;
      if (word == "all") { push(Tok::KwAll, word); out.back().col = start_col; continue; }
      if (word == "ex") { push(Tok::KwEx, word); out.back().col = start_col; continue; }
      if (word == "count") { push(Tok::KwCount, word); out.back().col = start_col; continue; }
      if (word == "point") { push(Tok::KwPoint, word); out.back().col = start_col; continue; }
      if (word == "open") { push(Tok::KwOpen, word); out.back().col = start_col; continue; }
      if (word == "set") { push(Tok::KwSet, word); out.back().col = start_col; continue; }
      if (word == "in") { push(Tok::KwIn, word); out.back().col = start_col; continue; }
      if (word.size() == 2 && word[0] == 'a' && word[1] >= '1' && word[1] <= '9') {
        push(Tok::Constant, word, word[1] - '0');
        out.back().col = start_col;
        continue;
      }
      push(Tok::Ident, word);
      out.back().col = start_col;
      continue;
    }
    Token bad{Tok::End, std::string(1, c), 0, line, start_col};
    abort_parse(bad, std::string("unexpected character '") + c + "'");
  }
  push(Tok::End, "");
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, Dialect dialect,
         const std::map<std::string, Sort>& free_vars)
      : toks_(std::move(toks)), dialect_(dialect), free_(free_vars) {}

  FormulaPtr parse() {
    auto f = parse_iff();
    if (peek().kind != Tok::End)
      abort_parse(peek(), "unexpected trailing input '" + peek().text + "'");
    return f;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  Dialect dialect_;
  std::map<std::string, Sort> free_;
  std::vector<std::pair<std::string, Sort>> scopes_;

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind == k) { ++pos_; return true; }
    return false;
  }
  Token expect(Tok k, const char* what) {
    if (peek().kind != k) abort_parse(peek(), std::string("expected ") + what);
    return next();
  }

  bool topological() const {
    return dialect_ == Dialect::TCMSOL || dialect_ == Dialect::TFOL;
  }
  bool monadic() const {
    return dialect_ == Dialect::TCMSOL || dialect_ == Dialect::CMSOL;
  }

  std::optional<Sort> lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (it->first == name) return it->second;
    auto it = free_.find(name);
    if (it != free_.end()) return it->second;
    return std::nullopt;
  }

  FormulaPtr parse_iff() {
    auto lhs = parse_implies();
    if (accept(Tok::Iff)) return mk_iff(lhs, parse_iff());
    return lhs;
  }

  FormulaPtr parse_implies() {
    auto lhs = parse_or();
    if (accept(Tok::Implies)) return mk_implies(lhs, parse_implies());
    return lhs;
  }

  FormulaPtr parse_or() {
    auto lhs = parse_and();
    while (accept(Tok::Or)) lhs = mk_or(lhs, parse_and());
    return lhs;
  }

  FormulaPtr parse_and() {
    auto lhs = parse_unary();
    while (accept(Tok::And)) lhs = mk_and(lhs, parse_unary());
    return lhs;
  }

  FormulaPtr parse_unary() {
    if (accept(Tok::Not)) return mk_not(parse_unary());
    if (peek().kind == Tok::KwAll || peek().kind == Tok::KwEx)
      return parse_quantifier();
    if (peek().kind == Tok::KwCount) return parse_count();
    return parse_atom();
  }

  Sort parse_sort_keyword() {
    const Token& t = peek();
    if (accept(Tok::KwPoint)) return Sort::point;
    if (accept(Tok::KwOpen)) {
      if (!topological())
        abort_parse(t, "open-set quantification is not available in " +
                           to_string(dialect_));
      return Sort::open_set;
    }
    if (accept(Tok::KwSet)) {
      if (!monadic())
        abort_parse(t, "point-set quantification is not available in " +
                           to_string(dialect_));
      return Sort::point_set;
    }
    abort_parse(peek(), "expected a sort keyword (point, open, set)");
  }

  FormulaPtr parse_quantifier() {
    bool universal = next().kind == Tok::KwAll;
    Sort sort = parse_sort_keyword();
    Token var = expect(Tok::Ident, "a variable name");
    expect(Tok::Dot, "'.' after the bound variable");
    scopes_.emplace_back(var.text, sort);
    auto body = parse_iff();
    scopes_.pop_back();
    return universal ? mk_forall(var.text, sort, body)
                     : mk_exists(var.text, sort, body);
  }

  FormulaPtr parse_count() {
    Token kw = next();
    if (!monadic())
      abort_parse(kw, "modular counting is not available in " +
                          to_string(dialect_));
    expect(Tok::LBracket, "'[' after count");
    Token m = expect(Tok::Int, "a modulus");
    expect(Tok::Comma, "','");
    Token a = expect(Tok::Int, "a residue");
    expect(Tok::RBracket, "']'");
    if (m.value < 1) abort_parse(m, "count modulus must be >= 1");
    if (a.value < 0 || a.value >= m.value)
      abort_parse(a, "count residue must satisfy 0 <= a < m");
    Token var = expect(Tok::Ident, "a variable name");
    expect(Tok::Dot, "'.' after the bound variable");
    scopes_.emplace_back(var.text, Sort::point);
    auto body = parse_iff();
    scopes_.pop_back();
    return mk_count_mod(m.value, a.value, var.text, body);
  }

  // Either a point term or a set variable, resolved by declared sort.
  struct Operand {
    bool is_set = false;
    PointTerm term;
    std::string set_var;
    Sort set_sort = Sort::open_set;
    Token tok;
  };

  Operand parse_operand() {
    Operand op;
    op.tok = peek();
    if (peek().kind == Tok::Constant) {
      Token t = next();
      op.term = PointTerm::constant(t.value);
      return op;
    }
    Token t = expect(Tok::Ident, "a variable or constant");
    auto sort = lookup(t.text);
    if (!sort)
      abort_parse(t, "variable '" + t.text +
                         "' is neither bound nor declared free");
    if (*sort == Sort::point) {
      op.term = PointTerm::variable(t.text);
    } else {
      op.is_set = true;
      op.set_var = t.text;
      op.set_sort = *sort;
    }
    return op;
  }

  FormulaPtr parse_atom() {
    if (accept(Tok::LParen)) {
      auto f = parse_iff();
      expect(Tok::RParen, "')'");
      return f;
    }
    Operand lhs = parse_operand();
    if (accept(Tok::Eq)) {
      Operand rhs = parse_operand();
      if (lhs.is_set != rhs.is_set)
        abort_parse(rhs.tok, "'=' needs both sides of the same sort");
      if (lhs.is_set) {
        if (lhs.set_sort != rhs.set_sort)
          abort_parse(rhs.tok, "'=' needs both sides of the same sort");
        return mk_set_eq(lhs.set_var, rhs.set_var, lhs.set_sort);
      }
      return mk_point_eq(lhs.term, rhs.term);
    }
    if (peek().kind == Tok::Leq) {
      Token t = next();
      if (dialect_ != Dialect::CMSOL && dialect_ != Dialect::FOL)
        abort_parse(t, "the <= atom is not available in " + to_string(dialect_));
      if (lhs.is_set) abort_parse(lhs.tok, "'<=' needs point terms");
      Operand rhs = parse_operand();
      if (rhs.is_set) abort_parse(rhs.tok, "'<=' needs point terms");
      return mk_leq(lhs.term, rhs.term);
    }
    if (peek().kind == Tok::KwIn) {
      Token t = next();
      if (lhs.is_set) abort_parse(lhs.tok, "'in' needs a point on the left");
      Operand rhs = parse_operand();
      if (!rhs.is_set)
        abort_parse(rhs.tok, "'in' needs a set variable on the right");
      return mk_member(lhs.term, rhs.set_var, rhs.set_sort);
    }
    abort_parse(peek(), "expected '=', '<=' or 'in' after a term");
  }
};

}  // namespace

ParseResult parse_formula(const std::string& text, Dialect dialect,
                          const std::map<std::string, Sort>& free_vars) {
  ParseResult result;
  try {
    Parser p(lex(text), dialect, free_vars);
    result.formula = p.parse();
  } catch (const ParseAbort& a) {
    result.diagnostics.push_back(a.diag);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Renderer
// ---------------------------------------------------------------------------

namespace {

constexpr int kPrecQuant = 0;
constexpr int kPrecIff = 1;
constexpr int kPrecImplies = 2;
constexpr int kPrecOr = 3;
constexpr int kPrecAnd = 4;
constexpr int kPrecNot = 5;
constexpr int kPrecAtom = 6;

std::string render_term(const PointTerm& t) {
  if (t.is_constant) return "a" + std::to_string(t.constant_index);
  return t.var;
}

void render(const FormulaPtr& f, int context, std::string& out) {
  auto wrap = [&](int own, auto&& body) {
    bool parens = own < context;
    if (parens) out += '(';
    body();
    if (parens) out += ')';
  };
  switch (f->kind) {
    case NodeKind::PointEq:
      out += render_term(f->lhs) + " = " + render_term(f->rhs);
      break;
    case NodeKind::SetEq:
      out += f->set_a + " = " + f->set_b;
      break;
    case NodeKind::Member:
      out += render_term(f->lhs) + " in " + f->set_a;
      break;
    case NodeKind::Leq:
      out += render_term(f->lhs) + " <= " + render_term(f->rhs);
      break;
    case NodeKind::Not:
      wrap(kPrecNot, [&] {
        out += '~';
        render(f->child, kPrecNot, out);
      });
      break;
    case NodeKind::And:
      wrap(kPrecAnd, [&] {
        render(f->child, kPrecAnd, out);
        out += " & ";
        render(f->child2, kPrecAnd + 1, out);
      });
      break;
    case NodeKind::Or:
      wrap(kPrecOr, [&] {
        render(f->child, kPrecOr, out);
        out += " | ";
        render(f->child2, kPrecOr + 1, out);
      });
      break;
    case NodeKind::Implies:
      wrap(kPrecImplies, [&] {
        render(f->child, kPrecImplies + 1, out);
        out += " -> ";
        render(f->child2, kPrecImplies, out);
      });
      break;
    case NodeKind::Iff:
      wrap(kPrecIff, [&] {
        render(f->child, kPrecIff + 1, out);
        out += " <-> ";
        render(f->child2, kPrecIff, out);
      });
      break;
    case NodeKind::Forall:
    case NodeKind::Exists:
      wrap(kPrecQuant, [&] {
        out += f->kind == NodeKind::Forall ? "all " : "ex ";
        out += to_string(f->var_sort) + " " + f->var + ". ";
        render(f->child, kPrecQuant, out);
      });
      break;
    case NodeKind::CountMod:
      wrap(kPrecQuant, [&] {
        out += "count[" + std::to_string(f->mod_m) + "," +
               std::to_string(f->mod_a) + "] " + f->var + ". ";
        render(f->child, kPrecQuant, out);
      });
      break;
  }
}

}  // namespace

std::string render_formula(const FormulaPtr& f) {
  std::string out;
  render(f, kPrecQuant, out);
  return out;
}

// ---------------------------------------------------------------------------
// Well-sortedness / dialect checks
// ---------------------------------------------------------------------------

namespace {

struct SortChecker {
  Dialect dialect;
  const ConstantTable* constants;
  const std::map<std::string, Sort>* free_vars;
  std::vector<Diagnostic>* out;
  std::vector<std::pair<std::string, Sort>> scopes;

  bool topological() const {
    return dialect == Dialect::TCMSOL || dialect == Dialect::TFOL;
  }
  bool monadic() const {
    return dialect == Dialect::TCMSOL || dialect == Dialect::CMSOL;
  }

  void report(std::string msg) { out->push_back(Diagnostic{0, 0, std::move(msg)}); }

  std::optional<Sort> lookup(const std::string& name) const {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it)
      if (it->first == name) return it->second;
    auto it = free_vars->find(name);
    if (it != free_vars->end()) return it->second;
    return std::nullopt;
  }

  void check_use(const std::string& name, Sort wanted) {
    auto sort = lookup(name);
    if (!sort) {
      report("unbound variable '" + name + "'");
      return;
    }
    if (*sort != wanted)
      report("variable '" + name + "' has sort " + to_string(*sort) +
             " but is used as " + to_string(wanted));
    if (wanted == Sort::open_set && !topological())
      report("open-set variable '" + name + "' is not in dialect " +
             to_string(dialect));
    if (wanted == Sort::point_set && !monadic())
      report("point-set variable '" + name + "' is not in dialect " +
             to_string(dialect));
  }

  void check_term(const PointTerm& t) {
    if (t.is_constant) {
      if (t.constant_index < 1 || t.constant_index > constants->r)
        report("constant a" + std::to_string(t.constant_index) +
               " exceeds the declared count r = " + std::to_string(constants->r));
      return;
    }
    check_use(t.var, Sort::point);
  }

  void walk(const FormulaPtr& f) {
    if (!f) {
      report("null subformula");
      return;
    }
    switch (f->kind) {
      case NodeKind::PointEq:
        check_term(f->lhs);
        check_term(f->rhs);
        break;
      case NodeKind::Leq:
        if (dialect != Dialect::CMSOL && dialect != Dialect::FOL)
          report("atom not in dialect: <= is not available in " +
                 to_string(dialect));
        check_term(f->lhs);
        check_term(f->rhs);
        break;
      case NodeKind::SetEq:
        check_use(f->set_a, f->set_sort);
        check_use(f->set_b, f->set_sort);
        break;
      case NodeKind::Member:
        check_term(f->lhs);
        check_use(f->set_a, f->set_sort);
        break;
      case NodeKind::Not:
        walk(f->child);
        break;
      case NodeKind::And:
      case NodeKind::Or:
      case NodeKind::Implies:
      case NodeKind::Iff:
        walk(f->child);
        walk(f->child2);
        break;
      case NodeKind::Forall:
      case NodeKind::Exists:
        if (f->var_sort == Sort::open_set && !topological())
          report("open-set quantifier is not available in " + to_string(dialect));
        if (f->var_sort == Sort::point_set && !monadic())
          report("point-set quantifier is not available in " + to_string(dialect));
        scopes.emplace_back(f->var, f->var_sort);
        walk(f->child);
        scopes.pop_back();
        break;
      case NodeKind::CountMod:
        if (!monadic())
          report("modular counting quantifier is not available in " +
                 to_string(dialect));
        if (f->var_sort != Sort::point)
          report("count binds a point variable only");
        if (f->mod_m < 1 || f->mod_a < 0 || f->mod_a >= f->mod_m)
          report("count parameters out of range");
        scopes.emplace_back(f->var, Sort::point);
        walk(f->child);
        scopes.pop_back();
        break;
    }
  }
};

struct FeatureScan {
  bool leq = false, open_sort = false, point_set_sort = false, count = false;

  void see_sort(Sort s) {
    if (s == Sort::open_set) open_sort = true;
    if (s == Sort::point_set) point_set_sort = true;
  }

  void walk(const FormulaPtr& f) {
    if (!f) return;
    switch (f->kind) {
      case NodeKind::Leq: leq = true; break;
      case NodeKind::SetEq:
      case NodeKind::Member: see_sort(f->set_sort); break;
      case NodeKind::CountMod: count = true; break;
      case NodeKind::Forall:
      case NodeKind::Exists: see_sort(f->var_sort); break;
      default: break;
    }
    walk(f->child);
    walk(f->child2);
  }
};

}  // namespace

std::vector<Diagnostic> check_well_sorted(
    const FormulaPtr& f, Dialect dialect, const ConstantTable& constants,
    const std::map<std::string, Sort>& free_vars) {
  std::vector<Diagnostic> out;
  SortChecker checker{dialect, &constants, &free_vars, &out, {}};
  checker.walk(f);
  return out;
}

std::optional<Dialect> weakest_dialect(
    const FormulaPtr& f, const std::map<std::string, Sort>& free_vars) {
  FeatureScan scan;
  scan.walk(f);
  for (const auto& [name, sort] : free_vars) scan.see_sort(sort);
  const bool second_order = scan.point_set_sort || scan.count;
  if (scan.leq && scan.open_sort) return std::nullopt;
  if (scan.open_sort) return second_order ? Dialect::TCMSOL : Dialect::TFOL;
  if (scan.leq) return second_order ? Dialect::CMSOL : Dialect::FOL;
  return second_order ? Dialect::CMSOL : Dialect::FOL;
}

bool uses_point_set_quantifier(const FormulaPtr& f) {
  if (!f) return false;
  if ((f->kind == NodeKind::Forall || f->kind == NodeKind::Exists) &&
      f->var_sort == Sort::point_set)
    return true;
  return uses_point_set_quantifier(f->child) ||
         uses_point_set_quantifier(f->child2);
}

bool uses_count_mod(const FormulaPtr& f) {
  if (!f) return false;
  if (f->kind == NodeKind::CountMod) return true;
  return uses_count_mod(f->child) || uses_count_mod(f->child2);
}

}  // namespace topo
