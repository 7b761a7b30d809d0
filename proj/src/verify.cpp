#include "topo/verify.hpp"

#include <algorithm>
#include <sstream>

#include "topo/builtins.hpp"
#include "topo/counting.hpp"
#include "topo/evaluate.hpp"
#include "topo/structures.hpp"
#include "topo/translate.hpp"

namespace topo {

namespace {

FormulaPtr parse_or_die(const std::string& text, Dialect dialect) {
  auto result = parse_formula(text, dialect);
  if (!result.ok())
    throw std::logic_error("suite formula failed to parse: " + text + " (" +
                           result.diagnostics.front().message + ")");
  return result.formula;
}

// Published prefixes of the pre-order and partial-order counting sequences
// (OEIS A000798 / A001035, cited alongside T(5) = 6942 in the source
// material for these counts).
const std::uint64_t kPreorderCounts[] = {1, 1, 4, 29, 355, 6942, 209527, 9535241};
const std::uint64_t kPosetCounts[] = {1, 1, 3, 19, 219, 4231, 130023, 6129859};

}  // namespace

std::vector<SuiteFormula> tcmsol_suite() {
  std::vector<SuiteFormula> suite;
  suite.push_back({"true", builtin_true(), 0});
  suite.push_back({"t0", builtin_t0(), 0});
  suite.push_back({"t1", builtin_t1(), 0});
  suite.push_back({"connected", builtin_connected(), 0});
  suite.push_back({"even_set_not_open", builtin_even_set_not_open(), 0});
  suite.push_back({"minimal_open_const(1)", builtin_minimal_open_const(1), 1});
  suite.push_back({"pairwise_separated(2)", builtin_pairwise_separated(2), 2});
  suite.push_back(
      {"different_components(2)", builtin_different_components(2), 2});
  suite.push_back(
      {"has_proper_clopen",
       parse_or_die("ex open U. ((ex open V. all point w. (w in V <-> ~(w in U)))"
                    " & (ex point x. x in U) & (ex point y. ~(y in U)))",
                    Dialect::TCMSOL),
       0});
  suite.push_back({"even_universe",
                   parse_or_die("count[2,0] x. x = x", Dialect::TCMSOL), 0});
  suite.push_back(
      {"discrete",
       parse_or_die("all set S. ex open U. all point x. (x in U <-> x in S)",
                    Dialect::TCMSOL),
       0});
  suite.push_back(
      {"smallest_open_exists",
       parse_or_die("all point x. ex open U. (x in U & all open V. "
                    "(x in V -> all point w. (w in V -> w in U)))",
                    Dialect::TCMSOL),
       0});
  return suite;
}

std::vector<SuiteFormula> cmsol_suite() {
  std::vector<SuiteFormula> suite;
  auto add = [&](const std::string& name, const std::string& text, int r = 0) {
    suite.push_back({name, parse_or_die(text, Dialect::CMSOL), r});
  };
  add("reflexive", "all point x. x <= x");
  add("antisymmetric",
      "all point x. all point y. (x <= y & y <= x -> x = y)");
  add("total", "all point x. all point y. (x <= y | y <= x)");
  add("has_maximum", "ex point x. all point y. y <= x");
  add("symmetric", "all point x. all point y. (x <= y -> y <= x)");
  add("even_universe", "count[2,0] x. x = x");
  add("proper_downset",
      "ex set S. ((ex point x. x in S) & (ex point y. ~(y in S)) & "
      "all point x. all point y. (y in S & x <= y -> x in S))");
  add("a1_minimal", "all point x. (x <= a1 -> a1 <= x)", 1);
  add("directed",
      "all point x. all point y. ex point z. (x <= z & y <= z)");
  return suite;
}

void VerifyResult::check(bool ok, const std::string& what) {
  lines.push_back((ok ? "ok   " : "FAIL ") + what);
  if (!ok) pass = false;
}

namespace {

void suite_alexandroff_roundtrip(VerifyResult& result, int n, const Config& cfg) {
  for (int k = 0; k <= n; ++k) {
    std::uint64_t preorders = 0, pre_bad = 0;
    for_each_preorder(k, [&](const Preorder& q) {
      ++preorders;
      if (alpha(alpha_prime(q)) != q) ++pre_bad;
    });
    std::uint64_t topologies = 0, topo_bad = 0;
    for_each_preorder(k, [&](const Preorder& q) {
      Topology t = alpha_prime(q);
      ++topologies;
      if (alpha_prime(alpha(t)) != t) ++topo_bad;
    });
    std::ostringstream line;
    line << "n=" << k << ": alpha(alpha_prime(q)) = q on " << preorders
         << " preorders, alpha_prime(alpha(t)) = t on " << topologies
         << " topologies";
    result.check(pre_bad == 0 && topo_bad == 0, line.str());
  }
  (void)cfg;
}

void suite_translation_equivalence(VerifyResult& result, int n,
                                   const Config& cfg) {
  const EvalLimits limits = cfg.eval_limits();
  const auto cmsol = cmsol_suite();
  const auto tcmsol = tcmsol_suite();
  for (int k = 0; k <= std::min(n, 4); ++k) {
    std::uint64_t checks = 0, bad = 0;
    for (const auto& entry : cmsol) {
      if (entry.r > k) continue;
      FormulaPtr translated = phi_sharp(entry.formula);
      Environment env = Environment::hard_wired(entry.r);
      for_each_preorder(k, [&](const Preorder& q) {
        Topology t = alpha_prime(q);
        ++checks;
        if (evaluate(alpha(t), entry.formula, env, limits) !=
            evaluate(t, translated, env, limits))
          ++bad;
      });
    }
    for (const auto& entry : tcmsol) {
      if (entry.r > k) continue;
      FormulaPtr translated = psi_sharp(entry.formula);
      Environment env = Environment::hard_wired(entry.r);
      for_each_preorder(k, [&](const Preorder& q) {
        ++checks;
        if (evaluate(alpha_prime(q), entry.formula, env, limits) !=
            evaluate(q, translated, env, limits))
          ++bad;
      });
    }
    std::ostringstream line;
    line << "n=" << k << ": " << checks
         << " structure/formula translation checks";
    result.check(bad == 0, line.str());
  }
}

void suite_stirling_identity(VerifyResult& result, int n, const Config& cfg) {
  for (int k = 0; k <= n; ++k) {
    auto report = verify_stirling_identity(k, cfg);
    std::ostringstream line;
    line << "n=" << k << ": Q(n) = " << report.lhs
         << ", sum_k S(n,k) P(k) = " << report.rhs;
    result.check(report.equal, line.str());
  }
}

void suite_catalan_parity(VerifyResult& result, int n, const Config&) {
  const int catalan_limit = std::max(n, 64);
  bool catalan_ok = true;
  for (int k = 0; k <= catalan_limit; ++k) {
    bool odd = mpz_odd_p(catalan_number(k).get_mpz_t()) != 0;
    bool mersenne = ((k + 1) & k) == 0;  // k + 1 a power of two
    if (odd != mersenne) catalan_ok = false;
  }
  result.check(catalan_ok, "catalan(n) odd iff n is a Mersenne number, n <= " +
                               std::to_string(catalan_limit));
  bool half_ok = true;
  for (int k = 1; k <= 30; ++k) {
    bool odd = mpz_odd_p(half_central_binomial(k).get_mpz_t()) != 0;
    bool power_of_two = (k & (k - 1)) == 0;
    if (odd != power_of_two) half_ok = false;
  }
  result.check(half_ok,
               "binom(2n,n)/2 odd iff n is a power of 2, 1 <= n <= 30");
}

void suite_noncrossing_catalan(VerifyResult& result, int n, const Config&) {
  for (int k = 0; k <= std::min(n, 12); ++k) {
    BigInt nc = count_noncrossing_partitions(k);
    BigInt cat = catalan_number(k);
    std::ostringstream line;
    line << "n=" << k << ": non-crossing partitions " << nc << ", catalan "
         << cat;
    result.check(nc == cat, line.str());
  }
}

void suite_oeis_prefixes(VerifyResult& result, int n, const Config& cfg) {
  const int limit = std::min<int>(n, 7);
  for (int k = 0; k <= limit; ++k) {
    std::uint64_t q = count_structures(StructureKind::preorder, k, cfg.enum_cap);
    std::ostringstream line;
    line << "Q(" << k << ") = " << q << " (expected " << kPreorderCounts[k]
         << ")";
    result.check(q == kPreorderCounts[k], line.str());
  }
  for (int k = 0; k <= limit; ++k) {
    std::uint64_t p = count_structures(StructureKind::poset, k, cfg.enum_cap);
    std::ostringstream line;
    line << "P(" << k << ") = " << p << " (expected " << kPosetCounts[k] << ")";
    result.check(p == kPosetCounts[k], line.str());
  }
}

}  // namespace

VerifyResult verify_suite(const std::string& name, int n, const Config& cfg) {
  VerifyResult result;
  if (name == "alexandroff-roundtrip")
    suite_alexandroff_roundtrip(result, n, cfg);
  else if (name == "translation-equivalence")
    suite_translation_equivalence(result, n, cfg);
  else if (name == "stirling-identity")
    suite_stirling_identity(result, n, cfg);
  else if (name == "catalan-parity")
    suite_catalan_parity(result, n, cfg);
  else if (name == "noncrossing-catalan")
    suite_noncrossing_catalan(result, n, cfg);
  else if (name == "oeis-prefixes")
    suite_oeis_prefixes(result, n, cfg);
  else
    throw std::invalid_argument("unknown verify suite: " + name);
  return result;
}

std::vector<std::string> verify_suite_names() {
  return {"alexandroff-roundtrip", "translation-equivalence",
          "stirling-identity",     "catalan-parity",
          "noncrossing-catalan",   "oeis-prefixes"};
}

}  // namespace topo
