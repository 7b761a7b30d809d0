#pragma once

#include <string>
#include <vector>

#include "topo/config.hpp"
#include "topo/logic.hpp"

namespace topo {

// Closed formulas (possibly using hard-wired constants a1..ar) exercised by
// the translation-equivalence and counting checks.
struct SuiteFormula {
  std::string name;
  FormulaPtr formula;
  int r = 0;  // constants used; skipped on ground sets smaller than r
};

// TCMSOL sentences over topologies (builtins plus closed forms of the
// parameterized ones).
std::vector<SuiteFormula> tcmsol_suite();

// CMSOL sentences over quasi-orders.
std::vector<SuiteFormula> cmsol_suite();

struct VerifyResult {
  bool pass = true;
  std::vector<std::string> lines;  // one "ok ..."/"FAIL ..." line per check

  void check(bool ok, const std::string& what);
};

// Named verification suites behind the CLI `verify` subcommand:
//   alexandroff-roundtrip     alpha/alpha_prime inverse on all n <= N
//   translation-equivalence   phi_sharp/psi_sharp semantic transfer
//   stirling-identity         Q(n) = sum_k S(n,k) P(k) for n <= N
//   catalan-parity            parity laws for Catalan / half central binomial
//   noncrossing-catalan       non-crossing partition counts vs Catalan
//   oeis-prefixes             enumerated Q/P prefixes vs published values
VerifyResult verify_suite(const std::string& name, int n, const Config& cfg = {});

std::vector<std::string> verify_suite_names();

}  // namespace topo
