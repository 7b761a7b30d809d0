#pragma once

#include "topo/logic.hpp"
#include "topo/structures.hpp"

namespace topo {

// The translation schemes between topologies and quasi-orders. Phi maps
// CMSOL formulas over quasi-orders to TCMSOL formulas over topologies (its
// structure map phi_star is alpha); Psi maps TCMSOL over topologies to CMSOL
// over quasi-orders (psi_star is alpha_prime).
struct TranslationScheme {
  FormulaPtr universe;   // x = x
  FormulaPtr leq_def;    // Phi: x <= y as containment in every open around y
  FormulaPtr basic_def;  // Psi: U is the basic open set of x
  FormulaPtr open_def;   // Psi: U is a union of basic sets (a down-set)
};

TranslationScheme phi_scheme();
TranslationScheme psi_scheme();

// Replaces every x <= y atom by "all open V. (y in V -> x in V)" with a
// fresh open-set variable; everything else maps homomorphically. The result
// is TCMSOL.
FormulaPtr phi_sharp(const FormulaPtr& cmsol);

// Re-sorts open-set variables as point-set variables guarded by the down-set
// condition: bound occurrences get the guard at their binder, free ones at
// each atom; E(x,U) becomes U(x). The result is CMSOL.
FormulaPtr psi_sharp(const FormulaPtr& tcmsol);

// Structure maps of the schemes.
Preorder phi_star(const Topology& t);
Topology psi_star(const Preorder& q);

}  // namespace topo
