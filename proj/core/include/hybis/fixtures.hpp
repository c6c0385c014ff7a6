#pragma once

// Built-in example structures: the two-successor/one-successor pair with
// nominals (fig1), the finite chain versus the two-cycle (fig2), and the
// branch-merge structure, its chain companion, and its tree unravelling
// (fig3).  Infinite originals are truncated: the chain at length L, the
// fig3 structures at depth D.  The unravelling fig3_u is truncated by path
// length so that both branches reach depth D; its dashed relation to the
// chain is then an exact (quasi-injective) bisimulation with no frontier
// carve-outs.

#include <string>
#include <vector>

#include "hybis/model.hpp"

namespace hybis {

struct FixtureTriple {
  KripkeModel left;
  KripkeModel right;
  PairRelation relation;  // the figure's dashed-line relation (k = 0)
};

// Single models: fig1_m, fig1_n, fig2_chain (param = length L >= 1,
// default 4), fig2_cycle, fig3_m / fig3_n / fig3_u (param = depth D >= 2,
// default 5).  param = 0 selects the default.  Throws DomainError on
// unknown names or out-of-range parameters.
KripkeModel fixture_model(const std::string& name, int param = 0);

// Model pairs with their dashed relation: fig1, fig2 (param = chain length),
// fig3_mn, fig3_un (param = depth).
FixtureTriple fixture_pair(const std::string& name, int param = 0);

std::vector<std::string> fixture_model_names();
std::vector<std::string> fixture_pair_names();

}  // namespace hybis
