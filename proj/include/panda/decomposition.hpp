#pragma once

#include <string>
#include <utility>
#include <vector>

#include "panda/query.hpp"
#include "panda/relational.hpp"

namespace panda {

struct TreeDecomposition {
  std::vector<VarSet> bags;
  std::vector<std::pair<int, int>> edges;
  // Nodes of the connected subtree whose bags cover exactly the free
  // variables. Empty for Boolean queries.
  std::vector<bool> free_node;

  int size() const { return static_cast<int>(bags.size()); }
  // Nodes whose bag is not strictly inside another bag.
  std::vector<int> planning_nodes() const;
  std::vector<VarSet> planning_bags() const;
  std::vector<std::vector<int>> adjacency() const;

  // Checks coverage, running intersection, tree shape and free-connexity.
  bool is_valid(const Schema& body, VarSet free, std::string* why = nullptr) const;
};

// Free-connex decompositions from elimination orders that remove non-free
// variables first, plus the single-bag decomposition. Deduplicated by bags.
std::vector<TreeDecomposition> enumerate_free_connex_tds(
    const ConjunctiveQuery& q);

// Drops decompositions whose planning bags are dominated by another's:
// T is dominated by T' when every planning bag of T' lies inside a planning
// bag of T.
std::vector<TreeDecomposition> prune_dominated(
    std::vector<TreeDecomposition> tds);

std::string format_td(const TreeDecomposition& td, const Universe& u);

// Full reducer passes, then the join of the free subtree projected on F.
Table yannakakis(std::vector<Table> node_tables, const TreeDecomposition& td,
                 VarSet free, Exec exec = Exec::kSerial);

}  // namespace panda
