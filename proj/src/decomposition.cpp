#include "panda/decomposition.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "panda/errors.hpp"

namespace panda {

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

// Neighbors of v once `gone` has been eliminated: vertices outside `gone`
// reachable from v through eliminated vertices.
VarSet fill_neighbors(const std::vector<VarSet>& adj, VarSet gone, int v) {
  VarSet seen = VarSet::singleton(v), out;
  std::vector<int> stack{v};
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int w : (adj[u] - seen).members()) {
      seen |= VarSet::singleton(w);
      if (gone.contains(w)) {
        stack.push_back(w);
      } else {
        out |= VarSet::singleton(w);
      }
    }
  }
  return out;
}

// Contracts non-maximal bags into an adjacent superset. Free bags only merge
// into free bags so the free subtree keeps covering F.
TreeDecomposition absorb(TreeDecomposition td) {
  for (bool changed = true; changed;) {
    changed = false;
    auto adj = td.adjacency();
    for (int i = 0; i < td.size() && !changed; ++i) {
      for (int j : adj[i]) {
        if (!td.bags[i].subset_of(td.bags[j])) continue;
        if (td.free_node[i] && !td.free_node[j]) continue;
        // Reattach i's other neighbours to j, then delete i.
        std::vector<std::pair<int, int>> edges;
        for (auto [a, b] : td.edges) {
          if ((a == i && b == j) || (a == j && b == i)) continue;
          if (a == i) a = j;
          if (b == i) b = j;
          edges.push_back({a, b});
        }
        for (auto& [a, b] : edges) {
          if (a > i) --a;
          if (b > i) --b;
        }
        td.edges = std::move(edges);
        td.bags.erase(td.bags.begin() + i);
        td.free_node.erase(td.free_node.begin() + i);
        changed = true;
        break;
      }
    }
  }
  return td;
}

// Canonical form for deduplication: sorted (bag, free) pairs plus edges.
std::vector<std::uint64_t> signature(const TreeDecomposition& td) {
  std::vector<std::uint64_t> sig;
  for (int i = 0; i < td.size(); ++i) {
    sig.push_back((std::uint64_t{td.bags[i].bits()} << 1) | td.free_node[i]);
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

TreeDecomposition from_elimination(
    const std::vector<std::pair<int, VarSet>>& steps, VarSet free) {
  TreeDecomposition td;
  int n = static_cast<int>(steps.size());
  std::vector<int> position(kMaxVariables, -1);
  for (int k = 0; k < n; ++k) position[steps[k].first] = k;
  std::vector<int> roots;
  for (int k = 0; k < n; ++k) {
    auto [v, bag] = steps[k];
    td.bags.push_back(bag);
    td.free_node.push_back(free.contains(v));
    int parent = -1;
    for (int u : (bag - VarSet::singleton(v)).members()) {
      if (parent < 0 || position[u] < parent) parent = position[u];
    }
    if (parent >= 0) {
      td.edges.push_back({k, parent});
    } else if (k != n - 1) {
      roots.push_back(k);
    }
  }
  for (int r : roots) td.edges.push_back({r, n - 1});
  return absorb(std::move(td));
}

}  // namespace

std::vector<int> TreeDecomposition::planning_nodes() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    bool inside = false;
    for (int j = 0; j < size() && !inside; ++j) {
      if (i == j) continue;
      inside = bags[i].subset_of(bags[j]) && (bags[i] != bags[j] || j < i);
    }
    if (!inside) out.push_back(i);
  }
  return out;
}

std::vector<VarSet> TreeDecomposition::planning_bags() const {
  std::vector<VarSet> out;
  for (int i : planning_nodes()) out.push_back(bags[i]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> TreeDecomposition::adjacency() const {
  std::vector<std::vector<int>> adj(size());
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& l : adj) std::sort(l.begin(), l.end());
  return adj;
}

bool TreeDecomposition::is_valid(const Schema& body, VarSet free,
                                 std::string* why) const {
  auto bad = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (bags.empty()) return bad("no bags");
  if (static_cast<int>(edges.size()) != size() - 1) return bad("not a tree");
  Dsu dsu(size());
  for (auto [a, b] : edges) {
    if (!dsu.unite(a, b)) return bad("cycle");
  }
  for (const auto& a : body.atoms) {
    bool covered = std::any_of(bags.begin(), bags.end(),
                               [&](VarSet b) { return a.vars.subset_of(b); });
    if (!covered) return bad("atom " + a.name + " not covered");
  }
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) {
      if (bags[i] == bags[j]) return bad("duplicate bags");
    }
  }
  auto adj = adjacency();
  VarSet all;
  for (VarSet b : bags) all |= b;
  for (int v : all.members()) {
    // Nodes holding v must be connected.
    std::vector<int> holders;
    for (int i = 0; i < size(); ++i) {
      if (bags[i].contains(v)) holders.push_back(i);
    }
    std::set<int> seen{holders[0]};
    std::vector<int> stack{holders[0]};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : adj[u]) {
        if (bags[w].contains(v) && seen.insert(w).second) stack.push_back(w);
      }
    }
    if (seen.size() != holders.size()) return bad("running intersection");
  }
  std::vector<int> fn;
  VarSet covered;
  for (int i = 0; i < size(); ++i) {
    if (free_node[i]) {
      fn.push_back(i);
      covered |= bags[i];
    }
  }
  if (covered != free) return bad("free subtree does not cover F exactly");
  if (!fn.empty()) {
    std::set<int> seen{fn[0]};
    std::vector<int> stack{fn[0]};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : adj[u]) {
        if (free_node[w] && seen.insert(w).second) stack.push_back(w);
      }
    }
    if (seen.size() != fn.size()) return bad("free subtree disconnected");
  }
  return true;
}

std::vector<TreeDecomposition> enumerate_free_connex_tds(
    const ConjunctiveQuery& q) {
  VarSet all = q.body.vars();
  if (all.size() > 10) {
    fail(ErrorCode::kUniverseTooLarge, "decomposition search caps at 10 variables");
  }
  std::vector<VarSet> adj(kMaxVariables);
  for (const auto& a : q.body.atoms) {
    for (int v : a.vars.members()) adj[v] |= a.vars - VarSet::singleton(v);
  }
  std::vector<TreeDecomposition> out;
  std::set<std::vector<std::uint64_t>> seen_tds;
  std::set<std::pair<std::uint32_t, std::vector<std::uint32_t>>> seen_states;
  std::vector<std::pair<int, VarSet>> steps;

  auto record = [&](TreeDecomposition td) {
    if (seen_tds.insert(signature(td)).second) out.push_back(std::move(td));
  };
  {
    TreeDecomposition single;
    single.bags.push_back(all);
    single.free_node.push_back(q.free == all);
    if (!q.free.empty() && q.free != all) {
      single.bags.push_back(q.free);
      single.free_node.push_back(true);
      single.edges.push_back({0, 1});
    }
    record(std::move(single));
  }

  std::function<void(VarSet)> dfs = [&](VarSet gone) {
    if (gone == all) {
      record(from_elimination(steps, q.free));
      return;
    }
    std::vector<std::uint32_t> key;
    for (auto& [v, b] : steps) key.push_back(b.bits());
    std::sort(key.begin(), key.end());
    if (!seen_states.insert({gone.bits(), key}).second) return;
    VarSet pending = all - gone - q.free;
    VarSet choices = pending.empty() ? all - gone : pending;
    for (int v : choices.members()) {
      VarSet bag = fill_neighbors(adj, gone, v) | VarSet::singleton(v);
      steps.push_back({v, bag});
      dfs(gone | VarSet::singleton(v));
      steps.pop_back();
    }
  };
  dfs(VarSet());
  return out;
}

std::vector<TreeDecomposition> prune_dominated(
    std::vector<TreeDecomposition> tds) {
  std::vector<std::vector<VarSet>> pb;
  for (const auto& td : tds) pb.push_back(td.planning_bags());
  auto dominates = [&](std::size_t a, std::size_t b) {
    // Every bag of a sits inside some bag of b.
    return std::all_of(pb[a].begin(), pb[a].end(), [&](VarSet x) {
      return std::any_of(pb[b].begin(), pb[b].end(),
                         [&](VarSet y) { return x.subset_of(y); });
    });
  };
  std::vector<TreeDecomposition> out;
  for (std::size_t b = 0; b < tds.size(); ++b) {
    bool drop = false;
    for (std::size_t a = 0; a < tds.size() && !drop; ++a) {
      if (a == b || !dominates(a, b)) continue;
      drop = !dominates(b, a) || a < b;
    }
    if (!drop) out.push_back(tds[b]);
  }
  return out;
}

std::string format_td(const TreeDecomposition& td, const Universe& u) {
  std::string out;
  for (int i = 0; i < td.size(); ++i) {
    if (i) out += " ";
    out += "{" + u.format(td.bags[i]) + "}";
    if (td.free_node[i]) out += "*";
  }
  return out;
}

Table yannakakis(std::vector<Table> t, const TreeDecomposition& td,
                 VarSet free, Exec exec) {
  if (static_cast<int>(t.size()) != td.size()) {
    fail(ErrorCode::kSchemaMismatch, "one table per bag expected");
  }
  int root = 0;
  for (int i = 0; i < td.size(); ++i) {
    if (td.free_node[i]) {
      root = i;
      break;
    }
  }
  VarSet covered;
  for (int i = 0; i < td.size(); ++i) {
    if (td.free_node[i]) covered |= td.bags[i];
  }
  if (covered != free) fail(ErrorCode::kNotFreeConnex, "free subtree mismatch");
  auto adj = td.adjacency();
  // BFS order from the root; parents precede children.
  std::vector<int> order{root}, parent(td.size(), -1);
  std::vector<bool> seen(td.size(), false);
  seen[root] = true;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (int w : adj[order[k]]) {
      if (seen[w]) continue;
      seen[w] = true;
      parent[w] = order[k];
      order.push_back(w);
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (parent[*it] >= 0) t[parent[*it]] = semijoin(t[parent[*it]], t[*it], exec);
  }
  for (int v : order) {
    if (parent[v] >= 0) t[v] = semijoin(t[v], t[parent[v]], exec);
  }
  if (free.empty()) {
    Table out(VarSet(), {}, 1, t[root].empty() ? 0 : 1);
    return out;
  }
  // The free nodes form a connected subtree containing the root, so BFS
  // order joins each one to an already joined parent.
  Table acc = t[root];
  for (int v : order) {
    if (v == root || !td.free_node[v]) continue;
    acc = natural_join(acc, t[v], exec);
  }
  return project(acc, free, exec);
}

}  // namespace panda
