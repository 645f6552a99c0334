#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "panda/measure.hpp"
#include "panda/query.hpp"
#include "panda/relational.hpp"

namespace panda {

// A statistics term with its guard: a table for (Y|∅), a dictionary otherwise.
struct GuardedTerm {
  Measure delta;
  std::shared_ptr<const Table> table;
  Dictionary dict;
  BigInt stat;
};

struct SubproblemNode {
  std::vector<VarSet> Z;
  std::vector<GuardedTerm> D;
  std::vector<Measure> M;
  std::vector<Measure> S;
  int depth = 0;

  IntegralInequality inequality() const;
  int potential() const {
    return static_cast<int>(D.size() + M.size() + 2 * S.size());
  }
};

// b = (1/Z0) Σ_{𝒟0} n_δ, kept as Z0 and P = ∏_{𝒟0} N_δ.
struct Budget {
  int z0 = 1;
  BigInt product = 1;

  // n ≤ b for a statistic N, i.e. N^{Z0} ≤ P.
  bool within(const BigInt& n) const;
};

enum class StepCase { kJoin, kJoinReset, kProjection, kPartition };

const char* step_case_name(StepCase c);

struct TraceLine {
  int depth = 0;
  StepCase kind = StepCase::kJoin;
  Measure delta;
  int z = 0, d = 0, m = 0, s = 0;
  bool budget_ok = true;
  int children = 0;
};

struct PandaConfig {
  bool parallel = false;
  bool trace = false;
  // Checks invariants on every node and throws on the first violation.
  bool check = false;
};

struct PandaStats {
  std::uint64_t work = 0;   // tuple touches over all nodes
  std::uint64_t max_node_work = 0;
  std::uint64_t input_size = 0;
  int nodes = 0;
  int leaves = 0;
  int pruned = 0;           // subproblems with an empty guard
  int max_depth = 0;
  Budget budget;
  std::vector<TraceLine> trace;
};

using Model = std::map<std::string, Table>;

SubproblemNode make_root(const DisjunctiveRule& rule, const Instance& instance,
                         const StatisticsProfile& profile,
                         const IntegralInequality& ineq);
Budget budget_of(const SubproblemNode& root);

// Resets away unconditional terms above the budget.
SubproblemNode preprocess(SubproblemNode root, const Budget& budget);

bool is_terminal(const SubproblemNode& node);

// One engine step on a non-terminal node.
std::vector<SubproblemNode> step(const SubproblemNode& node,
                                 const Budget& budget, Exec exec,
                                 WorkCounter* work, TraceLine* trace = nullptr);

Model gather(const std::vector<SubproblemNode>& leaves,
             const DisjunctiveRule& rule);

// Names of violated invariants; empty when all hold.
std::vector<std::string> check_invariants(const SubproblemNode& node,
                                          const Budget& budget);

Model run_panda(const DisjunctiveRule& rule, const Instance& instance,
                const StatisticsProfile& profile,
                const IntegralInequality& ineq, const PandaConfig& config = {},
                PandaStats* stats = nullptr);

}  // namespace panda
