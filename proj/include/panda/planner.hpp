#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "panda/decomposition.hpp"
#include "panda/log_scale.hpp"
#include "panda/panda_engine.hpp"
#include "panda/shannon.hpp"

namespace panda {

// Memoized max-min LPs keyed by the (sorted) target list.
class MaxMinCache {
 public:
  MaxMinCache(int n, StatisticsProfile profile, Basis basis = Basis::kElemental);

  const MaxMinResult& solve(std::vector<VarSet> targets);
  const LogScale& scale() const { return scale_; }
  int solves() const { return solves_; }

 private:
  int n_;
  StatisticsProfile profile_;
  Basis basis_;
  LogScale scale_;
  std::map<std::vector<VarSet>, std::unique_ptr<MaxMinResult>> cache_;
  std::mutex mu_;
  int solves_ = 0;
};

struct WidthReport {
  LogExpr value;               // Σ w_δ n_δ
  std::vector<VarSet> realizer;  // fhtw: the best TD's bags; subw: worst bag choice
  int td_index = -1;           // fhtw only
  int tds_considered = 0;
};

WidthReport compute_fhtw(const ConjunctiveQuery& q,
                         const StatisticsProfile& profile,
                         Basis basis = Basis::kElemental);
WidthReport compute_subw(const ConjunctiveQuery& q,
                         const StatisticsProfile& profile,
                         Basis basis = Basis::kElemental);

struct PlanBundle {
  std::vector<TreeDecomposition> tds;
  // bag_atoms[i][j]: fresh head atom for node j of tds[i].
  std::vector<std::vector<Atom>> bag_atoms;
  // One rule per element of ∏_i nodes(tds[i]).
  std::vector<DisjunctiveRule> ddrs;
};

PlanBundle build_bag_ddrs(const ConjunctiveQuery& q,
                          const std::vector<TreeDecomposition>& tds);

// Deterministic head-atom name for a bag.
std::string bag_atom_name(VarSet bag, const Universe& u);

struct DdrPlan {
  DisjunctiveRule rule;
  std::vector<VarSet> heads;
  LogExpr bound;              // opt of the max-min problem over heads
  RationalWitness coeffs;     // λ, w and witness terms
  IntegralInequality witness;
};

struct PlannerConfig {
  Basis basis = Basis::kElemental;
  bool parallel = false;
  bool trace = false;
};

// Data-independent part of evaluation: decompositions and solved DDRs.
struct CqPlan {
  ConjunctiveQuery query;
  StatisticsProfile profile;
  bool full = false;
  std::vector<TreeDecomposition> tds;
  std::vector<DdrPlan> ddrs;
};

CqPlan plan_cq(const ConjunctiveQuery& q, const StatisticsProfile& profile,
               const PlannerConfig& config = {});

struct CqStats {
  std::uint64_t panda_work = 0;
  int panda_nodes = 0;
  int ddrs_run = 0;
};

Table execute_plan(const CqPlan& plan, const Instance& instance,
                   const PlannerConfig& config = {}, CqStats* stats = nullptr);

Table answer_cq(const ConjunctiveQuery& q, const Instance& instance,
                const StatisticsProfile& profile,
                const PlannerConfig& config = {});

// Turns a rational λ/w solution into an integral witness via find_witness.
IntegralInequality witness_for(const MaxMinResult& dual, int n, Basis basis,
                               RationalWitness* coeffs = nullptr);

}  // namespace panda
