#include "panda/planner.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "panda/errors.hpp"

namespace panda {

namespace {

// Supersets never lower min_Z h(Z); dropping them leaves the optimum intact.
std::vector<VarSet> minimal_targets(std::vector<VarSet> targets) {
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  std::vector<VarSet> out;
  for (VarSet t : targets) {
    bool redundant = std::any_of(targets.begin(), targets.end(), [&](VarSet s) {
      return s != t && s.subset_of(t);
    });
    if (!redundant) out.push_back(t);
  }
  return out;
}

std::vector<TreeDecomposition> width_tds(const ConjunctiveQuery& q) {
  return prune_dominated(enumerate_free_connex_tds(q));
}

// Bag choices one TD at a time. A TD holding a superset of an already
// chosen bag is skipped: picking that superset never lowers the minimum.
// `visit` returns false to prune the branch below a partial choice.
void hitting_sets(const std::vector<std::vector<VarSet>>& bags,
                  const std::function<bool(const std::vector<VarSet>&)>& visit,
                  const std::function<void(const std::vector<VarSet>&)>& leaf) {
  std::vector<VarSet> chosen;
  std::function<void(std::size_t)> dfs = [&](std::size_t i) {
    if (!chosen.empty() && !visit(chosen)) return;
    if (i == bags.size()) {
      leaf(chosen);
      return;
    }
    bool covered = std::any_of(bags[i].begin(), bags[i].end(), [&](VarSet b) {
      return std::any_of(chosen.begin(), chosen.end(),
                         [&](VarSet c) { return c.subset_of(b); });
    });
    if (covered) {
      dfs(i + 1);
      return;
    }
    for (VarSet b : bags[i]) {
      chosen.push_back(b);
      dfs(i + 1);
      chosen.pop_back();
    }
  };
  dfs(0);
}

}  // namespace

MaxMinCache::MaxMinCache(int n, StatisticsProfile profile, Basis basis)
    : n_(n), profile_(std::move(profile)), basis_(basis),
      scale_(scale_of(profile_)) {}

const MaxMinResult& MaxMinCache::solve(std::vector<VarSet> targets) {
  targets = minimal_targets(std::move(targets));
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(targets);
  if (it == cache_.end()) {
    ++solves_;
    auto r = std::make_unique<MaxMinResult>(
        solve_maxmin_dual(targets, n_, profile_, basis_));
    it = cache_.emplace(targets, std::move(r)).first;
  }
  return *it->second;
}

WidthReport compute_fhtw(const ConjunctiveQuery& q,
                         const StatisticsProfile& profile, Basis basis) {
  auto tds = width_tds(q);
  MaxMinCache cache(q.universe.size(), profile, basis);
  WidthReport best;
  best.tds_considered = static_cast<int>(tds.size());
  for (std::size_t i = 0; i < tds.size(); ++i) {
    auto bags = tds[i].planning_bags();
    LogExpr worst;
    bool first = true;
    for (VarSet b : bags) {
      const LogExpr& v = cache.solve({b}).opt;
      if (first || cache.scale().compare(v, worst) > 0) worst = v;
      first = false;
    }
    if (best.td_index < 0 || cache.scale().compare(worst, best.value) < 0) {
      best.value = worst;
      best.td_index = static_cast<int>(i);
      best.realizer = bags;
    }
  }
  return best;
}

WidthReport compute_subw(const ConjunctiveQuery& q,
                         const StatisticsProfile& profile, Basis basis) {
  auto tds = width_tds(q);
  MaxMinCache cache(q.universe.size(), profile, basis);
  std::vector<std::vector<VarSet>> bags;
  for (const auto& td : tds) bags.push_back(td.planning_bags());
  WidthReport best;
  best.tds_considered = static_cast<int>(tds.size());
  bool have = false;
  // opt only decreases as targets are added, so a partial choice at or
  // below the incumbent cannot lead to a better leaf.
  hitting_sets(
      bags,
      [&](const std::vector<VarSet>& chosen) {
        return !have ||
               cache.scale().compare(cache.solve(chosen).opt, best.value) > 0;
      },
      [&](const std::vector<VarSet>& chosen) {
        best.value = cache.solve(chosen).opt;
        best.realizer = minimal_targets(chosen);
        have = true;
      });
  return best;
}

std::string bag_atom_name(VarSet bag, const Universe& u) {
  std::string name = "B";
  for (int v : bag.members()) name += "_" + u.name(v);
  return name;
}

PlanBundle build_bag_ddrs(const ConjunctiveQuery& q,
                          const std::vector<TreeDecomposition>& tds) {
  PlanBundle out;
  out.tds = tds;
  std::vector<std::vector<VarSet>> choices;
  for (std::size_t i = 0; i < tds.size(); ++i) {
    std::vector<Atom> atoms;
    std::vector<VarSet> bags;
    for (int j : tds[i].planning_nodes()) {
      VarSet b = tds[i].bags[j];
      atoms.push_back(make_atom("B" + std::to_string(i + 1) + "_" +
                                    bag_atom_name(b, q.universe).substr(2),
                                b.members()));
      bags.push_back(b);
    }
    out.bag_atoms.push_back(std::move(atoms));
    choices.push_back(std::move(bags));
  }
  std::vector<std::size_t> pick(tds.size(), 0);
  if (tds.empty()) return out;
  for (;;) {
    DisjunctiveRule rule;
    rule.universe = q.universe;
    rule.input = q.body;
    for (std::size_t i = 0; i < tds.size(); ++i) {
      const Atom& a = out.bag_atoms[i][pick[i]];
      bool dup = std::any_of(rule.output.atoms.begin(), rule.output.atoms.end(),
                             [&](const Atom& o) { return o.vars == a.vars; });
      if (!dup) rule.output.atoms.push_back(a);
    }
    out.ddrs.push_back(std::move(rule));
    std::size_t i = 0;
    while (i < tds.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
    if (i == tds.size()) break;
  }
  return out;
}

IntegralInequality witness_for(const MaxMinResult& dual, int n, Basis basis,
                               RationalWitness* coeffs) {
  RationalWitness rw;
  rw.lambda = dual.witness.lambda;
  rw.w = dual.witness.w;
  rw.w_origin = dual.witness.w_origin;
  WitnessResult found = find_witness(shannon_gap(rw), n, basis);
  if (!found.valid) {
    fail(ErrorCode::kInvalidWitness, "dual solution is not a Shannon inequality");
  }
  rw.m = std::move(found.m);
  rw.s = std::move(found.s);
  IntegralInequality ineq = integralize(rw);
  if (coeffs) *coeffs = std::move(rw);
  return ineq;
}

CqPlan plan_cq(const ConjunctiveQuery& q, const StatisticsProfile& profile,
               const PlannerConfig& config) {
  q.validate();
  profile.validate(q.body);
  CqPlan plan;
  plan.query = q;
  plan.profile = profile;
  plan.full = q.free == q.body.vars();
  int n = q.universe.size();
  MaxMinCache cache(n, profile, config.basis);

  std::vector<std::vector<VarSet>> head_sets;
  if (plan.full) {
    head_sets.push_back({q.body.vars()});
  } else {
    plan.tds = width_tds(q);
    std::vector<std::vector<VarSet>> bags;
    for (const auto& td : plan.tds) bags.push_back(td.planning_bags());
    std::set<std::vector<VarSet>> seen;
    hitting_sets(
        bags, [](const std::vector<VarSet>&) { return true; },
        [&](const std::vector<VarSet>& chosen) {
          auto heads = chosen;
          std::sort(heads.begin(), heads.end());
          heads.erase(std::unique(heads.begin(), heads.end()), heads.end());
          seen.insert(std::move(heads));
        });
    // A rule whose heads include another rule's heads adds nothing.
    for (const auto& h : seen) {
      bool redundant = std::any_of(seen.begin(), seen.end(), [&](const auto& o) {
        return o != h && std::includes(h.begin(), h.end(), o.begin(), o.end());
      });
      if (!redundant) head_sets.push_back(minimal_targets(h));
    }
  }
  for (const auto& heads : head_sets) {
    DdrPlan d;
    d.heads = heads;
    d.rule.universe = q.universe;
    d.rule.input = q.body;
    for (VarSet h : heads) {
      d.rule.output.atoms.push_back(
          make_atom(bag_atom_name(h, q.universe), h.members()));
    }
    const MaxMinResult& dual = cache.solve(heads);
    d.bound = dual.opt;
    d.witness = witness_for(dual, n, config.basis, &d.coeffs);
    plan.ddrs.push_back(std::move(d));
  }
  return plan;
}

Table execute_plan(const CqPlan& plan, const Instance& instance,
                   const PlannerConfig& config, CqStats* stats) {
  const ConjunctiveQuery& q = plan.query;
  CqStats local;
  CqStats& st = stats ? *stats : local;
  for (const auto& a : q.body.atoms) {
    auto it = instance.find(a.name);
    if (it == instance.end()) {
      fail(ErrorCode::kUnknownRelation, "no table for relation " + a.name);
    }
    if (it->second.empty()) {
      return Table(q.free);
    }
  }
  std::vector<Model> models(plan.ddrs.size());
  std::vector<PandaStats> pstats(plan.ddrs.size());
  std::vector<std::exception_ptr> errors(plan.ddrs.size());
  PandaConfig pc;
  pc.trace = config.trace;
  bool outer = config.parallel && plan.ddrs.size() > 1;
  pc.parallel = config.parallel && !outer;
#pragma omp parallel for schedule(dynamic) if (outer)
  for (std::size_t i = 0; i < plan.ddrs.size(); ++i) {
    try {
      models[i] = run_panda(plan.ddrs[i].rule, instance, plan.profile,
                            plan.ddrs[i].witness, pc, &pstats[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::map<VarSet, Table> heads;
  for (std::size_t i = 0; i < plan.ddrs.size(); ++i) {
    st.panda_work += pstats[i].work;
    st.panda_nodes += pstats[i].nodes;
    ++st.ddrs_run;
    for (const auto& a : plan.ddrs[i].rule.output.atoms) {
      const Table& t = models[i].at(a.name);
      auto [it, inserted] = heads.try_emplace(a.vars, t);
      if (!inserted) it->second = set_union(it->second, t);
    }
  }
  // Semijoin-reduce each bag table with the atoms it contains.
  for (auto& [bag, t] : heads) {
    for (const auto& a : q.body.atoms) {
      if (a.vars.subset_of(bag)) t = semijoin(t, instance.at(a.name));
    }
  }
  if (plan.full) {
    return heads.at(q.body.vars());
  }
  Table result(q.free);
  for (const auto& td : plan.tds) {
    std::vector<Table> tables(td.size());
    auto planning = td.planning_nodes();
    for (int j : planning) {
      auto it = heads.find(td.bags[j]);
      tables[j] = it == heads.end() ? Table(td.bags[j]) : it->second;
    }
    for (int j = 0; j < td.size(); ++j) {
      if (std::find(planning.begin(), planning.end(), j) != planning.end()) {
        continue;
      }
      for (int k : planning) {
        if (td.bags[j].subset_of(td.bags[k])) {
          tables[j] = project(tables[k], td.bags[j]);
          break;
        }
      }
    }
    Exec exec = config.parallel ? Exec::kParallel : Exec::kSerial;
    result = set_union(result, yannakakis(std::move(tables), td, q.free, exec));
  }
  return result;
}

Table answer_cq(const ConjunctiveQuery& q, const Instance& instance,
                const StatisticsProfile& profile, const PlannerConfig& config) {
  return execute_plan(plan_cq(q, profile, config), instance, config);
}

}  // namespace panda
