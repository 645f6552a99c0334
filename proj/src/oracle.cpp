#include "panda/oracle.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "panda/errors.hpp"
#include "panda/simplex.hpp"

namespace panda {

namespace {

struct Backtrack {
  const std::vector<const Table*>& tables;
  std::vector<Value> binding;
  std::vector<bool> bound;
  VarSet all;
  std::vector<Value> out;
  std::size_t count = 0;

  void run(std::size_t i) {
    if (i == tables.size()) {
      if (++count > kOracleTupleCap) {
        fail(ErrorCode::kOracleCapExceeded, "oracle join exceeds tuple cap");
      }
      for (int v : all.members()) out.push_back(binding[v]);
      return;
    }
    const Table& t = *tables[i];
    auto vars = t.vars().members();
    for (std::size_t r = 0; r < t.size(); ++r) {
      auto row = t.row(r);
      bool ok = true;
      for (std::size_t c = 0; c < vars.size() && ok; ++c) {
        ok = !bound[vars[c]] || binding[vars[c]] == row[c];
      }
      if (!ok) continue;
      std::vector<int> fresh;
      for (std::size_t c = 0; c < vars.size(); ++c) {
        if (!bound[vars[c]]) {
          bound[vars[c]] = true;
          binding[vars[c]] = row[c];
          fresh.push_back(vars[c]);
        }
      }
      run(i + 1);
      for (int v : fresh) bound[v] = false;
    }
  }
};

std::vector<Value> project_row(const Table& t, std::size_t r, VarSet onto) {
  std::vector<Value> out;
  auto row = t.row(r);
  for (int v : onto.members()) out.push_back(row[t.column_of(v)]);
  return out;
}

}  // namespace

Table naive_full_join(const Schema& schema, const Instance& instance) {
  // Visit atoms so that each shares variables with earlier ones if possible.
  std::vector<const Table*> order;
  std::vector<bool> used(schema.atoms.size(), false);
  VarSet seen;
  for (std::size_t k = 0; k < schema.atoms.size(); ++k) {
    std::size_t pick = schema.atoms.size();
    for (std::size_t i = 0; i < schema.atoms.size(); ++i) {
      if (used[i]) continue;
      if (pick == schema.atoms.size()) pick = i;
      if (!(schema.atoms[i].vars & seen).empty()) {
        pick = i;
        break;
      }
    }
    used[pick] = true;
    seen |= schema.atoms[pick].vars;
    auto it = instance.find(schema.atoms[pick].name);
    if (it == instance.end()) {
      fail(ErrorCode::kUnknownRelation,
           "no table for relation " + schema.atoms[pick].name);
    }
    order.push_back(&it->second);
  }
  Backtrack bt{order, std::vector<Value>(kMaxVariables),
               std::vector<bool>(kMaxVariables), seen, {}, 0};
  bt.run(0);
  std::size_t n = bt.count;
  return Table(seen, std::move(bt.out), static_cast<unsigned long>(n), n);
}

bool verify_model(const Instance& instance, const DisjunctiveRule& rule,
                  const Model& model) {
  Table full = naive_full_join(rule.input, instance);
  for (std::size_t r = 0; r < full.size(); ++r) {
    bool covered = false;
    for (const auto& a : rule.output.atoms) {
      auto it = model.find(a.name);
      if (it == model.end() || it->second.vars() != a.vars) continue;
      if (it->second.contains(project_row(full, r, a.vars))) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

Table naive_cq(const ConjunctiveQuery& q, const Instance& instance) {
  Table full = naive_full_join(q.body, instance);
  std::vector<Value> flat;
  for (std::size_t r = 0; r < full.size(); ++r) {
    auto row = project_row(full, r, q.free);
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Table(q.free, std::move(flat), 0, full.size());
}

bool check_shannon_direct(const LinExpr& a, int n) {
  if (n > kOracleMaxVariables) {
    fail(ErrorCode::kUniverseTooLarge, "oracle supports at most 6 variables");
  }
  // Variables h(X) for nonempty X at index bits − 1; x ≥ 0 is implicit.
  LpProblem lp;
  lp.num_vars = (1 << n) - 1;
  for (const auto& mu : elemental_measures(n)) {
    LinExpr e;
    e.add(mu, 1);
    std::vector<std::pair<int, Rational>> row;
    for (const auto& [s, c] : e.terms()) {
      row.push_back({static_cast<int>(s.bits()) - 1, c});
    }
    lp.add_row(std::move(row), Sense::kGe, 0);
  }
  std::vector<Rational> cost(lp.num_vars);
  for (const auto& [s, c] : a.terms()) {
    if (!s.subset_of(VarSet::first_n(n))) return false;
    cost[s.bits() - 1] = c;
  }
  auto sol = solve_lp_exact(lp, cost);
  return sol.status == LpStatus::kOptimal && sol.objective == 0;
}

Instance random_instance(const Schema& schema, const GeneratorConfig& config) {
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<Value> value(0, config.domain - 1);
  std::bernoulli_distribution heavy(config.skew);
  Instance out;
  for (const auto& a : schema.atoms) {
    int arity = a.vars.size();
    std::set<std::vector<Value>> rows;
    // Distinct rows up to the requested count, with bounded retries.
    for (std::size_t attempt = 0;
         rows.size() < config.tuples && attempt < 50 * config.tuples + 50;
         ++attempt) {
      // Columns follow atom order; the heavy value goes to the first one.
      std::vector<Value> tuple(arity);
      for (int c = 0; c < arity; ++c) tuple[c] = value(rng);
      if (arity > 0 && heavy(rng)) tuple[0] = 0;
      std::vector<Value> row(arity);
      for (int c = 0; c < arity; ++c) row[a.vars.rank_of(a.order[c])] = tuple[c];
      rows.insert(std::move(row));
    }
    std::vector<Value> flat;
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    Table t(a.vars, std::move(flat), 0, rows.size());
    t.set_stat(static_cast<unsigned long>(t.size()));
    out.emplace(a.name, std::move(t));
  }
  return out;
}

Instance restrict_to_profile(Instance instance,
                             const StatisticsProfile& profile) {
  for (const auto& c : profile.constraints) {
    auto it = instance.find(c.guard);
    if (it == instance.end()) continue;
    Table& t = it->second;
    VarSet x = (c.x & t.vars()) - c.y;
    std::map<std::vector<Value>, std::set<std::vector<Value>>> seen;
    std::vector<Value> flat;
    for (std::size_t r = 0; r < t.size(); ++r) {
      auto key = project_row(t, r, x);
      auto val = project_row(t, r, c.y);
      auto& ys = seen[key];
      if (!ys.count(val)) {
        if (BigInt(static_cast<unsigned long>(ys.size())) >= c.bound) continue;
        ys.insert(val);
      }
      auto row = t.row(r);
      flat.insert(flat.end(), row.begin(), row.end());
    }
    std::size_t rows = flat.size() / std::max(t.arity(), 1);
    Table kept(t.vars(), std::move(flat), 0, rows);
    kept.set_stat(static_cast<unsigned long>(kept.size()));
    t = std::move(kept);
  }
  return instance;
}

}  // namespace panda
