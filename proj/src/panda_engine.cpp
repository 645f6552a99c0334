#include "panda/panda_engine.hpp"

#include <algorithm>
#include <exception>
#include <optional>

#include "panda/errors.hpp"

namespace panda {

namespace {

Measure constraint_measure(const DegreeConstraint& c) {
  return Measure::mon(c.y, c.x - c.y);
}

bool guard_empty(const GuardedTerm& t) {
  return t.table ? t.table->empty() : t.dict.key_count() == 0;
}

GuardedTerm table_term(VarSet y, Table table, BigInt stat) {
  return {Measure::mon(y), std::make_shared<const Table>(std::move(table)), {},
          std::move(stat)};
}

// Smallest unconditional term by (W, position).
std::optional<std::size_t> pick_unconditional(const SubproblemNode& node) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < node.D.size(); ++i) {
    if (!node.D[i].delta.unconditional()) continue;
    if (!best || node.D[i].delta.y < node.D[*best].delta.y) best = i;
  }
  return best;
}

template <class Pred>
std::optional<std::size_t> smallest(const std::vector<Measure>& v, Pred pred) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (pred(v[i]) && (!best || v[i] < v[*best])) best = i;
  }
  return best;
}

// Resets away D[drop], carrying guards of survivors.
SubproblemNode reset_node(const SubproblemNode& node, std::size_t drop) {
  ResetResult r = reset(node.inequality(), static_cast<int>(drop));
  SubproblemNode child;
  child.Z = std::move(r.ineq.Z);
  child.M = std::move(r.ineq.M);
  child.S = std::move(r.ineq.S);
  child.depth = node.depth + 1;
  std::size_t k = 0;
  for (std::size_t i = 0; i < node.D.size(); ++i) {
    if (k < r.dropped_d.size() && r.dropped_d[k] == static_cast<int>(i)) {
      ++k;
      continue;
    }
    child.D.push_back(node.D[i]);
  }
  if (child.Z.empty()) {
    fail(ErrorCode::kEmptyOutputSet, "reset emptied the output multiset");
  }
  return child;
}

}  // namespace

const char* step_case_name(StepCase c) {
  switch (c) {
    case StepCase::kJoin: return "join";
    case StepCase::kJoinReset: return "reset";
    case StepCase::kProjection: return "project";
    case StepCase::kPartition: return "partition";
  }
  return "?";
}

IntegralInequality SubproblemNode::inequality() const {
  IntegralInequality out;
  out.Z = Z;
  for (const auto& t : D) out.D.push_back(t.delta);
  out.M = M;
  out.S = S;
  return out;
}

bool Budget::within(const BigInt& n) const {
  return pow(n, z0) <= product;
}

SubproblemNode make_root(const DisjunctiveRule& rule, const Instance& instance,
                         const StatisticsProfile& profile,
                         const IntegralInequality& ineq) {
  SubproblemNode root;
  root.Z = ineq.Z;
  root.M = ineq.M;
  root.S = ineq.S;
  bool origins = ineq.d_origin.size() == ineq.D.size();
  std::map<int, GuardedTerm> cache;
  for (std::size_t i = 0; i < ineq.D.size(); ++i) {
    const Measure& delta = ineq.D[i];
    int origin = -1;
    if (origins) {
      origin = ineq.d_origin[i];
    } else {
      for (std::size_t c = 0; c < profile.constraints.size(); ++c) {
        if (constraint_measure(profile.constraints[c]) == delta) {
          origin = static_cast<int>(c);
          break;
        }
      }
    }
    if (origin < 0 || origin >= static_cast<int>(profile.constraints.size()) ||
        constraint_measure(profile.constraints[origin]) != delta) {
      fail(ErrorCode::kUnguardedConstraint,
           "statistics term without a matching degree constraint: " +
               format_measure(delta, rule.universe));
    }
    auto it = cache.find(origin);
    if (it == cache.end()) {
      const DegreeConstraint& c = profile.constraints[origin];
      auto rel = instance.find(c.guard);
      if (rel == instance.end()) {
        fail(ErrorCode::kUnknownRelation, "no table for relation " + c.guard);
      }
      const Table& r = rel->second;
      if (!c.y.subset_of(r.vars())) {
        fail(ErrorCode::kUnguardedConstraint,
             "relation " + c.guard + " does not guard its constraint");
      }
      GuardedTerm term;
      if (delta.unconditional()) {
        term = table_term(delta.y, project(r, delta.y), c.bound);
      } else {
        VarSet keys = delta.x & r.vars();
        Dictionary d = construct(project(r, keys | delta.y), keys);
        d = extend(d, delta.x - keys);
        d.set_stat(c.bound);
        term = {delta, nullptr, std::move(d), c.bound};
      }
      it = cache.emplace(origin, std::move(term)).first;
    }
    root.D.push_back(it->second);
  }
  return root;
}

Budget budget_of(const SubproblemNode& root) {
  Budget b;
  b.z0 = static_cast<int>(root.Z.size());
  for (const auto& t : root.D) b.product *= t.stat;
  return b;
}

SubproblemNode preprocess(SubproblemNode root, const Budget& budget) {
  for (;;) {
    std::optional<std::size_t> over;
    for (std::size_t i = 0; i < root.D.size(); ++i) {
      const auto& t = root.D[i];
      if (!t.delta.unconditional() || budget.within(t.stat)) continue;
      if (!over || t.delta.y < root.D[*over].delta.y) over = i;
    }
    if (!over) return root;
    int depth = root.depth;
    root = reset_node(root, *over);
    root.depth = depth;
  }
}

bool is_terminal(const SubproblemNode& node) {
  for (const auto& t : node.D) {
    if (t.delta.unconditional() &&
        std::find(node.Z.begin(), node.Z.end(), t.delta.y) != node.Z.end()) {
      return true;
    }
  }
  return false;
}

std::vector<SubproblemNode> step(const SubproblemNode& node,
                                 const Budget& budget, Exec exec,
                                 WorkCounter* work, TraceLine* trace) {
  auto picked = pick_unconditional(node);
  if (!picked) {
    fail(ErrorCode::kNoApplicableCase, "no unconditional statistics term");
  }
  const GuardedTerm& dw = node.D[*picked];
  VarSet w = dw.delta.y;
  TraceLine line;
  line.depth = node.depth;
  line.delta = dw.delta;
  line.z = static_cast<int>(node.Z.size());
  line.d = static_cast<int>(node.D.size());
  line.m = static_cast<int>(node.M.size());
  line.s = static_cast<int>(node.S.size());

  auto base_child = [&](std::initializer_list<std::size_t> drop) {
    SubproblemNode c;
    c.Z = node.Z;
    c.M = node.M;
    c.S = node.S;
    c.depth = node.depth + 1;
    for (std::size_t i = 0; i < node.D.size(); ++i) {
      if (std::find(drop.begin(), drop.end(), i) == drop.end()) {
        c.D.push_back(node.D[i]);
      }
    }
    return c;
  };

  std::vector<SubproblemNode> children;
  // Case 1: (Y|W) ∈ 𝒟.
  std::optional<std::size_t> partner;
  for (std::size_t i = 0; i < node.D.size(); ++i) {
    const Measure& m = node.D[i].delta;
    if (m.x == w && (!partner || m < node.D[*partner].delta)) partner = i;
  }
  if (partner) {
    const GuardedTerm& dy = node.D[*partner];
    BigInt joined_stat = dw.stat * dy.stat;
    VarSet yw = w | dy.delta.y;
    if (budget.within(joined_stat)) {
      line.kind = StepCase::kJoin;
      Table joined = join(*dw.table, dy.dict, exec, work);
      joined.set_stat(joined_stat);
      SubproblemNode c = base_child({*picked, *partner});
      c.D.push_back(table_term(yw, std::move(joined), joined_stat));
      children.push_back(std::move(c));
    } else {
      line.kind = StepCase::kJoinReset;
      line.budget_ok = false;
      SubproblemNode bar = base_child({*picked, *partner});
      bar.depth = node.depth;
      bar.D.push_back({Measure::mon(yw), nullptr, {}, joined_stat});
      children.push_back(reset_node(bar, bar.D.size() - 1));
    }
  } else if (auto mu = smallest(node.M, [&](const Measure& m) {
               return (m.x | m.y) == w;
             })) {
    // Case 2: (Y|X) ∈ ℳ with XY = W.
    line.kind = StepCase::kProjection;
    VarSet x = node.M[*mu].x;
    SubproblemNode c = base_child({*picked});
    c.M.erase(c.M.begin() + *mu);
    if (!x.empty()) {
      Table proj = project(*dw.table, x, exec, work);
      c.D.push_back(table_term(x, std::move(proj), dw.stat));
    }
    children.push_back(std::move(c));
  } else if (auto sg = smallest(node.S, [&](const Measure& m) {
               return (m.x | m.y) == w || (m.x | m.z) == w;
             })) {
    // Case 3: (Y;Z|X) ∈ 𝒮 with XY = W.
    line.kind = StepCase::kPartition;
    Measure sigma = node.S[*sg];
    if ((sigma.x | sigma.y) != w) std::swap(sigma.y, sigma.z);
    const Table& tw = *dw.table;
    if (work) work->add(tw.size());
    for (Table& part : partition(tw, sigma.x)) {
      SubproblemNode c = base_child({*picked});
      c.S.erase(c.S.begin() + *sg);
      Dictionary dict = construct(part, sigma.x);
      BigInt deg = static_cast<unsigned long>(dict.max_degree());
      dict.set_stat(deg);
      if (!sigma.x.empty()) {
        Table px = project(part, sigma.x);
        BigInt nx = static_cast<unsigned long>(px.size());
        px.set_stat(nx);
        c.D.push_back(table_term(sigma.x, std::move(px), nx));
      }
      c.D.push_back({Measure::mon(sigma.y, sigma.x | sigma.z), nullptr,
                     extend(dict, sigma.z), deg});
      children.push_back(std::move(c));
    }
  } else {
    fail(ErrorCode::kNoApplicableCase,
         "statistics term cancels with nothing; witness is corrupt");
  }
  line.children = static_cast<int>(children.size());
  if (trace) *trace = line;
  return children;
}

Model gather(const std::vector<SubproblemNode>& leaves,
             const DisjunctiveRule& rule) {
  Model model;
  for (const auto& a : rule.output.atoms) {
    Table empty(a.vars);
    model.emplace(a.name, std::move(empty));
  }
  for (const auto& leaf : leaves) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < leaf.D.size(); ++i) {
      const auto& t = leaf.D[i];
      if (!t.delta.unconditional()) continue;
      if (std::find(leaf.Z.begin(), leaf.Z.end(), t.delta.y) == leaf.Z.end()) {
        continue;
      }
      if (!best || t.delta.y < leaf.D[*best].delta.y) best = i;
    }
    if (!best) fail(ErrorCode::kNonTerminalLeaf, "gather on a non-terminal leaf");
    const GuardedTerm& t = leaf.D[*best];
    const Atom* target = nullptr;
    for (const auto& a : rule.output.atoms) {
      if (a.vars == t.delta.y) {
        target = &a;
        break;
      }
    }
    if (!target) {
      fail(ErrorCode::kNonTerminalLeaf, "leaf output matches no head atom");
    }
    Table& acc = model[target->name];
    acc = set_union(acc, *t.table);
  }
  return model;
}

std::vector<std::string> check_invariants(const SubproblemNode& node,
                                          const Budget& budget) {
  std::vector<std::string> bad;
  if (!verify_identity(node.inequality())) bad.push_back("shannon-identity");
  if (node.Z.empty()) bad.push_back("non-empty-output");
  BigInt product = 1;
  for (const auto& t : node.D) {
    product *= t.stat;
    if (t.delta.unconditional() && !budget.within(t.stat)) {
      bad.push_back("small-tables");
    }
    bool guarded = t.table ? BigInt(static_cast<unsigned long>(t.table->size())) <= t.stat
                           : BigInt(static_cast<unsigned long>(t.dict.max_degree())) <= t.stat;
    if (!guarded) bad.push_back("guarded-statistics");
  }
  if (pow(product, budget.z0) > pow(budget.product, node.Z.size())) {
    bad.push_back("upper-bound");
  }
  return bad;
}

Model run_panda(const DisjunctiveRule& rule, const Instance& instance,
                const StatisticsProfile& profile,
                const IntegralInequality& ineq, const PandaConfig& config,
                PandaStats* stats) {
  rule.validate();
  PandaStats local;
  PandaStats& st = stats ? *stats : local;
  st = PandaStats();
  if (!verify_identity(ineq)) {
    fail(ErrorCode::kInvalidWitness, "witness fails the symbolic identity");
  }
  std::string why;
  if (!satisfies(instance, profile, &why)) {
    fail(ErrorCode::kConstraintViolated, why);
  }
  bool any_empty = false;
  for (const auto& a : rule.input.atoms) {
    auto it = instance.find(a.name);
    if (it == instance.end()) {
      fail(ErrorCode::kUnknownRelation, "no table for relation " + a.name);
    }
    st.input_size += it->second.size();
    any_empty = any_empty || it->second.empty();
  }
  if (any_empty) return gather({}, rule);

  SubproblemNode root = make_root(rule, instance, profile, ineq);
  st.budget = budget_of(root);
  st.work = st.input_size;
  root = preprocess(std::move(root), st.budget);

  std::vector<SubproblemNode> leaves;
  auto visit = [&](SubproblemNode& node, std::vector<SubproblemNode>& out,
                   WorkCounter& wc, std::optional<TraceLine>& line,
                   bool& pruned, bool& leaf) {
    if (config.check) {
      auto bad = check_invariants(node, st.budget);
      if (!bad.empty()) {
        fail(ErrorCode::kPreconditionViolated, "invariant violated: " + bad[0]);
      }
    }
    for (const auto& t : node.D) {
      if (guard_empty(t)) {
        pruned = true;
        return;
      }
    }
    if (is_terminal(node)) {
      leaf = true;
      return;
    }
    TraceLine tl;
    out = step(node, st.budget, Exec::kSerial, &wc, &tl);
    if (config.trace) line = tl;
  };

  auto account = [&](const SubproblemNode& node, const WorkCounter& wc) {
    ++st.nodes;
    st.work += wc.touches;
    st.max_node_work = std::max<std::uint64_t>(st.max_node_work, wc.touches);
    st.max_depth = std::max(st.max_depth, node.depth);
  };

  if (!config.parallel) {
    std::vector<SubproblemNode> stack;
    stack.push_back(std::move(root));
    while (!stack.empty()) {
      SubproblemNode node = std::move(stack.back());
      stack.pop_back();
      std::vector<SubproblemNode> kids;
      WorkCounter wc;
      std::optional<TraceLine> line;
      bool pruned = false, leaf = false;
      visit(node, kids, wc, line, pruned, leaf);
      account(node, wc);
      if (line) st.trace.push_back(*line);
      if (pruned) {
        ++st.pruned;
      } else if (leaf) {
        leaves.push_back(std::move(node));
      }
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
        stack.push_back(std::move(*it));
      }
    }
  } else {
    std::vector<SubproblemNode> frontier;
    frontier.push_back(std::move(root));
    while (!frontier.empty()) {
      std::size_t n = frontier.size();
      std::vector<std::vector<SubproblemNode>> kids(n);
      std::vector<WorkCounter> wcs(n);
      std::vector<std::optional<TraceLine>> lines(n);
      std::vector<char> pruned(n, 0), leaf(n, 0);
      std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
      for (std::size_t i = 0; i < n; ++i) {
        try {
          bool p = false, l = false;
          visit(frontier[i], kids[i], wcs[i], lines[i], p, l);
          pruned[i] = p;
          leaf[i] = l;
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
      }
      std::vector<SubproblemNode> next;
      for (std::size_t i = 0; i < n; ++i) {
        account(frontier[i], wcs[i]);
        if (lines[i]) st.trace.push_back(*lines[i]);
        if (pruned[i]) {
          ++st.pruned;
        } else if (leaf[i]) {
          leaves.push_back(std::move(frontier[i]));
        }
        for (auto& k : kids[i]) next.push_back(std::move(k));
      }
      frontier = std::move(next);
    }
  }
  st.leaves = static_cast<int>(leaves.size());
  return gather(leaves, rule);
}

}  // namespace panda
