#include "panda/query.hpp"

#include "panda/errors.hpp"

namespace panda {

Atom make_atom(std::string name, std::vector<int> order) {
  Atom a{std::move(name), {}, std::move(order)};
  for (int v : a.order) {
    if (a.vars.contains(v)) {
      fail(ErrorCode::kParseError,
           "variable repeated in atom " + a.name);
    }
    a.vars |= VarSet::singleton(v);
  }
  return a;
}

VarSet Schema::vars() const {
  VarSet out;
  for (const auto& a : atoms) out |= a.vars;
  return out;
}

const Atom* Schema::find(const std::string& name) const {
  for (const auto& a : atoms) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

void Schema::validate() const {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (atoms[i].vars == atoms[j].vars) {
        fail(ErrorCode::kDuplicateAtomVarSet,
             "atoms " + atoms[i].name + " and " + atoms[j].name +
                 " have the same variables; intersect them first");
      }
    }
  }
}

void ConjunctiveQuery::validate() const {
  body.validate();
  if (!free.subset_of(body.vars())) {
    fail(ErrorCode::kHeadVarNotInBody,
         "head variable not in body: " + universe.format(free - body.vars()));
  }
}

void DisjunctiveRule::validate() const {
  input.validate();
  if (output.atoms.empty()) {
    fail(ErrorCode::kEmptyOutputSet, "rule has no output atoms");
  }
  for (const auto& a : output.atoms) {
    if (!a.vars.subset_of(input.vars())) {
      fail(ErrorCode::kHeadVarNotInBody,
           "head atom " + a.name + " uses variables not in the body");
    }
  }
}

void StatisticsProfile::validate(const Schema& schema) const {
  for (const auto& c : constraints) {
    const Atom* g = schema.find(c.guard);
    if (!g) fail(ErrorCode::kUnknownRelation, "unknown relation " + c.guard);
    if (!c.y.subset_of(g->vars)) {
      fail(ErrorCode::kNonGuardedConstraint,
           "constraint target not inside relation " + c.guard);
    }
    if (!c.x.disjoint(c.y) || c.y.empty()) {
      fail(ErrorCode::kNonGuardedConstraint,
           "malformed degree constraint on " + c.guard);
    }
  }
}

BigInt degree_of(const Table& rel, VarSet y, VarSet x) {
  return degree_in(rel, y, x);
}

bool satisfies(const Instance& instance, const StatisticsProfile& profile,
               std::string* diagnostic) {
  for (const auto& c : profile.constraints) {
    auto it = instance.find(c.guard);
    if (it == instance.end()) {
      if (diagnostic) *diagnostic = "no table for relation " + c.guard;
      return false;
    }
    std::optional<BigInt> best;
    for (const auto& [name, rel] : instance) {
      if (!rel.empty() && !c.y.subset_of(rel.vars())) continue;
      BigInt d = degree_of(rel, c.y, c.x);
      if (!best || d < *best) best = d;
    }
    if (!best || *best > c.bound) {
      if (diagnostic) {
        *diagnostic = "relation " + c.guard + " violates a declared bound";
      }
      return false;
    }
  }
  return true;
}

StatisticsProfile uniform_cardinalities(const Schema& schema,
                                        const BigInt& bound) {
  StatisticsProfile p;
  for (const auto& a : schema.atoms) {
    p.constraints.push_back({a.vars, VarSet(), bound, a.name});
  }
  return p;
}

}  // namespace panda
