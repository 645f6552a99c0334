#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "panda/rational.hpp"
#include "panda/relational.hpp"
#include "panda/varset.hpp"

namespace panda {

struct Atom {
  std::string name;
  VarSet vars;
  std::vector<int> order;  // variables as written, for CSV columns and printing

  bool operator==(const Atom&) const = default;
};

Atom make_atom(std::string name, std::vector<int> order);

struct Schema {
  std::vector<Atom> atoms;

  VarSet vars() const;
  const Atom* find(const std::string& name) const;
  // Throws DuplicateAtomVarSet when two atoms share a variable set.
  void validate() const;

  bool operator==(const Schema&) const = default;
};

struct ConjunctiveQuery {
  Universe universe;
  std::string head_name = "Q";
  std::vector<int> head_order;
  VarSet free;
  Schema body;

  void validate() const;
  bool operator==(const ConjunctiveQuery&) const = default;
};

struct DisjunctiveRule {
  Universe universe;
  Schema input;
  Schema output;

  void validate() const;
  bool operator==(const DisjunctiveRule&) const = default;
};

// (Y|X) ≤ bound, guarded by the named relation.
struct DegreeConstraint {
  VarSet y;
  VarSet x;
  BigInt bound;
  std::string guard;

  bool operator==(const DegreeConstraint&) const = default;
};

struct StatisticsProfile {
  std::vector<DegreeConstraint> constraints;

  // Throws UnknownRelation or NonGuardedConstraint.
  void validate(const Schema& schema) const;
  bool operator==(const StatisticsProfile&) const = default;
};

using Instance = std::map<std::string, Table>;

// Degree of (Y|X) in rel; X variables outside rel are unconstrained.
BigInt degree_of(const Table& rel, VarSet y, VarSet x);

// Degree check. A missing guard table makes the result false and fills
// `diagnostic` when given.
bool satisfies(const Instance& instance, const StatisticsProfile& profile,
               std::string* diagnostic = nullptr);

// Cardinality constraint on every atom with a common bound.
StatisticsProfile uniform_cardinalities(const Schema& schema,
                                        const BigInt& bound);

}  // namespace panda
