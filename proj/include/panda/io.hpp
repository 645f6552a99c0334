#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "panda/query.hpp"

namespace panda {

// A parsed rule: one head atom is a conjunctive query, two or more heads
// joined by '|' form a disjunctive rule.
struct Program {
  bool is_query = true;
  ConjunctiveQuery query;
  DisjunctiveRule rule;

  const Universe& universe() const {
    return is_query ? query.universe : rule.universe;
  }
  const Schema& body() const { return is_query ? query.body : rule.input; }

  bool operator==(const Program&) const = default;
};

Program parse_program(std::string_view text);
std::string print_program(const Program& program);

// `card R <= N` and `deg R (Y,...|X,...) <= N`, one per line.
StatisticsProfile parse_stats(std::string_view text, const Universe& universe,
                              const Schema& schema);
std::string print_stats(const StatisticsProfile& profile,
                        const Universe& universe, const Schema& schema);

// Short label of a constraint: "R" for cardinalities, "R(y|x)" otherwise.
std::string constraint_label(const DegreeConstraint& c, const Universe& u,
                             const Schema& schema);

std::string read_text_file(const std::filesystem::path& path);

// String values to dense ids, in first-seen order.
class ValueDictionary {
 public:
  Value intern(const std::string& text);
  const std::string& text(Value v) const { return texts_.at(v); }
  std::size_t size() const { return texts_.size(); }

 private:
  std::unordered_map<std::string, Value> ids_;
  std::vector<std::string> texts_;
};

struct LoadReport {
  std::map<std::string, std::size_t> rows;        // distinct rows kept
  std::map<std::string, std::size_t> duplicates;  // rows dropped
};

// Reads one CSV whose header lists the atom's variables in atom order.
Table read_relation_csv(const std::filesystem::path& path, const Atom& atom,
                        const Universe& universe, ValueDictionary& dict,
                        std::size_t* duplicates = nullptr);

// `source` is a directory holding <name>.csv per relation, or a manifest
// file with `name path` lines (paths relative to the manifest).
Instance load_relations(const std::filesystem::path& source,
                        const Schema& schema, const Universe& universe,
                        ValueDictionary& dict, LoadReport* report = nullptr);

// Throws ConstraintViolated naming the first offending relation.
void check_instance(const Instance& instance, const StatisticsProfile& profile);

// Header in `order`, rows rendered through `dict` and sorted as text.
std::string format_csv(const Table& table, const std::vector<int>& order,
                       const Universe& universe, const ValueDictionary& dict);
void write_relation_csv(const std::filesystem::path& path, const Table& table,
                        const std::vector<int>& order, const Universe& universe,
                        const ValueDictionary& dict);

}  // namespace panda
