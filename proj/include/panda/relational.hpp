#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "panda/rational.hpp"
#include "panda/varset.hpp"

namespace panda {

using Value = std::uint32_t;

enum class Exec { kSerial, kParallel };

// Set of tuples over `vars`. Columns follow ascending variable index; rows are
// stored flat, sorted lexicographically and duplicate-free.
class Table {
 public:
  Table() = default;
  explicit Table(VarSet vars) : vars_(vars) {}
  // Sorts and deduplicates `flat_rows`. For arity 0 the row count is
  // min(nullary_rows, 1).
  Table(VarSet vars, std::vector<Value> flat_rows, BigInt stat,
        std::size_t nullary_rows = 0);
  // Builds from rows listed as variable-index-ordered tuples.
  static Table from_rows(VarSet vars,
                         const std::vector<std::vector<Value>>& rows);

  VarSet vars() const { return vars_; }
  int arity() const { return vars_.size(); }
  std::size_t size() const {
    return arity() == 0 ? nullary_size_ : rows_.size() / arity();
  }
  bool empty() const { return size() == 0; }
  std::span<const Value> row(std::size_t i) const {
    return {rows_.data() + i * arity(), static_cast<std::size_t>(arity())};
  }
  const std::vector<Value>& flat() const { return rows_; }
  std::vector<std::vector<Value>> rows() const;
  bool contains(std::span<const Value> tuple) const;

  const BigInt& stat() const { return stat_; }
  void set_stat(BigInt stat) { stat_ = std::move(stat); }

  // Column holding `var`.
  int column_of(int var) const { return vars_.rank_of(var); }

  bool same_rows(const Table& other) const {
    return vars_ == other.vars_ && rows_ == other.rows_ &&
           size() == other.size();
  }

 private:
  void normalize();

  VarSet vars_;
  std::vector<Value> rows_;
  std::size_t nullary_size_ = 0;  // 0 or 1 rows when arity is 0
  BigInt stat_ = 0;
};

// Index over a table from X-bindings to Y-tuples. Phantom keys extend the
// dictionary: their coordinates are accepted by lookup and ignored.
class Dictionary {
 public:
  Dictionary() = default;

  VarSet key_vars() const { return key_vars_; }
  VarSet value_vars() const { return value_vars_; }
  VarSet phantom_keys() const { return phantom_; }
  VarSet effective_keys() const { return key_vars_ | phantom_; }
  const BigInt& stat() const { return stat_; }
  void set_stat(BigInt stat) { stat_ = std::move(stat); }

  struct Matches {
    std::span<const Value> values;  // Y-tuples, flat
    std::size_t count = 0;
  };
  // Y-tuples for a binding of X (or of X and the phantom keys, in variable
  // order; phantom coordinates are ignored). None if unmapped.
  Matches lookup(std::span<const Value> key) const;
  std::size_t key_count() const;
  // Largest number of Y-tuples behind a single key.
  std::size_t max_degree() const;
  // Materializes the indexed X∪Y relation.
  Table to_table() const;

  // Identity of the shared index; extension preserves it.
  const void* index_identity() const { return index_.get(); }

  friend Dictionary construct(const Table& t, VarSet keys);
  friend Dictionary extend(const Dictionary& d, VarSet extra);

 private:
  struct KeyRef {
    const Value* data;
    std::uint32_t len;
  };
  struct KeyHash {
    std::size_t operator()(const KeyRef& k) const noexcept;
  };
  struct KeyEq {
    bool operator()(const KeyRef& a, const KeyRef& b) const noexcept;
  };
  struct Index {
    std::vector<Value> keys;                   // distinct keys, flat
    std::vector<std::size_t> offsets;          // value row ranges per key
    std::vector<std::size_t> counts;
    std::vector<Value> values;                 // Y-tuples, flat
    std::unordered_map<KeyRef, std::uint32_t, KeyHash, KeyEq> slots;
    std::size_t max_degree = 0;
  };

  VarSet key_vars_;
  VarSet value_vars_;
  VarSet phantom_;
  BigInt stat_ = 0;
  std::shared_ptr<const Index> index_;
};

// Tuple-touch accounting shared by the kernels.
struct WorkCounter {
  std::uint64_t touches = 0;
  void add(std::uint64_t n) { touches += n; }
};

// T ⋈ D with D's effective keys inside t.vars. Output stat = t.stat · d.stat.
Table join(const Table& t, const Dictionary& d, Exec exec = Exec::kSerial,
           WorkCounter* work = nullptr);
// Duplicate-free projection onto `onto`; keeps t.stat.
Table project(const Table& t, VarSet onto, Exec exec = Exec::kSerial,
              WorkCounter* work = nullptr);
// Zero-copy extension by phantom keys `extra`.
Dictionary extend(const Dictionary& d, VarSet extra);
// Index keyed on `keys` with values over t.vars − keys; stat = measured degree.
Dictionary construct(const Table& t, VarSet keys);
// Degree-uniform split of t on `keys`. Each part P satisfies
// |π_keys(P)| · deg_P(rest|keys) ≤ |t|. Part stats are left at |P|.
std::vector<Table> partition(const Table& t, VarSet keys);
// Rows of t agreeing with some filter row on the shared variables.
Table semijoin(const Table& t, const Table& filter, Exec exec = Exec::kSerial,
               WorkCounter* work = nullptr);
// Set union; stat = a.stat + b.stat.
Table set_union(const Table& a, const Table& b);
// General natural join of two tables (hash join on shared variables).
Table natural_join(const Table& a, const Table& b, Exec exec = Exec::kSerial,
                   WorkCounter* work = nullptr);

// Max over X-bindings of the number of distinct Y-bindings, counting only
// columns of t. Y must lie inside t.vars unless t is empty.
BigInt degree_in(const Table& t, VarSet y, VarSet x);

}  // namespace panda
