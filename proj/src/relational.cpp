#include "panda/relational.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <numeric>

#include <omp.h>

#include "panda/errors.hpp"

namespace panda {

namespace {

bool row_less(const Value* a, const Value* b, int arity) {
  for (int i = 0; i < arity; ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

std::size_t hash_values(const Value* data, std::size_t len) {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ len;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= data[i] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

// Column positions of `sub` inside a row over `vars`.
std::vector<int> columns_of(VarSet vars, VarSet sub) {
  std::vector<int> cols;
  for (int v : sub.members()) cols.push_back(vars.rank_of(v));
  return cols;
}

// Hash set over fixed-arity tuples stored in an external flat buffer.
class RowSet {
 public:
  RowSet(const std::vector<Value>& flat, int arity, std::size_t count)
      : flat_(flat), arity_(arity) {
    slots_.assign(std::bit_ceil(std::max<std::size_t>(count * 2, 2)), kEmpty);
    for (std::size_t i = 0; i < count; ++i) insert(i);
  }

  bool contains(const Value* tuple) const {
    std::size_t mask = slots_.size() - 1;
    for (std::size_t s = hash_values(tuple, arity_) & mask;; s = (s + 1) & mask) {
      if (slots_[s] == kEmpty) return false;
      if (std::equal(tuple, tuple + arity_, flat_.data() + slots_[s] * arity_)) {
        return true;
      }
    }
  }

 private:
  static constexpr std::size_t kEmpty = ~std::size_t{0};

  void insert(std::size_t row) {
    const Value* t = flat_.data() + row * arity_;
    std::size_t mask = slots_.size() - 1;
    for (std::size_t s = hash_values(t, arity_) & mask;; s = (s + 1) & mask) {
      if (slots_[s] == kEmpty) {
        slots_[s] = row;
        return;
      }
      if (std::equal(t, t + arity_, flat_.data() + slots_[s] * arity_)) return;
    }
  }

  const std::vector<Value>& flat_;
  int arity_;
  std::vector<std::size_t> slots_;
};

// Runs body(begin, end, out) over row ranges, serially or one range per
// thread, and concatenates the per-range outputs in range order.
template <class Body>
std::vector<Value> map_rows(std::size_t n, Exec exec, Body body) {
  if (exec == Exec::kSerial || n < 2048) {
    std::vector<Value> out;
    body(0, n, out);
    return out;
  }
  int threads = omp_get_max_threads();
  std::vector<std::vector<Value>> parts(threads);
#pragma omp parallel num_threads(threads)
  {
    int id = omp_get_thread_num();
    int nt = omp_get_num_threads();
    std::size_t begin = n * id / nt;
    std::size_t end = n * (id + 1) / nt;
    body(begin, end, parts[id]);
  }
  std::size_t total = 0;
  for (auto& p : parts) total += p.size();
  std::vector<Value> out;
  out.reserve(total);
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

Table::Table(VarSet vars, std::vector<Value> flat_rows, BigInt stat,
             std::size_t nullary_rows)
    : vars_(vars),
      rows_(std::move(flat_rows)),
      nullary_size_(std::min<std::size_t>(nullary_rows, 1)),
      stat_(std::move(stat)) {
  normalize();
}

Table Table::from_rows(VarSet vars,
                       const std::vector<std::vector<Value>>& rows) {
  std::vector<Value> flat;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != vars.size()) {
      fail(ErrorCode::kSchemaMismatch, "row arity does not match table");
    }
    flat.insert(flat.end(), r.begin(), r.end());
  }
  Table t(vars, std::move(flat), 0, rows.size());
  t.stat_ = static_cast<unsigned long>(t.size());
  return t;
}

void Table::normalize() {
  int a = arity();
  if (a == 0) {
    rows_.clear();
    return;
  }
  std::size_t n = rows_.size() / a;
  if (a == 1) {
    std::sort(rows_.begin(), rows_.end());
    rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
    return;
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const Value* base = rows_.data();
  bool sorted = true;
  for (std::size_t i = 1; i < n && sorted; ++i) {
    sorted = row_less(base + (i - 1) * a, base + i * a, a);
  }
  if (sorted) return;
  std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
    return row_less(base + x * a, base + y * a, a);
  });
  std::vector<Value> out;
  out.reserve(rows_.size());
  const Value* prev = nullptr;
  for (std::size_t p : perm) {
    const Value* r = base + p * a;
    if (prev && std::equal(r, r + a, prev)) continue;
    out.insert(out.end(), r, r + a);
    prev = r;
  }
  rows_ = std::move(out);
}

std::vector<std::vector<Value>> Table::rows() const {
  std::vector<std::vector<Value>> out;
  for (std::size_t i = 0; i < size(); ++i) {
    auto r = row(i);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

bool Table::contains(std::span<const Value> tuple) const {
  int a = arity();
  if (a == 0) return !empty();
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (row_less(rows_.data() + mid * a, tuple.data(), a)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo < size() && std::equal(tuple.begin(), tuple.end(), row(lo).begin());
}

std::size_t Dictionary::KeyHash::operator()(const KeyRef& k) const noexcept {
  return hash_values(k.data, k.len);
}

bool Dictionary::KeyEq::operator()(const KeyRef& a,
                                   const KeyRef& b) const noexcept {
  return a.len == b.len && std::equal(a.data, a.data + a.len, b.data);
}

Dictionary::Matches Dictionary::lookup(std::span<const Value> key) const {
  if (!index_) return {};
  std::array<Value, kMaxVariables> own;
  VarSet eff = effective_keys();
  if (!phantom_.empty() && static_cast<int>(key.size()) == eff.size()) {
    // Full key over X and the phantoms; keep the X coordinates.
    int k = 0;
    for (int v : key_vars_.members()) own[k++] = key[eff.rank_of(v)];
    key = {own.data(), static_cast<std::size_t>(k)};
  }
  KeyRef ref{key.data(), static_cast<std::uint32_t>(key.size())};
  auto it = index_->slots.find(ref);
  if (it == index_->slots.end()) return {};
  std::size_t slot = it->second;
  std::size_t begin = index_->offsets[slot];
  std::size_t end = index_->offsets[slot + 1];
  return {{index_->values.data() + begin, end - begin}, index_->counts[slot]};
}

std::size_t Dictionary::key_count() const {
  return index_ ? index_->counts.size() : 0;
}

std::size_t Dictionary::max_degree() const {
  return index_ ? index_->max_degree : 0;
}

Table Dictionary::to_table() const {
  VarSet vars = key_vars_ | value_vars_;
  std::vector<Value> flat;
  std::size_t rows = 0;
  if (index_) {
    int kx = key_vars_.size();
    int ky = value_vars_.size();
    auto kcols = columns_of(vars, key_vars_);
    auto ycols = columns_of(vars, value_vars_);
    std::vector<Value> buf(vars.size());
    for (std::size_t s = 0; s < index_->counts.size(); ++s) {
      const Value* key = index_->keys.data() + s * kx;
      for (std::size_t j = 0; j < index_->counts[s]; ++j) {
        const Value* y = index_->values.data() + index_->offsets[s] + j * ky;
        for (int c = 0; c < kx; ++c) buf[kcols[c]] = key[c];
        for (int c = 0; c < ky; ++c) buf[ycols[c]] = y[c];
        flat.insert(flat.end(), buf.begin(), buf.end());
        ++rows;
      }
    }
  }
  return Table(vars, std::move(flat), stat_, rows);
}

Dictionary construct(const Table& t, VarSet keys) {
  if (!keys.subset_of(t.vars())) {
    fail(ErrorCode::kSchemaMismatch, "dictionary keys outside table");
  }
  Dictionary d;
  d.key_vars_ = keys;
  d.value_vars_ = t.vars() - keys;
  auto index = std::make_shared<Dictionary::Index>();
  int a = t.arity();
  int kx = keys.size();
  int ky = a - kx;
  auto kcols = columns_of(t.vars(), keys);
  auto ycols = columns_of(t.vars(), d.value_vars_);
  std::size_t n = t.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  auto key_less = [&](std::size_t x, std::size_t y) {
    auto rx = t.row(x), ry = t.row(y);
    for (int c : kcols) {
      if (rx[c] != ry[c]) return rx[c] < ry[c];
    }
    return false;
  };
  // Rows are sorted, so a stable sort by key keeps values sorted per key.
  std::stable_sort(perm.begin(), perm.end(), key_less);
  index->offsets.push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = t.row(perm[i]);
    bool new_key = i == 0 || key_less(perm[i - 1], perm[i]);
    if (new_key) {
      if (i > 0) index->offsets.push_back(index->values.size());
      for (int c : kcols) index->keys.push_back(r[c]);
      index->counts.push_back(0);
    }
    for (int c : ycols) index->values.push_back(r[c]);
    ++index->counts.back();
  }
  if (n > 0) index->offsets.push_back(index->values.size());
  index->slots.reserve(index->counts.size());
  for (std::size_t s = 0; s < index->counts.size(); ++s) {
    index->slots.emplace(
        Dictionary::KeyRef{index->keys.data() + s * kx,
                           static_cast<std::uint32_t>(kx)},
        static_cast<std::uint32_t>(s));
    index->max_degree = std::max(index->max_degree, index->counts[s]);
  }
  (void)ky;
  d.stat_ = static_cast<unsigned long>(index->max_degree);
  d.index_ = std::move(index);
  return d;
}

Dictionary extend(const Dictionary& d, VarSet extra) {
  if (!extra.disjoint(d.key_vars_ | d.value_vars_)) {
    fail(ErrorCode::kSchemaMismatch, "extension overlaps dictionary vars");
  }
  Dictionary out = d;
  out.phantom_ |= extra;
  return out;
}

Table join(const Table& t, const Dictionary& d, Exec exec, WorkCounter* work) {
  if (!d.effective_keys().subset_of(t.vars()) ||
      !d.value_vars().disjoint(t.vars())) {
    fail(ErrorCode::kSchemaMismatch, "join schema mismatch");
  }
  VarSet out_vars = t.vars() | d.value_vars();
  int a = t.arity();
  int out_a = out_vars.size();
  auto kcols = columns_of(t.vars(), d.key_vars());
  // For each output column: source index into the t-row (>= 0) or into the
  // y-tuple (encoded as -1 - pos).
  std::vector<int> source;
  for (int v : out_vars.members()) {
    source.push_back(t.vars().contains(v) ? t.column_of(v)
                                          : -1 - d.value_vars().rank_of(v));
  }
  int ky = d.value_vars().size();
  std::size_t emitted_total = 0;
  auto body = [&](std::size_t begin, std::size_t end, std::vector<Value>& out) {
    std::vector<Value> key(kcols.size());
    std::size_t emitted = 0;
    for (std::size_t i = begin; i < end; ++i) {
      auto r = t.row(i);
      for (std::size_t c = 0; c < kcols.size(); ++c) key[c] = r[kcols[c]];
      auto m = d.lookup(key);
      for (std::size_t j = 0; j < m.count; ++j) {
        const Value* y = m.values.data() + j * ky;
        for (int s : source) out.push_back(s >= 0 ? r[s] : y[-1 - s]);
        ++emitted;
      }
    }
    if (out_a == 0 && emitted > 0) out.push_back(0);  // marker for nullary
#pragma omp atomic
    emitted_total += emitted;
  };
  auto flat = map_rows(t.size(), exec, body);
  std::size_t nullary = 0;
  if (out_a == 0) {
    nullary = flat.empty() ? 0 : 1;
    flat.clear();
  }
  if (work) work->add(std::max<std::uint64_t>(t.size(), emitted_total));
  (void)a;
  return Table(out_vars, std::move(flat), t.stat() * d.stat(), nullary);
}

Table project(const Table& t, VarSet onto, Exec exec, WorkCounter* work) {
  if (!onto.subset_of(t.vars())) {
    fail(ErrorCode::kSchemaMismatch, "projection outside table");
  }
  if (work) work->add(t.size());
  if (onto == t.vars()) return t;
  auto cols = columns_of(t.vars(), onto);
  auto body = [&](std::size_t begin, std::size_t end, std::vector<Value>& out) {
    for (std::size_t i = begin; i < end; ++i) {
      auto r = t.row(i);
      for (int c : cols) out.push_back(r[c]);
    }
  };
  auto flat = map_rows(t.size(), exec, body);
  return Table(onto, std::move(flat), t.stat(), t.empty() ? 0 : 1);
}

std::vector<Table> partition(const Table& t, VarSet keys) {
  if (!keys.subset_of(t.vars())) {
    fail(ErrorCode::kSchemaMismatch, "partition keys outside table");
  }
  if (t.empty()) fail(ErrorCode::kEmptyInput, "partition of an empty table");
  auto kcols = columns_of(t.vars(), keys);
  std::size_t n = t.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  auto key_less = [&](std::size_t x, std::size_t y) {
    auto rx = t.row(x), ry = t.row(y);
    for (int c : kcols) {
      if (rx[c] != ry[c]) return rx[c] < ry[c];
    }
    return false;
  };
  std::stable_sort(perm.begin(), perm.end(), key_less);
  // Groups of equal keys: [begin, end) into perm, in ascending key order.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || key_less(perm[i - 1], perm[i])) groups.push_back({i, i});
    groups.back().second = i + 1;
  }
  int levels = std::bit_width(n);
  std::vector<std::vector<std::size_t>> buckets(levels);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::size_t deg = groups[g].second - groups[g].first;
    buckets[std::bit_width(deg) - 1].push_back(g);
  }
  std::vector<Table> parts;
  int a = t.arity();
  auto emit = [&](const std::vector<std::size_t>& bucket, std::size_t from,
                  std::size_t to) {
    if (from >= to) return;
    std::vector<Value> flat;
    for (std::size_t k = from; k < to; ++k) {
      auto [b, e] = groups[bucket[k]];
      for (std::size_t i = b; i < e; ++i) {
        auto r = t.row(perm[i]);
        flat.insert(flat.end(), r.begin(), r.end());
      }
    }
    std::size_t rows = flat.size() / std::max(a, 1);
    Table part(t.vars(), std::move(flat), 0, rows);
    part.set_stat(static_cast<unsigned long>(part.size()));
    parts.push_back(std::move(part));
  };
  for (const auto& bucket : buckets) {
    std::size_t k = bucket.size();
    std::size_t half = (k + 1) / 2;
    emit(bucket, 0, half);
    emit(bucket, half, k);
  }
  return parts;
}

Table semijoin(const Table& t, const Table& filter, Exec exec,
               WorkCounter* work) {
  VarSet shared = t.vars() & filter.vars();
  if (work) work->add(t.size() + filter.size());
  if (filter.empty()) {
    Table out(t.vars());
    out.set_stat(t.stat());
    return out;
  }
  if (shared.empty()) return t;
  Table keys = project(filter, shared);
  int ks = shared.size();
  RowSet set(keys.flat(), ks, keys.size());
  auto cols = columns_of(t.vars(), shared);
  int a = t.arity();
  auto body = [&](std::size_t begin, std::size_t end, std::vector<Value>& out) {
    std::vector<Value> key(ks);
    for (std::size_t i = begin; i < end; ++i) {
      auto r = t.row(i);
      for (int c = 0; c < ks; ++c) key[c] = r[cols[c]];
      if (set.contains(key.data())) out.insert(out.end(), r.begin(), r.end());
    }
  };
  auto flat = map_rows(t.size(), exec, body);
  (void)a;
  return Table(t.vars(), std::move(flat), t.stat());
}

Table set_union(const Table& a, const Table& b) {
  if (a.vars() != b.vars()) {
    fail(ErrorCode::kSchemaMismatch, "union of different schemas");
  }
  std::vector<Value> flat = a.flat();
  flat.insert(flat.end(), b.flat().begin(), b.flat().end());
  return Table(a.vars(), std::move(flat), a.stat() + b.stat(),
               a.size() + b.size());
}

Table natural_join(const Table& a, const Table& b, Exec exec,
                   WorkCounter* work) {
  Dictionary d = construct(b, a.vars() & b.vars());
  d.set_stat(b.stat());
  return join(a, d, exec, work);
}

BigInt degree_in(const Table& t, VarSet y, VarSet x) {
  if (t.empty()) return 0;
  if (!y.subset_of(t.vars())) {
    fail(ErrorCode::kUnguardedDegree, "degree target outside relation");
  }
  VarSet xs = (x & t.vars()) - y;
  Table r = project(t, xs | y);
  return static_cast<unsigned long>(construct(r, xs).max_degree());
}

}  // namespace panda
