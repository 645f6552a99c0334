#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "panda/errors.hpp"
#include "panda/io.hpp"

namespace panda {

namespace {

std::vector<std::string> split_csv_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    auto b = cell.find_first_not_of(" \t");
    auto e = cell.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](unsigned char c) { return std::isdigit(c); });
}

// Field-wise; digit strings compare as numbers.
bool row_less(const std::vector<std::string>& a,
              const std::vector<std::string>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    if (x == y) continue;
    if (all_digits(x) && all_digits(y) && x.size() != y.size()) {
      return x.size() < y.size();
    }
    return x < y;
  }
  return false;
}

}  // namespace

Value ValueDictionary::intern(const std::string& text) {
  auto [it, inserted] = ids_.try_emplace(text, static_cast<Value>(texts_.size()));
  if (inserted) texts_.push_back(text);
  return it->second;
}

Table read_relation_csv(const std::filesystem::path& path, const Atom& atom,
                        const Universe& universe, ValueDictionary& dict,
                        std::size_t* duplicates) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kMissingFile, "missing file " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    fail(ErrorCode::kHeaderMismatch, path.string() + ": empty file, no header");
  }
  auto header = split_csv_line(line);
  std::vector<std::string> expected;
  for (int v : atom.order) expected.push_back(universe.name(v));
  if (header != expected) {
    std::string want;
    for (const auto& e : expected) want += (want.empty() ? "" : ",") + e;
    fail(ErrorCode::kHeaderMismatch,
         path.string() + ": header must be " + want + " for " + atom.name);
  }
  // CSV columns follow atom order; tables store ascending variable order.
  std::vector<int> col_of(atom.order.size());
  for (std::size_t i = 0; i < atom.order.size(); ++i) {
    col_of[i] = atom.vars.rank_of(atom.order[i]);
  }
  std::vector<Value> flat;
  std::size_t read = 0;
  int lineno = 1;
  std::vector<Value> tuple(atom.order.size());
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (atom.order.empty() && line.rfind("()", 0) == 0) {
      ++read;
      continue;
    }
    auto cells = split_csv_line(line);
    if (cells.size() != atom.order.size()) {
      fail(ErrorCode::kHeaderMismatch, path.string() + ":" +
                                           std::to_string(lineno) +
                                           ": wrong number of fields");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      tuple[col_of[i]] = dict.intern(cells[i]);
    }
    flat.insert(flat.end(), tuple.begin(), tuple.end());
    ++read;
  }
  Table t(atom.vars, std::move(flat), 0, read);
  t.set_stat(BigInt(static_cast<unsigned long>(t.size())));
  if (duplicates) *duplicates = read - t.size();
  return t;
}

Instance load_relations(const std::filesystem::path& source,
                        const Schema& schema, const Universe& universe,
                        ValueDictionary& dict, LoadReport* report) {
  std::map<std::string, std::filesystem::path> files;
  if (std::filesystem::is_directory(source)) {
    for (const auto& a : schema.atoms) files[a.name] = source / (a.name + ".csv");
  } else {
    std::istringstream manifest(read_text_file(source));
    std::string line;
    while (std::getline(manifest, line)) {
      auto hash = line.find('%');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream fields(line);
      std::string name, path;
      if (!(fields >> name)) continue;
      if (!(fields >> path)) {
        fail(ErrorCode::kParseError, source.string() + ": no path for " + name);
      }
      files[name] = source.parent_path() / path;
    }
  }
  Instance out;
  for (const auto& a : schema.atoms) {
    auto it = files.find(a.name);
    if (it == files.end()) {
      fail(ErrorCode::kMissingFile, "no file listed for relation " + a.name);
    }
    std::size_t dups = 0;
    Table t = read_relation_csv(it->second, a, universe, dict, &dups);
    if (report) {
      report->rows[a.name] = t.size();
      report->duplicates[a.name] = dups;
    }
    out.emplace(a.name, std::move(t));
  }
  return out;
}

void check_instance(const Instance& instance, const StatisticsProfile& profile) {
  std::string why;
  if (!satisfies(instance, profile, &why)) {
    fail(ErrorCode::kConstraintViolated, why);
  }
}

std::string format_csv(const Table& table, const std::vector<int>& order,
                       const Universe& universe, const ValueDictionary& dict) {
  std::string header;
  for (int v : order) header += (header.empty() ? "" : ",") + universe.name(v);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(table.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    auto row = table.row(r);
    std::vector<std::string> cells;
    for (int v : order) cells.push_back(dict.text(row[table.column_of(v)]));
    rows.push_back(std::move(cells));
  }
  std::sort(rows.begin(), rows.end(), row_less);
  std::string out = header + "\n";
  for (const auto& cells : rows) {
    // A nullary row has no cells; "()" keeps it visible.
    std::string line = cells.empty() ? "()" : "";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ",";
      line += cells[i];
    }
    out += line + "\n";
  }
  return out;
}

void write_relation_csv(const std::filesystem::path& path, const Table& table,
                        const std::vector<int>& order, const Universe& universe,
                        const ValueDictionary& dict) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kMissingFile, "cannot write " + path.string());
  out << format_csv(table, order, universe, dict);
}

}  // namespace panda
