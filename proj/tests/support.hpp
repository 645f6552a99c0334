#pragma once

#include <string>
#include <vector>

#include "panda/io.hpp"
#include "panda/measure.hpp"
#include "panda/relational.hpp"

namespace panda::testing {

// Variables of the four-variable fixtures, in parse order x, y, z, w.
inline constexpr VarSet X = VarSet(1);
inline constexpr VarSet Y = VarSet(2);
inline constexpr VarSet Z = VarSet(4);
inline constexpr VarSet W = VarSet(8);

inline Table tab(VarSet vars, const std::vector<std::vector<Value>>& rows) {
  Table t = Table::from_rows(vars, rows);
  t.set_stat(BigInt(static_cast<unsigned long>(t.size())));
  return t;
}

inline Program program(const std::string& text) { return parse_program(text); }

// A one-head rule with the query's head as its only output.
inline DisjunctiveRule as_rule(const Program& p) {
  if (!p.is_query) return p.rule;
  DisjunctiveRule r;
  r.universe = p.query.universe;
  r.input = p.query.body;
  r.output.atoms = {make_atom(p.query.head_name, p.query.head_order)};
  return r;
}

inline StatisticsProfile stats(const Program& p, const std::string& text) {
  return parse_stats(text, p.universe(), p.body());
}

// The two-head rule over R(x,y), S(y,z), U(z,w).
inline Program two_heads() {
  return program("A(x,y,z) | B(y,z,w) :- R(x,y), S(y,z), U(z,w).");
}

// 𝒵={XYZ,YZW}, 𝒟={XY,YZ,ZW}, 𝒮={(X;Z|Y),(Y;ZW)}.
inline IntegralInequality two_heads_witness() {
  IntegralInequality w;
  w.Z = {X | Y | Z, Y | Z | W};
  w.D = {Measure::mon(X | Y), Measure::mon(Y | Z), Measure::mon(Z | W)};
  w.S = {Measure::sub(X, Z, Y), Measure::sub(Y, Z | W)};
  return w;
}

inline std::string cycle_text(int k, bool boolean) {
  std::string s = boolean ? "Q() :- " : "Q(v0,v1) :- ";
  for (int i = 0; i < k; ++i) {
    if (i) s += ", ";
    s += "R" + std::to_string(i) + "(v" + std::to_string(i) + ",v" +
         std::to_string((i + 1) % k) + ")";
  }
  return s + ".";
}

inline std::string card_text(const Program& p, const std::string& n) {
  std::string s;
  for (const auto& a : p.body().atoms) s += "card " + a.name + " <= " + n + "\n";
  return s;
}

}  // namespace panda::testing
