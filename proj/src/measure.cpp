#include "panda/measure.hpp"

#include <algorithm>

namespace panda {

bool Measure::well_formed() const {
  if (y.empty()) return false;
  if (!x.disjoint(y) || !x.disjoint(z) || !y.disjoint(z)) return false;
  return is_mon() ? z.empty() : !z.empty();
}

Measure Measure::canonical() const {
  if (!is_mon() && z < y) return sub(z, y, x);
  return *this;
}

std::string format_measure(const Measure& m, const Universe& u) {
  std::string out = "(" + u.format(m.y);
  if (!m.is_mon()) out += ";" + u.format(m.z);
  if (!m.x.empty()) out += "|" + u.format(m.x);
  return out + ")";
}

void LinExpr::add(VarSet s, const Rational& c) {
  if (s.empty() || c == 0) return;
  auto [it, inserted] = terms_.try_emplace(s, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void LinExpr::add(const Measure& m, const Rational& c) {
  if (m.is_mon()) {
    add(m.x | m.y, c);
    add(m.x, -c);
  } else {
    add(m.x | m.y, c);
    add(m.x | m.z, c);
    add(m.x, -c);
    add(m.x | m.y | m.z, -c);
  }
}

void LinExpr::add(const LinExpr& e, const Rational& c) {
  for (const auto& [s, v] : e.terms_) add(s, v * c);
}

Rational LinExpr::coeff(VarSet s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? Rational(0) : it->second;
}

bool IntegralInequality::same_multisets(const IntegralInequality& o) const {
  auto sorted = [](auto v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  auto canon = [&](const std::vector<Measure>& v) {
    std::vector<Measure> c;
    for (const auto& m : v) c.push_back(m.canonical());
    return sorted(c);
  };
  return sorted(Z) == sorted(o.Z) && canon(D) == canon(o.D) &&
         canon(M) == canon(o.M) && canon(S) == canon(o.S);
}

LinExpr identity_residual(const IntegralInequality& ineq) {
  LinExpr e;
  for (const auto& d : ineq.D) e.add(d, 1);
  for (const auto& m : ineq.M) e.add(m, -1);
  for (const auto& s : ineq.S) e.add(s, -1);
  for (VarSet z : ineq.Z) e.add(z, -1);
  return e;
}

bool verify_identity(const IntegralInequality& ineq) {
  return identity_residual(ineq).is_zero();
}

int count_unconditional(const IntegralInequality& ineq) {
  return static_cast<int>(std::count_if(
      ineq.D.begin(), ineq.D.end(),
      [](const Measure& m) { return m.unconditional(); }));
}

std::vector<Measure> elemental_measures(int n) {
  std::vector<Measure> out;
  VarSet all = VarSet::first_n(n);
  for (int i = 0; i < n; ++i) {
    VarSet vi = VarSet::singleton(i);
    out.push_back(Measure::mon(vi, all - vi));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      VarSet vi = VarSet::singleton(i), vj = VarSet::singleton(j);
      VarSet rest = all - vi - vj;
      // All subsets K of rest, in increasing bit order.
      std::uint32_t r = rest.bits();
      for (std::uint32_t k = 0;; k = (k - r) & r) {
        out.push_back(Measure::sub(vi, vj, VarSet(k)));
        if (k == r) break;
      }
    }
  }
  return out;
}

std::vector<Measure> full_measures(int n) {
  std::vector<Measure> out;
  std::uint32_t limit = 1u << n;
  for (std::uint32_t y = 1; y < limit; ++y) {
    std::uint32_t rest = (limit - 1) & ~y;
    for (std::uint32_t x = 0;; x = (x - rest) & rest) {
      out.push_back(Measure::mon(VarSet(y), VarSet(x)));
      if (x == rest) break;
    }
  }
  for (std::uint32_t y = 1; y < limit; ++y) {
    std::uint32_t rest = (limit - 1) & ~y;
    for (std::uint32_t z = rest; z != 0; z = (z - 1) & rest) {
      if (z < y) continue;
      std::uint32_t rest2 = rest & ~z;
      for (std::uint32_t x = 0;; x = (x - rest2) & rest2) {
        out.push_back(Measure::sub(VarSet(y), VarSet(z), VarSet(x)));
        if (x == rest2) break;
      }
    }
  }
  return out;
}

std::vector<Measure> basis_measures(int n, Basis basis) {
  return basis == Basis::kElemental ? elemental_measures(n) : full_measures(n);
}

Rational eval_measure(const PolymatroidVector& h, const Measure& m) {
  if (m.is_mon()) return h[m.x | m.y] - h[m.x];
  return h[m.x | m.y] + h[m.x | m.z] - h[m.x] - h[m.x | m.y | m.z];
}

Rational eval_expr(const PolymatroidVector& h, const LinExpr& e) {
  Rational total = 0;
  for (const auto& [s, c] : e.terms()) total += c * h[s];
  return total;
}

bool is_polymatroid(const PolymatroidVector& h, Basis basis) {
  if (h.h.empty() || h.h[0] != 0) return false;
  for (const auto& m : basis_measures(h.n, basis)) {
    if (eval_measure(h, m) < 0) return false;
  }
  return true;
}

}  // namespace panda
