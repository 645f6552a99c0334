#include "panda/simplex.hpp"

namespace panda {

const char* lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

namespace {

void sub_scaled(Rational& a, const Rational& f, const Rational& r) {
  a -= f * r;
}
void sub_scaled(LogExpr& a, const LogExpr& f, const Rational& r) {
  a.add(f, -r);
}
bool is_zero(const Rational& r) { return r == 0; }
bool is_zero(const LogExpr& e) { return e.is_zero(); }

class Tableau {
 public:
  explicit Tableau(const LpProblem& lp) : n_(lp.num_vars) {
    m_ = static_cast<int>(lp.rows.size());
    int slacks = 0, arts = 0;
    for (const auto& r : lp.rows) {
      Sense s = effective_sense(r);
      if (s != Sense::kEq) ++slacks;
      if (s != Sense::kLe) ++arts;
    }
    first_art_ = n_ + slacks;
    cols_ = first_art_ + arts;
    t_.assign(m_, std::vector<Rational>(cols_));
    rhs_.resize(m_);
    basis_.resize(m_);
    int slack = n_, art = first_art_;
    for (int i = 0; i < m_; ++i) {
      const auto& r = lp.rows[i];
      bool flip = r.rhs < 0;
      for (const auto& [v, c] : r.coeffs) t_[i][v] += flip ? -c : c;
      rhs_[i] = flip ? -r.rhs : r.rhs;
      Sense s = effective_sense(r);
      if (s == Sense::kLe) {
        t_[i][slack] = 1;
        basis_[i] = slack++;
      } else {
        if (s == Sense::kGe) t_[i][slack++] = -1;
        t_[i][art] = 1;
        basis_[i] = art++;
      }
    }
  }

  // Phase 1; false when infeasible.
  bool find_feasible() {
    std::vector<Rational> d(cols_);
    Rational zneg = 0;
    for (int i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (int j = 0; j < first_art_; ++j) d[j] -= t_[i][j];
      zneg -= rhs_[i];
    }
    auto sign = [](const Rational& r) { return sgn(r); };
    if (optimize(d, zneg, sign) != LpStatus::kOptimal) return false;
    if (zneg != 0) return false;
    // Pivot zero-level artificials out where possible.
    for (int i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (int j = 0; j < first_art_; ++j) {
        if (t_[i][j] != 0) {
          pivot(i, j, d, zneg);
          break;
        }
      }
    }
    return true;
  }

  template <class Obj, class Sign>
  LpStatus minimize(const std::vector<Obj>& cost, Obj* value, Sign sign) {
    std::vector<Obj> d(cols_);
    for (int j = 0; j < n_; ++j) d[j] = cost[j];
    Obj zneg{};
    for (int i = 0; i < m_; ++i) {
      int b = basis_[i];
      if (b >= n_ || is_zero(cost[b])) continue;
      for (int j = 0; j < first_art_; ++j) {
        if (t_[i][j] != 0) sub_scaled(d[j], cost[b], t_[i][j]);
      }
      sub_scaled(zneg, cost[b], rhs_[i]);
    }
    LpStatus st = optimize(d, zneg, sign);
    *value = zneg * Rational(-1);
    return st;
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> x(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = rhs_[i];
    }
    return x;
  }

  int pivots() const { return pivots_; }

 private:
  static Sense effective_sense(const LpRow& r) {
    if (r.rhs >= 0 || r.sense == Sense::kEq) return r.sense;
    return r.sense == Sense::kLe ? Sense::kGe : Sense::kLe;
  }
  bool is_artificial(int col) const { return col >= first_art_; }

  // Bland's rule: smallest improving column, ratio ties to smallest basic.
  template <class Obj, class Sign>
  LpStatus optimize(std::vector<Obj>& d, Obj& zneg, Sign sign) {
    for (;;) {
      int q = -1;
      for (int j = 0; j < first_art_; ++j) {
        if (sign(d[j]) < 0) {
          q = j;
          break;
        }
      }
      if (q < 0) return LpStatus::kOptimal;
      int p = -1;
      Rational best;
      for (int i = 0; i < m_; ++i) {
        if (t_[i][q] <= 0) continue;
        Rational ratio = rhs_[i] / t_[i][q];
        if (p < 0 || ratio < best || (ratio == best && basis_[i] < basis_[p])) {
          p = i;
          best = ratio;
        }
      }
      if (p < 0) return LpStatus::kUnbounded;
      pivot(p, q, d, zneg);
    }
  }

  template <class Obj>
  void pivot(int p, int q, std::vector<Obj>& d, Obj& zneg) {
    ++pivots_;
    std::vector<Rational>& prow = t_[p];
    Rational piv = prow[q];
    std::vector<int> nz;
    for (int j = 0; j < cols_; ++j) {
      if (prow[j] != 0) {
        prow[j] /= piv;
        nz.push_back(j);
      }
    }
    rhs_[p] /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == p || t_[i][q] == 0) continue;
      Rational f = t_[i][q];
      for (int j : nz) t_[i][j] -= f * prow[j];
      rhs_[i] -= f * rhs_[p];
    }
    if (!is_zero(d[q])) {
      Obj f = d[q];
      for (int j : nz) sub_scaled(d[j], f, prow[j]);
      sub_scaled(zneg, f, rhs_[p]);
    }
    basis_[p] = q;
  }

  int n_ = 0, m_ = 0, cols_ = 0, first_art_ = 0;
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> rhs_;
  std::vector<int> basis_;
  int pivots_ = 0;
};

template <class Obj, class Sign>
LpSolution<Obj> solve(const LpProblem& lp, const std::vector<Obj>& cost,
                      Sign sign) {
  LpSolution<Obj> out;
  Tableau tab(lp);
  if (!tab.find_feasible()) {
    out.status = LpStatus::kInfeasible;
    out.pivots = tab.pivots();
    return out;
  }
  if (cost.empty()) {
    out.status = LpStatus::kOptimal;
  } else {
    out.status = tab.minimize(cost, &out.objective, sign);
  }
  out.x = tab.solution();
  out.pivots = tab.pivots();
  return out;
}

}  // namespace

LpSolution<Rational> solve_lp_exact(const LpProblem& lp,
                                    const std::vector<Rational>& cost) {
  return solve(lp, cost, [](const Rational& r) { return sgn(r); });
}

LpSolution<LogExpr> solve_lp_exact(const LpProblem& lp,
                                   const std::vector<LogExpr>& cost,
                                   const LogScale& scale) {
  return solve(lp, cost, [&](const LogExpr& e) { return scale.sign(e); });
}

}  // namespace panda
