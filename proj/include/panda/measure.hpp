#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "panda/rational.hpp"
#include "panda/varset.hpp"

namespace panda {

enum class MeasureKind { kMonotonicity, kSubmodularity };

// (Y|X) or (Y;Z|X) over pairwise disjoint variable sets.
struct Measure {
  MeasureKind kind = MeasureKind::kMonotonicity;
  VarSet y;
  VarSet x;
  VarSet z;

  static Measure mon(VarSet y, VarSet x = {}) {
    return {MeasureKind::kMonotonicity, y, x, {}};
  }
  static Measure sub(VarSet y, VarSet z, VarSet x = {}) {
    return {MeasureKind::kSubmodularity, y, x, z};
  }

  bool is_mon() const { return kind == MeasureKind::kMonotonicity; }
  bool unconditional() const { return x.empty(); }
  // Pairwise disjoint, Y nonempty, Z nonempty iff submodularity.
  bool well_formed() const;
  // (Y;Z|X) and (Z;Y|X) compare equal after this.
  Measure canonical() const;

  auto operator<=>(const Measure&) const = default;
};

std::string format_measure(const Measure& m, const Universe& u);

// Σ a_X h(X), with h(∅) = 0 (the empty set never carries a coefficient).
class LinExpr {
 public:
  void add(VarSet s, const Rational& c);
  void add(const Measure& m, const Rational& c);
  void add(const LinExpr& e, const Rational& c);

  Rational coeff(VarSet s) const;
  const std::map<VarSet, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool operator==(const LinExpr&) const = default;

 private:
  std::map<VarSet, Rational> terms_;
};

// Multisets (𝒵, 𝒟, ℳ, 𝒮) of Σ_𝒵 h(Z) = Σ_𝒟 h(δ) − Σ_ℳ h(μ) − Σ_𝒮 h(σ).
struct IntegralInequality {
  std::vector<VarSet> Z;
  std::vector<Measure> D;
  std::vector<Measure> M;
  std::vector<Measure> S;
  // Optional: index of the degree constraint behind each 𝒟 member, parallel
  // to D when non-empty.
  std::vector<int> d_origin;

  int potential() const {
    return static_cast<int>(D.size() + M.size() + 2 * S.size());
  }
  // Equality as multisets (origins ignored).
  bool same_multisets(const IntegralInequality& other) const;
};

// RHS minus LHS of the identity; zero iff the identity holds.
LinExpr identity_residual(const IntegralInequality& ineq);
bool verify_identity(const IntegralInequality& ineq);
int count_unconditional(const IntegralInequality& ineq);

struct ResetResult {
  IntegralInequality ineq;
  std::vector<int> dropped_d;  // indices into the input 𝒟, ascending
};

// Removes unconditional 𝒟 member `drop` and at most one 𝒵 member while
// keeping the identity. Throws PreconditionViolated.
ResetResult reset(const IntegralInequality& ineq, int drop);

enum class Basis { kElemental, kFull };

// Basic Shannon measures over the first n variables.
std::vector<Measure> elemental_measures(int n);
std::vector<Measure> full_measures(int n);
std::vector<Measure> basis_measures(int n, Basis basis);

// Dense set function indexed by VarSet bits.
struct PolymatroidVector {
  int n = 0;
  std::vector<Rational> h;

  explicit PolymatroidVector(int vars = 0)
      : n(vars), h(std::size_t{1} << vars) {}
  Rational& operator[](VarSet s) { return h[s.bits()]; }
  const Rational& operator[](VarSet s) const { return h[s.bits()]; }
};

Rational eval_measure(const PolymatroidVector& h, const Measure& m);
Rational eval_expr(const PolymatroidVector& h, const LinExpr& e);
bool is_polymatroid(const PolymatroidVector& h,
                    Basis basis = Basis::kElemental);

}  // namespace panda
