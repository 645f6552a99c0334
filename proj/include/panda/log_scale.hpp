#pragma once

#include <map>
#include <string>
#include <vector>

#include "panda/rational.hpp"

namespace panda {

// Σ q_i · log N_i, a rational combination of the logs of a fixed list of
// integer bounds. Kept symbolic; signs are decided exactly by LogScale.
class LogExpr {
 public:
  LogExpr() = default;
  static LogExpr unit(int index) {
    LogExpr e;
    e.coeffs_[index] = 1;
    return e;
  }

  const std::map<int, Rational>& coeffs() const { return coeffs_; }
  Rational coeff(int index) const;
  bool is_zero() const { return coeffs_.empty(); }

  LogExpr& add(const LogExpr& other, const Rational& scale);
  LogExpr& operator+=(const LogExpr& o) { return add(o, 1); }
  LogExpr& operator-=(const LogExpr& o) { return add(o, -1); }
  LogExpr operator*(const Rational& r) const;
  LogExpr operator+(const LogExpr& o) const { return LogExpr(*this) += o; }
  LogExpr operator-(const LogExpr& o) const { return LogExpr(*this) -= o; }

  bool operator==(const LogExpr&) const = default;

 private:
  std::map<int, Rational> coeffs_;
};

// Evaluation context: the bounds N_i. Bounds of 0 are treated as 1 so that
// every log is finite.
class LogScale {
 public:
  LogScale() = default;
  explicit LogScale(std::vector<BigInt> bounds);

  const std::vector<BigInt>& bounds() const { return bounds_; }
  int size() const { return static_cast<int>(bounds_.size()); }

  // Exact sign of Σ q_i log N_i.
  int sign(const LogExpr& e) const;
  int compare(const LogExpr& a, const LogExpr& b) const {
    return sign(a - b);
  }
  double approx_log2(const LogExpr& e) const;

  // ∏ N_i^{q_i·k} when every q_i·k is a non-negative integer, else false.
  bool integer_power(const LogExpr& e, const Rational& k, BigInt* out) const;

 private:
  std::vector<BigInt> bounds_;
  std::vector<double> log2_;
};

// Σ q_i log N_i with names, e.g. "1/2*n_R + 1/2*n_S".
std::string format_log_expr(const LogExpr& e,
                            const std::vector<std::string>& names);

// If every bound with a nonzero coefficient equals one common N, the
// exponent of N; used for reporting "N^{3/2}" style results.
bool common_exponent(const LogExpr& e, const LogScale& scale, Rational* out);

}  // namespace panda
