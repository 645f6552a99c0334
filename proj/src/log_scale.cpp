#include "panda/log_scale.hpp"

#include <cmath>

namespace panda {

Rational LogExpr::coeff(int index) const {
  auto it = coeffs_.find(index);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

LogExpr& LogExpr::add(const LogExpr& other, const Rational& scale) {
  if (scale == 0) return *this;
  for (const auto& [i, q] : other.coeffs_) {
    auto [it, inserted] = coeffs_.try_emplace(i, q * scale);
    if (!inserted) {
      it->second += q * scale;
      if (it->second == 0) coeffs_.erase(it);
    }
  }
  return *this;
}

LogExpr LogExpr::operator*(const Rational& r) const {
  LogExpr out;
  if (r == 0) return out;
  for (const auto& [i, q] : coeffs_) out.coeffs_[i] = q * r;
  return out;
}

LogScale::LogScale(std::vector<BigInt> bounds) : bounds_(std::move(bounds)) {
  for (auto& b : bounds_) {
    if (b < 1) b = 1;
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, b.get_mpz_t());
    log2_.push_back(std::log2(mant) + static_cast<double>(exp));
  }
}

double LogScale::approx_log2(const LogExpr& e) const {
  double v = 0;
  for (const auto& [i, q] : e.coeffs()) v += q.get_d() * log2_.at(i);
  return v;
}

int LogScale::sign(const LogExpr& e) const {
  if (e.is_zero()) return 0;
  double approx = 0, scale = 0;
  for (const auto& [i, q] : e.coeffs()) {
    double t = q.get_d() * log2_.at(i);
    approx += t;
    scale += std::fabs(t);
  }
  if (std::fabs(approx) > 1e-9 * (scale + 1)) return approx > 0 ? 1 : -1;
  // Clear denominators and compare ∏ N^{p+} against ∏ N^{p-}.
  BigInt den = 1;
  for (const auto& [i, q] : e.coeffs()) den = lcm(den, q.get_den());
  BigInt pos = 1, neg = 1;
  for (const auto& [i, q] : e.coeffs()) {
    BigInt p = q.get_num() * (den / q.get_den());
    if (p > 0) {
      pos *= pow(bounds_.at(i), p.get_ui());
    } else {
      BigInt m = -p;
      neg *= pow(bounds_.at(i), m.get_ui());
    }
  }
  return cmp(pos, neg) > 0 ? 1 : (cmp(pos, neg) < 0 ? -1 : 0);
}

bool LogScale::integer_power(const LogExpr& e, const Rational& k,
                             BigInt* out) const {
  BigInt v = 1;
  for (const auto& [i, q] : e.coeffs()) {
    Rational p = q * k;
    if (p.get_den() != 1 || p < 0) return false;
    v *= pow(bounds_.at(i), p.get_num().get_ui());
  }
  *out = v;
  return true;
}

std::string format_log_expr(const LogExpr& e,
                            const std::vector<std::string>& names) {
  if (e.is_zero()) return "0";
  std::string out;
  for (const auto& [i, q] : e.coeffs()) {
    if (!out.empty()) out += " + ";
    out += to_string(q) + "*n_" + names.at(i);
  }
  return out;
}

bool common_exponent(const LogExpr& e, const LogScale& scale, Rational* out) {
  const BigInt* common = nullptr;
  Rational total = 0;
  for (const auto& [i, q] : e.coeffs()) {
    const BigInt& b = scale.bounds().at(i);
    if (common && *common != b) return false;
    common = &b;
    total += q;
  }
  *out = total;
  return true;
}

}  // namespace panda
