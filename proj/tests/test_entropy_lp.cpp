#include <random>

#include "doctest.h"
#include "panda/errors.hpp"
#include "panda/oracle.hpp"
#include "panda/shannon.hpp"
#include "panda/simplex.hpp"
#include "support.hpp"

using namespace panda;
using namespace panda::testing;

namespace {

PolymatroidVector from_function(int n, Rational (*f)(VarSet)) {
  PolymatroidVector h(n);
  for (std::uint32_t b = 0; b < (1u << n); ++b) h[VarSet(b)] = f(VarSet(b));
  return h;
}

Rational cardinality(VarSet s) { return s.size(); }
Rational step(VarSet s) { return s.empty() ? 0 : 1; }

LinExpr shearer() {
  LinExpr e;
  e.add(X | Y, 1);
  e.add(Y | Z, 1);
  e.add(X | Z, 1);
  e.add(X | Y | Z, -2);
  return e;
}

// Coverage function: h(S) = |∪_{v∈S} A_v|, always a polymatroid.
PolymatroidVector random_coverage(int n, std::mt19937_64& rng) {
  std::vector<std::uint32_t> cover(n);
  for (auto& c : cover) c = static_cast<std::uint32_t>(rng() % 64);
  PolymatroidVector h(n);
  for (std::uint32_t b = 0; b < (1u << n); ++b) {
    std::uint32_t u = 0;
    for (int v : VarSet(b).members()) u |= cover[v];
    h[VarSet(b)] = std::popcount(u);
  }
  return h;
}

}  // namespace

TEST_CASE("measure evaluation") {
  // h(W) = |W ∩ {X,Y}|
  PolymatroidVector h(3);
  for (std::uint32_t b = 0; b < 8; ++b) h[VarSet(b)] = (VarSet(b) & (X | Y)).size();
  CHECK(eval_measure(h, Measure::mon(X, Y)) == 1);
  PolymatroidVector mod = from_function(3, cardinality);
  CHECK(eval_measure(mod, Measure::sub(Y, Z, X)) == 0);
  CHECK(eval_measure(mod, Measure::mon(Y | Z)) == 2);
}

TEST_CASE("polymatroid checks") {
  CHECK(is_polymatroid(from_function(4, step)));
  CHECK(is_polymatroid(from_function(4, cardinality)));
  PolymatroidVector bad = from_function(2, cardinality);
  bad[X | Y] = 0;
  CHECK_FALSE(is_polymatroid(bad));
  CHECK_FALSE(is_polymatroid(bad, Basis::kFull));
  for (int m = 1; m <= 6; ++m) {
    int expected = m * (m - 1) * (1 << m) / 8 + m;
    CHECK(static_cast<int>(elemental_measures(m).size()) == expected);
  }
}

TEST_CASE("elemental and full bases agree") {
  std::mt19937_64 rng(21);
  for (int iter = 0; iter < 60; ++iter) {
    int n = 2 + static_cast<int>(rng() % 4);
    PolymatroidVector h = random_coverage(n, rng);
    if (iter % 2) {
      // Perturb one entry; may or may not break the axioms.
      std::uint32_t b = 1 + static_cast<std::uint32_t>(rng() % ((1u << n) - 1));
      h.h[b] += static_cast<long>(rng() % 5) - 2;
    }
    CHECK(is_polymatroid(h, Basis::kElemental) == is_polymatroid(h, Basis::kFull));
  }
}

TEST_CASE("witness search") {
  WitnessResult tri = find_witness(shearer(), 3);
  REQUIRE(tri.valid);
  RationalWitness rw;
  rw.lambda = {{X | Y | Z, 2}};
  rw.w = {{Measure::mon(X | Y), 1}, {Measure::mon(Y | Z), 1}, {Measure::mon(X | Z), 1}};
  rw.m = tri.m;
  rw.s = tri.s;
  IntegralInequality ineq = integralize(rw);
  CHECK(verify_identity(ineq));
  CHECK(count_unconditional(ineq) == 3);
  CHECK(count_unconditional(ineq) >= static_cast<int>(ineq.Z.size()));

  LinExpr mono;
  mono.add(X | Y, 1);
  mono.add(X, -1);
  WitnessResult m = find_witness(mono, 2);
  REQUIRE(m.valid);
  REQUIRE(m.m.size() == 1);
  CHECK(m.m[0].first == Measure::mon(Y, X));
  CHECK(m.m[0].second == 1);
  CHECK(m.s.empty());

  LinExpr wrong;
  wrong.add(X, 1);
  wrong.add(X | Y, -1);
  WitnessResult bad = find_witness(wrong, 2);
  CHECK_FALSE(bad.valid);
  REQUIRE(bad.certificate.has_value());
  CHECK(is_polymatroid(*bad.certificate));
  CHECK(eval_expr(*bad.certificate, wrong) < 0);
}

TEST_CASE("integralize") {
  RationalWitness rw;
  rw.lambda = {{X | Y | Z, Rational(1, 2)}, {Y | Z | W, Rational(1, 2)}};
  rw.w = {{Measure::mon(X | Y), Rational(1, 2)},
          {Measure::mon(Y | Z), Rational(1, 2)},
          {Measure::mon(Z | W), Rational(1, 2)}};
  rw.s = {{Measure::sub(X, Z, Y), Rational(1, 2)},
          {Measure::sub(Y, Z | W), Rational(1, 2)}};
  IntegralInequality got = integralize(rw);
  CHECK(got.same_multisets(two_heads_witness()));
  CHECK(verify_identity(got));

  IntegralInequality again = integralize(
      {{{X | Y, 1}}, {{Measure::mon(X | Y), 1}}, {}, {}, {}});
  CHECK(again.Z == std::vector<VarSet>{X | Y});
  CHECK(again.D.size() == 1);

  RationalWitness thirds;
  thirds.lambda = {{X, Rational(1, 3)}, {Y, Rational(1, 3)}, {Z, Rational(1, 3)}};
  thirds.w = {{Measure::mon(X | Y | Z), Rational(1, 3)}};
  thirds.m = {{Measure::mon(Y | Z, X), Rational(1, 3)}};
  IntegralInequality t = integralize(thirds);
  CHECK(t.Z.size() == 3);
  CHECK(t.D.size() == 1);
  CHECK(t.M.size() == 1);
}

TEST_CASE("identity checks") {
  IntegralInequality w = two_heads_witness();
  CHECK(verify_identity(w));
  CHECK(count_unconditional(w) == 3);
  IntegralInequality broken = w;
  broken.S.erase(broken.S.begin());
  CHECK_FALSE(verify_identity(broken));
  CHECK(verify_identity(IntegralInequality{}));
  CHECK(count_unconditional(IntegralInequality{}) == 0);
}

TEST_CASE("reset, triangle example") {
  IntegralInequality t;
  t.Z = {X | Y | Z, X | Y | Z};
  t.D = {Measure::mon(X | Y), Measure::mon(Y | Z), Measure::mon(X | Z)};
  t.S = {Measure::sub(Y, Z, X), Measure::sub(X, Y | Z)};
  REQUIRE(verify_identity(t));
  ResetResult r = reset(t, 2);
  CHECK(r.ineq.Z == std::vector<VarSet>{X | Y | Z});
  CHECK(r.ineq.D == std::vector<Measure>{Measure::mon(X | Y), Measure::mon(Y | Z)});
  CHECK(r.ineq.M == std::vector<Measure>{Measure::mon(Y, X)});
  CHECK(r.ineq.S == std::vector<Measure>{Measure::sub(X, Y | Z)});
  CHECK(verify_identity(r.ineq));
}

TEST_CASE("reset, chain example") {
  IntegralInequality t;
  t.Z = {X | Y | Z | W, Y};
  t.D = {Measure::mon(X | Y), Measure::mon(Y | Z), Measure::mon(W, X | Y | Z)};
  t.S = {Measure::sub(X, Z, Y)};
  REQUIRE(verify_identity(t));
  ResetResult r = reset(t, 0);
  CHECK(r.ineq.Z == std::vector<VarSet>{Y});
  CHECK(r.ineq.D == std::vector<Measure>{Measure::mon(Y | Z)});
  CHECK(r.ineq.M == std::vector<Measure>{Measure::mon(Z, Y)});
  CHECK(r.ineq.S.empty());
  CHECK(r.dropped_d == std::vector<int>{0, 2});
}

TEST_CASE("reset, direct cancellation and bad input") {
  IntegralInequality t;
  t.Z = {W, X};
  t.D = {Measure::mon(W), Measure::mon(X)};
  ResetResult r = reset(t, 0);
  CHECK(r.ineq.Z == std::vector<VarSet>{X});
  CHECK(r.ineq.D == std::vector<Measure>{Measure::mon(X)});
  try {
    IntegralInequality c;
    c.Z = {X | Y};
    c.D = {Measure::mon(X), Measure::mon(Y, X)};
    reset(c, 1);
    FAIL("expected an error");
  } catch (const PandaError& e) {
    CHECK(e.code() == ErrorCode::kPreconditionViolated);
  }
}

TEST_CASE("polymatroid bounds") {
  Program tri = program("A(a,b,c) :- R(a,b), S(b,c), T(c,a).");
  StatisticsProfile p = stats(tri, card_text(tri, "1000"));
  MaxMinResult r = solve_polymatroid_bound(as_rule(tri), p);
  Rational e;
  REQUIRE(common_exponent(r.opt, scale_of(p), &e));
  CHECK(e == Rational(3, 2));
  CHECK(r.w == std::vector<Rational>{Rational(1, 2), Rational(1, 2), Rational(1, 2)});

  Program two = two_heads();
  StatisticsProfile p2 = stats(two, card_text(two, "4096"));
  MaxMinResult r2 = solve_polymatroid_bound(two.rule, p2);
  REQUIRE(common_exponent(r2.opt, scale_of(p2), &e));
  CHECK(e == Rational(3, 2));
  CHECK(r2.lambda == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});

  Program one = program("A(x) :- R(x).");
  MaxMinResult r3 = solve_polymatroid_bound(as_rule(one), stats(one, "card R <= 7"));
  CHECK(r3.opt == LogExpr::unit(0));
  CHECK(r3.w == std::vector<Rational>{1});

  try {
    solve_polymatroid_bound(as_rule(one), StatisticsProfile{});
    FAIL("expected an error");
  } catch (const PandaError& e2) {
    CHECK(e2.code() == ErrorCode::kUnbounded);
  }
}

TEST_CASE("max-min dual") {
  Program c4 = program("Q(x,y) :- R(x,y), S(y,z), U(z,w), V(w,x).");
  StatisticsProfile p = stats(c4, card_text(c4, "1000"));
  MaxMinResult r = solve_maxmin_dual({X | Y | Z, Y | Z | W}, 4, p);
  Rational e;
  REQUIRE(common_exponent(r.opt, scale_of(p), &e));
  CHECK(e == Rational(3, 2));
  Rational total = 0;
  for (const auto& l : r.lambda) total += l;
  CHECK(total == 1);
  CHECK(check_shannon_direct(shannon_gap(r.witness), 4));

  StatisticsProfile single{{{X | Y, {}, 50, "R"}}};
  MaxMinResult s = solve_maxmin_dual({X | Y}, 2, single);
  CHECK(s.opt == LogExpr::unit(0));
  CHECK(s.lambda == std::vector<Rational>{1});
  CHECK(s.w == std::vector<Rational>{1});

  StatisticsProfile two{{{X, {}, 30, "R"}, {X, {}, 20, "S"}}};
  MaxMinResult m = solve_maxmin_dual({X}, 1, two);
  CHECK(m.opt == LogExpr::unit(1));
}

TEST_CASE("dual optimum equals the primal optimum") {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 25; ++iter) {
    int n = 3 + static_cast<int>(rng() % 2);
    StatisticsProfile p;
    std::vector<Rational> logs;
    for (int c = 0; c < 3 + static_cast<int>(rng() % 3); ++c) {
      VarSet y(static_cast<std::uint32_t>(1 + rng() % ((1u << n) - 1)));
      VarSet x(static_cast<std::uint32_t>(rng() % (1u << n)) & ~y.bits());
      if (rng() % 2) x = VarSet();
      unsigned k = 1 + static_cast<unsigned>(rng() % 6);
      p.constraints.push_back({y, x, pow(BigInt(2), k), "R"});
      logs.push_back(k);
    }
    // Cardinality on everything keeps the problem bounded.
    p.constraints.push_back({VarSet::first_n(n), {}, pow(BigInt(2), 8), "R"});
    logs.push_back(8);
    std::vector<VarSet> targets;
    for (int t = 0; t < 1 + static_cast<int>(rng() % 3); ++t) {
      targets.push_back(VarSet(static_cast<std::uint32_t>(1 + rng() % ((1u << n) - 1))));
    }
    MaxMinResult d = solve_maxmin_dual(targets, n, p);
    auto primal = solve_maxmin_primal(targets, n, p, logs);
    REQUIRE(primal.has_value());
    Rational dual_value = 0;
    for (const auto& [i, q] : d.opt.coeffs()) dual_value += q * logs[i];
    CHECK(dual_value == *primal);
  }
}

TEST_CASE("exact simplex") {
  LpProblem lp;
  lp.num_vars = 1;
  lp.add_row({{0, 1}}, Sense::kLe, 3);
  auto s = solve_lp_exact(lp, {Rational(-1)});
  CHECK(s.status == LpStatus::kOptimal);
  CHECK(s.x[0] == 3);

  LpProblem inf;
  inf.num_vars = 1;
  inf.add_row({{0, 1}}, Sense::kLe, 0);
  inf.add_row({{0, 1}}, Sense::kGe, 1);
  CHECK(solve_lp_exact(inf, {Rational(1)}).status == LpStatus::kInfeasible);

  LpProblem unb;
  unb.num_vars = 1;
  unb.add_row({{0, 1}}, Sense::kGe, 1);
  CHECK(solve_lp_exact(unb, {Rational(-1)}).status == LpStatus::kUnbounded);

  // Beale's example cycles under the textbook rule.
  LpProblem beale;
  beale.num_vars = 4;
  beale.add_row({{0, Rational(1, 4)}, {1, -8}, {2, -1}, {3, 9}}, Sense::kLe, 0);
  beale.add_row({{0, Rational(1, 2)}, {1, -12}, {2, Rational(-1, 2)}, {3, 3}},
                Sense::kLe, 0);
  beale.add_row({{2, 1}}, Sense::kLe, 1);
  auto b = solve_lp_exact(beale, {Rational(-3, 4), 20, Rational(-1, 2), 6});
  CHECK(b.status == LpStatus::kOptimal);
  CHECK(b.objective == Rational(-5, 4));
}

TEST_CASE("exact log comparisons") {
  LogScale s({BigInt(4), BigInt(2), BigInt(3)});
  CHECK(s.sign(LogExpr::unit(0) * Rational(1, 2) - LogExpr::unit(1)) == 0);
  CHECK(s.sign(LogExpr::unit(2) - LogExpr::unit(1)) > 0);
  // 3^12 = 531441 < 2^20 = 1048576
  CHECK(s.sign(LogExpr::unit(2) * 12 - LogExpr::unit(1) * 20) < 0);
  BigInt v;
  CHECK_FALSE(s.integer_power(LogExpr::unit(0) * Rational(3, 2), 1, &v));
  CHECK(s.integer_power(LogExpr::unit(0) * Rational(3, 2), 2, &v));
  CHECK(v == 64);
  CHECK_FALSE(s.integer_power(LogExpr::unit(1) * Rational(1, 2), 1, &v));
}
