#include <algorithm>
#include <optional>

#include "panda/errors.hpp"
#include "panda/measure.hpp"

namespace panda {

namespace {

// Index of the smallest member of `v` satisfying `pred`.
template <class Pred>
std::optional<std::size_t> smallest_match(const std::vector<Measure>& v,
                                          Pred pred) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (pred(v[i]) && (!best || v[i] < v[*best])) best = i;
  }
  return best;
}

}  // namespace

ResetResult reset(const IntegralInequality& ineq, int drop) {
  if (drop < 0 || drop >= static_cast<int>(ineq.D.size()) ||
      !ineq.D[drop].unconditional()) {
    fail(ErrorCode::kPreconditionViolated,
         "reset needs an unconditional statistics term");
  }
  if (!verify_identity(ineq)) {
    fail(ErrorCode::kPreconditionViolated, "reset on a non-identity");
  }
  bool origins = !ineq.d_origin.empty();
  // Working copies; `alive` tracks which original 𝒟 members survive.
  std::vector<bool> alive(ineq.D.size(), true);
  IntegralInequality work = ineq;
  alive[drop] = false;
  VarSet w = ineq.D[drop].y;

  while (!w.empty()) {
    auto z = std::find(work.Z.begin(), work.Z.end(), w);
    if (z != work.Z.end()) {
      work.Z.erase(z);
      break;
    }
    // Case 1: (Y|W) ∈ 𝒟.
    std::optional<std::size_t> d1;
    for (std::size_t i = 0; i < ineq.D.size(); ++i) {
      const Measure& m = ineq.D[i];
      if (alive[i] && m.x == w && (!d1 || m < ineq.D[*d1])) d1 = i;
    }
    if (d1) {
      alive[*d1] = false;
      w = w | ineq.D[*d1].y;
      continue;
    }
    // Case 2: (Y|X) ∈ ℳ with XY = W.
    if (auto m = smallest_match(work.M, [&](const Measure& mu) {
          return (mu.x | mu.y) == w;
        })) {
      VarSet x = work.M[*m].x;
      work.M.erase(work.M.begin() + *m);
      w = x;
      continue;
    }
    // Case 3: (Y;Z|X) ∈ 𝒮 with XY = W (either orientation).
    if (auto s = smallest_match(work.S, [&](const Measure& sg) {
          return (sg.x | sg.y) == w || (sg.x | sg.z) == w;
        })) {
      Measure sg = work.S[*s];
      if ((sg.x | sg.y) != w) std::swap(sg.y, sg.z);
      work.S.erase(work.S.begin() + *s);
      work.M.push_back(Measure::mon(sg.z, sg.x));
      w = sg.x | sg.y | sg.z;
      continue;
    }
    fail(ErrorCode::kPreconditionViolated,
         "statistics term does not cancel; identity is corrupt");
  }

  ResetResult out;
  out.ineq.Z = std::move(work.Z);
  out.ineq.M = std::move(work.M);
  out.ineq.S = std::move(work.S);
  for (std::size_t i = 0; i < ineq.D.size(); ++i) {
    if (alive[i]) {
      out.ineq.D.push_back(ineq.D[i]);
      if (origins) out.ineq.d_origin.push_back(ineq.d_origin[i]);
    } else {
      out.dropped_d.push_back(static_cast<int>(i));
    }
  }
  return out;
}

}  // namespace panda
