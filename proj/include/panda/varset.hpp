#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace panda {

inline constexpr int kMaxVariables = 30;

// Subset of the variable universe, one bit per variable index.
class VarSet {
 public:
  constexpr VarSet() = default;
  constexpr explicit VarSet(std::uint32_t bits) : bits_(bits) {}

  static constexpr VarSet singleton(int var) { return VarSet(1u << var); }
  static constexpr VarSet first_n(int n) {
    return VarSet(n >= 32 ? ~0u : ((1u << n) - 1u));
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int var) const { return (bits_ >> var) & 1u; }
  constexpr bool subset_of(VarSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr bool disjoint(VarSet other) const {
    return (bits_ & other.bits_) == 0;
  }

  constexpr VarSet operator|(VarSet o) const { return VarSet(bits_ | o.bits_); }
  constexpr VarSet operator&(VarSet o) const { return VarSet(bits_ & o.bits_); }
  constexpr VarSet operator-(VarSet o) const { return VarSet(bits_ & ~o.bits_); }
  constexpr VarSet& operator|=(VarSet o) { bits_ |= o.bits_; return *this; }

  constexpr auto operator<=>(const VarSet&) const = default;

  // Variable indices in ascending order.
  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(size());
    for (std::uint32_t b = bits_; b != 0; b &= b - 1) {
      out.push_back(std::countr_zero(b));
    }
    return out;
  }

  // Position of `var` among members (number of smaller members).
  constexpr int rank_of(int var) const {
    return std::popcount(bits_ & ((1u << var) - 1u));
  }

 private:
  std::uint32_t bits_ = 0;
};

struct VarSetHash {
  std::size_t operator()(VarSet s) const noexcept { return s.bits(); }
};

// Ordered, named variable universe. Index order defines tuple column order.
class Universe {
 public:
  Universe() = default;
  explicit Universe(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int var) const { return names_.at(var); }
  const std::vector<std::string>& names() const { return names_; }

  // Returns -1 when absent.
  int index_of(const std::string& name) const;
  // Returns the index of `name`, adding it when new.
  int intern(const std::string& name);

  VarSet all() const { return VarSet::first_n(size()); }

  // "x,y,z" in index order; "" for the empty set.
  std::string format(VarSet s) const;

  bool operator==(const Universe&) const = default;

 private:
  std::vector<std::string> names_;
};

}  // namespace panda
