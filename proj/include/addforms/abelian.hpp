#pragma once

// Finite abelian groups presented as direct products of cyclic groups, and
// immutable bit-vector subsets of them.

#include "addforms/rational.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace addforms {

inline constexpr std::uint64_t kDefaultMaxOrder = std::uint64_t{1} << 20;

/// Mixed-radix index of a group element; the last cyclic factor varies fastest.
using ElementIndex = std::uint32_t;

class FiniteAbelianGroup {
 public:
  /// Z_{n_1} x ... x Z_{n_m}. Fails if a modulus is 0, the list is empty, or
  /// the order exceeds `max_order`.
  explicit FiniteAbelianGroup(std::vector<std::uint32_t> moduli, std::uint64_t max_order = kDefaultMaxOrder);

  const std::vector<std::uint32_t>& moduli() const { return moduli_; }
  std::uint32_t order() const { return order_; }
  std::size_t rank() const { return moduli_.size(); }
  /// Least common multiple of the moduli; c*g depends only on c mod exponent().
  std::uint32_t exponent() const { return exponent_; }

  std::uint32_t residue(ElementIndex a, std::size_t factor) const;
  std::vector<std::uint32_t> residues(ElementIndex a) const;
  /// Index of the element with the given residues, each reduced modulo its factor.
  ElementIndex index_of(std::span<const std::int64_t> residues) const;

  ElementIndex add(ElementIndex a, ElementIndex b) const;
  ElementIndex negate(ElementIndex a) const;
  ElementIndex subtract(ElementIndex a, ElementIndex b) const { return add(a, negate(b)); }
  ElementIndex scale(std::int64_t c, ElementIndex a) const;

  /// Residue tuple rendering: "3" for cyclic groups, "(3,0,1)" otherwise.
  std::string format_element(ElementIndex a) const;
  /// Group literal "Z9 x Z2".
  std::string to_string() const;

  bool operator==(const FiniteAbelianGroup& other) const { return moduli_ == other.moduli_; }

 private:
  std::vector<std::uint32_t> moduli_;
  std::vector<std::uint32_t> strides_;
  std::uint32_t order_ = 1;
  std::uint32_t exponent_ = 1;
  // residues of every element, row-major [index * rank + factor]; empty for cyclic groups
  std::vector<std::uint32_t> digits_;
};

using GroupPtr = std::shared_ptr<const FiniteAbelianGroup>;

GroupPtr make_group(std::vector<std::uint32_t> moduli, std::uint64_t max_order = kDefaultMaxOrder);

/// Parses `group := "Z" int ( "x" "Z" int )*`.
GroupPtr parse_group(std::string_view text, std::uint64_t max_order = kDefaultMaxOrder);

void require_same_group(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b);

class GroupElement {
 public:
  GroupElement(GroupPtr group, ElementIndex index);
  static GroupElement from_residues(GroupPtr group, std::span<const std::int64_t> residues);
  static GroupElement zero(GroupPtr group) { return GroupElement(std::move(group), 0); }

  const GroupPtr& group() const { return group_; }
  ElementIndex index() const { return index_; }
  std::vector<std::uint32_t> residues() const { return group_->residues(index_); }

  bool operator==(const GroupElement& other) const {
    return index_ == other.index_ && *group_ == *other.group_;
  }

 private:
  GroupPtr group_;
  ElementIndex index_;
};

GroupElement element_add(const GroupElement& a, const GroupElement& b);
GroupElement element_scale(std::int64_t c, const GroupElement& a);

class GroupSubset {
 public:
  /// Empty subset of `group`.
  explicit GroupSubset(GroupPtr group);

  static GroupSubset full(GroupPtr group);
  static GroupSubset from_indices(GroupPtr group, std::span<const ElementIndex> indices);
  static GroupSubset from_predicate(GroupPtr group, const std::function<bool(ElementIndex)>& member);
  /// Subset whose members are the set bits of `mask` (bit i <-> element i); order must be <= 64.
  static GroupSubset from_mask(GroupPtr group, std::uint64_t mask);

  const GroupPtr& group() const { return group_; }
  bool contains(ElementIndex a) const { return (words_[a >> 6] >> (a & 63)) & 1U; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  Rational density() const { return Rational(size_, group_->order()); }
  std::vector<ElementIndex> elements() const;

  GroupSubset negated() const;
  GroupSubset translated(ElementIndex by) const;
  GroupSubset complement() const;
  GroupSubset intersect(const GroupSubset& other) const;
  GroupSubset unite(const GroupSubset& other) const;

  bool operator==(const GroupSubset& other) const;

 private:
  GroupSubset(GroupPtr group, std::vector<std::uint64_t> words);

  GroupPtr group_;
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

GroupSubset sumset(const GroupSubset& a, const GroupSubset& b);
/// rB - sB; requires r + s >= 1.
GroupSubset signed_iterated_sumset(const GroupSubset& b, unsigned r, unsigned s);
/// {g : g + S = S}; the whole group for S empty.
GroupSubset stabilizer(const GroupSubset& s);
/// r_A(x) for every x, indexed by element index.
std::vector<std::uint64_t> representation_counts(const GroupSubset& a);
std::uint64_t additive_energy_raw(const GroupSubset& a);
/// additive_energy_raw(A) / |G|^3.
Rational additive_energy(const GroupSubset& a);
/// |A+A| / |A|; fails for empty A.
Rational doubling_constant(const GroupSubset& a);

/// Set literal "{0,2}" or "{(1,0),(2,1)}"; integers are residues of a cyclic
/// group or tuples for products.
GroupSubset parse_subset_literal(GroupPtr group, std::string_view text);
/// Ordered element list "3,5" or "(1,0),(2,1)"; duplicates are kept.
std::vector<ElementIndex> parse_element_list(const FiniteAbelianGroup& group, std::string_view text);
/// Subset file contents: one comma-separated residue tuple per line with '#'
/// comments, or a JSON array of residue arrays.
GroupSubset parse_subset_file(GroupPtr group, std::string_view contents);
/// Dispatches between the literal, JSON and line formats.
GroupSubset parse_subset(GroupPtr group, std::string_view text);
GroupSubset load_subset(GroupPtr group, const std::string& path);
std::string format_subset_file(const GroupSubset& a);
std::string format_subset_literal(const GroupSubset& a);

}  // namespace addforms
