#pragma once

// Finite permutation groups at desk scale: every group and subgroup is
// enumerated explicitly.
//
// Composition convention (project-wide): compose(p, q) applies p first,
// then q, i.e. compose(p, q)(x) = q(p(x)). The group product g*h is
// compose(g, h). Right cosets Hg, the Schreier action and every fixture
// depend on this.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nilgraph {

using Point = std::uint32_t;

class Permutation {
 public:
  Permutation() = default;
  /// 0-based images; throws Error(InvalidPermutation) unless a bijection.
  explicit Permutation(std::vector<Point> images);

  static Permutation identity(std::size_t degree);
  /// Parses 1-based cycle notation, e.g. "(1 2 3)(4 5)"; "()" is the
  /// identity. Commas are accepted as separators.
  static Permutation from_cycles(std::string_view text, std::size_t degree);

  std::size_t degree() const { return images_.size(); }
  Point operator()(Point x) const { return images_[x]; }
  std::span<const Point> images() const { return images_; }
  bool is_identity() const;

  /// 1-based cycle notation; cycles start at their smallest point and are
  /// ordered by it. Identity prints as "()".
  std::string to_cycle_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Point> images_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept;
};

/// Apply p first, then q. Throws Error(DegreeMismatch).
Permutation compose(const Permutation& p, const Permutation& q);
Permutation inverse(const Permutation& p);
std::uint64_t element_order(const Permutation& p);

inline constexpr std::size_t kDefaultGroupCap = 1'000'000;

class FiniteGroup {
 public:
  std::size_t degree() const { return degree_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Permutation>& elements() const { return elements_; }
  const Permutation& operator[](std::size_t i) const { return elements_[i]; }
  /// Index of each generator (as passed to generate_group) in elements().
  const std::vector<std::size_t>& generator_indices() const { return generator_indices_; }

  std::optional<std::size_t> index_of(const Permutation& p) const;
  bool contains(const Permutation& p) const { return index_of(p).has_value(); }

 private:
  friend FiniteGroup generate_group(std::span<const Permutation>, std::size_t);

  std::size_t degree_ = 0;
  std::vector<Permutation> elements_;
  std::vector<std::size_t> generator_indices_;
  std::unordered_map<Permutation, std::size_t, PermutationHash> index_;
};

/// Breadth-first closure from the identity: each discovered element x is
/// expanded to x*g for the generators in order. Element 0 is the identity.
/// Throws Error(CapExceeded) when the closure passes `cap` elements.
FiniteGroup generate_group(std::span<const Permutation> gens,
                           std::size_t cap = kDefaultGroupCap);

/// Sorted element indices (into G) of the subgroup generated by h_gens; the
/// trivial subgroup for an empty list. Throws Error(SubgroupNotInGroup).
std::vector<std::size_t> enumerate_subgroup(const FiniteGroup& g,
                                            std::span<const Permutation> h_gens);

/// Partition of element indices into conjugacy classes. Each class is
/// sorted; classes are ordered by their smallest index, so the identity's
/// singleton class comes first.
std::vector<std::vector<std::size_t>> conjugacy_classes(const FiniteGroup& g);

struct CosetTable {
  /// Lexicographically minimal image array of each right coset Hg, in
  /// order of first appearance in G's element list.
  std::vector<Permutation> representatives;
  /// Coset index of every element of G (indexed like G's elements).
  std::vector<std::size_t> coset_of_element;
  /// Element indices of H.
  std::vector<std::size_t> subgroup;

  std::size_t size() const { return representatives.size(); }
  std::size_t index_of(std::size_t element_index) const {
    return coset_of_element.at(element_index);
  }
};

CosetTable right_cosets(const FiniteGroup& g, std::span<const Permutation> h_gens);

struct ClassCount {
  std::size_t class_index = 0;
  std::size_t class_size = 0;
  std::string representative;  // cycle notation of the class's first element
  std::size_t in_h1 = 0;
  std::size_t in_h2 = 0;
};

struct AlmostConjugacy {
  bool almost_conjugate = false;
  std::vector<ClassCount> counts;
};

AlmostConjugacy almost_conjugate(const FiniteGroup& g,
                                 std::span<const Permutation> h1_gens,
                                 std::span<const Permutation> h2_gens);

}  // namespace nilgraph
