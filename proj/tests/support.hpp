#pragma once

// Shared fixtures and hand-rolled random generators for the tests.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <random>
#include <string>
#include <vector>

#include "nilgraph/errors.hpp"
#include "nilgraph/group.hpp"
#include "nilgraph/io.hpp"
#include "nilgraph/lie.hpp"
#include "nilgraph/schreier.hpp"

namespace nilgraph::testing {

struct Example {
  ProblemSpec spec;
  FiniteGroup group;
  std::vector<SchreierGraph> graphs;
};

inline Example load_example(const std::string& name) {
  Example e;
  e.spec = load_fixture(name);
  e.group = spec_group(e.spec);
  for (std::size_t s = 0; s < e.spec.subgroups.size(); ++s) {
    e.graphs.push_back(spec_graph(e.spec, e.group, s));
  }
  return e;
}

inline const Example& sl32() {
  static const Example e = load_example("sl32");
  return e;
}

inline const Example& s4() {
  static const Example e = load_example("s4_s3");
  return e;
}

inline NilpotentLieAlgebra sl32_three_step(std::size_t which) {
  const Example& e = sl32();
  return three_step(e.graphs[which], *e.spec.subgroups[which].t_assignment);
}

inline std::size_t index_of_name(const NilpotentLieAlgebra& a, const std::string& name) {
  for (std::size_t i = 0; i < a.dimension(); ++i)
    if (a.basis()[i].name == name) return i;
  throw std::runtime_error("no basis element " + name);
}

/// Coordinate vector from a sparse list of (basis name, coefficient).
inline Vector named_vector(const NilpotentLieAlgebra& a,
                           std::initializer_list<std::pair<const char*, long>> terms) {
  Vector v(a.dimension(), Rational(0));
  for (const auto& [name, c] : terms) v[index_of_name(a, name)] += c;
  return v;
}

inline Permutation random_permutation(std::size_t degree, std::mt19937_64& rng) {
  std::vector<Point> images(degree);
  for (std::size_t i = 0; i < degree; ++i) images[i] = static_cast<Point>(i);
  std::shuffle(images.begin(), images.end(), rng);
  return Permutation(images);
}

inline Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-6, 6);
  std::uniform_int_distribution<long> den(1, 4);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline Vector random_vector(std::size_t n, std::mt19937_64& rng) {
  Vector v(n);
  for (auto& x : v) x = random_rational(rng);
  return v;
}

/// Random permutation group data for property tests: a few random
/// generators of a small degree, with a random subgroup generated by one
/// element, keeping only systems that satisfy the generator invariants.
struct RandomSystem {
  FiniteGroup group;
  GeneratorSystem c;
  std::vector<Permutation> h_gens;
};

inline std::optional<RandomSystem> random_system(std::mt19937_64& rng, std::size_t max_order = 200) {
  std::uniform_int_distribution<std::size_t> degree_dist(3, 6);
  std::uniform_int_distribution<int> count_dist(1, 2);
  const std::size_t degree = degree_dist(rng);
  RandomSystem s;
  const int count = count_dist(rng);
  for (int k = 0; k < count; ++k) {
    s.c.c_pos.push_back({"z" + std::to_string(k + 1), random_permutation(degree, rng)});
  }
  try {
    s.group = generate_group(s.c.elements(), max_order);
    validate_generators(s.group, s.c);
  } catch (const Error&) {
    return std::nullopt;
  }
  std::uniform_int_distribution<std::size_t> pick(0, s.group.order() - 1);
  s.h_gens.push_back(s.group[pick(rng)]);
  return s;
}

}  // namespace nilgraph::testing
