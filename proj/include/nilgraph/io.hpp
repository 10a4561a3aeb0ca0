#pragma once

// Problem specs (TOML or JSON), fixtures, and JSON serialization of every
// artifact. Machine output uses insertion-ordered JSON so it is
// byte-deterministic.

#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nilgraph/gassmann.hpp"
#include "nilgraph/group.hpp"
#include "nilgraph/isometry.hpp"
#include "nilgraph/lie.hpp"
#include "nilgraph/schreier.hpp"

namespace nilgraph {

using Json = nlohmann::ordered_json;

struct NamedVertex {
  std::string name;
  Permutation representative;  // any element of the coset
};

struct SubgroupSpec {
  std::string name;
  std::vector<Permutation> generators;
  /// Optional renaming and ordering of the cosets.
  std::vector<NamedVertex> vertices;
  std::optional<TAssignment> t_assignment;
  /// Optional reference adjacency: label -> alpha(z)(v) by vertex name, in
  /// vertex order.
  std::vector<std::pair<std::string, std::vector<std::string>>> figure;
};

struct ProblemSpec {
  std::string name;
  std::size_t degree = 0;
  /// Generators of G; defaults to the labelled generators.
  std::vector<Permutation> group_generators;
  GeneratorSystem generators;
  std::vector<SubgroupSpec> subgroups;  // one or two
  std::optional<SearchConfig> search;
};

/// JSON if the first non-space character is '{', TOML otherwise. Errors:
/// SpecSyntax (with line), SpecSchema (with field path and, for TOML, line),
/// and the group/schreier codes with the offending field.
ProblemSpec parse_spec(std::string_view text);
ProblemSpec load_spec(const std::string& path);

/// Directory holding the pinned example specs.
std::string fixture_dir();
ProblemSpec load_fixture(const std::string& name);  // e.g. "sl32"

FiniteGroup spec_group(const ProblemSpec& spec);
/// Schreier graph for one subgroup, renamed and reordered by its vertex
/// list when one is given.
SchreierGraph spec_graph(const ProblemSpec& spec, const FiniteGroup& g, std::size_t subgroup);

std::string read_file(const std::string& path);

Json permutation_to_json(const Permutation& p);  // cycle string
Permutation permutation_from_json(const Json& j, std::size_t degree);  // cycles or 0-based images

Json graph_to_json(const SchreierGraph& g);
SchreierGraph graph_from_json(const Json& j);

Json algebra_to_json(const NilpotentLieAlgebra& a);
NilpotentLieAlgebra algebra_from_json(const Json& j);

Json t_assignment_to_json(const TAssignment& t);
TAssignment t_assignment_from_json(const Json& j);

Json linear_map_to_json(const LinearMap& m);
LinearMap linear_map_from_json(const Json& j);

Json admissibility_to_json(const AdmissibilityReport& r, const SchreierGraph& g);
Json jacobi_to_json(const JacobiReport& r);
Json series_to_json(const SeriesReport& r);
Json almost_conjugacy_to_json(const AlmostConjugacy& r);
Json transplant_to_json(const TransplantReport& r);
Json fingerprint_to_json(const Fingerprint& f);
Fingerprint fingerprint_from_json(const Json& j);
Json search_result_to_json(const SearchResult& r);
SearchResult search_result_from_json(const Json& j);

Json rational_vector_to_json(const Vector& v);
Vector rational_vector_from_json(const Json& j);

}  // namespace nilgraph
