#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nilgraph/group.hpp"

namespace nilgraph {

struct LabeledGenerator {
  std::string name;
  Permutation element;
};

/// C_pos: one representative per inverse pair, no identity, no involutions.
struct GeneratorSystem {
  std::vector<LabeledGenerator> c_pos;

  std::vector<Permutation> elements() const;
};

using VertexId = std::uint32_t;

/// Labeled directed Schreier graph on right cosets. succ[l][v] is the
/// vertex alpha(z_l)(v) = H g z_l^-1 for v = Hg; every succ[l] is a
/// permutation of the vertices.
struct SchreierGraph {
  std::vector<std::string> vertex_names;
  std::vector<std::string> labels;
  std::vector<std::vector<VertexId>> succ;

  // Group-theoretic context; empty for graphs loaded from JSON.
  std::vector<Permutation> vertex_reps;
  std::vector<Permutation> subgroup_elements;

  std::size_t vertex_count() const { return vertex_names.size(); }
  std::size_t label_count() const { return labels.size(); }
  /// Throws Error(UnknownLabel).
  std::size_t label_index(std::string_view label) const;
  /// pred[v] = alpha(z^-1)(v).
  std::vector<VertexId> pred(std::size_t label) const;
  bool has_group_context() const { return !vertex_reps.empty(); }
};

/// Validates and wraps raw adjacency (e.g. parsed JSON). Throws
/// Error(InvalidArgument) if some succ row is not a vertex permutation.
SchreierGraph make_graph(std::vector<std::string> vertex_names,
                         std::vector<std::string> labels,
                         std::vector<std::vector<VertexId>> succ);

/// Checks the GeneratorSystem invariants against G. Throws
/// IdentityInGenerators, InvolutionInGenerators, DuplicateGenerator or
/// GeneratorsDoNotGenerate.
void validate_generators(const FiniteGroup& g, const GeneratorSystem& c);

/// Vertices are numbered breadth-first from the coset H, visiting
/// alpha(z_1), alpha(z_1^-1), alpha(z_2), ... in label order. Vertex names
/// are "H" + cycle notation of the canonical coset representative, with
/// "He" for H itself.
SchreierGraph build_schreier(const FiniteGroup& g, std::span<const Permutation> h_gens,
                             const GeneratorSystem& c);

/// New graph whose vertex i is old vertex order[i], renamed to names[i].
SchreierGraph reorder_vertices(const SchreierGraph& graph, std::span<const VertexId> order,
                               std::vector<std::string> names);

/// Action of an arbitrary group element x on the vertices: v = Hg maps to
/// H g x^-1. Requires group context.
std::vector<VertexId> vertex_action(const SchreierGraph& graph, const Permutation& x);

struct CycleDecomposition {
  std::vector<std::vector<VertexId>> cycles;  // each starts at its minimal vertex
  std::vector<std::size_t> lengths;           // sorted ascending
};

CycleDecomposition label_cycles(const SchreierGraph& graph, std::size_t label);
CycleDecomposition label_cycles(const SchreierGraph& graph, std::string_view label);

enum class InadmissibleReason { NoLongCycle, MultipleLongCycles, CycleTooLong };
const char* to_string(InadmissibleReason reason);

struct LabelVerdict {
  std::string label;
  bool admissible = false;
  /// The unique 3- or 4-cycle, following succ from its minimal vertex.
  std::vector<VertexId> cycle;
  InadmissibleReason reason = InadmissibleReason::NoLongCycle;
};

struct AdmissibilityReport {
  std::vector<LabelVerdict> labels;

  std::vector<std::size_t> admissible_labels() const;
};

/// A label is admissible iff it has exactly one cycle of length 3 or 4 and
/// every other cycle has length 1 or 2. Reasons, in precedence order: a
/// cycle of length >= 5 (CycleTooLong), two or more cycles of length 3-4
/// (MultipleLongCycles), otherwise NoLongCycle.
AdmissibilityReport classify_labels(const SchreierGraph& graph);

enum class LabelMode { ExactLabels, AllowLabelPermutation };

struct GraphIsomorphism {
  std::vector<VertexId> vertex_map;   // g1 vertex -> g2 vertex
  std::vector<std::size_t> label_map; // g1 label -> g2 label
};

/// Exhaustive backtracking over vertex bijections (and label bijections when
/// allowed), in lexicographic order; returns the first witness.
std::optional<GraphIsomorphism> digraph_isomorphic(const SchreierGraph& g1,
                                                   const SchreierGraph& g2,
                                                   LabelMode mode);

std::string export_dot(const SchreierGraph& graph);

}  // namespace nilgraph
