#include "nilgraph/schreier.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "nilgraph/errors.hpp"

namespace nilgraph {

std::vector<Permutation> GeneratorSystem::elements() const {
  std::vector<Permutation> out;
  out.reserve(c_pos.size());
  for (const auto& g : c_pos) out.push_back(g.element);
  return out;
}

std::size_t SchreierGraph::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw Error(ErrorCode::UnknownLabel, "no label named '" + std::string(label) + "'");
}

std::vector<VertexId> SchreierGraph::pred(std::size_t label) const {
  std::vector<VertexId> out(vertex_count());
  for (VertexId v = 0; v < vertex_count(); ++v) out[succ.at(label)[v]] = v;
  return out;
}

SchreierGraph make_graph(std::vector<std::string> vertex_names,
                         std::vector<std::string> labels,
                         std::vector<std::vector<VertexId>> succ) {
  if (succ.size() != labels.size()) {
    throw Error(ErrorCode::InvalidArgument, "one successor array per label required");
  }
  const std::size_t n = vertex_names.size();
  for (std::size_t l = 0; l < succ.size(); ++l) {
    std::vector<bool> hit(n, false);
    if (succ[l].size() != n) {
      throw Error(ErrorCode::InvalidArgument, "succ[" + labels[l] + "] has wrong length");
    }
    for (VertexId w : succ[l]) {
      if (w >= n || hit[w]) {
        throw Error(ErrorCode::InvalidArgument,
                    "succ[" + labels[l] + "] is not a permutation of the vertices");
      }
      hit[w] = true;
    }
  }
  SchreierGraph g;
  g.vertex_names = std::move(vertex_names);
  g.labels = std::move(labels);
  g.succ = std::move(succ);
  return g;
}

void validate_generators(const FiniteGroup& g, const GeneratorSystem& c) {
  if (c.c_pos.empty()) throw Error(ErrorCode::GeneratorsDoNotGenerate, "C_pos is empty");
  for (const auto& [name, z] : c.c_pos) {
    if (z.degree() != g.degree()) {
      throw Error(ErrorCode::DegreeMismatch, "generator " + name + " has wrong degree");
    }
    if (z.is_identity()) {
      throw Error(ErrorCode::IdentityInGenerators, "generator " + name + " is the identity");
    }
    if (element_order(z) == 2) {
      throw Error(ErrorCode::InvolutionInGenerators,
                  "generator " + name + " = " + z.to_cycle_string() + " has order 2");
    }
    if (!g.contains(z)) {
      throw Error(ErrorCode::GeneratorsDoNotGenerate, "generator " + name + " is not in G");
    }
  }
  for (std::size_t i = 0; i < c.c_pos.size(); ++i) {
    for (std::size_t j = i + 1; j < c.c_pos.size(); ++j) {
      const Permutation& a = c.c_pos[i].element;
      const Permutation& b = c.c_pos[j].element;
      if (a == b || a == inverse(b)) {
        throw Error(ErrorCode::DuplicateGenerator,
                    c.c_pos[i].name + " and " + c.c_pos[j].name + " are equal or inverse");
      }
    }
  }
  const auto gens = c.elements();
  if (generate_group(gens, g.order()).order() != g.order()) {
    throw Error(ErrorCode::GeneratorsDoNotGenerate, "C_pos generates a proper subgroup");
  }
}

SchreierGraph build_schreier(const FiniteGroup& g, std::span<const Permutation> h_gens,
                             const GeneratorSystem& c) {
  validate_generators(g, c);
  const CosetTable table = right_cosets(g, h_gens);
  const std::size_t n = table.size();

  std::vector<Permutation> forward;   // z^-1: alpha(z)(Hg) = H g z^-1
  std::vector<Permutation> backward;  // z:    alpha(z^-1)(Hg) = H g z
  for (const auto& gen : c.c_pos) {
    forward.push_back(inverse(gen.element));
    backward.push_back(gen.element);
  }
  const auto coset_after = [&](std::size_t coset, const Permutation& x) {
    return table.index_of(*g.index_of(compose(table.representatives[coset], x)));
  };

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> vertex_of_coset(n, kNone);
  std::vector<std::size_t> coset_of_vertex;
  const auto visit = [&](std::size_t coset) {
    if (vertex_of_coset[coset] != kNone) return;
    vertex_of_coset[coset] = coset_of_vertex.size();
    coset_of_vertex.push_back(coset);
  };
  visit(table.index_of(0));
  for (std::size_t head = 0; head < coset_of_vertex.size(); ++head) {
    for (std::size_t l = 0; l < c.c_pos.size(); ++l) {
      visit(coset_after(coset_of_vertex[head], forward[l]));
      visit(coset_after(coset_of_vertex[head], backward[l]));
    }
  }

  SchreierGraph graph;
  for (const auto& gen : c.c_pos) graph.labels.push_back(gen.name);
  graph.succ.assign(c.c_pos.size(), std::vector<VertexId>(n));
  for (std::size_t v = 0; v < n; ++v) {
    const Permutation& rep = table.representatives[coset_of_vertex[v]];
    graph.vertex_reps.push_back(rep);
    graph.vertex_names.push_back(rep.is_identity() ? "He" : "H" + rep.to_cycle_string());
    for (std::size_t l = 0; l < c.c_pos.size(); ++l) {
      graph.succ[l][v] = static_cast<VertexId>(
          vertex_of_coset[coset_after(coset_of_vertex[v], forward[l])]);
    }
  }
  for (std::size_t e : table.subgroup) graph.subgroup_elements.push_back(g[e]);
  return graph;
}

SchreierGraph reorder_vertices(const SchreierGraph& graph, std::span<const VertexId> order,
                               std::vector<std::string> names) {
  const std::size_t n = graph.vertex_count();
  if (order.size() != n || names.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "vertex order must cover every vertex");
  }
  std::vector<VertexId> new_of_old(n, static_cast<VertexId>(n));
  for (VertexId i = 0; i < n; ++i) {
    if (order[i] >= n || new_of_old[order[i]] != n) {
      throw Error(ErrorCode::InvalidArgument, "vertex order is not a permutation");
    }
    new_of_old[order[i]] = i;
  }
  SchreierGraph out;
  out.vertex_names = std::move(names);
  out.labels = graph.labels;
  out.succ.assign(graph.label_count(), std::vector<VertexId>(n));
  for (std::size_t l = 0; l < graph.label_count(); ++l)
    for (VertexId i = 0; i < n; ++i) out.succ[l][i] = new_of_old[graph.succ[l][order[i]]];
  if (graph.has_group_context()) {
    for (VertexId i = 0; i < n; ++i) out.vertex_reps.push_back(graph.vertex_reps[order[i]]);
    out.subgroup_elements = graph.subgroup_elements;
  }
  return out;
}

std::vector<VertexId> vertex_action(const SchreierGraph& graph, const Permutation& x) {
  if (!graph.has_group_context()) {
    throw Error(ErrorCode::InvalidArgument, "graph carries no coset representatives");
  }
  // Hg x^-1 = Hr  iff  g x^-1 r^-1 in H
  std::unordered_map<Permutation, bool, PermutationHash> in_h;
  for (const auto& h : graph.subgroup_elements) in_h.emplace(h, true);
  const Permutation x_inv = inverse(x);
  std::vector<VertexId> out(graph.vertex_count());
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    const Permutation moved = compose(graph.vertex_reps[v], x_inv);
    bool found = false;
    for (VertexId w = 0; w < graph.vertex_count() && !found; ++w) {
      if (in_h.contains(compose(moved, inverse(graph.vertex_reps[w])))) {
        out[v] = w;
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::InvalidArgument, "element does not act on these cosets");
  }
  return out;
}

CycleDecomposition label_cycles(const SchreierGraph& graph, std::size_t label) {
  if (label >= graph.label_count()) {
    throw Error(ErrorCode::UnknownLabel, "label index " + std::to_string(label));
  }
  CycleDecomposition out;
  const auto& s = graph.succ[label];
  std::vector<bool> seen(graph.vertex_count(), false);
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    if (seen[v]) continue;
    std::vector<VertexId> cycle;
    VertexId x = v;
    do {
      seen[x] = true;
      cycle.push_back(x);
      x = s[x];
    } while (x != v);
    out.lengths.push_back(cycle.size());
    out.cycles.push_back(std::move(cycle));
  }
  std::sort(out.lengths.begin(), out.lengths.end());
  return out;
}

CycleDecomposition label_cycles(const SchreierGraph& graph, std::string_view label) {
  return label_cycles(graph, graph.label_index(label));
}

const char* to_string(InadmissibleReason reason) {
  switch (reason) {
    case InadmissibleReason::NoLongCycle: return "NoLongCycle";
    case InadmissibleReason::MultipleLongCycles: return "MultipleLongCycles";
    case InadmissibleReason::CycleTooLong: return "CycleTooLong";
  }
  return "Unknown";
}

std::vector<std::size_t> AdmissibilityReport::admissible_labels() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].admissible) out.push_back(i);
  }
  return out;
}

AdmissibilityReport classify_labels(const SchreierGraph& graph) {
  AdmissibilityReport report;
  for (std::size_t l = 0; l < graph.label_count(); ++l) {
    const CycleDecomposition d = label_cycles(graph, l);
    LabelVerdict verdict;
    verdict.label = graph.labels[l];
    std::size_t long_cycles = 0;
    bool too_long = false;
    const std::vector<VertexId>* candidate = nullptr;
    for (const auto& cycle : d.cycles) {
      if (cycle.size() >= 5) too_long = true;
      if (cycle.size() == 3 || cycle.size() == 4) {
        ++long_cycles;
        candidate = &cycle;
      }
    }
    if (too_long) {
      verdict.reason = InadmissibleReason::CycleTooLong;
    } else if (long_cycles >= 2) {
      verdict.reason = InadmissibleReason::MultipleLongCycles;
    } else if (long_cycles == 0) {
      verdict.reason = InadmissibleReason::NoLongCycle;
    } else {
      verdict.admissible = true;
      verdict.cycle = *candidate;
    }
    report.labels.push_back(std::move(verdict));
  }
  return report;
}

namespace {

bool extend_vertex_map(const SchreierGraph& g1, const SchreierGraph& g2,
                       const std::vector<std::size_t>& label_map,
                       const std::vector<std::vector<VertexId>>& pred1,
                       std::vector<VertexId>& f, std::vector<bool>& used, VertexId v) {
  const std::size_t n = g1.vertex_count();
  if (v == n) return true;
  constexpr VertexId kFree = static_cast<VertexId>(-1);
  for (VertexId w = 0; w < n; ++w) {
    if (used[w]) continue;
    f[v] = w;
    bool ok = true;
    for (std::size_t l = 0; l < g1.label_count() && ok; ++l) {
      const auto& s2 = g2.succ[label_map[l]];
      const VertexId out = g1.succ[l][v];
      if (f[out] != kFree && s2[w] != f[out]) ok = false;
      const VertexId in = pred1[l][v];
      if (ok && f[in] != kFree && s2[f[in]] != w) ok = false;
    }
    if (ok) {
      used[w] = true;
      if (extend_vertex_map(g1, g2, label_map, pred1, f, used, v + 1)) return true;
      used[w] = false;
    }
    f[v] = kFree;
  }
  return false;
}

}  // namespace

std::optional<GraphIsomorphism> digraph_isomorphic(const SchreierGraph& g1,
                                                   const SchreierGraph& g2,
                                                   LabelMode mode) {
  if (g1.vertex_count() != g2.vertex_count() || g1.label_count() != g2.label_count()) {
    return std::nullopt;
  }
  std::vector<std::vector<VertexId>> pred1;
  for (std::size_t l = 0; l < g1.label_count(); ++l) pred1.push_back(g1.pred(l));
  std::vector<std::size_t> label_map(g1.label_count());
  std::iota(label_map.begin(), label_map.end(), std::size_t{0});
  do {
    std::vector<VertexId> f(g1.vertex_count(), static_cast<VertexId>(-1));
    std::vector<bool> used(g1.vertex_count(), false);
    if (extend_vertex_map(g1, g2, label_map, pred1, f, used, 0)) {
      return GraphIsomorphism{std::move(f), label_map};
    }
  } while (mode == LabelMode::AllowLabelPermutation &&
           std::next_permutation(label_map.begin(), label_map.end()));
  return std::nullopt;
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string export_dot(const SchreierGraph& graph) {
  static constexpr const char* kStyles[] = {"solid", "dashed", "dotted", "bold"};
  static constexpr const char* kColors[] = {"black", "blue", "red", "darkgreen",
                                            "purple", "orange"};
  std::ostringstream out;
  out << "digraph schreier {\n";
  out << "  node [shape=circle];\n";
  for (const auto& name : graph.vertex_names) out << "  " << quoted(name) << ";\n";
  for (std::size_t l = 0; l < graph.label_count(); ++l) {
    const char* style = kStyles[l % std::size(kStyles)];
    const char* color = kColors[l % std::size(kColors)];
    for (VertexId v = 0; v < graph.vertex_count(); ++v) {
      out << "  " << quoted(graph.vertex_names[v]) << " -> "
          << quoted(graph.vertex_names[graph.succ[l][v]]) << " [label=" << quoted(graph.labels[l])
          << ", style=" << style << ", color=" << color << "];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace nilgraph
