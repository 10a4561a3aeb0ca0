#include "nilgraph/lie.hpp"

#include <algorithm>

#include "nilgraph/errors.hpp"

namespace nilgraph {

const char* to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::V: return "V";
    case BasisKind::Z: return "Z";
    case BasisKind::T: return "T";
  }
  return "?";
}

NilpotentLieAlgebra::NilpotentLieAlgebra(std::vector<BasisElement> basis)
    : basis_(std::move(basis)) {
  int last = 0;
  for (auto& e : basis_) {
    const int k = static_cast<int>(e.kind);
    if (k < last) {
      throw Error(ErrorCode::InvalidArgument, "basis must be ordered V, Z, T");
    }
    last = k;
    e.index = static_cast<std::uint32_t>(dims_[k]++);
  }
}

std::size_t NilpotentLieAlgebra::offset(BasisKind kind) const {
  switch (kind) {
    case BasisKind::V: return 0;
    case BasisKind::Z: return dims_[0];
    case BasisKind::T: return dims_[0] + dims_[1];
  }
  return 0;
}

void NilpotentLieAlgebra::set_bracket(std::uint32_t i, std::uint32_t j,
                                      const SparseVector& value) {
  if (i == j) throw Error(ErrorCode::InvalidArgument, "[x, x] is always zero");
  if (i >= dimension() || j >= dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "basis index out of range");
  }
  SparseVector stored;
  for (const auto& [k, c] : value) {
    if (k >= dimension()) throw Error(ErrorCode::DimensionMismatch, "coefficient index out of range");
    if (c != 0) stored[k] = (i < j) ? Rational(c) : Rational(-c);
  }
  const auto key = std::minmax(i, j);
  if (stored.empty()) {
    brackets_.erase(key);
  } else {
    brackets_[key] = std::move(stored);
  }
}

SparseVector NilpotentLieAlgebra::basis_bracket(std::uint32_t i, std::uint32_t j) const {
  if (i == j) return {};
  const auto it = brackets_.find(std::minmax(i, j));
  if (it == brackets_.end()) return {};
  if (i < j) return it->second;
  SparseVector out;
  for (const auto& [k, c] : it->second) out[k] = -c;
  return out;
}

Vector basis_vector(std::size_t dim, std::size_t i) {
  Vector v(dim, Rational(0));
  v.at(i) = 1;
  return v;
}

Vector bracket(const NilpotentLieAlgebra& a, const Vector& x, const Vector& y) {
  return bracket_as<Rational>(a, x, y);
}

namespace {

std::vector<BasisElement> graded_basis(const SchreierGraph& graph, std::size_t t_dim) {
  std::vector<BasisElement> basis;
  for (const auto& name : graph.vertex_names) basis.push_back({BasisKind::V, 0, name});
  for (const auto& name : graph.labels) basis.push_back({BasisKind::Z, 0, name});
  for (std::size_t k = 0; k < t_dim; ++k) {
    basis.push_back({BasisKind::T, 0, t_dim == 1 ? "t" : "t" + std::to_string(k + 1)});
  }
  return basis;
}

void add_two_step_brackets(const SchreierGraph& graph, NilpotentLieAlgebra& a) {
  const std::size_t n = graph.vertex_count();
  for (std::size_t l = 0; l < graph.label_count(); ++l) {
    const auto z = static_cast<std::uint32_t>(n + l);
    const auto pred = graph.pred(l);
    for (VertexId i = 0; i < n; ++i) {
      for (VertexId j = i + 1; j < n; ++j) {
        const int eps = graph.succ[l][i] == j ? 1 : 0;
        const int eps_prime = pred[i] == j ? 1 : 0;
        if (eps == eps_prime) continue;
        SparseVector value = a.basis_bracket(i, j);
        value[z] += eps - eps_prime;
        a.set_bracket(i, j, value);
      }
    }
  }
}

bool is_zero_vector(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

}  // namespace

NilpotentLieAlgebra two_step(const SchreierGraph& graph) {
  NilpotentLieAlgebra a(graded_basis(graph, 0));
  add_two_step_brackets(graph, a);
  return a;
}

TAssignment generic_t_assignment(std::size_t admissible_count) {
  TAssignment t;
  t.t_dim = 2 * admissible_count;
  for (std::size_t k = 0; k < admissible_count; ++k) {
    t.per_label.push_back({basis_vector(t.t_dim, 2 * k), basis_vector(t.t_dim, 2 * k + 1)});
  }
  return t;
}

NilpotentLieAlgebra three_step(const SchreierGraph& graph, const TAssignment& t) {
  return three_step(graph, t, classify_labels(graph));
}

NilpotentLieAlgebra three_step(const SchreierGraph& graph, const TAssignment& t,
                               const AdmissibilityReport& report) {
  const auto admissible = report.admissible_labels();
  if (admissible.empty()) {
    throw Error(ErrorCode::NoAdmissibleLabel,
                "no label has a single closed path of length 3 or 4");
  }
  if (t.per_label.size() != admissible.size()) {
    throw Error(ErrorCode::InvalidTAssignment,
                "expected t-vectors for " + std::to_string(admissible.size()) +
                    " admissible labels, got " + std::to_string(t.per_label.size()));
  }
  if (t.t_dim == 0) throw Error(ErrorCode::InvalidTAssignment, "T-block must be nonempty");
  std::vector<Vector> all;
  for (std::size_t k = 0; k < t.per_label.size(); ++k) {
    for (const Vector& v : t.per_label[k]) {
      if (v.size() != t.t_dim) {
        throw Error(ErrorCode::InvalidTAssignment, "t-vector length differs from T-block size");
      }
      all.push_back(v);
    }
    if (is_zero_vector(t.per_label[k][0]) && is_zero_vector(t.per_label[k][1])) {
      throw Error(ErrorCode::AllZeroTAssignment,
                  "label " + report.labels[admissible[k]].label + " has t1 = t2 = 0");
    }
  }
  if (rank(rows_to_matrix(all, t.t_dim)) != t.t_dim) {
    throw Error(ErrorCode::InvalidTAssignment, "t-vectors do not span the T-block");
  }

  NilpotentLieAlgebra a(graded_basis(graph, t.t_dim));
  add_two_step_brackets(graph, a);
  const std::size_t n = graph.vertex_count();
  const std::size_t t0 = a.offset(BasisKind::T);
  const auto to_sparse = [&](const Vector& v, int sign) {
    SparseVector out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] != 0) out[static_cast<std::uint32_t>(t0 + k)] = sign * v[k];
    }
    return out;
  };
  for (std::size_t k = 0; k < admissible.size(); ++k) {
    const auto& cycle = report.labels[admissible[k]].cycle;
    const auto z = static_cast<std::uint32_t>(n + admissible[k]);
    const Vector& t1 = t.per_label[k][0];
    const Vector& t2 = t.per_label[k][1];
    if (cycle.size() == 4) {
      a.set_bracket(cycle[0], z, to_sparse(t1, 1));
      a.set_bracket(cycle[2], z, to_sparse(t1, -1));
      a.set_bracket(cycle[1], z, to_sparse(t2, 1));
      a.set_bracket(cycle[3], z, to_sparse(t2, -1));
    } else if (cycle.size() == 3) {
      Vector sum(t.t_dim);
      for (std::size_t c = 0; c < t.t_dim; ++c) sum[c] = t1[c] + t2[c];
      a.set_bracket(cycle[0], z, to_sparse(t1, 1));
      a.set_bracket(cycle[1], z, to_sparse(t2, 1));
      a.set_bracket(cycle[2], z, to_sparse(sum, -1));
    } else {
      throw Error(ErrorCode::InvalidArgument, "admissible cycle must have length 3 or 4");
    }
  }
  const JacobiReport jacobi = verify_jacobi(a);
  if (!jacobi.ok) {
    const auto& v = jacobi.violations.front();
    throw Error(ErrorCode::JacobiViolation,
                "three-step extension violates Jacobi at (" + std::to_string(v.i) + ", " +
                    std::to_string(v.j) + ", " + std::to_string(v.k) + ")");
  }
  return a;
}

namespace {

using BracketTable = std::vector<std::vector<SparseVector>>;

BracketTable bracket_table(const NilpotentLieAlgebra& a) {
  const auto n = static_cast<std::uint32_t>(a.dimension());
  BracketTable table(n, std::vector<SparseVector>(n));
  for (const auto& [ij, value] : a.entries()) {
    table[ij.first][ij.second] = value;
    for (const auto& [k, c] : value) table[ij.second][ij.first][k] = -c;
  }
  return table;
}

// [e_i, x]
void add_ad(const BracketTable& table, std::uint32_t i, const SparseVector& x, Vector& out) {
  for (const auto& [l, c] : x) {
    for (const auto& [k, d] : table[i][l]) out[k] += c * d;
  }
}

}  // namespace

JacobiReport verify_jacobi(const NilpotentLieAlgebra& a) {
  JacobiReport report;
  const auto n = static_cast<std::uint32_t>(a.dimension());
  const BracketTable table = bracket_table(a);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      for (std::uint32_t k = j + 1; k < n; ++k) {
        Vector r(n, Rational(0));
        add_ad(table, i, table[j][k], r);
        add_ad(table, j, table[k][i], r);
        add_ad(table, k, table[i][j], r);
        if (!is_zero_vector(r)) {
          report.ok = false;
          report.violations.push_back({i, j, k, std::move(r)});
        }
      }
  return report;
}

std::vector<Vector> bracket_span(const NilpotentLieAlgebra& a, const std::vector<Vector>& span) {
  const std::size_t n = a.dimension();
  std::vector<Vector> images;
  for (const Vector& x : span)
    for (std::size_t i = 0; i < n; ++i) images.push_back(bracket(a, x, basis_vector(n, i)));
  return span_basis(images, n);
}

std::vector<std::size_t> SeriesReport::descending_dims() const {
  std::vector<std::size_t> out;
  for (const auto& term : descending) out.push_back(term.size());
  return out;
}

std::vector<std::size_t> SeriesReport::ascending_dims() const {
  std::vector<std::size_t> out;
  for (const auto& term : ascending) out.push_back(term.size());
  return out;
}

SeriesReport central_series(const NilpotentLieAlgebra& a) {
  SeriesReport report;
  const std::size_t n = a.dimension();
  std::vector<Vector> term;
  for (std::size_t i = 0; i < n; ++i) term.push_back(basis_vector(n, i));
  report.descending.push_back(term);
  while (!term.empty()) {
    std::vector<Vector> next = bracket_span(a, term);
    if (next.size() == term.size()) break;  // stalled: not nilpotent
    report.descending.push_back(next);
    term = std::move(next);
  }
  report.nilpotent = term.empty();
  report.step = report.nilpotent ? report.descending.size() - 1 : 0;

  const BracketTable table = bracket_table(a);
  std::vector<Vector> center;
  while (center.size() < n) {
    // Rows spanning the annihilator of the current term: y with y . z = 0.
    std::vector<Vector> annihilator =
        center.empty() ? [&] {
          std::vector<Vector> id;
          for (std::size_t i = 0; i < n; ++i) id.push_back(basis_vector(n, i));
          return id;
        }()
                       : nullspace(rows_to_matrix(center, n));
    // w is in the next term iff y . [w, e_i] = 0 for all y, i.
    RationalMatrix system(annihilator.size() * n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t r = 0; r < annihilator.size(); ++r)
        for (std::size_t l = 0; l < n; ++l) {
          Rational s = 0;
          for (const auto& [k, c] : table[l][i]) s += annihilator[r][k] * c;
          system(i * annihilator.size() + r, l) = s;
        }
    std::vector<Vector> next = span_basis(nullspace(system), n);
    if (next.size() == center.size()) break;
    report.ascending.push_back(next);
    center = std::move(next);
  }
  return report;
}

JOperator j_operator(const NilpotentLieAlgebra& a, const SchreierGraph& graph, std::size_t label) {
  const std::size_t n = graph.vertex_count();
  if (a.dim_v() != n || a.dim_z() != graph.label_count()) {
    throw Error(ErrorCode::DimensionMismatch, "algebra does not belong to this graph");
  }
  if (label >= graph.label_count()) {
    throw Error(ErrorCode::UnknownLabel, "label index " + std::to_string(label));
  }
  JOperator j{RationalMatrix(n, n), RationalMatrix(n, n)};
  const auto pred = graph.pred(label);
  for (VertexId v = 0; v < n; ++v) {
    j.graph_formula(graph.succ[label][v], v) += 1;
    j.graph_formula(pred[v], v) -= 1;
  }
  const auto z = static_cast<std::uint32_t>(a.offset(BasisKind::Z) + label);
  for (VertexId v = 0; v < n; ++v)
    for (VertexId w = 0; w < n; ++w) {
      const SparseVector b = a.basis_bracket(v, w);
      const auto it = b.find(z);
      if (it != b.end()) j.adjoint(w, v) = it->second;
    }
  if (!(j.graph_formula == j.adjoint)) {
    throw Error(ErrorCode::AdjointMismatch,
                "graph formula and adjoint definition disagree for label " + graph.labels[label]);
  }
  return j;
}

}  // namespace nilgraph
