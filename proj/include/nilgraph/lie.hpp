#pragma once

// Nilpotent metric Lie algebras built from Schreier graphs, stored as exact
// sparse structure constants over an orthonormal graded basis
// V-block (vertices) | Z-block (labels) | T-block (extension).

#include <array>
#include <type_traits>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nilgraph/errors.hpp"
#include "nilgraph/linalg.hpp"
#include "nilgraph/rational.hpp"
#include "nilgraph/schreier.hpp"

namespace nilgraph {

enum class BasisKind { V, Z, T };
const char* to_string(BasisKind kind);

struct BasisElement {
  BasisKind kind = BasisKind::V;
  std::uint32_t index = 0;  // position within its block
  std::string name;

  friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

using Vector = std::vector<Rational>;
using SparseVector = std::map<std::uint32_t, Rational>;  // nonzero entries only

class NilpotentLieAlgebra {
 public:
  NilpotentLieAlgebra() = default;
  /// Basis must list the V-block, then Z, then T.
  explicit NilpotentLieAlgebra(std::vector<BasisElement> basis);

  std::size_t dimension() const { return basis_.size(); }
  const std::vector<BasisElement>& basis() const { return basis_; }
  std::size_t dim_v() const { return dims_[0]; }
  std::size_t dim_z() const { return dims_[1]; }
  std::size_t dim_t() const { return dims_[2]; }
  std::size_t offset(BasisKind kind) const;

  /// Sets [e_i, e_j] (and implicitly [e_j, e_i] = -[e_i, e_j]). Zero
  /// coefficients are dropped; i == j is rejected.
  void set_bracket(std::uint32_t i, std::uint32_t j, const SparseVector& value);
  /// [e_i, e_j] with the skew sign applied.
  SparseVector basis_bracket(std::uint32_t i, std::uint32_t j) const;
  /// Stored entries, keyed by (i, j) with i < j.
  const std::map<std::pair<std::uint32_t, std::uint32_t>, SparseVector>& entries() const {
    return brackets_;
  }

  friend bool operator==(const NilpotentLieAlgebra&, const NilpotentLieAlgebra&) = default;

 private:
  std::vector<BasisElement> basis_;
  std::array<std::size_t, 3> dims_{0, 0, 0};
  std::map<std::pair<std::uint32_t, std::uint32_t>, SparseVector> brackets_;
};

/// Bilinear extension of the structure constants. Throws
/// Error(DimensionMismatch).
Vector bracket(const NilpotentLieAlgebra& a, const Vector& x, const Vector& y);

template <class S>
S scalar_from(const Rational& r) {
  if constexpr (std::is_same_v<S, double>) {
    return r.get_d();
  } else {
    return S(r);
  }
}

/// bracket() over another scalar field (QuadraticNumber, double).
template <class S>
std::vector<S> bracket_as(const NilpotentLieAlgebra& a, const std::vector<S>& x,
                          const std::vector<S>& y) {
  if (x.size() != a.dimension() || y.size() != a.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "vector length differs from algebra dimension");
  }
  std::vector<S> out(a.dimension(), S(0));
  for (const auto& [ij, value] : a.entries()) {
    const S coeff = x[ij.first] * y[ij.second] - x[ij.second] * y[ij.first];
    if (coeff == S(0)) continue;
    for (const auto& [k, c] : value) out[k] += coeff * scalar_from<S>(c);
  }
  return out;
}

Vector basis_vector(std::size_t dim, std::size_t i);

/// Brackets [v_i, v_j] = sum_p (eps_p - eps'_p) z_p, eps_p = 1 iff
/// v_j = alpha(z_p)(v_i), eps'_p = 1 iff v_j = alpha(z_p^-1)(v_i).
NilpotentLieAlgebra two_step(const SchreierGraph& graph);

/// Choice of t_{k,1}, t_{k,2} for each admissible label k (in label order),
/// as coordinate vectors over a T-block of dimension t_dim.
struct TAssignment {
  std::size_t t_dim = 0;
  std::vector<std::array<Vector, 2>> per_label;
};

/// Independent unit vectors: t_{k,1} = e_{2k}, t_{k,2} = e_{2k+1}.
TAssignment generic_t_assignment(std::size_t admissible_count);

/// Extends two_step(graph) along each admissible cycle (c0, c1, c2[, c3]):
///   4-cycle: [c0,z] = -[c2,z] = t1,  [c1,z] = -[c3,z] = t2
///   3-cycle: [c0,z] = t1, [c1,z] = t2, [c2,z] = -(t1 + t2)
/// and [v, z] = 0 for every other vertex or inadmissible label. Jacobi is
/// re-verified on the result.
///
/// Throws NoAdmissibleLabel, AllZeroTAssignment (some label with
/// t1 = t2 = 0), InvalidTAssignment (shape mismatch, or the vectors do not
/// span the T-block), JacobiViolation (internal).
NilpotentLieAlgebra three_step(const SchreierGraph& graph, const TAssignment& t);
/// As above with an explicit report, e.g. one carrying rotated cycles.
NilpotentLieAlgebra three_step(const SchreierGraph& graph, const TAssignment& t,
                               const AdmissibilityReport& report);

struct JacobiViolation {
  std::uint32_t i = 0, j = 0, k = 0;
  Vector residual;
};

struct JacobiReport {
  bool ok = true;
  std::vector<JacobiViolation> violations;
};

/// Exhaustive check over basis triples i < j < k.
JacobiReport verify_jacobi(const NilpotentLieAlgebra& a);

struct SeriesReport {
  /// n^(0) = n, n^(k) = [n^(k-1), n]; ends at the first zero term (or at a
  /// repeated nonzero term if the algebra is not nilpotent).
  std::vector<std::vector<Vector>> descending;
  /// Z_1 = Z(n), Z_{k+1} = {w : [w, n] in Z_k}; ends at the whole algebra
  /// (or when the series stalls).
  std::vector<std::vector<Vector>> ascending;
  bool nilpotent = false;
  std::size_t step = 0;

  std::vector<std::size_t> descending_dims() const;
  std::vector<std::size_t> ascending_dims() const;
};

/// Exact spans; every basis is the canonical RREF basis of its subspace.
SeriesReport central_series(const NilpotentLieAlgebra& a);

/// Image of ad restricted to the span: span{[x, e_i] : x in span, all i}.
std::vector<Vector> bracket_span(const NilpotentLieAlgebra& a, const std::vector<Vector>& span);

struct JOperator {
  RationalMatrix graph_formula;  // j(z)v = alpha(z)(v) - alpha(z^-1)(v)
  RationalMatrix adjoint;        // <j(z)v, w> = <z, [v, w]>
};

/// Both routes for j(z) on the V-block, asserted equal entrywise. Throws
/// Error(AdjointMismatch) if they differ, Error(DimensionMismatch) if the
/// algebra does not match the graph.
JOperator j_operator(const NilpotentLieAlgebra& a, const SchreierGraph& graph, std::size_t label);

}  // namespace nilgraph
