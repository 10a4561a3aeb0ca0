#pragma once

// Transplantation between the coset representations of an almost conjugate
// pair, and its extension to an isometry of the two-step algebras.

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "nilgraph/group.hpp"
#include "nilgraph/lie.hpp"
#include "nilgraph/linalg.hpp"
#include "nilgraph/quadratic.hpp"
#include "nilgraph/schreier.hpp"

namespace nilgraph {

/// A square or rectangular matrix, exact when possible. `numeric` is always
/// filled; `exact_matrix` only when `exact` is set.
struct LinearMap {
  QuadraticMatrix exact_matrix;
  Eigen::MatrixXd numeric;
  bool exact = true;

  std::size_t rows() const { return static_cast<std::size_t>(numeric.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(numeric.cols()); }

  static LinearMap from_exact(QuadraticMatrix m);
  static LinearMap from_rational(const RationalMatrix& m);
  static LinearMap from_numeric(Eigen::MatrixXd m);

  friend bool operator==(const LinearMap& a, const LinearMap& b);
};

QuadraticMatrix to_quadratic(const RationalMatrix& m);
Eigen::MatrixXd to_eigen(const QuadraticMatrix& m);

/// Permutation matrix of a vertex map: column v has its 1 in row succ[v].
RationalMatrix permutation_matrix(std::span<const VertexId> succ);

/// Exact basis of {T : T A1(z) = A2(z) T for every label z}. Labels are
/// matched by index. Throws Error(IndexMismatch) when the vertex counts
/// differ.
std::vector<LinearMap> intertwiner_basis(const SchreierGraph& g1, const SchreierGraph& g2);
std::vector<LinearMap> intertwiner_basis(const FiniteGroup& g, std::span<const Permutation> h1_gens,
                                         std::span<const Permutation> h2_gens,
                                         const GeneratorSystem& c);

/// An orthogonal element of span(basis). Exact over Q or a real quadratic
/// field when the span has dimension <= 2 and such an element exists;
/// otherwise the polar factor of a generic element, rounded to rationals
/// and re-verified, or returned inexact with |T^T T - I|_inf <= 1e-9.
/// Throws Error(NoOrthogonalElement).
LinearMap orthogonal_intertwiner(const std::vector<LinearMap>& basis);

struct LabelTransplantResidual {
  std::string label;
  /// Sum of squared entries of T A1(z) - A2(z) T, resp. T j1(z) - j2(z) T.
  /// Exact when the map is exact, else zero with only the numeric value set.
  QuadraticNumber alpha;
  QuadraticNumber j;
  double alpha_numeric = 0;
  double j_numeric = 0;
};

struct TransplantReport {
  bool exact = true;
  bool ok = true;
  std::vector<LabelTransplantResidual> labels;
};

/// Checks both commutation relations label by label. Failures are data.
TransplantReport verify_transplant(const LinearMap& t, const SchreierGraph& g1,
                                   const SchreierGraph& g2, const NilpotentLieAlgebra& a1,
                                   const NilpotentLieAlgebra& a2);

/// Sum over basis pairs i < j of |phi[e_i, e_j]_1 - [phi e_i, phi e_j]_2|^2,
/// in exact arithmetic.
QuadraticNumber exact_bracket_residual(const QuadraticMatrix& phi, const NilpotentLieAlgebra& a1,
                                       const NilpotentLieAlgebra& a2);

/// T (+) Id on V (+) Z, checked to be orthogonal and bracket preserving
/// (exactly for exact T, to 1e-9 otherwise). Throws
/// Error(IsometryCheckFailed) or Error(DimensionMismatch).
LinearMap extend_two_step_isometry(const LinearMap& t, const NilpotentLieAlgebra& a1,
                                   const NilpotentLieAlgebra& a2);

}  // namespace nilgraph
