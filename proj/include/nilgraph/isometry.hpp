#pragma once

// Evidence for or against isometry of metric nilpotent Lie algebras:
// invariant fingerprints plus a multi-start descent over block-orthogonal
// maps.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "nilgraph/gassmann.hpp"
#include "nilgraph/lie.hpp"

namespace nilgraph {

/// Intrinsic grading: T = second derived term, Z = derived algebra minus T,
/// V = orthogonal complement of the derived algebra.
struct GradingBlocks {
  std::size_t dv = 0, dz = 0, dt = 0;
  /// Columns form an orthonormal basis adapted to V | Z | T, in the original
  /// coordinates. A permutation matrix when the blocks are coordinate spans.
  Eigen::MatrixXd basis;
  bool coordinate_aligned = true;

  std::size_t dimension() const { return dv + dz + dt; }
};

GradingBlocks grading_blocks(const NilpotentLieAlgebra& a);

/// Dense structure constants in an orthonormal adapted basis:
/// slices[k](i, j) = coefficient of e_k in [e_i, e_j].
struct MetricAlgebra {
  GradingBlocks blocks;
  std::vector<Eigen::MatrixXd> slices;

  std::size_t dimension() const { return slices.size(); }
};

MetricAlgebra metric_algebra(const NilpotentLieAlgebra& a);

/// True when phi is orthogonal and maps each basis kind (V, Z, T) into
/// itself.
bool is_block_orthogonal(const QuadraticMatrix& phi, const NilpotentLieAlgebra& a);

/// new[x, y] = phi[phi^T x, phi^T y]. Throws Error(NotOrthogonal),
/// Error(NotBlockRespecting), or Error(InvalidArgument) if the result is
/// not rational.
NilpotentLieAlgebra transform(const NilpotentLieAlgebra& a, const LinearMap& phi);
/// Floating-point version on the adapted coordinates; phi must preserve
/// the block ranges (checked to 1e-9).
MetricAlgebra transform(const MetricAlgebra& a, const Eigen::MatrixXd& phi);

/// Sum over pairs i < j of |phi[e_i, e_j]_1 - [phi e_i, phi e_j]_2|^2.
double bracket_residual(const Eigen::MatrixXd& phi, const MetricAlgebra& a1, const MetricAlgebra& a2);
/// Same in the algebras' own coordinates.
double bracket_residual(const Eigen::MatrixXd& phi, const NilpotentLieAlgebra& a1,
                        const NilpotentLieAlgebra& a2);
/// Residual and its Euclidean gradient with respect to phi.
double bracket_residual_gradient(const Eigen::MatrixXd& phi, const MetricAlgebra& a1,
                                 const MetricAlgebra& a2, Eigen::MatrixXd& gradient);

struct Fingerprint {
  std::size_t dv = 0, dz = 0, dt = 0;
  std::vector<std::size_t> descending;
  std::vector<std::size_t> ascending;
  /// Sorted eigenvalues of sum_a J_a J_a^T (V-block slices along Z) and of
  /// sum_b K_b K_b^T (V x Z slices along T), rounded to 12 decimals.
  std::vector<double> j_spectrum;
  std::vector<double> k_spectrum;
  double frobenius = 0;  // sqrt(sum_{i<j} |[e_i, e_j]|^2), rounded

  bool exact_entries_equal(const Fingerprint& o) const;
  /// Exact entries equal and every float entry within tol.
  bool matches(const Fingerprint& o, double tol) const;
  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

/// Series dimensions computed exactly.
Fingerprint fingerprint(const NilpotentLieAlgebra& a);
/// Series dimensions by numerical rank (tolerance 1e-9).
Fingerprint fingerprint(const MetricAlgebra& a);

struct SearchConfig {
  std::size_t restarts = 200;
  std::size_t max_iterations = 2000;
  double tolerance = 1e-12;
  double initial_step = 0.05;
  double armijo = 1e-4;
  std::uint64_t seed = 1;
  /// 0: NILGRAPH_THREADS if set, else hardware concurrency.
  std::size_t threads = 0;
};

struct RestartTrace {
  std::uint64_t seed = 0;
  double final_residual = 0;
  std::size_t iterations = 0;
};

inline constexpr double kIsometricResidual = 1e-8;

struct SearchResult {
  /// "not_isometric", "isometric_numerical" or "no_isometry_found".
  std::string verdict;
  double best_residual = 0;
  std::size_t best_restart = 0;
  Eigen::MatrixXd best_map;  // in the algebras' own coordinates
  std::vector<RestartTrace> restarts;
  Fingerprint fingerprint_a, fingerprint_b;
};

/// Restart 0 starts at the identity, the others at Haar-random
/// block-orthogonal points. Deterministic in cfg.seed and independent of
/// thread count. Skipped (verdict not_isometric) when block dimensions or
/// exact fingerprint entries differ.
SearchResult search_isometry(const NilpotentLieAlgebra& a1, const NilpotentLieAlgebra& a2,
                             const SearchConfig& cfg);

/// Derived per-restart seed.
std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart);

}  // namespace nilgraph
