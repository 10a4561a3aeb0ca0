#include "nilgraph/isometry.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <thread>

#include "nilgraph/errors.hpp"

namespace nilgraph {

namespace {

constexpr double kRankTol = 1e-9;

bool is_coordinate_span(const std::vector<Vector>& rows, std::vector<std::size_t>& coords) {
  coords.clear();
  for (const Vector& row : rows) {
    std::size_t nonzero = 0, at = 0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] != 0) {
        ++nonzero;
        at = k;
      }
    }
    if (nonzero != 1) return false;
    coords.push_back(at);
  }
  return true;
}

Eigen::VectorXd to_eigen_vector(const Vector& v) {
  Eigen::VectorXd out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k].get_d();
  return out;
}

// Appends to `basis` an orthonormal basis for span(candidates) modulo the
// current columns.
void extend_orthonormal(std::vector<Eigen::VectorXd>& basis,
                        const std::vector<Eigen::VectorXd>& candidates) {
  for (Eigen::VectorXd v : candidates) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= b.dot(v) * b;
    const double norm = v.norm();
    if (norm > kRankTol) basis.push_back(v / norm);
  }
}

}  // namespace

GradingBlocks grading_blocks(const NilpotentLieAlgebra& a) {
  const std::size_t n = a.dimension();
  const SeriesReport series = central_series(a);
  const std::vector<Vector> empty;
  const auto& d1 = series.descending.size() > 1 ? series.descending[1] : empty;
  const auto& d2 = series.descending.size() > 2 ? series.descending[2] : empty;

  GradingBlocks blocks;
  blocks.dt = d2.size();
  blocks.dz = d1.size() - d2.size();
  blocks.dv = n - d1.size();
  blocks.basis = Eigen::MatrixXd::Zero(n, n);

  std::vector<std::size_t> c1, c2;
  if (is_coordinate_span(d1, c1) && is_coordinate_span(d2, c2)) {
    std::vector<int> block(n, 0);
    for (std::size_t k : c1) block[k] = 1;
    for (std::size_t k : c2) block[k] = 2;
    std::size_t col = 0;
    for (int b = 0; b < 3; ++b)
      for (std::size_t k = 0; k < n; ++k)
        if (block[k] == b) blocks.basis(k, col++) = 1;
    blocks.coordinate_aligned = true;
    return blocks;
  }

  blocks.coordinate_aligned = false;
  std::vector<Eigen::VectorXd> cols, cand;
  for (const auto& v : d2) cand.push_back(to_eigen_vector(v));
  extend_orthonormal(cols, cand);
  cand.clear();
  for (const auto& v : d1) cand.push_back(to_eigen_vector(v));
  extend_orthonormal(cols, cand);
  cand.clear();
  for (std::size_t k = 0; k < n; ++k) cand.push_back(Eigen::VectorXd::Unit(n, k));
  extend_orthonormal(cols, cand);
  // cols is ordered T | Z | V; store as V | Z | T.
  std::size_t col = 0;
  for (std::size_t k = d1.size(); k < n; ++k) blocks.basis.col(col++) = cols[k];
  for (std::size_t k = d2.size(); k < d1.size(); ++k) blocks.basis.col(col++) = cols[k];
  for (std::size_t k = 0; k < d2.size(); ++k) blocks.basis.col(col++) = cols[k];
  return blocks;
}

MetricAlgebra metric_algebra(const NilpotentLieAlgebra& a) {
  const std::size_t n = a.dimension();
  MetricAlgebra m;
  m.blocks = grading_blocks(a);
  std::vector<Eigen::MatrixXd> raw(n, Eigen::MatrixXd::Zero(n, n));
  for (const auto& [ij, value] : a.entries()) {
    for (const auto& [k, c] : value) {
      raw[k](ij.first, ij.second) = c.get_d();
      raw[k](ij.second, ij.first) = -c.get_d();
    }
  }
  const Eigen::MatrixXd& b = m.blocks.basis;
  m.slices.assign(n, Eigen::MatrixXd::Zero(n, n));
  for (std::size_t kp = 0; kp < n; ++kp) {
    if (raw[kp].isZero(0)) continue;
    const Eigen::MatrixXd rotated = b.transpose() * raw[kp] * b;
    for (std::size_t k = 0; k < n; ++k) {
      if (b(kp, k) != 0) m.slices[k] += b(kp, k) * rotated;
    }
  }
  return m;
}

bool is_block_orthogonal(const QuadraticMatrix& phi, const NilpotentLieAlgebra& a) {
  const std::size_t n = a.dimension();
  if (phi.rows() != n || phi.cols() != n) return false;
  if (!(phi.transpose() * phi == QuadraticMatrix::identity(n))) return false;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (!phi(r, c).is_zero() && a.basis()[r].kind != a.basis()[c].kind) return false;
  return true;
}

NilpotentLieAlgebra transform(const NilpotentLieAlgebra& a, const LinearMap& phi) {
  const std::size_t n = a.dimension();
  if (!phi.exact) throw Error(ErrorCode::InvalidArgument, "exact transform needs an exact map");
  const QuadraticMatrix& m = phi.exact_matrix;
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "map size differs from algebra dimension");
  }
  if (!(m.transpose() * m == QuadraticMatrix::identity(n))) {
    throw Error(ErrorCode::NotOrthogonal, "map is not orthogonal");
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (!m(r, c).is_zero() && a.basis()[r].kind != a.basis()[c].kind) {
        throw Error(ErrorCode::NotBlockRespecting, "map mixes basis blocks");
      }
  NilpotentLieAlgebra out(a.basis());
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const auto inner = bracket_as<QuadraticNumber>(a, m.row(i), m.row(j));
      SparseVector value;
      for (std::size_t k = 0; k < n; ++k) {
        QuadraticNumber s = 0;
        for (std::size_t l = 0; l < n; ++l) {
          if (!inner[l].is_zero() && !m(k, l).is_zero()) s += m(k, l) * inner[l];
        }
        if (s.is_zero()) continue;
        if (!s.is_rational()) {
          throw Error(ErrorCode::InvalidArgument, "transformed structure constants are irrational");
        }
        value[static_cast<std::uint32_t>(k)] = s.rational_part();
      }
      out.set_bracket(i, j, value);
    }
  return out;
}

namespace {

void check_block_orthogonal(const Eigen::MatrixXd& phi, const GradingBlocks& blocks) {
  const auto n = static_cast<Eigen::Index>(blocks.dimension());
  if (phi.rows() != n || phi.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "map size differs from algebra dimension");
  }
  if ((phi.transpose() * phi - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorCode::NotOrthogonal, "map is not orthogonal");
  }
  const auto block_of = [&](Eigen::Index k) {
    return k < static_cast<Eigen::Index>(blocks.dv) ? 0
           : k < static_cast<Eigen::Index>(blocks.dv + blocks.dz) ? 1
                                                                  : 2;
  };
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      if (block_of(r) != block_of(c) && std::abs(phi(r, c)) > 1e-9) {
        throw Error(ErrorCode::NotBlockRespecting, "map mixes grading blocks");
      }
}

}  // namespace

MetricAlgebra transform(const MetricAlgebra& a, const Eigen::MatrixXd& phi) {
  check_block_orthogonal(phi, a.blocks);
  const std::size_t n = a.dimension();
  MetricAlgebra out;
  out.blocks = a.blocks;
  out.slices.assign(n, Eigen::MatrixXd::Zero(n, n));
  for (std::size_t kp = 0; kp < n; ++kp) {
    const Eigen::MatrixXd rotated = phi * a.slices[kp] * phi.transpose();
    for (std::size_t k = 0; k < n; ++k) out.slices[k] += phi(k, kp) * rotated;
  }
  return out;
}

double bracket_residual_gradient(const Eigen::MatrixXd& phi, const MetricAlgebra& a1,
                                 const MetricAlgebra& a2, Eigen::MatrixXd& gradient) {
  // E_k = sum_l phi_kl S1_l - phi^T S2_k phi is skew, so the pair sum is
  // half the squared Frobenius norm.
  const std::size_t n = a1.dimension();
  gradient = Eigen::MatrixXd::Zero(n, n);
  double residual = 0;
  for (std::size_t k = 0; k < n; ++k) {
    Eigen::MatrixXd e = -phi.transpose() * a2.slices[k] * phi;
    for (std::size_t l = 0; l < n; ++l) {
      if (phi(k, l) != 0) e += phi(k, l) * a1.slices[l];
    }
    residual += 0.5 * e.squaredNorm();
    for (std::size_t l = 0; l < n; ++l) gradient(k, l) += e.cwiseProduct(a1.slices[l]).sum();
    gradient += 2.0 * a2.slices[k] * phi * e;
  }
  return residual;
}

double bracket_residual(const Eigen::MatrixXd& phi, const MetricAlgebra& a1, const MetricAlgebra& a2) {
  if (a1.dimension() != a2.dimension() || static_cast<std::size_t>(phi.rows()) != a1.dimension() ||
      static_cast<std::size_t>(phi.cols()) != a1.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "map and algebras have incompatible sizes");
  }
  const std::size_t n = a1.dimension();
  double residual = 0;
  for (std::size_t k = 0; k < n; ++k) {
    Eigen::MatrixXd e = -phi.transpose() * a2.slices[k] * phi;
    for (std::size_t l = 0; l < n; ++l) {
      if (phi(k, l) != 0) e += phi(k, l) * a1.slices[l];
    }
    residual += 0.5 * e.squaredNorm();
  }
  return residual;
}

double bracket_residual(const Eigen::MatrixXd& phi, const NilpotentLieAlgebra& a1,
                        const NilpotentLieAlgebra& a2) {
  const MetricAlgebra m1 = metric_algebra(a1);
  const MetricAlgebra m2 = metric_algebra(a2);
  if (static_cast<std::size_t>(phi.rows()) != a2.dimension() ||
      static_cast<std::size_t>(phi.cols()) != a1.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "map and algebras have incompatible sizes");
  }
  return bracket_residual(m2.blocks.basis.transpose() * phi * m1.blocks.basis, m1, m2);
}

namespace {

double round12(double x) {
  const double r = std::round(x * 1e12) / 1e12;
  return r == 0 ? 0.0 : r;
}

// Orthonormal basis (columns) of the column span, by numerical rank.
Eigen::MatrixXd column_span(const Eigen::MatrixXd& m, std::size_t n) {
  if (m.cols() == 0) return Eigen::MatrixXd(n, 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s[r] > kRankTol) ++r;
  return svd.matrixU().leftCols(r);
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, std::size_t n) {
  if (m.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  while (r < s.size() && s[r] > kRankTol) ++r;
  return svd.matrixV().rightCols(static_cast<Eigen::Index>(n) - r);
}

// ad_i(w) = [w, e_i]: column l holds [e_l, e_i].
Eigen::MatrixXd ad_right(const MetricAlgebra& a, std::size_t i) {
  const std::size_t n = a.dimension();
  Eigen::MatrixXd m(n, n);
  for (std::size_t k = 0; k < n; ++k) m.row(k) = a.slices[k].col(i).transpose();
  return m;
}

void numeric_series(const MetricAlgebra& a, std::vector<std::size_t>& descending,
                    std::vector<std::size_t>& ascending) {
  const std::size_t n = a.dimension();
  std::vector<Eigen::MatrixXd> ad(n);
  for (std::size_t i = 0; i < n; ++i) ad[i] = ad_right(a, i);

  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  descending = {n};
  while (term.cols() > 0) {
    Eigen::MatrixXd images(n, term.cols() * n);
    for (std::size_t i = 0; i < n; ++i) images.middleCols(i * term.cols(), term.cols()) = ad[i] * term;
    Eigen::MatrixXd next = column_span(images, n);
    if (next.cols() == term.cols()) break;
    descending.push_back(next.cols());
    term = std::move(next);
  }

  ascending.clear();
  Eigen::MatrixXd center(n, 0);
  while (static_cast<std::size_t>(center.cols()) < n) {
    const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) - center * center.transpose();
    Eigen::MatrixXd system(n * n, n);
    for (std::size_t i = 0; i < n; ++i) system.middleRows(i * n, n) = proj * ad[i];
    Eigen::MatrixXd next = null_space(system, n);
    if (next.cols() == center.cols()) break;
    ascending.push_back(next.cols());
    center = std::move(next);
  }
}

void spectral_entries(const MetricAlgebra& a, Fingerprint& f) {
  const auto dv = static_cast<Eigen::Index>(a.blocks.dv);
  const auto dz = static_cast<Eigen::Index>(a.blocks.dz);
  const auto n = static_cast<Eigen::Index>(a.dimension());
  Eigen::MatrixXd jsum = Eigen::MatrixXd::Zero(dv, dv);
  Eigen::MatrixXd ksum = Eigen::MatrixXd::Zero(dv, dv);
  for (Eigen::Index k = dv; k < dv + dz; ++k) {
    const Eigen::MatrixXd j = a.slices[k].topLeftCorner(dv, dv);
    jsum += j * j.transpose();
  }
  for (Eigen::Index k = dv + dz; k < n; ++k) {
    const Eigen::MatrixXd kb = a.slices[k].block(0, dv, dv, dz);
    ksum += kb * kb.transpose();
  }
  const auto spectrum = [](const Eigen::MatrixXd& m) {
    std::vector<double> out;
    if (m.rows() == 0) return out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(round12(eig.eigenvalues()[i]));
    std::sort(out.begin(), out.end());
    return out;
  };
  f.j_spectrum = spectrum(jsum);
  f.k_spectrum = spectrum(ksum);
  double total = 0;
  for (const auto& s : a.slices) total += 0.5 * s.squaredNorm();
  f.frobenius = round12(std::sqrt(total));
}

}  // namespace

bool Fingerprint::exact_entries_equal(const Fingerprint& o) const {
  return dv == o.dv && dz == o.dz && dt == o.dt && descending == o.descending &&
         ascending == o.ascending;
}

bool Fingerprint::matches(const Fingerprint& o, double tol) const {
  if (!exact_entries_equal(o)) return false;
  const auto close = [tol](const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (std::abs(x[i] - y[i]) > tol) return false;
    return true;
  };
  return close(j_spectrum, o.j_spectrum) && close(k_spectrum, o.k_spectrum) &&
         std::abs(frobenius - o.frobenius) <= tol;
}

Fingerprint fingerprint(const NilpotentLieAlgebra& a) {
  const MetricAlgebra m = metric_algebra(a);
  const SeriesReport series = central_series(a);
  Fingerprint f;
  f.dv = m.blocks.dv;
  f.dz = m.blocks.dz;
  f.dt = m.blocks.dt;
  f.descending = series.descending_dims();
  f.ascending = series.ascending_dims();
  spectral_entries(m, f);
  return f;
}

Fingerprint fingerprint(const MetricAlgebra& a) {
  Fingerprint f;
  f.dv = a.blocks.dv;
  f.dz = a.blocks.dz;
  f.dt = a.blocks.dt;
  numeric_series(a, f.descending, f.ascending);
  spectral_entries(a, f);
  return f;
}

std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart) {
  // splitmix64 of the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(restart) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

Eigen::MatrixXd haar_orthogonal(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) g(r, c) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::size_t c = 0; c < n; ++c) {
    if (rmat(c, c) < 0) q.col(c) = -q.col(c);
  }
  return q;
}

Eigen::MatrixXd polar(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return m;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

struct BlockPoint {
  std::array<Eigen::MatrixXd, 3> q;

  Eigen::MatrixXd assemble(std::size_t n) const {
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, n);
    Eigen::Index at = 0;
    for (const auto& b : q) {
      phi.block(at, at, b.rows(), b.cols()) = b;
      at += b.rows();
    }
    return phi;
  }
};

RestartTrace run_restart(const MetricAlgebra& m1, const MetricAlgebra& m2, const SearchConfig& cfg,
                         std::size_t index, Eigen::MatrixXd& best) {
  const std::size_t n = m1.dimension();
  const std::array<std::size_t, 3> dims{m1.blocks.dv, m1.blocks.dz, m1.blocks.dt};
  RestartTrace trace;
  trace.seed = restart_seed(cfg.seed, index);
  std::mt19937_64 rng(trace.seed);
  BlockPoint x;
  for (std::size_t b = 0; b < 3; ++b) {
    x.q[b] = index == 0 ? Eigen::MatrixXd::Identity(dims[b], dims[b]) : haar_orthogonal(dims[b], rng);
  }
  Eigen::MatrixXd phi = x.assemble(n);
  Eigen::MatrixXd grad;
  double residual = bracket_residual_gradient(phi, m1, m2, grad);
  double step = cfg.initial_step;
  std::size_t it = 0;
  for (; it < cfg.max_iterations && residual > cfg.tolerance; ++it) {
    std::array<Eigen::MatrixXd, 3> xi;
    double xi_norm2 = 0;
    Eigen::Index at = 0;
    for (std::size_t b = 0; b < 3; ++b) {
      const auto d = static_cast<Eigen::Index>(dims[b]);
      const Eigen::MatrixXd g = grad.block(at, at, d, d);
      const Eigen::MatrixXd a = x.q[b].transpose() * g;
      xi[b] = x.q[b] * (0.5 * (a - a.transpose()));
      xi_norm2 += xi[b].squaredNorm();
      at += d;
    }
    if (xi_norm2 < 1e-30) break;
    bool accepted = false;
    while (step > 1e-16) {
      BlockPoint trial;
      for (std::size_t b = 0; b < 3; ++b) trial.q[b] = polar(x.q[b] - step * xi[b]);
      const Eigen::MatrixXd trial_phi = trial.assemble(n);
      const double r = bracket_residual(trial_phi, m1, m2);
      if (r <= residual - cfg.armijo * step * xi_norm2) {
        x = std::move(trial);
        phi = trial_phi;
        residual = bracket_residual_gradient(phi, m1, m2, grad);
        step = std::min(step * 2.0, 1e3);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  trace.iterations = it;
  trace.final_residual = residual;
  best = phi;
  return trace;
}

std::size_t thread_count(const SearchConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("NILGRAPH_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

SearchResult search_isometry(const NilpotentLieAlgebra& a1, const NilpotentLieAlgebra& a2,
                             const SearchConfig& cfg) {
  if (cfg.restarts == 0 || cfg.max_iterations == 0 || !(cfg.tolerance > 0) ||
      !(cfg.initial_step > 0) || !(cfg.armijo > 0)) {
    throw Error(ErrorCode::InvalidArgument, "search parameters must be positive");
  }
  SearchResult result;
  result.fingerprint_a = fingerprint(a1);
  result.fingerprint_b = fingerprint(a2);
  result.best_residual = std::numeric_limits<double>::infinity();
  if (a1.dimension() != a2.dimension() ||
      !result.fingerprint_a.exact_entries_equal(result.fingerprint_b)) {
    result.verdict = "not_isometric";
    return result;
  }
  const MetricAlgebra m1 = metric_algebra(a1);
  const MetricAlgebra m2 = metric_algebra(a2);

  std::vector<RestartTrace> traces(cfg.restarts);
  std::vector<Eigen::MatrixXd> maps(cfg.restarts);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t r = next++; r < cfg.restarts; r = next++) {
      traces[r] = run_restart(m1, m2, cfg, r, maps[r]);
    }
  };
  const std::size_t threads = std::min(thread_count(cfg), cfg.restarts);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    if (traces[r].final_residual < result.best_residual) {
      result.best_residual = traces[r].final_residual;
      result.best_restart = r;
    }
  }
  result.restarts = std::move(traces);
  result.best_map = m2.blocks.basis * maps[result.best_restart] * m1.blocks.basis.transpose();
  result.verdict =
      result.best_residual < kIsometricResidual ? "isometric_numerical" : "no_isometry_found";
  return result;
}

}  // namespace nilgraph
