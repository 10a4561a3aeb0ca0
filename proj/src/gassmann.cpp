#include "nilgraph/gassmann.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "nilgraph/errors.hpp"

namespace nilgraph {

QuadraticMatrix to_quadratic(const RationalMatrix& m) {
  QuadraticMatrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = QuadraticNumber(m(r, c));
  return out;
}

Eigen::MatrixXd to_eigen(const QuadraticMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).to_double();
  return out;
}

LinearMap LinearMap::from_exact(QuadraticMatrix m) {
  LinearMap out;
  out.numeric = to_eigen(m);
  out.exact_matrix = std::move(m);
  out.exact = true;
  return out;
}

LinearMap LinearMap::from_rational(const RationalMatrix& m) { return from_exact(to_quadratic(m)); }

LinearMap LinearMap::from_numeric(Eigen::MatrixXd m) {
  LinearMap out;
  out.numeric = std::move(m);
  out.exact = false;
  return out;
}

bool operator==(const LinearMap& a, const LinearMap& b) {
  if (a.exact != b.exact) return false;
  if (a.exact) return a.exact_matrix == b.exact_matrix;
  return a.numeric.rows() == b.numeric.rows() && a.numeric.cols() == b.numeric.cols() &&
         a.numeric == b.numeric;
}

RationalMatrix permutation_matrix(std::span<const VertexId> succ) {
  RationalMatrix m(succ.size(), succ.size());
  for (std::size_t v = 0; v < succ.size(); ++v) m(succ[v], v) = 1;
  return m;
}

std::vector<LinearMap> intertwiner_basis(const SchreierGraph& g1, const SchreierGraph& g2) {
  const std::size_t n = g1.vertex_count();
  if (n != g2.vertex_count()) {
    throw Error(ErrorCode::IndexMismatch, "coset counts differ: " + std::to_string(n) + " vs " +
                                              std::to_string(g2.vertex_count()));
  }
  if (g1.label_count() != g2.label_count()) {
    throw Error(ErrorCode::DimensionMismatch, "label counts differ");
  }
  // Unknown T(w, v) sits at w * n + v. (T A1)(w, v) = T(w, succ1(v)) and
  // (A2 T)(w, v) = T(pred2(w), v).
  RationalMatrix system(g1.label_count() * n * n, n * n);
  std::size_t row = 0;
  for (std::size_t l = 0; l < g1.label_count(); ++l) {
    const auto pred2 = g2.pred(l);
    for (std::size_t w = 0; w < n; ++w)
      for (std::size_t v = 0; v < n; ++v, ++row) {
        system(row, w * n + g1.succ[l][v]) += 1;
        system(row, pred2[w] * n + v) -= 1;
      }
  }
  std::vector<LinearMap> out;
  for (const Vector& x : nullspace(system)) {
    RationalMatrix t(n, n);
    for (std::size_t k = 0; k < n * n; ++k) t(k / n, k % n) = x[k];
    out.push_back(LinearMap::from_rational(t));
  }
  return out;
}

std::vector<LinearMap> intertwiner_basis(const FiniteGroup& g, std::span<const Permutation> h1_gens,
                                         std::span<const Permutation> h2_gens,
                                         const GeneratorSystem& c) {
  const auto h1 = enumerate_subgroup(g, h1_gens).size();
  const auto h2 = enumerate_subgroup(g, h2_gens).size();
  if (h1 != h2) {
    throw Error(ErrorCode::IndexMismatch, "indices differ: " + std::to_string(g.order() / h1) +
                                              " vs " + std::to_string(g.order() / h2));
  }
  return intertwiner_basis(build_schreier(g, h1_gens, c), build_schreier(g, h2_gens, c));
}

namespace {

bool is_identity(const QuadraticMatrix& m) { return m == QuadraticMatrix::identity(m.rows()); }

// Scales T so that T^T T = I, provided T^T T is a positive multiple of I
// whose square root lies in a quadratic field.
std::optional<QuadraticMatrix> normalize_scaled_orthogonal(const QuadraticMatrix& t) {
  const QuadraticMatrix gram = t.transpose() * t;
  const QuadraticNumber c = gram(0, 0);
  if (c.sign() <= 0) return std::nullopt;
  if (!(gram == c * QuadraticMatrix::identity(gram.rows()))) return std::nullopt;
  const auto root = QuadraticNumber::sqrt(c);
  if (!root) return std::nullopt;
  try {
    QuadraticMatrix out = (QuadraticNumber(1) / *root) * t;
    if (is_identity(out.transpose() * out)) return out;
  } catch (const Error&) {
    // entries and root live in different quadratic fields
  }
  return std::nullopt;
}

struct QuadraticForm {
  QuadraticNumber p, q, r;  // p a^2 + q ab + r b^2
  bool is_zero() const { return p.is_zero() && q.is_zero() && r.is_zero(); }
  QuadraticNumber at(const QuadraticNumber& a, const QuadraticNumber& b) const {
    return p * a * a + q * a * b + r * b * b;
  }
};

// (a T1 + b T2)^T (a T1 + b T2) = a^2 P + ab Q + b^2 R must be scalar; the
// homogeneous conditions are its off-diagonal entries and the differences
// of its diagonal entries.
std::optional<QuadraticMatrix> solve_pair(const QuadraticMatrix& t1, const QuadraticMatrix& t2) {
  const QuadraticMatrix p = t1.transpose() * t1;
  const QuadraticMatrix q = t1.transpose() * t2 + t2.transpose() * t1;
  const QuadraticMatrix r = t2.transpose() * t2;
  const std::size_t n = p.rows();
  std::vector<QuadraticForm> equations;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      QuadraticForm f;
      if (i == j) {
        if (i == 0) continue;
        f = {p(i, i) - p(0, 0), q(i, i) - q(0, 0), r(i, i) - r(0, 0)};
      } else {
        f = {p(i, j), q(i, j), r(i, j)};
      }
      if (!f.is_zero()) equations.push_back(f);
    }

  std::vector<std::pair<QuadraticNumber, QuadraticNumber>> candidates;
  if (equations.empty()) {
    candidates = {{1, 0}, {0, 1}, {1, 1}};
  } else {
    const QuadraticForm& f = equations.front();
    if (f.p.is_zero()) candidates.emplace_back(1, 0);
    if (!f.p.is_zero()) {
      // p x^2 + q x + r = 0 with x = a / b
      const QuadraticNumber disc = f.q * f.q - QuadraticNumber(4) * f.p * f.r;
      if (const auto root = QuadraticNumber::sqrt(disc)) {
        const QuadraticNumber two_p = QuadraticNumber(2) * f.p;
        std::vector<QuadraticNumber> xs;
        try {
          xs = {(-f.q - *root) / two_p, (-f.q + *root) / two_p};
        } catch (const Error&) {
        }
        std::sort(xs.begin(), xs.end());
        for (const auto& x : xs) candidates.emplace_back(x, 1);
      }
    } else if (!f.q.is_zero()) {
      candidates.emplace_back(-f.r / f.q, 1);
    }
  }

  for (const auto& [a, b] : candidates) {
    try {
      const bool solves = std::all_of(equations.begin(), equations.end(),
                                      [&](const QuadraticForm& f) { return f.at(a, b).is_zero(); });
      if (!solves) continue;
      QuadraticMatrix t = a * t1 + b * t2;
      if (auto out = normalize_scaled_orthogonal(t)) return out;
    } catch (const Error&) {
      // candidate mixes incompatible quadratic fields
    }
  }
  return std::nullopt;
}

// Best rational approximation with denominator at most max_den.
Rational rational_approximation(double x, long max_den) {
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rest = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(rest);
    const long ai = static_cast<long>(a);
    const long p2 = ai * p1 + p0;
    const long q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = rest - a;
    if (std::abs(frac) < 1e-13) break;
    rest = 1.0 / frac;
  }
  Rational out(p1, q1);
  out.canonicalize();
  return out;
}

bool in_span(const std::vector<LinearMap>& basis, const QuadraticMatrix& m) {
  std::vector<std::vector<QuadraticNumber>> rows;
  const std::size_t n = m.rows() * m.cols();
  for (const auto& b : basis) {
    std::vector<QuadraticNumber> flat(n);
    for (std::size_t k = 0; k < n; ++k) flat[k] = b.exact_matrix(k / m.cols(), k % m.cols());
    rows.push_back(std::move(flat));
  }
  const std::size_t before = rank(rows_to_matrix(rows, n));
  std::vector<QuadraticNumber> flat(n);
  for (std::size_t k = 0; k < n; ++k) flat[k] = m(k / m.cols(), k % m.cols());
  rows.push_back(std::move(flat));
  return rank(rows_to_matrix(rows, n)) == before;
}

}  // namespace

LinearMap orthogonal_intertwiner(const std::vector<LinearMap>& basis) {
  if (basis.empty()) throw Error(ErrorCode::NoOrthogonalElement, "intertwiner space is zero");
  const std::size_t n = basis[0].rows();
  for (const auto& b : basis) {
    if (b.rows() != n || b.cols() != n || !b.exact) {
      throw Error(ErrorCode::InvalidArgument, "basis must consist of exact square maps");
    }
  }
  if (basis.size() == 1) {
    if (auto t = normalize_scaled_orthogonal(basis[0].exact_matrix)) return LinearMap::from_exact(*t);
  } else if (basis.size() == 2) {
    if (auto t = solve_pair(basis[0].exact_matrix, basis[1].exact_matrix)) {
      return LinearMap::from_exact(*t);
    }
  }

  // Polar factor of a generic element. If T intertwines orthogonal actions
  // then so does T (T^T T)^{-1/2}, so the factor stays in the span.
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int attempt = 0; attempt < 16; ++attempt) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      t += (attempt == 0 ? 1.0 : coeff(rng)) * basis[i].numeric;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues().minCoeff() < 1e-10 * std::max(1.0, svd.singularValues().maxCoeff())) {
      continue;
    }
    const Eigen::MatrixXd u = svd.matrixU() * svd.matrixV().transpose();
    QuadraticMatrix rounded(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        rounded(r, c) = QuadraticNumber(rational_approximation(u(r, c), 1'000'000));
      }
    if (is_identity(rounded.transpose() * rounded) && in_span(basis, rounded)) {
      return LinearMap::from_exact(rounded);
    }
    const double defect =
        (u.transpose() * u - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect <= 1e-9) return LinearMap::from_numeric(u);
  }
  throw Error(ErrorCode::NoOrthogonalElement, "every tried element of the span is singular");
}

namespace {

QuadraticNumber squared_norm(const QuadraticMatrix& m) {
  QuadraticNumber s = 0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (!m(r, c).is_zero()) s += m(r, c) * m(r, c);
    }
  return s;
}

Eigen::MatrixXd rational_to_eigen(const RationalMatrix& m) { return to_eigen(to_quadratic(m)); }

}  // namespace

TransplantReport verify_transplant(const LinearMap& t, const SchreierGraph& g1,
                                   const SchreierGraph& g2, const NilpotentLieAlgebra& a1,
                                   const NilpotentLieAlgebra& a2) {
  const std::size_t n = g1.vertex_count();
  if (g2.vertex_count() != n || g1.label_count() != g2.label_count() || t.rows() != n ||
      t.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "map and graphs have incompatible sizes");
  }
  TransplantReport report;
  report.exact = t.exact;
  for (std::size_t l = 0; l < g1.label_count(); ++l) {
    const RationalMatrix p1 = permutation_matrix(g1.succ[l]);
    const RationalMatrix p2 = permutation_matrix(g2.succ[l]);
    const RationalMatrix j1 = j_operator(a1, g1, l).adjoint;
    const RationalMatrix j2 = j_operator(a2, g2, l).adjoint;
    LabelTransplantResidual res;
    res.label = g1.labels[l];
    if (t.exact) {
      const QuadraticMatrix& m = t.exact_matrix;
      res.alpha = squared_norm(m * to_quadratic(p1) - to_quadratic(p2) * m);
      res.j = squared_norm(m * to_quadratic(j1) - to_quadratic(j2) * m);
      res.alpha_numeric = res.alpha.to_double();
      res.j_numeric = res.j.to_double();
      if (!res.alpha.is_zero() || !res.j.is_zero()) report.ok = false;
    } else {
      const Eigen::MatrixXd& m = t.numeric;
      res.alpha_numeric =
          (m * rational_to_eigen(p1) - rational_to_eigen(p2) * m).squaredNorm();
      res.j_numeric = (m * rational_to_eigen(j1) - rational_to_eigen(j2) * m).squaredNorm();
      if (res.alpha_numeric > 1e-18 || res.j_numeric > 1e-18) report.ok = false;
    }
    report.labels.push_back(std::move(res));
  }
  return report;
}

QuadraticNumber exact_bracket_residual(const QuadraticMatrix& phi, const NilpotentLieAlgebra& a1,
                                       const NilpotentLieAlgebra& a2) {
  const std::size_t n = a1.dimension();
  if (a2.dimension() != n || phi.rows() != n || phi.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "map and algebras have incompatible sizes");
  }
  std::vector<std::vector<QuadraticNumber>> images(n);
  for (std::size_t i = 0; i < n; ++i) images[i] = phi.col(i);
  QuadraticNumber total = 0;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) {
      std::vector<QuadraticNumber> lhs(n, QuadraticNumber(0));
      for (const auto& [k, c] : a1.basis_bracket(i, j)) {
        for (std::size_t r = 0; r < n; ++r) {
          if (!phi(r, k).is_zero()) lhs[r] += QuadraticNumber(c) * phi(r, k);
        }
      }
      const auto rhs = bracket_as<QuadraticNumber>(a2, images[i], images[j]);
      for (std::size_t r = 0; r < n; ++r) {
        const QuadraticNumber d = lhs[r] - rhs[r];
        if (!d.is_zero()) total += d * d;
      }
    }
  return total;
}

namespace {

double numeric_bracket_residual(const Eigen::MatrixXd& phi, const NilpotentLieAlgebra& a1,
                                const NilpotentLieAlgebra& a2) {
  const std::size_t n = a1.dimension();
  double total = 0;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) {
      Eigen::VectorXd lhs = Eigen::VectorXd::Zero(n);
      for (const auto& [k, c] : a1.basis_bracket(i, j)) lhs += c.get_d() * phi.col(k);
      std::vector<double> x(phi.col(i).data(), phi.col(i).data() + n);
      std::vector<double> y(phi.col(j).data(), phi.col(j).data() + n);
      const auto rhs = bracket_as<double>(a2, x, y);
      for (std::size_t r = 0; r < n; ++r) total += (lhs[r] - rhs[r]) * (lhs[r] - rhs[r]);
    }
  return total;
}

}  // namespace

LinearMap extend_two_step_isometry(const LinearMap& t, const NilpotentLieAlgebra& a1,
                                   const NilpotentLieAlgebra& a2) {
  const std::size_t nv = a1.dim_v();
  const std::size_t nz = a1.dim_z();
  if (a2.dim_v() != nv || a2.dim_z() != nz || a1.dim_t() != 0 || a2.dim_t() != 0 ||
      t.rows() != nv || t.cols() != nv) {
    throw Error(ErrorCode::DimensionMismatch, "expected two-step algebras matching the map");
  }
  const std::size_t n = nv + nz;
  if (t.exact) {
    QuadraticMatrix ext(n, n);
    for (std::size_t r = 0; r < nv; ++r)
      for (std::size_t c = 0; c < nv; ++c) ext(r, c) = t.exact_matrix(r, c);
    for (std::size_t k = nv; k < n; ++k) ext(k, k) = 1;
    if (!is_identity(ext.transpose() * ext)) {
      throw Error(ErrorCode::IsometryCheckFailed, "T (+) Id is not orthogonal");
    }
    const QuadraticNumber residual = exact_bracket_residual(ext, a1, a2);
    if (!residual.is_zero()) {
      throw Error(ErrorCode::IsometryCheckFailed,
                  "T (+) Id does not preserve brackets, residual " + residual.to_string());
    }
    return LinearMap::from_exact(std::move(ext));
  }
  Eigen::MatrixXd ext = Eigen::MatrixXd::Identity(n, n);
  ext.topLeftCorner(nv, nv) = t.numeric;
  if ((ext.transpose() * ext - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorCode::IsometryCheckFailed, "T (+) Id is not orthogonal");
  }
  const double residual = numeric_bracket_residual(ext, a1, a2);
  if (residual > 1e-9) {
    throw Error(ErrorCode::IsometryCheckFailed,
                "T (+) Id does not preserve brackets, residual " + std::to_string(residual));
  }
  return LinearMap::from_numeric(std::move(ext));
}

}  // namespace nilgraph
