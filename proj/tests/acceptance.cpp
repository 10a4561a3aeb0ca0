// Acceptance checks AC1-AC10. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "nilgraph/gassmann.hpp"
#include "nilgraph/isometry.hpp"
#include "support.hpp"

using namespace nilgraph;
using namespace nilgraph::testing;

namespace {

// Residual floors of the three-step search (200 restarts, seed 1), pinned
// from the first recorded run.
constexpr double kPinnedFloor = 0.5580375839713836;
constexpr std::array<double, 3> kPinnedVariationFloors = {0.5580375839713836, 0.5424926996185477,
                                                          0.5424926996185477};
constexpr double kFloorTolerance = 1e-6;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(const std::string& id, const std::string& title, double budget_s,
               const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(secs < budget_s, "runtime budget " + std::to_string(budget_s) + " s");
  if (!o.pass) ++failures;
  std::printf("%s %s: %s (%.2f s)%s\n", o.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(), secs,
              o.detail.str().c_str());
  std::fflush(stdout);
}

bool graph_matches(const SchreierGraph& g,
                   const std::map<std::string, std::vector<std::string>>& expected) {
  for (std::size_t l = 0; l < g.label_count(); ++l) {
    const auto it = expected.find(g.labels[l]);
    if (it == expected.end()) return false;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (g.vertex_names[g.succ[l][v]] != it->second[v]) return false;
  }
  return expected.size() == g.label_count();
}

Vector add(Vector a, const Vector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

Vector negate(Vector a) {
  for (auto& x : a) x = -x;
  return a;
}

bool is_zero_vector(const Vector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

TAssignment single(long t1, long t2) {
  TAssignment t;
  t.t_dim = 1;
  t.per_label.push_back({Vector{Rational(t1)}, Vector{Rational(t2)}});
  return t;
}

Eigen::MatrixXd random_block_orthogonal(const GradingBlocks& b, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const auto n = static_cast<Eigen::Index>(b.dimension());
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, n);
  Eigen::Index at = 0;
  for (std::size_t d : {b.dv, b.dz, b.dt}) {
    const auto k = static_cast<Eigen::Index>(d);
    if (k > 0) {
      Eigen::MatrixXd m(k, k);
      for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < k; ++c) m(r, c) = normal(rng);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
      Eigen::MatrixXd q = qr.householderQ();
      for (Eigen::Index c = 0; c < k; ++c)
        if (qr.matrixQR()(c, c) < 0) q.col(c) *= -1;
      phi.block(at, at, k, k) = q;
    }
    at += k;
  }
  return phi;
}

// Random small groups with a Schreier graph; keeps drawing until `want`
// graphs satisfy `keep`.
std::vector<SchreierGraph> random_graphs(std::mt19937_64& rng, std::size_t want,
                                         const std::function<bool(const SchreierGraph&)>& keep) {
  std::vector<SchreierGraph> out;
  for (int attempt = 0; attempt < 100000 && out.size() < want; ++attempt) {
    const auto s = random_system(rng, 200);
    if (!s) continue;
    SchreierGraph g = build_schreier(s->group, s->h_gens, s->c);
    if (keep(g)) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

int main() {
  criterion("AC1", "S4/S3 Schreier graph matches the pinned adjacency", 1.0, [](Outcome& o) {
    const Example e = load_example("s4_s3");
    const SchreierGraph& g = e.graphs[0];
    o.require(graph_matches(g, {{"z1", {"He", "H(14)", "H(34)", "H(24)"}},
                                {"z2", {"H(14)", "He", "H(34)", "H(24)"}}}),
              "adjacency");
    const auto z1 = label_cycles(g, "z1"), z2 = label_cycles(g, "z2");
    o.require(z1.lengths == std::vector<std::size_t>{1, 3}, "z1 is a loop plus a 3-cycle");
    o.require(g.succ[0][0] == 0 && g.vertex_names[0] == "He", "loop at He labelled z1");
    o.require(z2.lengths == std::vector<std::size_t>{4}, "z2 is a 4-cycle through every vertex");
  });

  criterion("AC2", "SL(3,2) Schreier graphs match and are not isomorphic", 5.0, [](Outcome& o) {
    const Example e = load_example("sl32");
    o.require(graph_matches(e.graphs[0], {{"z_r", {"v1", "v5", "v7", "v6", "v4", "v2", "v3"}},
                                          {"z_b", {"v5", "v1", "v4", "v6", "v2", "v3", "v7"}}}),
              "first graph");
    o.require(graph_matches(e.graphs[1], {{"z_r", {"v2", "v1", "v7", "v4", "v3", "v5", "v6"}},
                                          {"z_b", {"v2", "v5", "v6", "v3", "v1", "v4", "v7"}}}),
              "second graph");
    o.require(!digraph_isomorphic(e.graphs[0], e.graphs[1], LabelMode::ExactLabels),
              "no label-preserving isomorphism");
    o.require(!digraph_isomorphic(e.graphs[0], e.graphs[1], LabelMode::AllowLabelPermutation),
              "no isomorphism with label permutation");
  });

  criterion("AC3", "bracket tables of both three-step algebras, exact", 5.0, [](Outcome& o) {
    using Entry = std::tuple<const char*, const char*, std::vector<std::pair<const char*, long>>>;
    const std::vector<std::vector<Entry>> tables{
        {{"v1", "v2", {{"z_b", -1}}}, {"v1", "v5", {{"z_b", 1}}},
         {"v2", "v5", {{"z_r", 1}, {"z_b", -1}}}, {"v2", "v6", {{"z_r", -1}}},
         {"v3", "v4", {{"z_b", 1}}}, {"v3", "v6", {{"z_b", -1}}}, {"v4", "v5", {{"z_r", -1}}},
         {"v4", "v6", {{"z_r", 1}, {"z_b", 1}}}, {"v2", "z_r", {{"t", 1}}},
         {"v4", "z_r", {{"t", -1}}}},
        {{"v1", "v2", {{"z_b", 1}}}, {"v1", "v5", {{"z_b", -1}}}, {"v2", "v5", {{"z_b", 1}}},
         {"v3", "v4", {{"z_b", -1}}}, {"v3", "v5", {{"z_r", -1}}}, {"v3", "v6", {{"z_b", 1}}},
         {"v3", "v7", {{"z_r", 1}}}, {"v4", "v6", {{"z_b", -1}}}, {"v5", "v6", {{"z_r", -1}}},
         {"v6", "v7", {{"z_r", -1}}}, {"v3", "z_r", {{"t", 1}}}, {"v6", "z_r", {{"t", -1}}}}};
    for (std::size_t w = 0; w < 2; ++w) {
      const NilpotentLieAlgebra a = sl32_three_step(w);
      std::size_t nonzero = 0;
      for (std::size_t i = 0; i < a.dimension(); ++i)
        for (std::size_t j = i + 1; j < a.dimension(); ++j)
          nonzero += !a.basis_bracket(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)).empty();
      o.require(nonzero == tables[w].size(), "number of nonzero brackets");
      for (const auto& [x, y, terms] : tables[w]) {
        Vector expected(a.dimension(), Rational(0));
        for (const auto& [name, c] : terms) expected[index_of_name(a, name)] = c;
        const Vector got = bracket(a, basis_vector(a.dimension(), index_of_name(a, x)),
                                   basis_vector(a.dimension(), index_of_name(a, y)));
        o.require(got == expected, std::string("[") + x + ", " + y + "]");
      }
    }
  });

  criterion("AC4", "Jacobi holds exactly when some label is admissible", 30.0, [](Outcome& o) {
    o.require(verify_jacobi(sl32_three_step(0)).ok && verify_jacobi(sl32_three_step(1)).ok,
              "Jacobi on the SL(3,2) algebras");
    std::mt19937_64 rng(4);
    const auto with = random_graphs(rng, 20, [](const SchreierGraph& g) {
      return !classify_labels(g).admissible_labels().empty();
    });
    o.require(with.size() == 20, "20 random graphs with admissible labels");
    for (const auto& g : with) {
      const std::size_t m = classify_labels(g).admissible_labels().size();
      o.require(verify_jacobi(three_step(g, generic_t_assignment(m))).ok, "Jacobi on random graph");
    }
    const auto expect_none = [&](const SchreierGraph& g) {
      try {
        three_step(g, generic_t_assignment(1));
      } catch (const Error& e) {
        return e.code() == ErrorCode::NoAdmissibleLabel;
      }
      return false;
    };
    o.require(expect_none(load_example("c5").graphs[0]), "C5 has no admissible label");
    const auto without = random_graphs(rng, 5, [](const SchreierGraph& g) {
      return classify_labels(g).admissible_labels().empty();
    });
    o.require(without.size() == 5, "5 random graphs without admissible labels");
    for (const auto& g : without) o.require(expect_none(g), "NoAdmissibleLabel on random graph");
    o.detail << " random: " << with.size() << " admissible, " << without.size() << " inadmissible";
  });

  criterion("AC5", "central series and ascending series spans", 5.0, [](Outcome& o) {
    const Example& e = sl32();
    for (std::size_t w = 0; w < 2; ++w) {
      o.require(central_series(sl32_three_step(w)).step == 3, "three-step algebra has step 3");
      o.require(central_series(two_step(e.graphs[w])).step == 2, "truncation has step 2");
    }
    const auto a1 = sl32_three_step(0), a2 = sl32_three_step(1);
    const auto s1 = central_series(a1), s2 = central_series(a2);
    const std::size_t n = a1.dimension();
    o.require(same_span(s1.ascending[0],
                        {named_vector(a1, {{"v1", 1}, {"v2", 1}, {"v3", 1}, {"v4", 1}, {"v5", 1}, {"v6", 1}}),
                         named_vector(a1, {{"v7", 1}}), named_vector(a1, {{"z_b", 1}}),
                         named_vector(a1, {{"t", 1}})},
                        n),
              "center of the first algebra");
    o.require(same_span(s2.ascending[0],
                        {named_vector(a2, {{"v1", 1}, {"v2", 1}, {"v5", 1}, {"v7", 1}}),
                         named_vector(a2, {{"v3", 1}, {"v4", 1}, {"v6", 1}}),
                         named_vector(a2, {{"z_b", 1}}), named_vector(a2, {{"t", 1}})},
                        n),
              "center of the second algebra");
    o.require(s1.ascending[1].size() == 8 && s2.ascending[1].size() == 8, "second centers have dim 8");
    o.require(same_span(s1.ascending[1],
                        {named_vector(a1, {{"v1", 1}}), named_vector(a1, {{"v2", 1}, {"v4", 1}}),
                         named_vector(a1, {{"v3", 1}}), named_vector(a1, {{"v5", 1}, {"v6", 1}}),
                         named_vector(a1, {{"v7", 1}}), named_vector(a1, {{"z_r", 1}}),
                         named_vector(a1, {{"z_b", 1}}), named_vector(a1, {{"t", 1}})},
                        n),
              "second center of the first algebra");
    o.require(same_span(s2.ascending[1],
                        {named_vector(a2, {{"v1", 1}}), named_vector(a2, {{"v2", 1}}),
                         named_vector(a2, {{"v3", 1}, {"v6", 1}}), named_vector(a2, {{"v4", 1}}),
                         named_vector(a2, {{"v5", 1}, {"v7", 1}}), named_vector(a2, {{"z_r", 1}}),
                         named_vector(a2, {{"z_b", 1}}), named_vector(a2, {{"t", 1}})},
                        n),
              "second center of the second algebra");
  });

  criterion("AC6", "j-operator: graph formula equals adjoint, exactly", 5.0, [](Outcome& o) {
    const Example& e = sl32();
    std::size_t compared = 0;
    for (std::size_t w = 0; w < 2; ++w) {
      for (const NilpotentLieAlgebra& a : {two_step(e.graphs[w]), sl32_three_step(w)}) {
        for (std::size_t l = 0; l < e.graphs[w].label_count(); ++l) {
          const JOperator j = j_operator(a, e.graphs[w], l);
          o.require(j.graph_formula == j.adjoint, "entrywise equality");
          compared += j.graph_formula.rows() * j.graph_formula.cols();
        }
      }
    }
    o.detail << " " << compared << " entries compared";
  });

  criterion("AC7", "almost conjugacy, intertwiner, transplant and isometry", 10.0, [](Outcome& o) {
    const Example& e = sl32();
    const AlmostConjugacy ac =
        almost_conjugate(e.group, e.spec.subgroups[0].generators, e.spec.subgroups[1].generators);
    o.require(ac.almost_conjugate, "almost conjugate");
    std::ostringstream table;
    for (const auto& c : ac.counts) {
      table << " " << c.representative << ":" << c.in_h1 << "/" << c.in_h2;
      o.require(c.in_h1 == c.in_h2, "class counts agree");
    }
    const auto basis = intertwiner_basis(e.graphs[0], e.graphs[1]);
    // Burnside count of fixed-point pairs gives the dimension independently.
    std::size_t fixed_pairs = 0;
    for (const Permutation& x : e.group.elements()) {
      const auto a1 = vertex_action(e.graphs[0], x), a2 = vertex_action(e.graphs[1], x);
      std::size_t f1 = 0, f2 = 0;
      for (VertexId v = 0; v < 7; ++v) {
        f1 += a1[v] == v;
        f2 += a2[v] == v;
      }
      fixed_pairs += f1 * f2;
    }
    o.require(basis.size() == fixed_pairs / e.group.order() && basis.size() == 2,
              "intertwiner dimension 2");
    const LinearMap t = orthogonal_intertwiner(basis);
    o.require(t.exact && t.exact_matrix.transpose() * t.exact_matrix == QuadraticMatrix::identity(7),
              "exact orthogonal T");
    const auto a1 = two_step(e.graphs[0]), a2 = two_step(e.graphs[1]);
    const TransplantReport r = verify_transplant(t, e.graphs[0], e.graphs[1], a1, a2);
    bool zero = r.exact && r.ok;
    for (const auto& l : r.labels) zero = zero && l.alpha.is_zero() && l.j.is_zero();
    o.require(zero, "transplant residuals exactly 0");
    const LinearMap ext = extend_two_step_isometry(t, a1, a2);
    o.require(ext.exact && exact_bracket_residual(ext.exact_matrix, a1, a2).is_zero(),
              "extended isometry residual exactly 0");
    o.detail << " classes (rep:H1/H2):" << table.str();
  });

  std::vector<double> floors;
  criterion("AC8", "no isometry found between the three-step algebras", 300.0, [&](Outcome& o) {
    const Example& e = sl32();
    SearchConfig cfg;
    cfg.restarts = 200;
    cfg.seed = 1;
    const NilpotentLieAlgebra a1 = sl32_three_step(0);
    const std::vector<TAssignment> second{*e.spec.subgroups[1].t_assignment, single(-1, 0),
                                          single(0, -1), single(0, 1)};
    for (std::size_t k = 0; k < second.size(); ++k) {
      const NilpotentLieAlgebra a2 = three_step(e.graphs[1], second[k]);
      const SearchResult r = search_isometry(a1, a2, cfg);
      floors.push_back(r.best_residual);
      const double pinned = k == 0 ? kPinnedFloor : kPinnedVariationFloors[k - 1];
      o.require(r.restarts.size() == 200, "200 restarts ran");
      o.require(r.verdict == "no_isometry_found", "verdict for assignment " + std::to_string(k));
      o.require(r.best_residual > 1e-2, "floor above 1e-2 for assignment " + std::to_string(k));
      o.require(std::abs(r.best_residual - pinned) <= kFloorTolerance * pinned,
                "floor matches pinned value for assignment " + std::to_string(k));
    }
    o.detail << " floors:";
    for (double f : floors) o.detail << " " << std::setprecision(16) << f;
  });

  criterion("AC9", "control: two-step pair reaches residual < 1e-8", 300.0, [](Outcome& o) {
    const Example& e = sl32();
    SearchConfig cfg;
    cfg.restarts = 200;
    cfg.seed = 1;
    const SearchResult r = search_isometry(two_step(e.graphs[0]), two_step(e.graphs[1]), cfg);
    o.require(r.best_residual < 1e-8, "residual below 1e-8");
    o.require(r.verdict == "isometric_numerical", "verdict");
    o.detail << " best " << r.best_residual << " at restart " << r.best_restart;
  });

  criterion("AC10", "property suite, 1000 checks each", 60.0, [](Outcome& o) {
    std::mt19937_64 rng(10);
    std::vector<NilpotentLieAlgebra> pool{sl32_three_step(0), sl32_three_step(1)};
    const auto extra = random_graphs(rng, 6, [](const SchreierGraph& g) {
      return !classify_labels(g).admissible_labels().empty() && g.vertex_count() <= 12;
    });
    for (const auto& g : extra)
      pool.push_back(three_step(g, generic_t_assignment(classify_labels(g).admissible_labels().size())));
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);

    std::size_t skew = 0, jacobi = 0, invariant = 0, divides = 0;
    for (int i = 0; i < 1000; ++i) {
      const NilpotentLieAlgebra& a = pool[pick(rng)];
      const Vector x = random_vector(a.dimension(), rng), y = random_vector(a.dimension(), rng);
      skew += bracket(a, x, y) == negate(bracket(a, y, x));
    }
    for (int i = 0; i < 1000; ++i) {
      const NilpotentLieAlgebra& a = pool[pick(rng)];
      const std::size_t n = a.dimension();
      const Vector x = random_vector(n, rng), y = random_vector(n, rng), z = random_vector(n, rng);
      const Vector sum = add(add(bracket(a, x, bracket(a, y, z)), bracket(a, y, bracket(a, z, x))),
                             bracket(a, z, bracket(a, x, y)));
      jacobi += is_zero_vector(sum);
    }
    std::vector<MetricAlgebra> metric;
    std::vector<Fingerprint> base;
    for (const auto& a : pool) {
      metric.push_back(metric_algebra(a));
      base.push_back(fingerprint(a));
    }
    for (int i = 0; i < 1000; ++i) {
      const std::size_t k = pick(rng);
      const Eigen::MatrixXd q = random_block_orthogonal(metric[k].blocks, rng);
      invariant += fingerprint(transform(metric[k], q)).matches(base[k], 1e-9);
    }
    for (int i = 0; i < 1000;) {
      const auto s = random_system(rng, 200);
      if (!s) continue;
      const SchreierGraph g = build_schreier(s->group, s->h_gens, s->c);
      for (std::size_t l = 0; l < g.label_count() && i < 1000; ++l, ++i) {
        const std::uint64_t order = element_order(s->c.c_pos[l].element);
        bool ok = true;
        for (std::size_t len : label_cycles(g, l).lengths) ok = ok && order % len == 0;
        divides += ok;
      }
    }
    o.require(skew == 1000, "skew-symmetry " + std::to_string(skew) + "/1000");
    o.require(jacobi == 1000, "Jacobi " + std::to_string(jacobi) + "/1000");
    o.require(invariant == 1000, "fingerprint invariance " + std::to_string(invariant) + "/1000");
    o.require(divides == 1000, "cycle length divides order " + std::to_string(divides) + "/1000");
    o.detail << " algebras in pool: " << pool.size();
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
  return failures == 0 ? 0 : 1;
}
