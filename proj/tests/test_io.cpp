#include <gtest/gtest.h>

#include <array>
#include <functional>
#include <set>

#include "nilgraph/gassmann.hpp"
#include "nilgraph/io.hpp"
#include "nilgraph/isometry.hpp"
#include "support.hpp"

using namespace nilgraph;
using namespace nilgraph::testing;

namespace {

Error error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error thrown";
  return Error(ErrorCode::InvalidArgument, "none");
}

using Mat3 = std::array<std::array<int, 3>, 3>;

Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int s = 0;
      for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
      c[i][j] = s % 2;
    }
  return c;
}

// Permutation of the nonzero vectors of F_2^3 under x -> xM, point p
// standing for the bits ((p >> 2) & 1, (p >> 1) & 1, p & 1).
Permutation action(const Mat3& m) {
  std::vector<Point> images(7);
  for (int p = 1; p <= 7; ++p) {
    const int x[3] = {(p >> 2) & 1, (p >> 1) & 1, p & 1};
    int y[3];
    for (int j = 0; j < 3; ++j) y[j] = (x[0] * m[0][j] + x[1] * m[1][j] + x[2] * m[2][j]) % 2;
    images[p - 1] = static_cast<Point>(4 * y[0] + 2 * y[1] + y[2] - 1);
  }
  return Permutation(images);
}

// All of SL(3,2) by closure under the two matrices.
std::vector<Mat3> matrix_group(const Mat3& a, const Mat3& b) {
  std::set<Mat3> seen{Mat3{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}};
  std::vector<Mat3> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    std::vector<Mat3> next;
    for (const Mat3& x : frontier)
      for (const Mat3& g : {a, b}) {
        const Mat3 y = mul(x, g);
        if (seen.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

const char* kMinimal = R"toml(version = 1
degree = 4
[[generators]]
name = "z"
cycles = "(1 2 3 4)"
[[subgroups]]
generators = []
)toml";

}  // namespace

TEST(Spec, ParsesFixtures) {
  const ProblemSpec s = load_fixture("sl32");
  EXPECT_EQ(s.name, "sl32");
  EXPECT_EQ(s.degree, 7u);
  ASSERT_EQ(s.generators.c_pos.size(), 2u);
  EXPECT_EQ(s.generators.c_pos[0].name, "z_r");
  ASSERT_EQ(s.subgroups.size(), 2u);
  EXPECT_EQ(s.subgroups[0].vertices.size(), 7u);
  ASSERT_TRUE(s.subgroups[0].t_assignment.has_value());
  EXPECT_EQ(s.subgroups[0].t_assignment->t_dim, 1u);
  EXPECT_EQ(spec_group(s).order(), 168u);
  const ProblemSpec c5 = load_fixture("c5");
  EXPECT_TRUE(c5.subgroups[0].generators.empty());
  EXPECT_EQ(spec_graph(c5, spec_group(c5), 0).vertex_count(), 5u);
}

TEST(Spec, Sl32GeneratorsAndSubgroupsMatchMatrixAction) {
  const Mat3 zr{{{0, 1, 1}, {0, 1, 0}, {1, 0, 0}}};
  const Mat3 zb{{{1, 0, 0}, {0, 0, 1}, {0, 1, 1}}};
  const ProblemSpec s = load_fixture("sl32");
  EXPECT_EQ(s.generators.c_pos[0].element, action(zr));
  EXPECT_EQ(s.generators.c_pos[1].element, action(zb));
  const std::vector<Mat3> all = matrix_group(zr, zb);
  ASSERT_EQ(all.size(), 168u);
  std::set<Permutation> fixes_column, fixes_row;
  for (const Mat3& m : all) {
    if (m[0][0] == 1 && m[1][0] == 0 && m[2][0] == 0) fixes_column.insert(action(m));
    if (m[0][0] == 1 && m[0][1] == 0 && m[0][2] == 0) fixes_row.insert(action(m));
  }
  EXPECT_EQ(fixes_column.size(), 24u);
  const FiniteGroup g = spec_group(s);
  const auto as_set = [&](std::size_t sub) {
    std::set<Permutation> out;
    for (std::size_t i : enumerate_subgroup(g, s.subgroups[sub].generators)) out.insert(g[i]);
    return out;
  };
  EXPECT_EQ(as_set(0), fixes_column);
  EXPECT_EQ(as_set(1), fixes_row);
}

TEST(Spec, FixtureGraphsMatchRecordedFigures) {
  for (const Example* e : {&s4(), &sl32()}) {
    for (std::size_t s = 0; s < e->graphs.size(); ++s) {
      const SchreierGraph& g = e->graphs[s];
      ASSERT_FALSE(e->spec.subgroups[s].figure.empty());
      for (const auto& [label, targets] : e->spec.subgroups[s].figure) {
        const auto l = std::find(g.labels.begin(), g.labels.end(), label) - g.labels.begin();
        for (VertexId v = 0; v < g.vertex_count(); ++v)
          EXPECT_EQ(g.vertex_names[g.succ[l][v]], targets[v]) << label << " at " << g.vertex_names[v];
      }
    }
  }
}

TEST(Spec, InvolutionReportsFieldAndLine) {
  const std::string text = R"toml(version = 1
degree = 4

[[generators]]
name = "z1"
cycles = "(1 2 3)"

[[generators]]
name = "z2"
cycles = "(1 2)(3 4)"

[[subgroups]]
generators = []
)toml";
  const Error e = error_of([&] { parse_spec(text); });
  EXPECT_EQ(e.code(), ErrorCode::InvolutionInGenerators);
  EXPECT_NE(e.detail().find("generators[1].cycles (line 10)"), std::string::npos) << e.what();
}

TEST(Spec, SchemaAndSyntaxErrors) {
  Error e = error_of([] { parse_spec(std::string(kMinimal) + "colour = \"red\"\n"); });
  EXPECT_EQ(e.code(), ErrorCode::SpecSchema);
  EXPECT_NE(e.detail().find("subgroups[0].colour"), std::string::npos) << e.what();

  e = error_of([] { parse_spec("degree = 4\n[[generators]]\nname = \"z\"\ncycles = \"(1 2 3)\"\n"); });
  EXPECT_EQ(e.code(), ErrorCode::SpecSchema);
  EXPECT_NE(e.detail().find("version"), std::string::npos);

  e = error_of([] { parse_spec("version = 1\ndegree = = 4\n"); });
  EXPECT_EQ(e.code(), ErrorCode::SpecSyntax);
  EXPECT_NE(e.detail().find("line 2"), std::string::npos) << e.what();

  e = error_of([] { parse_spec(R"({"version": 1, "degree": })"); });
  EXPECT_EQ(e.code(), ErrorCode::SpecSyntax);

  e = error_of([] { parse_spec(std::string(kMinimal).replace(0, 11, "version = 2")); });
  EXPECT_EQ(e.code(), ErrorCode::SpecSchema);
}

TEST(Spec, GroupErrorsCarryTheirCode) {
  std::string text = kMinimal;
  text.replace(text.find("generators = []"), 15, "generators = [\"(1 2)\"]");
  const Error e = error_of([&] { parse_spec(text); });
  EXPECT_EQ(e.code(), ErrorCode::SubgroupNotInGroup);
  EXPECT_NE(e.detail().find("subgroups[0].generators"), std::string::npos);
}

TEST(Spec, JsonInputWithImageArrays) {
  const ProblemSpec s = parse_spec(R"({
    "version": 1, "name": "c4", "degree": 4,
    "generators": [{"name": "z", "images": [1, 2, 3, 0]}],
    "subgroups": [{"generators": []}],
    "search": {"restarts": 3, "seed": 9}
  })");
  EXPECT_EQ(s.generators.c_pos[0].element, Permutation::from_cycles("(1 2 3 4)", 4));
  ASSERT_TRUE(s.search.has_value());
  EXPECT_EQ(s.search->restarts, 3u);
  EXPECT_EQ(s.search->seed, 9u);
}

TEST(RoundTrip, Graph) {
  for (const auto& g : sl32().graphs) {
    const SchreierGraph back = graph_from_json(graph_to_json(g));
    EXPECT_EQ(back.vertex_names, g.vertex_names);
    EXPECT_EQ(back.labels, g.labels);
    EXPECT_EQ(back.succ, g.succ);
  }
}

TEST(RoundTrip, Algebra) {
  for (std::size_t w = 0; w < 2; ++w) {
    const NilpotentLieAlgebra a = sl32_three_step(w);
    EXPECT_EQ(algebra_from_json(Json::parse(algebra_to_json(a).dump())), a);
  }
  const NilpotentLieAlgebra g = three_step(s4().graphs[0], generic_t_assignment(2));
  EXPECT_EQ(algebra_from_json(algebra_to_json(g)), g);
}

TEST(RoundTrip, TAssignmentAndRationalVector) {
  const TAssignment t = *sl32().spec.subgroups[1].t_assignment;
  const TAssignment back = t_assignment_from_json(t_assignment_to_json(t));
  EXPECT_EQ(back.t_dim, t.t_dim);
  EXPECT_EQ(back.per_label, t.per_label);
  const Vector v{Rational(1, 3), Rational(-2), Rational(0)};
  EXPECT_EQ(rational_vector_from_json(rational_vector_to_json(v)), v);
}

TEST(RoundTrip, ExactAndNumericLinearMaps) {
  const Example& e = sl32();
  const LinearMap t = orthogonal_intertwiner(intertwiner_basis(e.graphs[0], e.graphs[1]));
  const LinearMap back = linear_map_from_json(Json::parse(linear_map_to_json(t).dump()));
  EXPECT_TRUE(back.exact);
  EXPECT_EQ(back.exact_matrix, t.exact_matrix);
  Eigen::MatrixXd m(2, 2);
  m << 0.25, -1.5, 1e-17, 3.0;
  const LinearMap n = LinearMap::from_numeric(m);
  const LinearMap nb = linear_map_from_json(Json::parse(linear_map_to_json(n).dump()));
  EXPECT_FALSE(nb.exact);
  EXPECT_EQ(nb.numeric, m);
}

TEST(RoundTrip, FingerprintAndSearchResult) {
  const auto a1 = sl32_three_step(0), a2 = sl32_three_step(1);
  const Fingerprint f = fingerprint(a1);
  EXPECT_EQ(fingerprint_from_json(Json::parse(fingerprint_to_json(f).dump())), f);
  SearchConfig cfg;
  cfg.restarts = 2;
  cfg.max_iterations = 50;
  const SearchResult r = search_isometry(a1, a2, cfg);
  const SearchResult back = search_result_from_json(Json::parse(search_result_to_json(r).dump()));
  EXPECT_EQ(back.verdict, r.verdict);
  EXPECT_EQ(back.best_residual, r.best_residual);
  EXPECT_EQ(back.best_restart, r.best_restart);
  EXPECT_EQ(back.best_map, r.best_map);
  ASSERT_EQ(back.restarts.size(), r.restarts.size());
  for (std::size_t i = 0; i < r.restarts.size(); ++i) {
    EXPECT_EQ(back.restarts[i].seed, r.restarts[i].seed);
    EXPECT_EQ(back.restarts[i].final_residual, r.restarts[i].final_residual);
    EXPECT_EQ(back.restarts[i].iterations, r.restarts[i].iterations);
  }
  EXPECT_EQ(back.fingerprint_a, r.fingerprint_a);
  EXPECT_EQ(back.fingerprint_b, r.fingerprint_b);
}
