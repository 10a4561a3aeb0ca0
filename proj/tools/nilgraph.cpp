// nilgraph: Schreier graphs, the nilpotent Lie algebras built from them,
// Gassmann transplantation and isometry evidence, from a TOML/JSON spec.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "nilgraph/errors.hpp"
#include "nilgraph/gassmann.hpp"
#include "nilgraph/io.hpp"
#include "nilgraph/isometry.hpp"
#include "nilgraph/lie.hpp"
#include "nilgraph/schreier.hpp"

using namespace nilgraph;

namespace {

struct Options {
  std::string spec_path;
  std::string out;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> restarts;
  std::string t_assignment = "generic";
  std::size_t subgroup = 0;
  int step = 2;
};

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + opt.out);
  out << text;
}

void emit_json(const Options& opt, const Json& j) { emit(opt, j.dump(2) + "\n"); }

TAssignment choose_t(const Options& opt, const ProblemSpec& spec, std::size_t subgroup,
                     const SchreierGraph& graph) {
  if (opt.t_assignment == "generic") {
    return generic_t_assignment(classify_labels(graph).admissible_labels().size());
  }
  if (opt.t_assignment == "paper") {
    const auto& t = spec.subgroups.at(subgroup).t_assignment;
    if (!t) {
      throw Error(ErrorCode::InvalidTAssignment,
                  "spec has no t_assignment for subgroup " + spec.subgroups[subgroup].name);
    }
    return *t;
  }
  const std::string text = read_file(opt.t_assignment);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SpecSyntax, opt.t_assignment + ": " + e.what());
  }
  return t_assignment_from_json(j);
}

NilpotentLieAlgebra build_algebra(const Options& opt, const ProblemSpec& spec, std::size_t subgroup,
                                  const SchreierGraph& graph) {
  if (opt.step == 2) return two_step(graph);
  if (opt.step == 3) return three_step(graph, choose_t(opt, spec, subgroup, graph));
  throw Error(ErrorCode::InvalidArgument, "--step must be 2 or 3");
}

void require_pair(const ProblemSpec& spec) {
  if (spec.subgroups.size() != 2) {
    throw Error(ErrorCode::SpecSchema, "this command needs a spec with two subgroups");
  }
}

void check_subgroup(const Options& opt, const ProblemSpec& spec) {
  if (opt.subgroup >= spec.subgroups.size()) {
    throw Error(ErrorCode::InvalidArgument, "--subgroup out of range");
  }
}

void cmd_graph(const Options& opt) {
  const ProblemSpec spec = load_spec(opt.spec_path);
  check_subgroup(opt, spec);
  const SchreierGraph g = spec_graph(spec, spec_group(spec), opt.subgroup);
  if (opt.format == "dot") {
    emit(opt, export_dot(g));
  } else {
    emit_json(opt, graph_to_json(g));
  }
}

void cmd_classify(const Options& opt) {
  const ProblemSpec spec = load_spec(opt.spec_path);
  check_subgroup(opt, spec);
  const SchreierGraph g = spec_graph(spec, spec_group(spec), opt.subgroup);
  emit_json(opt, admissibility_to_json(classify_labels(g), g));
}

void cmd_algebra(const Options& opt) {
  const ProblemSpec spec = load_spec(opt.spec_path);
  check_subgroup(opt, spec);
  const SchreierGraph g = spec_graph(spec, spec_group(spec), opt.subgroup);
  emit_json(opt, algebra_to_json(build_algebra(opt, spec, opt.subgroup, g)));
}

void cmd_verify(const Options& opt) {
  const ProblemSpec spec = load_spec(opt.spec_path);
  check_subgroup(opt, spec);
  const SchreierGraph g = spec_graph(spec, spec_group(spec), opt.subgroup);
  const NilpotentLieAlgebra a = build_algebra(opt, spec, opt.subgroup, g);
  Json out{{"jacobi", jacobi_to_json(verify_jacobi(a))}, {"series", series_to_json(central_series(a))}};
  if (opt.step == 2) {
    Json j = Json::object();
    for (std::size_t l = 0; l < g.label_count(); ++l) {
      j_operator(a, g, l);  // throws AdjointMismatch on disagreement
      j[g.labels[l]] = "agree";
    }
    out["j_operator"] = j;
  }
  emit_json(opt, out);
}

void cmd_gassmann(const Options& opt) {
  const ProblemSpec spec = load_spec(opt.spec_path);
  require_pair(spec);
  const FiniteGroup group = spec_group(spec);
  const AlmostConjugacy ac =
      almost_conjugate(group, spec.subgroups[0].generators, spec.subgroups[1].generators);
  Json out = almost_conjugacy_to_json(ac);
  const SchreierGraph g1 = spec_graph(spec, group, 0);
  const SchreierGraph g2 = spec_graph(spec, group, 1);
  const auto basis = intertwiner_basis(g1, g2);
  out["intertwiner_dim"] = basis.size();
  const LinearMap t = orthogonal_intertwiner(basis);
  out["orthogonal_map"] = linear_map_to_json(t);
  const NilpotentLieAlgebra a1 = two_step(g1);
  const NilpotentLieAlgebra a2 = two_step(g2);
  out["transplant"] = transplant_to_json(verify_transplant(t, g1, g2, a1, a2));
  const LinearMap ext = extend_two_step_isometry(t, a1, a2);
  if (ext.exact) {
    out["isometry_residual"] = exact_bracket_residual(ext.exact_matrix, a1, a2).to_string();
  } else {
    out["isometry_residual"] = bracket_residual(ext.numeric, a1, a2);
  }
  emit_json(opt, out);
}

void cmd_isometry(const Options& opt) {
  const ProblemSpec spec = load_spec(opt.spec_path);
  require_pair(spec);
  const FiniteGroup group = spec_group(spec);
  const SchreierGraph g1 = spec_graph(spec, group, 0);
  const SchreierGraph g2 = spec_graph(spec, group, 1);
  const NilpotentLieAlgebra a1 = build_algebra(opt, spec, 0, g1);
  const NilpotentLieAlgebra a2 = build_algebra(opt, spec, 1, g2);
  SearchConfig cfg = spec.search.value_or(SearchConfig{});
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.restarts) cfg.restarts = *opt.restarts;
  emit_json(opt, search_result_to_json(search_isometry(a1, a2, cfg)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nilpotent Lie algebras from Schreier graphs"};
  app.require_subcommand(1);
  Options opt;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec", opt.spec_path, "problem spec (TOML or JSON)")->required();
    sub->add_option("--out", opt.out, "write output to this file instead of stdout");
    sub->add_option("--format", opt.format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
    sub->add_option("--seed", opt.seed, "search seed");
    sub->add_option("--restarts", opt.restarts, "search restarts")->check(CLI::PositiveNumber);
    sub->add_option("--t-assignment", opt.t_assignment, "paper (t_assignment stored in the spec file), generic, or a JSON file");
    sub->add_option("--subgroup", opt.subgroup, "subgroup index for single-graph commands");
  };
  CLI::App* graph = app.add_subcommand("graph", "build the Schreier graph (JSON or DOT)");
  CLI::App* classify = app.add_subcommand("classify", "admissibility of every label");
  CLI::App* algebra = app.add_subcommand("algebra", "structure constants as JSON");
  CLI::App* verify = app.add_subcommand("verify", "Jacobi identity and central series");
  CLI::App* gassmann = app.add_subcommand("gassmann", "almost conjugacy, intertwiner, isometry");
  CLI::App* isometry = app.add_subcommand("isometry", "fingerprints and numerical isometry search");
  for (CLI::App* sub : {graph, classify, algebra, verify, gassmann, isometry}) add_common(sub);
  for (CLI::App* sub : {algebra, verify, isometry}) {
    sub->add_option("--step", opt.step, "2 or 3")->check(CLI::IsMember({2, 3}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*graph) cmd_graph(opt);
    if (*classify) cmd_classify(opt);
    if (*algebra) cmd_algebra(opt);
    if (*verify) cmd_verify(opt);
    if (*gassmann) cmd_gassmann(opt);
    if (*isometry) cmd_isometry(opt);
  } catch (const Error& e) {
    const Json err{{"error", to_string(e.code())}, {"message", e.detail()}};
    std::cerr << err.dump() << "\n";
    return is_internal(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return 3;
  }
  return 0;
}
