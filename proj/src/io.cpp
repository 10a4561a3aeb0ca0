#include "nilgraph/io.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "nilgraph/errors.hpp"

#ifndef NILGRAPH_FIXTURE_DIR
#define NILGRAPH_FIXTURE_DIR "fixtures"
#endif

namespace nilgraph {

namespace {

// Parsed document plus the source line of every field path (TOML only).
struct Document {
  Json root;
  std::map<std::string, int> lines;
};

std::string child_path(const std::string& parent, std::string_view key) {
  return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

std::string index_path(const std::string& parent, std::size_t i) {
  return parent + "[" + std::to_string(i) + "]";
}

Json toml_to_json(const toml::node& node, const std::string& path, Document& doc) {
  if (node.source().begin.line > 0) doc.lines[path] = static_cast<int>(node.source().begin.line);
  if (const auto* t = node.as_table()) {
    Json out = Json::object();
    for (const auto& [key, value] : *t) {
      out[std::string(key.str())] = toml_to_json(value, child_path(path, key.str()), doc);
    }
    return out;
  }
  if (const auto* a = node.as_array()) {
    Json out = Json::array();
    for (std::size_t i = 0; i < a->size(); ++i) {
      out.push_back(toml_to_json((*a)[i], index_path(path, i), doc));
    }
    return out;
  }
  if (const auto* s = node.as_string()) return s->get();
  if (const auto* i = node.as_integer()) return i->get();
  if (const auto* f = node.as_floating_point()) return f->get();
  if (const auto* b = node.as_boolean()) return b->get();
  throw Error(ErrorCode::SpecSchema,
              path + " (line " + std::to_string(node.source().begin.line) +
                  "): unsupported value type");
}

Document parse_document(std::string_view text) {
  Document doc;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    try {
      doc.root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::SpecSyntax, std::string("JSON: ") + e.what());
    }
    return doc;
  }
  try {
    const toml::table table = toml::parse(text);
    doc.root = toml_to_json(table, "", doc);
  } catch (const toml::parse_error& e) {
    throw Error(ErrorCode::SpecSyntax, "line " + std::to_string(e.source().begin.line) +
                                           ", column " + std::to_string(e.source().begin.column) +
                                           ": " + std::string(e.description()));
  }
  return doc;
}

class SpecReader {
 public:
  explicit SpecReader(const Document& doc) : doc_(doc) {}

  std::string where(const std::string& path) const {
    const auto it = doc_.lines.find(path);
    if (it == doc_.lines.end()) return path;
    return path + " (line " + std::to_string(it->second) + ")";
  }

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw Error(ErrorCode::SpecSchema, where(path) + ": " + msg);
  }

  [[noreturn]] void relocate(const Error& e, const std::string& path) const {
    throw Error(e.code(), where(path) + ": " + e.detail());
  }

  void check_keys(const Json& obj, const std::string& path,
                  std::initializer_list<std::string_view> allowed) const {
    if (!obj.is_object()) fail(path, "expected a table");
    for (const auto& [key, value] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(child_path(path, key), "unknown field");
      }
    }
  }

  const Json& require(const Json& obj, const std::string& path, const std::string& key) const {
    if (!obj.contains(key)) fail(child_path(path, key), "missing required field");
    return obj.at(key);
  }

  std::string string(const Json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  std::int64_t integer(const Json& j, const std::string& path) const {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const Json& j, const std::string& path) const {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    const auto v = integer(j, path);
    if (v < 0) fail(path, "expected a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  }

  std::size_t positive(const Json& j, const std::string& path) const {
    const auto v = unsigned_integer(j, path);
    if (v == 0) fail(path, "must be positive");
    return static_cast<std::size_t>(v);
  }

  double real(const Json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!(v > 0)) fail(path, "must be positive");
    return v;
  }

  const Json& array(const Json& j, const std::string& path) const {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
  }

  Permutation permutation(const Json& j, const std::string& path, std::size_t degree) const {
    if (!j.is_string() && !j.is_array()) fail(path, "expected cycle notation or an image array");
    try {
      return permutation_from_json(j, degree);
    } catch (const Error& e) {
      relocate(e, path);
    } catch (const nlohmann::json::exception&) {
      fail(path, "image arrays must hold nonnegative integers");
    }
  }

  Rational rational(const Json& j, const std::string& path) const {
    try {
      if (j.is_number_integer()) return Rational(j.get<long>());
      if (j.is_string()) return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      relocate(e, path);
    }
    fail(path, "expected an integer or a \"p/q\" string");
  }

 private:
  const Document& doc_;
};

TAssignment read_t_assignment(const SpecReader& r, const Json& j, const std::string& path) {
  r.check_keys(j, path, {"t_dim", "labels"});
  TAssignment t;
  t.t_dim = r.positive(r.require(j, path, "t_dim"), child_path(path, "t_dim"));
  const std::string lpath = child_path(path, "labels");
  const Json& labels = r.array(r.require(j, path, "labels"), lpath);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const std::string kpath = index_path(lpath, k);
    r.check_keys(labels[k], kpath, {"t1", "t2"});
    std::array<Vector, 2> pair;
    for (int slot = 0; slot < 2; ++slot) {
      const std::string key = slot == 0 ? "t1" : "t2";
      const std::string vpath = child_path(kpath, key);
      const Json& v = r.array(r.require(labels[k], kpath, key), vpath);
      if (v.size() != t.t_dim) r.fail(vpath, "length must equal t_dim");
      for (std::size_t c = 0; c < v.size(); ++c) {
        pair[slot].push_back(r.rational(v[c], index_path(vpath, c)));
      }
    }
    t.per_label.push_back(std::move(pair));
  }
  return t;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json permutation_to_json(const Permutation& p) { return p.to_cycle_string(); }

Permutation permutation_from_json(const Json& j, std::size_t degree) {
  if (j.is_string()) return Permutation::from_cycles(j.get<std::string>(), degree);
  if (!j.is_array()) throw Error(ErrorCode::InvalidPermutation, "expected cycles or images");
  std::vector<Point> images;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<std::int64_t>() < 0) {
      throw Error(ErrorCode::InvalidPermutation, "image arrays hold nonnegative integers");
    }
    images.push_back(static_cast<Point>(x.get<std::int64_t>()));
  }
  if (images.size() != degree) {
    throw Error(ErrorCode::DegreeMismatch, "image array length differs from degree " +
                                               std::to_string(degree));
  }
  return Permutation(std::move(images));
}

ProblemSpec parse_spec(std::string_view text) {
  const Document doc = parse_document(text);
  const SpecReader r(doc);
  const Json& root = doc.root;
  r.check_keys(root, "", {"version", "name", "description", "degree", "group_generators",
                          "generators", "subgroups", "search"});
  const auto version = r.integer(r.require(root, "", "version"), "version");
  if (version != 1) r.fail("version", "unsupported version " + std::to_string(version));

  ProblemSpec spec;
  if (root.contains("name")) spec.name = r.string(root["name"], "name");
  if (root.contains("description")) r.string(root["description"], "description");
  spec.degree = r.positive(r.require(root, "", "degree"), "degree");

  const Json& gens = r.array(r.require(root, "", "generators"), "generators");
  if (gens.empty()) r.fail("generators", "at least one generator is required");
  std::set<std::string> names;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string path = index_path("generators", i);
    r.check_keys(gens[i], path, {"name", "cycles", "images"});
    const std::string name = r.string(r.require(gens[i], path, "name"), child_path(path, "name"));
    if (!names.insert(name).second) r.fail(child_path(path, "name"), "duplicate label " + name);
    const bool has_cycles = gens[i].contains("cycles");
    if (has_cycles == gens[i].contains("images")) {
      r.fail(path, "give exactly one of cycles, images");
    }
    const std::string ppath = child_path(path, has_cycles ? "cycles" : "images");
    Permutation p = r.permutation(gens[i][has_cycles ? "cycles" : "images"], ppath, spec.degree);
    if (p.is_identity()) {
      r.relocate(Error(ErrorCode::IdentityInGenerators, name + " is the identity"), ppath);
    }
    if (element_order(p) == 2) {
      r.relocate(Error(ErrorCode::InvolutionInGenerators,
                       name + " = " + p.to_cycle_string() + " has order 2"),
                 ppath);
    }
    spec.generators.c_pos.push_back({name, std::move(p)});
  }

  if (root.contains("group_generators")) {
    const Json& gg = r.array(root["group_generators"], "group_generators");
    if (gg.empty()) r.fail("group_generators", "must not be empty");
    for (std::size_t i = 0; i < gg.size(); ++i) {
      spec.group_generators.push_back(
          r.permutation(gg[i], index_path("group_generators", i), spec.degree));
    }
  }

  const Json& subs = r.array(r.require(root, "", "subgroups"), "subgroups");
  if (subs.empty() || subs.size() > 2) r.fail("subgroups", "give one or two subgroups");
  for (std::size_t s = 0; s < subs.size(); ++s) {
    const std::string spath = index_path("subgroups", s);
    r.check_keys(subs[s], spath, {"name", "generators", "vertices", "t_assignment", "figure"});
    SubgroupSpec sub;
    sub.name = subs[s].contains("name") ? r.string(subs[s]["name"], child_path(spath, "name"))
                                        : "H" + std::to_string(s + 1);
    const std::string gpath = child_path(spath, "generators");
    const Json& hg = r.array(r.require(subs[s], spath, "generators"), gpath);
    for (std::size_t i = 0; i < hg.size(); ++i) {
      sub.generators.push_back(r.permutation(hg[i], index_path(gpath, i), spec.degree));
    }
    if (subs[s].contains("vertices")) {
      const std::string vpath = child_path(spath, "vertices");
      const Json& vs = r.array(subs[s]["vertices"], vpath);
      for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string ipath = index_path(vpath, i);
        r.check_keys(vs[i], ipath, {"name", "rep"});
        sub.vertices.push_back(
            {r.string(r.require(vs[i], ipath, "name"), child_path(ipath, "name")),
             r.permutation(r.require(vs[i], ipath, "rep"), child_path(ipath, "rep"), spec.degree)});
      }
    }
    if (subs[s].contains("t_assignment")) {
      sub.t_assignment =
          read_t_assignment(r, subs[s]["t_assignment"], child_path(spath, "t_assignment"));
    }
    if (subs[s].contains("figure")) {
      const std::string fpath = child_path(spath, "figure");
      const Json& fig = subs[s]["figure"];
      if (!fig.is_object()) r.fail(fpath, "expected a table");
      for (const auto& [label, targets] : fig.items()) {
        const std::string lpath = child_path(fpath, label);
        if (!names.contains(label)) r.fail(lpath, "unknown label");
        std::vector<std::string> row;
        for (std::size_t i = 0; i < r.array(targets, lpath).size(); ++i) {
          row.push_back(r.string(targets[i], index_path(lpath, i)));
        }
        sub.figure.emplace_back(label, std::move(row));
      }
    }
    spec.subgroups.push_back(std::move(sub));
  }

  if (root.contains("search")) {
    const Json& sj = root["search"];
    r.check_keys(sj, "search", {"restarts", "max_iterations", "tolerance", "initial_step", "seed"});
    SearchConfig cfg;
    if (sj.contains("restarts")) cfg.restarts = r.positive(sj["restarts"], "search.restarts");
    if (sj.contains("max_iterations")) {
      cfg.max_iterations = r.positive(sj["max_iterations"], "search.max_iterations");
    }
    if (sj.contains("tolerance")) cfg.tolerance = r.real(sj["tolerance"], "search.tolerance");
    if (sj.contains("initial_step")) {
      cfg.initial_step = r.real(sj["initial_step"], "search.initial_step");
    }
    if (sj.contains("seed")) cfg.seed = r.unsigned_integer(sj["seed"], "search.seed");
    spec.search = cfg;
  }

  // Semantic checks that need the group.
  FiniteGroup g;
  try {
    g = spec_group(spec);
  } catch (const Error& e) {
    r.relocate(e, spec.group_generators.empty() ? "generators" : "group_generators");
  }
  try {
    validate_generators(g, spec.generators);
  } catch (const Error& e) {
    r.relocate(e, "generators");
  }
  for (std::size_t s = 0; s < spec.subgroups.size(); ++s) {
    try {
      enumerate_subgroup(g, spec.subgroups[s].generators);
    } catch (const Error& e) {
      r.relocate(e, child_path(index_path("subgroups", s), "generators"));
    }
  }
  return spec;
}

ProblemSpec load_spec(const std::string& path) { return parse_spec(read_file(path)); }

std::string fixture_dir() {
  if (const char* env = std::getenv("NILGRAPH_FIXTURE_DIR")) return env;
  return NILGRAPH_FIXTURE_DIR;
}

ProblemSpec load_fixture(const std::string& name) {
  return load_spec(fixture_dir() + "/" + name + ".toml");
}

FiniteGroup spec_group(const ProblemSpec& spec) {
  if (!spec.group_generators.empty()) return generate_group(spec.group_generators);
  return generate_group(spec.generators.elements());
}

SchreierGraph spec_graph(const ProblemSpec& spec, const FiniteGroup& g, std::size_t subgroup) {
  const SubgroupSpec& sub = spec.subgroups.at(subgroup);
  SchreierGraph graph = build_schreier(g, sub.generators, spec.generators);
  if (sub.vertices.empty()) return graph;
  const std::string where = "subgroups[" + std::to_string(subgroup) + "].vertices";
  if (sub.vertices.size() != graph.vertex_count()) {
    throw Error(ErrorCode::SpecSchema, where + ": expected " +
                                           std::to_string(graph.vertex_count()) + " vertices");
  }
  std::set<Permutation> h(graph.subgroup_elements.begin(), graph.subgroup_elements.end());
  std::vector<VertexId> order;
  std::vector<std::string> names;
  std::vector<bool> used(graph.vertex_count(), false);
  for (const NamedVertex& nv : sub.vertices) {
    std::optional<VertexId> found;
    for (VertexId v = 0; v < graph.vertex_count(); ++v) {
      if (h.contains(compose(nv.representative, inverse(graph.vertex_reps[v])))) found = v;
    }
    if (!found || used[*found]) {
      throw Error(ErrorCode::SpecSchema,
                  where + ": " + nv.name + " does not name a new coset");
    }
    used[*found] = true;
    order.push_back(*found);
    names.push_back(nv.name);
  }
  return reorder_vertices(graph, order, std::move(names));
}

Json graph_to_json(const SchreierGraph& g) {
  Json succ = Json::object();
  for (std::size_t l = 0; l < g.label_count(); ++l) succ[g.labels[l]] = g.succ[l];
  return Json{{"vertices", g.vertex_names}, {"labels", g.labels}, {"succ", succ}};
}

SchreierGraph graph_from_json(const Json& j) {
  try {
    auto vertices = j.at("vertices").get<std::vector<std::string>>();
    auto labels = j.at("labels").get<std::vector<std::string>>();
    std::vector<std::vector<VertexId>> succ;
    for (const auto& l : labels) succ.push_back(j.at("succ").at(l).get<std::vector<VertexId>>());
    return make_graph(std::move(vertices), std::move(labels), std::move(succ));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SpecSchema, std::string("graph JSON: ") + e.what());
  }
}

Json rational_vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

Vector rational_vector_from_json(const Json& j) {
  Vector out;
  for (const auto& x : j) {
    out.push_back(x.is_number_integer() ? Rational(x.get<long>())
                                        : parse_rational(x.get<std::string>()));
  }
  return out;
}

Json algebra_to_json(const NilpotentLieAlgebra& a) {
  Json basis = Json::array();
  for (const auto& e : a.basis()) basis.push_back({{"kind", to_string(e.kind)}, {"name", e.name}});
  Json brackets = Json::array();
  for (const auto& [ij, value] : a.entries()) {
    Json coeffs = Json::object();
    for (const auto& [k, c] : value) coeffs[std::to_string(k)] = to_string(c);
    brackets.push_back({{"i", ij.first}, {"j", ij.second}, {"coeffs", coeffs}});
  }
  return Json{{"basis", basis}, {"brackets", brackets}};
}

NilpotentLieAlgebra algebra_from_json(const Json& j) {
  try {
    std::vector<BasisElement> basis;
    for (const auto& e : j.at("basis")) {
      const auto kind = e.at("kind").get<std::string>();
      BasisElement b;
      b.name = e.at("name").get<std::string>();
      if (kind == "V") b.kind = BasisKind::V;
      else if (kind == "Z") b.kind = BasisKind::Z;
      else if (kind == "T") b.kind = BasisKind::T;
      else throw Error(ErrorCode::SpecSchema, "unknown basis kind " + kind);
      basis.push_back(std::move(b));
    }
    NilpotentLieAlgebra a(std::move(basis));
    for (const auto& b : j.at("brackets")) {
      SparseVector value;
      for (const auto& [k, c] : b.at("coeffs").items()) {
        value[static_cast<std::uint32_t>(std::stoul(k))] = parse_rational(c.get<std::string>());
      }
      a.set_bracket(b.at("i").get<std::uint32_t>(), b.at("j").get<std::uint32_t>(), value);
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SpecSchema, std::string("algebra JSON: ") + e.what());
  }
}

Json t_assignment_to_json(const TAssignment& t) {
  Json labels = Json::array();
  for (const auto& pair : t.per_label) {
    labels.push_back({{"t1", rational_vector_to_json(pair[0])},
                      {"t2", rational_vector_to_json(pair[1])}});
  }
  return Json{{"t_dim", t.t_dim}, {"labels", labels}};
}

TAssignment t_assignment_from_json(const Json& j) {
  Document doc;
  doc.root = j;
  return read_t_assignment(SpecReader(doc), doc.root, "t_assignment");
}

Json linear_map_to_json(const LinearMap& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (m.exact) {
        row.push_back(m.exact_matrix(r, c).to_string());
      } else {
        row.push_back(m.numeric(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
      }
    }
    rows.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"exact", m.exact}, {"entries", rows}};
}

LinearMap linear_map_from_json(const Json& j) {
  try {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const Json& entries = j.at("entries");
    if (entries.size() != rows) throw Error(ErrorCode::SpecSchema, "row count mismatch");
    if (j.at("exact").get<bool>()) {
      QuadraticMatrix m(rows, cols);
      for (std::size_t r = 0; r < rows; ++r) {
        if (entries[r].size() != cols) throw Error(ErrorCode::SpecSchema, "column count mismatch");
        for (std::size_t c = 0; c < cols; ++c) {
          m(r, c) = QuadraticNumber::parse(entries[r][c].get<std::string>());
        }
      }
      return LinearMap::from_exact(std::move(m));
    }
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (entries[r].size() != cols) throw Error(ErrorCode::SpecSchema, "column count mismatch");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = entries[r][c].get<double>();
    }
    return LinearMap::from_numeric(std::move(m));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SpecSchema, std::string("linear map JSON: ") + e.what());
  }
}

Json admissibility_to_json(const AdmissibilityReport& r, const SchreierGraph& g) {
  Json out = Json::object();
  for (std::size_t l = 0; l < r.labels.size(); ++l) {
    const LabelVerdict& v = r.labels[l];
    const CycleDecomposition cycles = label_cycles(g, l);
    Json entry{{"admissible", v.admissible}};
    if (v.admissible) {
      Json cycle = Json::array();
      for (VertexId x : v.cycle) cycle.push_back(g.vertex_names[x]);
      entry["cycle"] = cycle;
    } else {
      entry["reason"] = to_string(v.reason);
    }
    entry["cycle_lengths"] = cycles.lengths;
    out[v.label] = entry;
  }
  return out;
}

Json jacobi_to_json(const JacobiReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"triple", {v.i, v.j, v.k}}, {"residual", rational_vector_to_json(v.residual)}});
  }
  return Json{{"ok", r.ok}, {"violations", violations}};
}

Json series_to_json(const SeriesReport& r) {
  const auto spans = [](const std::vector<std::vector<Vector>>& terms) {
    Json out = Json::array();
    for (const auto& term : terms) {
      Json t = Json::array();
      for (const auto& v : term) t.push_back(rational_vector_to_json(v));
      out.push_back(std::move(t));
    }
    return out;
  };
  return Json{{"nilpotent", r.nilpotent},
              {"step", r.step},
              {"descending_dims", r.descending_dims()},
              {"ascending_dims", r.ascending_dims()},
              {"descending", spans(r.descending)},
              {"ascending", spans(r.ascending)}};
}

Json almost_conjugacy_to_json(const AlmostConjugacy& r) {
  Json classes = Json::array();
  for (const auto& c : r.counts) {
    classes.push_back({{"class", c.class_index},
                       {"size", c.class_size},
                       {"representative", c.representative},
                       {"in_h1", c.in_h1},
                       {"in_h2", c.in_h2}});
  }
  return Json{{"almost_conjugate", r.almost_conjugate}, {"classes", classes}};
}

Json transplant_to_json(const TransplantReport& r) {
  Json labels = Json::array();
  for (const auto& l : r.labels) {
    if (r.exact) {
      labels.push_back({{"label", l.label},
                        {"alpha_residual", l.alpha.to_string()},
                        {"j_residual", l.j.to_string()}});
    } else {
      labels.push_back({{"label", l.label},
                        {"alpha_residual", l.alpha_numeric},
                        {"j_residual", l.j_numeric}});
    }
  }
  return Json{{"exact", r.exact}, {"ok", r.ok}, {"labels", labels}};
}

Json fingerprint_to_json(const Fingerprint& f) {
  return Json{{"dims", {f.dv, f.dz, f.dt}},
              {"descending", f.descending},
              {"ascending", f.ascending},
              {"j_spectrum", f.j_spectrum},
              {"k_spectrum", f.k_spectrum},
              {"frobenius", f.frobenius}};
}

Fingerprint fingerprint_from_json(const Json& j) {
  try {
    Fingerprint f;
    const auto dims = j.at("dims").get<std::vector<std::size_t>>();
    if (dims.size() != 3) throw Error(ErrorCode::SpecSchema, "dims must have three entries");
    f.dv = dims[0];
    f.dz = dims[1];
    f.dt = dims[2];
    f.descending = j.at("descending").get<std::vector<std::size_t>>();
    f.ascending = j.at("ascending").get<std::vector<std::size_t>>();
    f.j_spectrum = j.at("j_spectrum").get<std::vector<double>>();
    f.k_spectrum = j.at("k_spectrum").get<std::vector<double>>();
    f.frobenius = j.at("frobenius").get<double>();
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SpecSchema, std::string("fingerprint JSON: ") + e.what());
  }
}

namespace {

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json search_result_to_json(const SearchResult& r) {
  Json restarts = Json::array();
  for (const auto& t : r.restarts) {
    restarts.push_back({{"seed", t.seed},
                        {"final_residual", finite_or_null(t.final_residual)},
                        {"iterations", t.iterations}});
  }
  Json best_map = Json::array();
  for (Eigen::Index i = 0; i < r.best_map.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < r.best_map.cols(); ++k) row.push_back(r.best_map(i, k));
    best_map.push_back(std::move(row));
  }
  return Json{{"verdict", r.verdict},
              {"best_residual", finite_or_null(r.best_residual)},
              {"best_restart", r.best_restart},
              {"restarts", restarts},
              {"fingerprint_a", fingerprint_to_json(r.fingerprint_a)},
              {"fingerprint_b", fingerprint_to_json(r.fingerprint_b)},
              {"best_map", best_map}};
}

SearchResult search_result_from_json(const Json& j) {
  try {
    const auto number = [](const Json& x) {
      return x.is_null() ? std::numeric_limits<double>::infinity() : x.get<double>();
    };
    SearchResult r;
    r.verdict = j.at("verdict").get<std::string>();
    r.best_residual = number(j.at("best_residual"));
    r.best_restart = j.at("best_restart").get<std::size_t>();
    for (const auto& t : j.at("restarts")) {
      r.restarts.push_back({t.at("seed").get<std::uint64_t>(), number(t.at("final_residual")),
                            t.at("iterations").get<std::size_t>()});
    }
    r.fingerprint_a = fingerprint_from_json(j.at("fingerprint_a"));
    r.fingerprint_b = fingerprint_from_json(j.at("fingerprint_b"));
    const Json& m = j.at("best_map");
    const auto rows = static_cast<Eigen::Index>(m.size());
    const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(m[0].size());
    r.best_map.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index k = 0; k < cols; ++k) r.best_map(i, k) = m[i][k].get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SpecSchema, std::string("search JSON: ") + e.what());
  }
}

}  // namespace nilgraph
