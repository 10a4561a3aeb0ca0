#include "nilgraph/group.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "nilgraph/errors.hpp"

namespace nilgraph {

Permutation::Permutation(std::vector<Point> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (Point x : images_) {
    if (x >= images_.size() || seen[x]) {
      throw Error(ErrorCode::InvalidPermutation, "image array is not a bijection");
    }
    seen[x] = true;
  }
}

Permutation Permutation::identity(std::size_t degree) {
  std::vector<Point> images(degree);
  std::iota(images.begin(), images.end(), Point{0});
  Permutation p;
  p.images_ = std::move(images);
  return p;
}

Permutation Permutation::from_cycles(std::string_view text, std::size_t degree) {
  std::vector<Point> images(degree);
  std::iota(images.begin(), images.end(), Point{0});
  std::vector<bool> used(degree, false);
  const auto fail = [&](const std::string& why) {
    return Error(ErrorCode::InvalidPermutation,
                 "'" + std::string(text) + "': " + why);
  };
  std::size_t i = 0;
  const auto skip_space = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
      ++i;
  };
  skip_space();
  if (i == text.size()) throw fail("empty cycle string");
  while (i < text.size()) {
    if (text[i] != '(') throw fail("expected '('");
    ++i;
    std::vector<Point> cycle;
    for (;;) {
      skip_space();
      if (i == text.size()) throw fail("unterminated cycle");
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw fail("expected a point");
      std::size_t value = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        value = value * 10 + static_cast<std::size_t>(text[i] - '0');
        if (value > degree) throw fail("point exceeds degree " + std::to_string(degree));
        ++i;
      }
      if (value == 0) throw fail("points are 1-based");
      const Point x = static_cast<Point>(value - 1);
      if (used[x]) throw fail("point " + std::to_string(value) + " repeated");
      used[x] = true;
      cycle.push_back(x);
    }
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      images[cycle[k]] = cycle[(k + 1) % cycle.size()];
    }
    skip_space();
  }
  return Permutation(std::move(images));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != i) return false;
  }
  return true;
}

std::string Permutation::to_cycle_string() const {
  std::string out;
  std::vector<bool> seen(images_.size(), false);
  for (Point s = 0; s < images_.size(); ++s) {
    if (seen[s] || images_[s] == s) continue;
    out += '(';
    Point x = s;
    bool first = true;
    do {
      if (!first) out += ' ';
      out += std::to_string(x + 1);
      seen[x] = true;
      x = images_[x];
      first = false;
    } while (x != s);
    out += ')';
  }
  return out.empty() ? "()" : out;
}

std::size_t PermutationHash::operator()(const Permutation& p) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (Point x : p.images()) {
    h ^= x;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree()) {
    throw Error(ErrorCode::DegreeMismatch,
                std::to_string(p.degree()) + " vs " + std::to_string(q.degree()));
  }
  std::vector<Point> images(p.degree());
  for (Point x = 0; x < images.size(); ++x) images[x] = q(p(x));
  return Permutation(std::move(images));
}

Permutation inverse(const Permutation& p) {
  std::vector<Point> images(p.degree());
  for (Point x = 0; x < images.size(); ++x) images[p(x)] = x;
  return Permutation(std::move(images));
}

std::uint64_t element_order(const Permutation& p) {
  // lcm of cycle lengths
  std::uint64_t order = 1;
  std::vector<bool> seen(p.degree(), false);
  for (Point s = 0; s < p.degree(); ++s) {
    if (seen[s]) continue;
    std::uint64_t len = 0;
    Point x = s;
    do {
      seen[x] = true;
      x = p(x);
      ++len;
    } while (x != s);
    order = std::lcm(order, len);
  }
  return order;
}

std::optional<std::size_t> FiniteGroup::index_of(const Permutation& p) const {
  const auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FiniteGroup generate_group(std::span<const Permutation> gens, std::size_t cap) {
  if (gens.empty()) throw Error(ErrorCode::InvalidArgument, "no generators");
  const std::size_t degree = gens.front().degree();
  for (const Permutation& g : gens) {
    if (g.degree() != degree) throw Error(ErrorCode::DegreeMismatch, "generator degrees differ");
  }
  FiniteGroup group;
  group.degree_ = degree;
  const auto add = [&](Permutation p) {
    if (group.elements_.size() >= cap) {
      throw Error(ErrorCode::CapExceeded,
                  "group closure exceeds " + std::to_string(cap) + " elements");
    }
    group.index_.emplace(p, group.elements_.size());
    group.elements_.push_back(std::move(p));
  };
  add(Permutation::identity(degree));
  for (std::size_t head = 0; head < group.elements_.size(); ++head) {
    for (const Permutation& g : gens) {
      Permutation y = compose(group.elements_[head], g);
      if (!group.index_.contains(y)) add(std::move(y));
    }
  }
  for (const Permutation& g : gens) group.generator_indices_.push_back(*group.index_of(g));
  return group;
}

std::vector<std::size_t> enumerate_subgroup(const FiniteGroup& g,
                                            std::span<const Permutation> h_gens) {
  std::vector<std::size_t> out;
  if (h_gens.empty()) return {0};
  for (const Permutation& h : h_gens) {
    if (!g.contains(h)) {
      throw Error(ErrorCode::SubgroupNotInGroup,
                  "subgroup generator " + h.to_cycle_string() + " is not in G");
    }
  }
  const FiniteGroup h = generate_group(h_gens, g.order());
  out.reserve(h.order());
  for (const Permutation& x : h.elements()) out.push_back(*g.index_of(x));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<std::size_t>> conjugacy_classes(const FiniteGroup& g) {
  std::vector<Permutation> gens;
  std::vector<Permutation> gens_inv;
  for (std::size_t i : g.generator_indices()) {
    gens.push_back(g[i]);
    gens_inv.push_back(inverse(g[i]));
  }
  std::vector<bool> assigned(g.order(), false);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t start = 0; start < g.order(); ++start) {
    if (assigned[start]) continue;
    std::vector<std::size_t> cls{start};
    assigned[start] = true;
    for (std::size_t head = 0; head < cls.size(); ++head) {
      for (std::size_t k = 0; k < gens.size(); ++k) {
        // g^-1 x g
        const Permutation y = compose(compose(gens_inv[k], g[cls[head]]), gens[k]);
        const std::size_t idx = *g.index_of(y);
        if (!assigned[idx]) {
          assigned[idx] = true;
          cls.push_back(idx);
        }
      }
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

CosetTable right_cosets(const FiniteGroup& g, std::span<const Permutation> h_gens) {
  CosetTable table;
  table.subgroup = enumerate_subgroup(g, h_gens);
  constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  table.coset_of_element.assign(g.order(), kUnassigned);
  for (std::size_t e = 0; e < g.order(); ++e) {
    if (table.coset_of_element[e] != kUnassigned) continue;
    const std::size_t c = table.representatives.size();
    const Permutation* best = nullptr;
    for (std::size_t hi : table.subgroup) {
      const std::size_t idx = *g.index_of(compose(g[hi], g[e]));
      table.coset_of_element[idx] = c;
      if (best == nullptr || g[idx] < *best) best = &g[idx];
    }
    table.representatives.push_back(*best);
  }
  return table;
}

AlmostConjugacy almost_conjugate(const FiniteGroup& g,
                                 std::span<const Permutation> h1_gens,
                                 std::span<const Permutation> h2_gens) {
  const auto h1 = enumerate_subgroup(g, h1_gens);
  const auto h2 = enumerate_subgroup(g, h2_gens);
  std::vector<std::size_t> class_of(g.order());
  const auto classes = conjugacy_classes(g);
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (std::size_t e : classes[c]) class_of[e] = c;

  AlmostConjugacy result;
  result.counts.resize(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    result.counts[c].class_index = c;
    result.counts[c].class_size = classes[c].size();
    result.counts[c].representative = g[classes[c].front()].to_cycle_string();
  }
  for (std::size_t e : h1) ++result.counts[class_of[e]].in_h1;
  for (std::size_t e : h2) ++result.counts[class_of[e]].in_h2;
  result.almost_conjugate = std::all_of(
      result.counts.begin(), result.counts.end(),
      [](const ClassCount& c) { return c.in_h1 == c.in_h2; });
  return result;
}

}  // namespace nilgraph
