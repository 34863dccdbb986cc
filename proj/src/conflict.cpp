#include "copatch/conflict.hpp"

#include <algorithm>
#include <numeric>

#include "copatch/errors.hpp"

namespace copatch {

std::set<OrderPair> transitive_closure(const std::set<LineId>& vertices,
                                       const std::set<OrderPair>& pairs) {
  std::vector<LineId> ids(vertices.begin(), vertices.end());
  const std::size_t n = ids.size();
  std::map<LineId, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[ids[i]] = i;

  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> reach(n * words, 0);
  auto row = [&](std::size_t i) { return reach.data() + i * words; };
  for (const auto& [x, y] : pairs) {
    auto ix = index.find(x), iy = index.find(y);
    if (ix == index.end() || iy == index.end()) continue; // dangling pairs are a validation error
    row(ix->second)[iy->second / 64] |= std::uint64_t(1) << (iy->second % 64);
  }
  // Warshall on bit rows.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (row(i)[k / 64] >> (k % 64) & 1)
        for (std::size_t w = 0; w < words; ++w) row(i)[w] |= row(k)[w];

  std::set<OrderPair> closed;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (row(i)[j / 64] >> (j % 64) & 1) closed.insert({ids[i], ids[j]});
  return closed;
}

std::string ObjectViolation::describe() const {
  switch (kind) {
    case Kind::dangling:
      return "order pair (" + std::to_string(x) + ", " + std::to_string(y) +
             ") mentions a missing vertex";
    case Kind::not_transitive:
      return "missing (" + std::to_string(x) + ", " + std::to_string(z) + ") implied by (" +
             std::to_string(x) + ", " + std::to_string(y) + ") and (" + std::to_string(y) +
             ", " + std::to_string(z) + ")";
  }
  return "unknown violation";
}

ObjectReport validate_object(const ConflictFile& x) {
  ObjectReport report;
  for (const auto& [a, b] : x.order)
    if (!x.has_vertex(a) || !x.has_vertex(b))
      report.violations.push_back({ObjectViolation::Kind::dangling, a, b, 0});
  for (const auto& [a, b] : x.order) {
    if (!x.has_vertex(a) || !x.has_vertex(b)) continue;
    // pairs (b, c) continuing from b
    auto it = x.order.lower_bound({b, 0});
    for (; it != x.order.end() && it->first == b; ++it) {
      if (!x.has_vertex(it->second)) continue;
      if (!x.related(a, it->second)) {
        report.violations.push_back({ObjectViolation::Kind::not_transitive, a, b, it->second});
        if (report.violations.size() > 64) return report; // enough witnesses
      }
    }
  }
  return report;
}

std::string MorphismViolation::describe() const {
  switch (kind) {
    case Kind::bad_source:
      return "map defined on " + std::to_string(x) + " which is not a source vertex";
    case Kind::bad_target:
      return "image of " + std::to_string(x) + " is not a target vertex";
    case Kind::label_mismatch:
      return "label not preserved at " + std::to_string(x);
    case Kind::not_monotone:
      return "order of (" + std::to_string(x) + ", " + std::to_string(y) + ") not preserved";
  }
  return "unknown violation";
}

MorphismReport validate_morphism(const PartialMorphism& m) {
  MorphismReport report;
  for (const auto& [v, w] : m.map) {
    if (!m.source.has_vertex(v)) {
      report.violations.push_back({MorphismViolation::Kind::bad_source, v, 0});
      continue;
    }
    if (!m.target.has_vertex(w)) {
      report.violations.push_back({MorphismViolation::Kind::bad_target, v, 0});
      continue;
    }
    if (m.source.labels.at(v) != m.target.labels.at(w))
      report.violations.push_back({MorphismViolation::Kind::label_mismatch, v, 0});
  }
  for (const auto& [a, b] : m.source.order) {
    auto fa = m.at(a), fb = m.at(b);
    if (fa && fb && m.target.has_vertex(*fa) && m.target.has_vertex(*fb) &&
        !m.target.related(*fa, *fb))
      report.violations.push_back({MorphismViolation::Kind::not_monotone, a, b});
  }
  return report;
}

ConflictFile initial_object() { return {}; }

ConflictFile embed(const File& a) {
  ConflictFile x;
  for (std::size_t i = 0; i < a.size(); ++i) x.labels[static_cast<LineId>(i)] = a[i];
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      x.order.insert({static_cast<LineId>(i), static_cast<LineId>(j)});
  return x;
}

PartialMorphism embed_patch(const Patch& p) {
  PatchReport report = validate_patch(p);
  if (!report.ok()) throw InvalidPatch("embed_patch: " + report.violations[0].describe());
  PartialMorphism m{embed(p.source), embed(p.target), {}};
  for (std::size_t i = 0; i < p.map.size(); ++i)
    if (p.map[i]) m.map[static_cast<LineId>(i)] = static_cast<LineId>(*p.map[i]);
  return m;
}

PartialMorphism identity_morphism(const ConflictFile& x) {
  PartialMorphism m{x, x, {}};
  for (const auto& [v, label] : x.labels) m.map[v] = v;
  return m;
}

PartialMorphism compose_p(const PartialMorphism& f, const PartialMorphism& g) {
  if (f.target != g.source)
    throw SourceMismatch("compose_p: target of the first morphism differs from source of the second");
  PartialMorphism r{f.source, g.target, {}};
  for (const auto& [v, w] : f.map) {
    auto gw = g.at(w);
    if (gw) r.map[v] = *gw;
  }
  return r;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

} // namespace

PushoutResult pushout(const PartialMorphism& f, const PartialMorphism& g) {
  if (f.source != g.source) throw SourceMismatch("pushout: the two morphisms have different sources");
  const ConflictFile& b = f.target;
  const ConflictFile& c = g.target;

  // Ground set: index 0 is the discarded element, then B's vertices, then C's.
  std::vector<LineId> b_ids, c_ids;
  for (const auto& [v, label] : b.labels) b_ids.push_back(v);
  for (const auto& [v, label] : c.labels) c_ids.push_back(v);
  std::map<LineId, std::size_t> b_index, c_index;
  for (std::size_t i = 0; i < b_ids.size(); ++i) b_index[b_ids[i]] = 1 + i;
  for (std::size_t i = 0; i < c_ids.size(); ++i) c_index[c_ids[i]] = 1 + b_ids.size() + i;

  UnionFind uf(1 + b_ids.size() + c_ids.size());
  for (const auto& [v, label] : f.source.labels) {
    auto fv = f.at(v);
    auto gv = g.at(v);
    std::size_t left = fv ? b_index.at(*fv) : 0;
    std::size_t right = gv ? c_index.at(*gv) : 0;
    uf.unite(left, right);
  }

  const std::size_t dead = uf.find(0);
  // Canonical vertex per surviving class: order classes by their smallest
  // member under the key (side, original id); members of one class carry
  // one common label.
  std::map<std::size_t, LineId> class_id;
  std::map<std::size_t, Label> class_label;
  ConflictFile apex;
  auto visit = [&](std::size_t ground, const Label& label) {
    std::size_t root = uf.find(ground);
    if (root == dead) return;
    auto it = class_label.find(root);
    if (it == class_label.end())
      class_label[root] = label;
    else if (it->second != label)
      throw Error("pushout: identified lines carry different labels");
  };
  for (std::size_t i = 0; i < b_ids.size(); ++i) visit(1 + i, b.labels.at(b_ids[i]));
  for (std::size_t i = 0; i < c_ids.size(); ++i)
    visit(1 + b_ids.size() + i, c.labels.at(c_ids[i]));
  {
    LineId next = 0;
    // Scanning B then C in ascending id order meets each class at its
    // smallest (side, id) member first.
    for (std::size_t i = 0; i < b_ids.size(); ++i) {
      std::size_t root = uf.find(1 + i);
      if (root != dead && !class_id.count(root)) class_id[root] = next++;
    }
    for (std::size_t i = 0; i < c_ids.size(); ++i) {
      std::size_t root = uf.find(1 + b_ids.size() + i);
      if (root != dead && !class_id.count(root)) class_id[root] = next++;
    }
  }
  for (const auto& [root, id] : class_id) apex.labels[id] = class_label.at(root);

  std::set<OrderPair> inherited;
  auto inherit = [&](const ConflictFile& side, const std::map<LineId, std::size_t>& index) {
    for (const auto& [x, y] : side.order) {
      std::size_t rx = uf.find(index.at(x));
      std::size_t ry = uf.find(index.at(y));
      if (rx == dead || ry == dead) continue;
      inherited.insert({class_id.at(rx), class_id.at(ry)});
    }
  };
  inherit(b, b_index);
  inherit(c, c_index);
  std::set<LineId> apex_vertices;
  for (const auto& [v, label] : apex.labels) apex_vertices.insert(v);
  apex.order = transitive_closure(apex_vertices, inherited);

  PushoutResult result;
  result.apex = apex;
  result.leg_b = PartialMorphism{b, apex, {}};
  result.leg_c = PartialMorphism{c, apex, {}};
  for (LineId v : b_ids) {
    std::size_t root = uf.find(b_index.at(v));
    if (root != dead) result.leg_b.map[v] = class_id.at(root);
  }
  for (LineId v : c_ids) {
    std::size_t root = uf.find(c_index.at(v));
    if (root != dead) result.leg_c.map[v] = class_id.at(root);
  }
  return result;
}

namespace {

// Shared mediating construction: every apex vertex is in the image of a
// leg, so the triangle equations determine the mediating map completely;
// it exists iff h and k agree along the legs, including undefinedness.
PartialMorphism mediate(const ConflictFile& apex, const PartialMorphism& leg_b,
                        const PartialMorphism& leg_c, const PartialMorphism& h,
                        const PartialMorphism& k) {
  if (h.source != leg_b.source || k.source != leg_c.source)
    throw NotACocone("mediating: cocone legs do not start at the span targets");
  if (h.target != k.target)
    throw NotACocone("mediating: cocone legs do not share a target");

  PartialMorphism m{apex, h.target, {}};
  std::map<LineId, bool> decided; // apex vertex -> image defined?
  auto feed = [&](const PartialMorphism& leg, const PartialMorphism& into, LineId v) {
    auto cls = leg.at(v);
    auto value = into.at(v);
    if (!cls) {
      // v was discarded by the pushout: the cocone must discard it too.
      if (value)
        throw NotACocone("mediating: morphism defined on a line the pushout deletes", v);
      return;
    }
    auto it = decided.find(*cls);
    if (it == decided.end()) {
      decided[*cls] = value.has_value();
      if (value) m.map[*cls] = *value;
    } else if (it->second != value.has_value() ||
               (value && m.map.at(*cls) != *value)) {
      throw NotACocone("mediating: cocone disagrees on identified lines", v);
    }
  };
  for (const auto& [v, label] : leg_b.source.labels) feed(leg_b, h, v);
  for (const auto& [v, label] : leg_c.source.labels) feed(leg_c, k, v);
  return m;
}

} // namespace

PartialMorphism mediating(const PushoutResult& po, const PartialMorphism& h,
                          const PartialMorphism& k) {
  return mediate(po.apex, po.leg_b, po.leg_c, h, k);
}

PartialMorphism mediating(const CoproductResult& co, const PartialMorphism& h,
                          const PartialMorphism& k) {
  return mediate(co.apex, co.inj_a, co.inj_b, h, k);
}

CoproductResult coproduct(const ConflictFile& a, const ConflictFile& b) {
  // The coproduct is the pushout of the two unique maps out of the
  // initial object.
  PartialMorphism from_initial_a{initial_object(), a, {}};
  PartialMorphism from_initial_b{initial_object(), b, {}};
  PushoutResult po = pushout(from_initial_a, from_initial_b);
  return {po.apex, po.leg_b, po.leg_c};
}

namespace {

// Invariant of a vertex under isomorphism: label, degrees, loop.
using VertexSignature = std::tuple<Label, std::size_t, std::size_t, bool>;

std::map<LineId, VertexSignature> vertex_signatures(const ConflictFile& x) {
  std::map<LineId, VertexSignature> out;
  std::map<LineId, std::size_t> in, on;
  for (const auto& [u, v] : x.order) {
    if (u == v) continue;
    ++on[u];
    ++in[v];
  }
  for (const auto& [v, label] : x.labels)
    out[v] = {label, in[v], on[v], x.related(v, v)};
  return out;
}

} // namespace

std::optional<std::map<LineId, LineId>> is_isomorphic(const ConflictFile& a,
                                                      const ConflictFile& b) {
  if (a.size() != b.size() || a.order.size() != b.order.size()) return std::nullopt;
  auto sig_a = vertex_signatures(a);
  auto sig_b = vertex_signatures(b);
  {
    std::multiset<VertexSignature> sa, sb;
    for (const auto& [v, s] : sig_a) sa.insert(s);
    for (const auto& [v, s] : sig_b) sb.insert(s);
    if (sa != sb) return std::nullopt;
  }

  std::vector<LineId> a_ids, b_ids;
  for (const auto& [v, label] : a.labels) a_ids.push_back(v);
  for (const auto& [v, label] : b.labels) b_ids.push_back(v);

  std::map<LineId, LineId> forward;
  std::set<LineId> used;

  // Backtracking in canonical order: a's vertices ascending, candidates
  // from b ascending. Signature pruning cannot change the first complete
  // witness, only skip dead branches.
  auto consistent = [&](LineId v, LineId w) {
    if (sig_a.at(v) != sig_b.at(w)) return false;
    for (const auto& [u, x] : forward) {
      if (a.related(u, v) != b.related(x, w)) return false;
      if (a.related(v, u) != b.related(w, x)) return false;
    }
    return true;
  };
  auto search = [&](auto&& self, std::size_t depth) -> bool {
    if (depth == a_ids.size()) return true;
    LineId v = a_ids[depth];
    for (LineId w : b_ids) {
      if (used.count(w) || !consistent(v, w)) continue;
      forward[v] = w;
      used.insert(w);
      if (self(self, depth + 1)) return true;
      forward.erase(v);
      used.erase(w);
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  return forward;
}

std::optional<File> is_linear(const ConflictFile& x) {
  const std::size_t n = x.size();
  if (x.order.size() != n * (n - (n ? 1 : 0)) / 2) return std::nullopt;
  // In a strict total order the number of predecessors places each vertex.
  std::vector<std::optional<LineId>> slot(n);
  for (const auto& [v, label] : x.labels) {
    if (x.related(v, v)) return std::nullopt;
    std::size_t below = 0;
    for (const auto& [u, other] : x.labels)
      if (x.related(u, v)) ++below;
    if (below >= n || slot[below]) return std::nullopt;
    slot[below] = v;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!x.related(*slot[i], *slot[j])) return std::nullopt;
  File out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(x.labels.at(*slot[i]));
  return out;
}

namespace {

LineId fresh_basepoint(const ConflictFile& x) {
  LineId next = 0;
  for (const auto& [v, label] : x.labels) next = std::max(next, v + 1);
  return next;
}

} // namespace

PointedGraph to_pointed(const ConflictFile& x) {
  PointedGraph g;
  g.labels = x.labels;
  g.basepoint = fresh_basepoint(x);
  g.edges = x.order;
  for (const auto& [v, label] : x.labels) {
    g.edges.insert({v, g.basepoint});
    g.edges.insert({g.basepoint, v});
  }
  g.edges.insert({g.basepoint, g.basepoint});
  return g;
}

PointedMorphism to_pointed(const PartialMorphism& m) {
  PointedMorphism pm{to_pointed(m.source), to_pointed(m.target), {}};
  for (const auto& [v, label] : m.source.labels) {
    auto w = m.at(v);
    pm.map[v] = w ? *w : pm.target.basepoint;
  }
  pm.map[pm.source.basepoint] = pm.target.basepoint;
  return pm;
}

namespace {

ConflictFile strip_basepoint(const PointedGraph& g) {
  ConflictFile x;
  x.labels = g.labels;
  for (const auto& [a, b] : g.edges)
    if (a != g.basepoint && b != g.basepoint) x.order.insert({a, b});
  return x;
}

} // namespace

PartialMorphism from_pointed(const PointedMorphism& pm) {
  PartialMorphism m{strip_basepoint(pm.source), strip_basepoint(pm.target), {}};
  for (const auto& [v, w] : pm.map) {
    if (v == pm.source.basepoint) continue;
    if (w != pm.target.basepoint) m.map[v] = w;
  }
  return m;
}

PointedMorphism compose_pointed(const PointedMorphism& f, const PointedMorphism& g) {
  if (f.target != g.source)
    throw SourceMismatch("compose_pointed: endpoints do not match");
  PointedMorphism r{f.source, g.target, {}};
  for (const auto& [v, w] : f.map) r.map[v] = g.map.at(w);
  return r;
}

} // namespace copatch
