#ifndef COPATCH_TESTS_SUPPORT_HPP
#define COPATCH_TESTS_SUPPORT_HPP

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "copatch/conflict.hpp"
#include "copatch/file.hpp"
#include "copatch/patch.hpp"

namespace ts {

using namespace copatch;

/// "abc" -> the three-line file a, b, c.
inline File f(std::string_view word) {
  File out;
  for (char c : word) out.push_back(std::string(1, c));
  return out;
}

inline Patch patch(std::string_view src, std::string_view dst,
                   std::initializer_list<std::pair<std::size_t, std::size_t>> entries) {
  Patch p{f(src), f(dst), std::vector<std::optional<std::size_t>>(src.size())};
  for (const auto& [i, j] : entries) p.map[i] = j;
  return p;
}

/// Independent LCS oracle: explores every injective increasing
/// label-preserving partial map and returns the maximum defined count.
inline std::size_t brute_lcs(const File& a, const File& b, std::size_t i = 0,
                             std::size_t j = 0) {
  if (i == a.size()) return 0;
  std::size_t best = brute_lcs(a, b, i + 1, j); // leave a[i] unmatched
  for (std::size_t t = j; t < b.size(); ++t)
    if (a[i] == b[t]) best = std::max(best, 1 + brute_lcs(a, b, i + 1, t + 1));
  return best;
}

/// All files over `alphabet` with at most `max_len` lines.
inline std::vector<File> all_files(std::size_t max_len, const std::vector<Label>& alphabet) {
  std::vector<File> out{{}};
  std::vector<File> frontier{{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<File> next;
    for (const File& file : frontier)
      for (const Label& l : alphabet) {
        File extended = file;
        extended.push_back(l);
        out.push_back(extended);
        next.push_back(std::move(extended));
      }
    frontier = std::move(next);
  }
  return out;
}

/// A conflict file from explicit parts, transitively closed.
inline ConflictFile closed_object(std::map<LineId, Label> labels,
                                  std::set<OrderPair> pairs) {
  ConflictFile x;
  x.labels = std::move(labels);
  std::set<LineId> vertices;
  for (const auto& [v, l] : x.labels) vertices.insert(v);
  x.order = transitive_closure(vertices, pairs);
  return x;
}

inline PartialMorphism mor(ConflictFile a, ConflictFile b,
                           std::initializer_list<std::pair<LineId, LineId>> entries) {
  PartialMorphism m{std::move(a), std::move(b), {}};
  for (const auto& [v, w] : entries) m.map[v] = w;
  return m;
}

/// Every object with at most `max_vertices` vertices (ids 0..k-1) over
/// the given alphabet; orders are all transitive relations.
inline std::vector<ConflictFile> all_objects(std::size_t max_vertices,
                                             const std::vector<Label>& alphabet) {
  std::vector<ConflictFile> out;
  for (std::size_t k = 0; k <= max_vertices; ++k) {
    // label assignments
    std::vector<std::map<LineId, Label>> labelings{{}};
    for (std::size_t v = 0; v < k; ++v) {
      std::vector<std::map<LineId, Label>> next;
      for (const auto& partial : labelings)
        for (const Label& l : alphabet) {
          auto extended = partial;
          extended[static_cast<LineId>(v)] = l;
          next.push_back(std::move(extended));
        }
      labelings = std::move(next);
    }
    // transitive relations
    std::vector<OrderPair> all_pairs;
    for (LineId x = 0; x < k; ++x)
      for (LineId y = 0; y < k; ++y) all_pairs.push_back({x, y});
    std::set<LineId> vertices;
    for (LineId v = 0; v < k; ++v) vertices.insert(v);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << all_pairs.size()); ++mask) {
      std::set<OrderPair> order;
      for (std::size_t bit = 0; bit < all_pairs.size(); ++bit)
        if (mask >> bit & 1) order.insert(all_pairs[bit]);
      if (order != transitive_closure(vertices, order)) continue;
      for (const auto& labeling : labelings) {
        ConflictFile x;
        x.labels = labeling;
        x.order = order;
        out.push_back(std::move(x));
      }
    }
  }
  return out;
}

/// Every partial map between the vertex sets, as morphism candidates.
inline std::vector<std::map<LineId, LineId>> all_partial_maps(const ConflictFile& a,
                                                              const ConflictFile& b) {
  std::vector<LineId> src, dst;
  for (const auto& [v, l] : a.labels) src.push_back(v);
  for (const auto& [v, l] : b.labels) dst.push_back(v);
  std::vector<std::map<LineId, LineId>> out{{}};
  for (LineId v : src) {
    std::vector<std::map<LineId, LineId>> next;
    for (const auto& partial : out) {
      next.push_back(partial); // undefined at v
      for (LineId w : dst) {
        auto extended = partial;
        extended[v] = w;
        next.push_back(std::move(extended));
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Every valid morphism a -> b.
inline std::vector<PartialMorphism> all_morphisms(const ConflictFile& a,
                                                  const ConflictFile& b) {
  std::vector<PartialMorphism> out;
  for (auto& map : all_partial_maps(a, b)) {
    PartialMorphism m{a, b, std::move(map)};
    if (validate_morphism(m).ok()) out.push_back(std::move(m));
  }
  return out;
}

using Pmap = std::map<LineId, LineId>;

/// Pointwise composition of partial maps, g after f.
inline Pmap compose_maps(const Pmap& f, const Pmap& g) {
  Pmap out;
  for (const auto& [v, w] : f) {
    auto it = g.find(w);
    if (it != g.end()) out[v] = it->second;
  }
  return out;
}

struct UniversalPropertyStats {
  std::size_t spans = 0;
  std::size_t cocones = 0;
  std::size_t uniqueness_runs = 0;
};

/// Exhaustive universal-property verification over a closed set of
/// objects: every span, every commuting cocone. Checks that the pushout
/// square commutes, that every apex vertex is covered by a leg (which
/// pins the mediating map among all partial maps), that the mediating
/// map satisfies both triangles, and -- every `uniqueness_stride`-th
/// cocone -- re-derives uniqueness by brute enumeration against the
/// library's own mediating. Returns the first failure description.
inline std::optional<std::string> verify_universal_property(
    const std::vector<ConflictFile>& objects, std::size_t uniqueness_stride,
    UniversalPropertyStats& stats) {
  const std::size_t n = objects.size();
  std::vector<std::vector<std::vector<Pmap>>> homs(n, std::vector<std::vector<Pmap>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& candidate : all_partial_maps(objects[i], objects[j])) {
        PartialMorphism m{objects[i], objects[j], candidate};
        if (validate_morphism(m).ok()) homs[i][j].push_back(candidate);
      }

  constexpr std::size_t kMaxApex = 64;
  LineId forced[kMaxApex];
  bool forced_def[kMaxApex];

  for (std::size_t ai = 0; ai < n; ++ai) {
    // composites of every k with every g out of objects[ai], by (c, g, d)
    std::vector<std::vector<std::vector<std::vector<std::pair<Pmap, const Pmap*>>>>> kcomp(n);
    for (std::size_t ci = 0; ci < n; ++ci) {
      kcomp[ci].resize(homs[ai][ci].size());
      for (std::size_t gi = 0; gi < homs[ai][ci].size(); ++gi) {
        kcomp[ci][gi].resize(n);
        for (std::size_t di = 0; di < n; ++di)
          for (const Pmap& kmap : homs[ci][di])
            kcomp[ci][gi][di].push_back({compose_maps(homs[ai][ci][gi], kmap), &kmap});
      }
    }

    for (std::size_t bi = 0; bi < n; ++bi)
      for (const Pmap& fmap : homs[ai][bi]) {
        PartialMorphism f{objects[ai], objects[bi], fmap};
        // h bucketed by its composite with f, per candidate cocone target
        std::vector<std::map<Pmap, std::vector<const Pmap*>>> by_composite(n);
        for (std::size_t di = 0; di < n; ++di)
          for (const Pmap& hmap : homs[bi][di])
            by_composite[di][compose_maps(fmap, hmap)].push_back(&hmap);

        for (std::size_t ci = 0; ci < n; ++ci)
          for (std::size_t gi = 0; gi < homs[ai][ci].size(); ++gi) {
            const Pmap& gmap = homs[ai][ci][gi];
            PartialMorphism g{objects[ai], objects[ci], gmap};
            PushoutResult po = pushout(f, g);
            ++stats.spans;
            if (compose_maps(fmap, po.leg_b.map) != compose_maps(gmap, po.leg_c.map))
              return "pushout square does not commute";
            if (!validate_object(po.apex).ok()) return "pushout apex is not a valid object";
            if (po.apex.size() > kMaxApex) return "apex larger than expected";
            // leg coverage: triangles determine any mediating candidate
            {
              std::size_t covered = 0;
              bool hit[kMaxApex] = {};
              for (const auto& [v, cls] : po.leg_b.map)
                if (!hit[cls]) hit[cls] = true, ++covered;
              for (const auto& [v, cls] : po.leg_c.map)
                if (!hit[cls]) hit[cls] = true, ++covered;
              if (covered != po.apex.size()) return "apex vertex not covered by a leg";
            }

            const std::size_t apex_size = po.apex.size();
            for (std::size_t di = 0; di < n; ++di) {
              for (const auto& [kc, kptr] : kcomp[ci][gi][di]) {
                auto bucket = by_composite[di].find(kc);
                if (bucket == by_composite[di].end()) continue;
                for (const Pmap* hptr : bucket->second) {
                  ++stats.cocones;
                  for (std::size_t s = 0; s < apex_size; ++s) forced_def[s] = false;
                  auto fill = [&](const Pmap& leg, const Pmap& into) {
                    auto li = leg.begin();
                    auto vi = into.begin();
                    while (li != leg.end() && vi != into.end()) {
                      if (li->first < vi->first)
                        ++li;
                      else if (vi->first < li->first)
                        ++vi;
                      else {
                        forced[li->second] = vi->second;
                        forced_def[li->second] = true;
                        ++li, ++vi;
                      }
                    }
                  };
                  fill(po.leg_b.map, *hptr);
                  fill(po.leg_c.map, *kptr);
                  // triangle: composing a leg with the forced map gives back the cocone leg
                  auto triangle = [&](const Pmap& leg, const Pmap& into) {
                    auto li = leg.begin();
                    auto vi = into.begin();
                    while (li != leg.end() || vi != into.end()) {
                      if (vi == into.end() || (li != leg.end() && li->first < vi->first)) {
                        if (forced_def[li->second]) return false;
                        ++li;
                      } else if (li == leg.end() || vi->first < li->first) {
                        return false; // defined in the cocone but not through the leg
                      } else {
                        if (!forced_def[li->second] || forced[li->second] != vi->second)
                          return false;
                        ++li, ++vi;
                      }
                    }
                    return true;
                  };
                  if (!triangle(po.leg_b.map, *hptr)) return "left triangle fails";
                  if (!triangle(po.leg_c.map, *kptr)) return "right triangle fails";

                  if (stats.cocones % uniqueness_stride == 0) {
                    ++stats.uniqueness_runs;
                    PartialMorphism h{objects[bi], objects[di], *hptr};
                    PartialMorphism k{objects[ci], objects[di], *kptr};
                    PartialMorphism m = mediating(po, h, k);
                    Pmap expect;
                    for (std::size_t s = 0; s < apex_size; ++s)
                      if (forced_def[s]) expect[static_cast<LineId>(s)] = forced[s];
                    if (m.map != expect) return "mediating disagrees with the forced map";
                    std::size_t satisfying = 0;
                    for (const auto& candidate : all_partial_maps(po.apex, objects[di])) {
                      if (compose_maps(po.leg_b.map, candidate) == *hptr &&
                          compose_maps(po.leg_c.map, candidate) == *kptr)
                        ++satisfying;
                    }
                    if (satisfying != 1) return "mediating is not unique among partial maps";
                  }
                }
              }
            }
          }
      }
  }
  return std::nullopt;
}

inline File random_file(std::mt19937& rng, std::size_t max_len,
                        const std::vector<Label>& alphabet) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  File out;
  for (std::size_t i = 0, n = len(rng); i < n; ++i) out.push_back(alphabet[pick(rng)]);
  return out;
}

/// A random valid patch out of `source`: keep a random subsequence and
/// weave random insertions around it.
inline Patch random_patch(std::mt19937& rng, const File& source,
                          const std::vector<Label>& alphabet) {
  std::uniform_int_distribution<int> coin(0, 99);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  Patch p{source, {}, std::vector<std::optional<std::size_t>>(source.size())};
  for (std::size_t i = 0; i < source.size(); ++i) {
    while (coin(rng) < 30) p.target.push_back(alphabet[pick(rng)]);
    if (coin(rng) < 65) {
      p.map[i] = p.target.size();
      p.target.push_back(source[i]);
    }
  }
  while (coin(rng) < 30) p.target.push_back(alphabet[pick(rng)]);
  return p;
}

/// A random object: random labels plus the transitive closure of random
/// pairs (loops and cycles included).
inline ConflictFile random_object(std::mt19937& rng, std::size_t max_vertices,
                                  const std::vector<Label>& alphabet) {
  std::uniform_int_distribution<std::size_t> nv(0, max_vertices);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> coin(0, 99);
  std::size_t k = nv(rng);
  ConflictFile x;
  std::set<LineId> vertices;
  // occasionally scatter the ids to exercise renaming-invariance
  LineId stride = coin(rng) < 30 ? 7 : 1;
  for (std::size_t v = 0; v < k; ++v) {
    LineId id = static_cast<LineId>(v * stride);
    x.labels[id] = alphabet[pick(rng)];
    vertices.insert(id);
  }
  std::set<OrderPair> pairs;
  for (LineId a : vertices)
    for (LineId b : vertices)
      if (coin(rng) < 25) pairs.insert({a, b});
  x.order = transitive_closure(vertices, pairs);
  return x;
}

/// A random valid morphism out of `source`: part of the source maps to an
/// image whose order extends the induced one, the rest is dropped; the
/// target gains fresh vertices and extra order pairs.
inline PartialMorphism random_morphism_from(std::mt19937& rng, const ConflictFile& source,
                                            const std::vector<Label>& alphabet) {
  std::uniform_int_distribution<int> coin(0, 99);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  PartialMorphism m;
  m.source = source;
  LineId next_id = 0;
  for (const auto& [v, label] : source.labels)
    if (coin(rng) < 70) {
      m.map[v] = next_id;
      m.target.labels[next_id++] = label;
    }
  for (int extra = coin(rng) % 3; extra > 0; --extra)
    m.target.labels[next_id++] = alphabet[pick(rng)];
  std::set<OrderPair> pairs;
  for (const auto& [v1, w1] : m.map)
    for (const auto& [v2, w2] : m.map)
      if (source.related(v1, v2)) pairs.insert({w1, w2});
  std::set<LineId> vertices;
  for (const auto& [w, label] : m.target.labels) vertices.insert(w);
  for (LineId a : vertices)
    for (LineId b : vertices)
      if (coin(rng) < 10) pairs.insert({a, b});
  m.target.order = transitive_closure(vertices, pairs);
  return m;
}

/// A random valid morphism into `target`: an induced subobject plus some
/// unmapped fresh vertices.
inline PartialMorphism random_morphism_into(std::mt19937& rng, const ConflictFile& target,
                                            const std::vector<Label>& alphabet) {
  std::uniform_int_distribution<int> coin(0, 99);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  PartialMorphism m;
  m.target = target;
  LineId next_id = 0;
  std::map<LineId, LineId> chosen; // source id -> target id
  for (const auto& [w, label] : target.labels)
    if (coin(rng) < 60) {
      LineId v = next_id++;
      m.source.labels[v] = label;
      chosen[v] = w;
      m.map[v] = w;
    }
  for (const auto& [v1, w1] : chosen)
    for (const auto& [v2, w2] : chosen)
      if (target.related(w1, w2)) m.source.order.insert({v1, v2});
  for (int extra = coin(rng) % 3; extra > 0; --extra)
    m.source.labels[next_id++] = alphabet[pick(rng)];
  return m;
}

} // namespace ts

#endif
