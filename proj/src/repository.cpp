#include "copatch/repository.hpp"

#include <algorithm>

#include "copatch/digest.hpp"
#include "copatch/encoding.hpp"
#include "copatch/errors.hpp"

namespace copatch {

std::string event_bytes(const EventRecord& rec) {
  std::string out;
  for (const EventId& c : rec.causes) out += "cause " + c + "\n";
  std::map<LineId, LineId> map(rec.map.begin(), rec.map.end());
  out += encode_morphism_parts(rec.src_digest, embed(rec.target), map);
  return out;
}

EventId event_id_of(const EventRecord& rec) { return sha256_hex(event_bytes(rec)); }

EventId add_event(Repository& repo, const EventRecord& rec) {
  EventId id = event_id_of(rec);
  auto it = repo.events.find(id);
  if (it != repo.events.end()) {
    if (!(it->second == rec)) throw EventClash("event " + id + " exists with different content");
    return id;
  }
  for (const EventId& c : rec.causes)
    if (!repo.es.has_event(c))
      throw ValidationError("event " + id + " lists unknown cause " + c);
  repo.events[id] = rec;
  repo.es.causes[id] = rec.causes;
  repo.invalidate();
  return id;
}

namespace {

// Origin ids: every (event, target position) pair gets a stable dense id,
// assigned in ascending (event id, position) order. A state vertex is
// named by the origin of the line it carries, which makes states equal --
// not merely isomorphic -- along every computation route.
const std::map<std::pair<EventId, std::uint32_t>, LineId>& origins(const Repository& repo) {
  if (repo.origin_ids.empty() && !repo.events.empty()) {
    LineId next = 0;
    for (const auto& [e, rec] : repo.events)
      for (std::uint32_t j = 0; j < rec.target.size(); ++j)
        repo.origin_ids[{e, j}] = next++;
  }
  return repo.origin_ids;
}

// Vertices of a linear state in file order.
std::vector<LineId> linear_positions(const ConflictFile& state) {
  std::vector<LineId> ids;
  for (const auto& [v, label] : state.labels) ids.push_back(v);
  std::sort(ids.begin(), ids.end(), [&](LineId a, LineId b) {
    std::size_t below_a = 0, below_b = 0;
    for (const auto& [u, label] : state.labels) {
      if (state.related(u, a)) ++below_a;
      if (state.related(u, b)) ++below_b;
    }
    return below_a < below_b;
  });
  return ids;
}

// The partial identity between two computed states; with origin-named
// vertices every transition morphism takes this form.
PartialMorphism partial_identity(const ConflictFile& from, const ConflictFile& to) {
  PartialMorphism m{from, to, {}};
  for (const auto& [v, label] : from.labels)
    if (to.has_vertex(v)) m.map[v] = v;
  return m;
}

// Runs the canonical pushout and renames apex classes back to origin ids.
// Identified members always carry one origin, so the renaming is total
// and collision-free.
ConflictFile pushout_to_origins(const PartialMorphism& t, const PartialMorphism& u) {
  PushoutResult po = pushout(t, u);
  std::map<LineId, LineId> rename; // canonical apex id -> origin id
  for (const auto& [b, cls] : po.leg_b.map) {
    auto it = rename.find(cls);
    if (it != rename.end() && it->second != b)
      throw Error("state pushout identified lines with different origins");
    rename[cls] = b;
  }
  for (const auto& [c, cls] : po.leg_c.map) {
    auto it = rename.find(cls);
    if (it != rename.end() && it->second != c)
      throw Error("state pushout identified lines with different origins");
    rename[cls] = c;
  }
  ConflictFile out;
  std::set<LineId> named;
  for (const auto& [cls, label] : po.apex.labels) {
    LineId origin = rename.at(cls);
    if (!named.insert(origin).second) throw Error("state pushout reused an origin id");
    out.labels[origin] = label;
  }
  for (const auto& [a, b] : po.apex.order) out.order.insert({rename.at(a), rename.at(b)});
  return out;
}

struct StateComputer {
  const Repository& repo;
  // Separate memo so state_along never mixes with the canonical memo.
  std::map<Configuration, ConflictFile> local_memo;
  bool use_repo_memo;

  explicit StateComputer(const Repository& r, bool shared) : repo(r), use_repo_memo(shared) {}

  std::map<Configuration, ConflictFile>& memo() {
    return use_repo_memo ? repo.state_memo : local_memo;
  }

  const ConflictFile& compute(const Configuration& x) {
    auto it = memo().find(x);
    if (it != memo().end()) return it->second;
    ConflictFile result;
    if (x.empty()) {
      result = initial_object();
    } else {
      // Deterministic maximal event: smallest id among maximal members.
      EventId e = *maximal_events(repo.es, x).begin();
      Configuration rest = x;
      rest.erase(e);
      const Configuration down = causes_closure(repo.es, e);
      const ConflictFile& below = compute(down);
      PartialMorphism t = base_transition(e, below);
      const ConflictFile& prior = compute(rest);
      PartialMorphism u = partial_identity(below, prior);
      result = pushout_to_origins(t, u);
    }
    return memo().emplace(x, std::move(result)).first->second;
  }

  // The image under the labeling of the transition adding e above its
  // cause: a morphism from the computed state below e to the embedded
  // target of e's base patch, with target vertices named by origin.
  //
  // Ordinarily the state below e is linear and equal to the patch source.
  // For resolution events recorded above a conflicted state, the source
  // is instead matched against the states along the canonical chain below
  // e (the last linear one wins); lines of the conflicted state that the
  // patch does not carry over are deleted by the transition.
  PartialMorphism base_transition(const EventId& e, const ConflictFile& below) {
    const EventRecord& rec = repo.events.at(e);
    std::optional<File> source_file;
    std::vector<LineId> source_vertices; // ancestor-state vertex per source line

    if (auto lin = is_linear(below); lin && object_digest(embed(*lin)) == rec.src_digest) {
      source_file = *lin;
      source_vertices = linear_positions(below);
    } else {
      Configuration closure = causes_closure(repo.es, e);
      std::vector<EventId> chain = canonical_chain(repo.es, closure);
      for (std::size_t len = 0; len <= chain.size(); ++len) {
        Configuration prefix(chain.begin(), chain.begin() + len);
        const ConflictFile& st = compute(prefix);
        auto lin = is_linear(st);
        if (lin && object_digest(embed(*lin)) == rec.src_digest) {
          source_file = *lin;
          source_vertices = linear_positions(st);
        }
      }
      if (!source_file)
        throw BaseMismatch("base patch of event " + e +
                           " matches no state below it (digest " + rec.src_digest + ")");
    }

    for (const auto& [i, j] : rec.map)
      if (i >= source_file->size() || j >= rec.target.size())
        throw BaseMismatch("base patch of event " + e + " maps outside its files");

    // Target vertices: a kept line that is still alive below e keeps its
    // origin; everything else (insertions, and lines the patch carries
    // over a deletion) is a fresh line of e.
    const auto& origin_table = origins(repo);
    std::vector<LineId> target_vertices(rec.target.size());
    std::map<std::uint32_t, std::uint32_t> inverse; // target index -> source index
    for (const auto& [i, j] : rec.map) inverse[j] = i;
    for (std::uint32_t j = 0; j < rec.target.size(); ++j) {
      auto kept = inverse.find(j);
      if (kept != inverse.end() && below.has_vertex(source_vertices[kept->second]))
        target_vertices[j] = source_vertices[kept->second];
      else
        target_vertices[j] = origin_table.at({e, j});
    }

    for (const auto& [i, j] : rec.map)
      if ((*source_file)[i] != rec.target[j])
        throw BaseMismatch("base patch of event " + e + " does not preserve labels");

    ConflictFile b;
    for (std::uint32_t j = 0; j < rec.target.size(); ++j)
      b.labels[target_vertices[j]] = rec.target[j];
    for (std::uint32_t i = 0; i < rec.target.size(); ++i)
      for (std::uint32_t j = i + 1; j < rec.target.size(); ++j)
        b.order.insert({target_vertices[i], target_vertices[j]});

    PartialMorphism t{below, b, {}};
    for (const auto& [i, j] : rec.map) {
      LineId v = source_vertices[i];
      if (below.has_vertex(v)) t.map[v] = target_vertices[j];
    }
    return t;
  }
};

void check_configuration(const Repository& repo, const Configuration& x,
                         bool ignore_conflicts) {
  for (const EventId& e : x)
    if (!repo.es.has_event(e)) throw NotAConfiguration("unknown event " + e);
  if (!is_configuration(repo.es, x, ignore_conflicts))
    throw NotAConfiguration(ignore_conflicts ? "set is not downward closed"
                                             : "set is not a configuration");
}

} // namespace

ConflictFile state(const Repository& repo, const Configuration& x, bool ignore_conflicts) {
  check_configuration(repo, x, ignore_conflicts);
  StateComputer computer(repo, /*shared=*/true);
  return computer.compute(x);
}

ConflictFile repo_state(const Repository& repo) {
  Configuration all;
  for (const auto& [e, rec] : repo.events) all.insert(e);
  return state(repo, all, /*ignore_conflicts=*/true);
}

PartialMorphism transition(const Repository& repo, const Configuration& from,
                           const Configuration& to) {
  if (!std::includes(to.begin(), to.end(), from.begin(), from.end()))
    throw NotAConfiguration("transition endpoints are not nested");
  ConflictFile a = state(repo, from, /*ignore_conflicts=*/true);
  ConflictFile b = state(repo, to, /*ignore_conflicts=*/true);
  return partial_identity(a, b);
}

namespace {

EventId record_above_heads(Repository& repo, const File& source, const File& new_file) {
  EventRecord rec;
  rec.causes = maximal_events(repo.es, repo.es.events());
  rec.src_digest = object_digest(embed(source));
  rec.target = new_file;
  Patch p = diff(source, new_file);
  for (std::size_t i = 0; i < p.map.size(); ++i)
    if (p.map[i]) rec.map[static_cast<std::uint32_t>(i)] = static_cast<std::uint32_t>(*p.map[i]);
  return add_event(repo, rec);
}

} // namespace

EventId record_file(Repository& repo, const File& new_file) {
  ConflictFile st = repo_state(repo);
  auto lin = is_linear(st);
  if (!lin) throw ConflictedState("repository state is conflicted; resolve it first");
  if (*lin == new_file) throw NoChange("file is identical to the repository state");
  return record_above_heads(repo, *lin, new_file);
}

EventId resolve_file(Repository& repo, const File& new_file) {
  ConflictFile st = repo_state(repo);
  if (auto lin = is_linear(st)) {
    if (*lin == new_file) throw NoChange("file is identical to the repository state");
    return record_above_heads(repo, *lin, new_file);
  }
  // Conflicted: diff from the last linear state along the canonical chain.
  std::vector<EventId> chain = canonical_chain(repo.es, repo.es.events());
  File ancestor;
  for (std::size_t len = 0; len <= chain.size(); ++len) {
    Configuration prefix(chain.begin(), chain.begin() + len);
    auto lin = is_linear(state(repo, prefix, /*ignore_conflicts=*/true));
    if (lin) ancestor = *lin;
  }
  return record_above_heads(repo, ancestor, new_file);
}

Repository import_repo(const Repository& a, const Repository& b) {
  Repository out;
  out.es.conflicts = a.es.conflicts;
  out.events = a.events;
  for (const auto& [e, rec] : a.events) out.es.causes[e] = rec.causes;
  for (const auto& [e, rec] : b.events) {
    auto it = out.events.find(e);
    if (it != out.events.end()) {
      if (event_bytes(it->second) != event_bytes(rec))
        throw EventClash("event " + e + " differs between repositories");
      continue;
    }
    out.events[e] = rec;
    out.es.causes[e] = rec.causes;
  }
  for (const auto& pair : b.es.conflicts) out.es.conflicts.insert(pair);
  out.es = hereditary_closure(out.es);
  EsReport report = validate_es(out.es);
  if (!report.ok())
    throw ValidationError("imported union: " + report.violations[0].describe());
  return out;
}

ConflictFile state_along(const Repository& repo, const std::vector<EventId>& extension) {
  Configuration as_set(extension.begin(), extension.end());
  if (as_set.size() != extension.size())
    throw NotAConfiguration("extension repeats an event");
  check_configuration(repo, as_set, /*ignore_conflicts=*/true);
  std::set<EventId> placed;
  for (const EventId& e : extension) {
    for (const EventId& c : repo.es.causes.at(e))
      if (!placed.count(c))
        throw NotAConfiguration("extension is not compatible with causality");
    placed.insert(e);
  }

  StateComputer computer(repo, /*shared=*/false);
  // Fold in the given order; the recursive computation for each cause
  // closure keeps the order induced by the extension.
  auto fold = [&](auto&& self, const std::vector<EventId>& events) -> ConflictFile {
    if (events.empty()) return initial_object();
    EventId e = events.back();
    std::vector<EventId> prefix(events.begin(), events.end() - 1);
    std::set<EventId> down = causes_closure(repo.es, e);
    std::vector<EventId> down_ordered;
    for (const EventId& d : prefix)
      if (down.count(d)) down_ordered.push_back(d);
    ConflictFile below = self(self, down_ordered);
    PartialMorphism t = computer.base_transition(e, below);
    ConflictFile prior = self(self, prefix);
    return pushout_to_origins(t, partial_identity(below, prior));
  };
  return fold(fold, extension);
}

} // namespace copatch
