#ifndef COPATCH_REPOSITORY_HPP
#define COPATCH_REPOSITORY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "copatch/conflict.hpp"
#include "copatch/event_structure.hpp"
#include "copatch/file.hpp"
#include "copatch/patch.hpp"

namespace copatch {

/// The stored form of one event: its causes plus the base patch, kept as
/// the patch's target file, sparse index map, and the digest of the
/// embedded source object. The source file itself is reconstructed (and
/// checked) against computed states.
struct EventRecord {
  std::set<EventId> causes;
  std::string src_digest;
  File target;
  std::map<std::uint32_t, std::uint32_t> map; // source index -> target index

  bool operator==(const EventRecord&) const = default;
};

/// Canonical store bytes: sorted `cause <id>` lines followed by the
/// canonical morphism encoding. The event id is the SHA-256 of these.
std::string event_bytes(const EventRecord& rec);
EventId event_id_of(const EventRecord& rec);

/// A repository: a finite event structure whose events carry patches.
/// States of configurations are computed by iterated pushouts and
/// memoized. The conflict relation is honored by configuration
/// enumeration but ignored by state computation, so incompatible
/// histories yield a conflicted object rather than an error.
struct Repository {
  EventStructure es;
  std::map<EventId, EventRecord> events;

  bool operator==(const Repository& other) const {
    return es == other.es && events == other.events;
  }

  // Lazily rebuilt derived data; cleared on every mutation.
  mutable std::map<Configuration, ConflictFile> state_memo;
  mutable std::map<std::pair<EventId, std::uint32_t>, LineId> origin_ids;
  void invalidate() const {
    state_memo.clear();
    origin_ids.clear();
  }
};

/// Adds an event; the id is content-derived. Throws EventClash when the
/// id exists with different content.
EventId add_event(Repository& repo, const EventRecord& rec);

/// The state of a configuration, computed recursively: the deterministic
/// maximal event (smallest id) is split off and its base transition is
/// pushed out against the state of the rest. Vertex ids of states name
/// the line's origin (the event and target position that introduced it),
/// so states are identical along every computation route.
///
/// Throws NotAConfiguration, or BaseMismatch when a base patch's source
/// does not match the computed state below its event.
ConflictFile state(const Repository& repo, const Configuration& x,
                   bool ignore_conflicts = false);

/// State of the maximal configuration with conflicts ignored.
ConflictFile repo_state(const Repository& repo);

/// The transition morphism between the states of two nested
/// configurations (a composite of single-event transitions).
PartialMorphism transition(const Repository& repo, const Configuration& from,
                           const Configuration& to);

/// Records a new version of the tracked file above the current heads.
/// Refuses conflicted states (ConflictedState) and identity diffs
/// (NoChange).
EventId record_file(Repository& repo, const File& new_file);

/// Records a resolution: like record_file but permitted on a conflicted
/// state, in which case the base patch diffs from the last linear
/// ancestor state along the canonical chain.
EventId resolve_file(Repository& repo, const File& new_file);

/// Union of two repositories: events and causes are id-keyed unions, the
/// conflict relation is the hereditary closure of the union. Shared ids
/// must agree byte for byte (EventClash) and the union must validate
/// (ValidationError).
Repository import_repo(const Repository& a, const Repository& b);

/// Test support: computes the state of a configuration by folding
/// pushouts along the given linear extension instead of the canonical
/// decomposition. The extension must list a downward-closed set in an
/// order compatible with causality.
ConflictFile state_along(const Repository& repo, const std::vector<EventId>& extension);

} // namespace copatch

#endif
