#ifndef COPATCH_EVENT_STRUCTURE_HPP
#define COPATCH_EVENT_STRUCTURE_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

namespace copatch {

/// Events are content-addressed: the id is the SHA-256 of the stored
/// event bytes. Ordering of ids (lexicographic hex) is the deterministic
/// tie-break used everywhere.
using EventId = std::string;

/// A finite set of events with a causal order and a symmetric,
/// irreflexive, hereditary conflict relation.
struct EventStructure {
  /// Key set is the event set; values are immediate predecessors.
  /// Causality <= is the reflexive-transitive closure.
  std::map<EventId, std::set<EventId>> causes;
  /// Stored as directed pairs; validity requires symmetry.
  std::set<std::pair<EventId, EventId>> conflicts;

  bool operator==(const EventStructure&) const = default;

  bool has_event(const EventId& e) const { return causes.count(e) != 0; }
  std::set<EventId> events() const;
  void add_conflict(const EventId& a, const EventId& b) {
    conflicts.insert({a, b});
    conflicts.insert({b, a});
  }
};

/// A downward-closed, conflict-free set of events.
using Configuration = std::set<EventId>;

struct EsViolation {
  enum class Kind {
    dangling_cause,
    dangling_conflict,
    cyclic,             // causality has a cycle through e1
    reflexive_conflict, // e # e
    not_symmetric,      // (e1, e2) without (e2, e1)
    not_hereditary,     // e1 <= e1', e1 # e2, but not e1' # e2
  };
  Kind kind;
  EventId e1, e2;
  std::string describe() const;
};

struct EsReport {
  std::vector<EsViolation> violations;
  bool ok() const { return violations.empty(); }
};

EsReport validate_es(const EventStructure& es);

/// Closure repair: adds every conflict pair implied by heredity (and
/// symmetry). Idempotent.
EventStructure hereditary_closure(const EventStructure& es);

/// a <= b in the causal order.
bool causally_leq(const EventStructure& es, const EventId& a, const EventId& b);

/// The cause of e: its downward closure with e itself removed.
std::set<EventId> causes_closure(const EventStructure& es, const EventId& e);

bool is_configuration(const EventStructure& es, const std::set<EventId>& x,
                      bool ignore_conflicts = false);

/// The <=-maximal elements of x.
std::set<EventId> maximal_events(const EventStructure& es, const std::set<EventId>& x);

inline constexpr std::size_t kDefaultEnumerationBound = 16;

/// All configurations. Throws TooLarge when the structure has more than
/// `max_events` events (the enumeration is exponential by nature).
std::vector<Configuration> configurations(const EventStructure& es,
                                          std::size_t max_events = kDefaultEnumerationBound,
                                          bool ignore_conflicts = false);

/// The graph of configurations with single-event extension edges.
struct TraceGraph {
  struct Edge {
    Configuration from;
    EventId event;
    Configuration to;

    bool operator==(const Edge&) const = default;
  };
  std::vector<Configuration> nodes;
  std::vector<Edge> edges;
};

TraceGraph trace_graph(const EventStructure& es,
                       std::size_t max_events = kDefaultEnumerationBound,
                       bool ignore_conflicts = false);

/// The ascending-id linear extension of x: repeatedly the smallest event
/// whose causes are already present. x must be downward closed.
std::vector<EventId> canonical_chain(const EventStructure& es, const std::set<EventId>& x);

} // namespace copatch

#endif
