#include "copatch/event_structure.hpp"

#include <algorithm>

#include "copatch/errors.hpp"

namespace copatch {

std::set<EventId> EventStructure::events() const {
  std::set<EventId> out;
  for (const auto& [e, pre] : causes) out.insert(e);
  return out;
}

std::string EsViolation::describe() const {
  switch (kind) {
    case Kind::dangling_cause:
      return "event " + e1 + " lists unknown cause " + e2;
    case Kind::dangling_conflict:
      return "conflict pair mentions unknown event " + e1;
    case Kind::cyclic:
      return "causality cycle through " + e1;
    case Kind::reflexive_conflict:
      return "event " + e1 + " conflicts with itself";
    case Kind::not_symmetric:
      return "conflict (" + e1 + ", " + e2 + ") lacks its mirror pair";
    case Kind::not_hereditary:
      return "conflict of " + e1 + " with " + e2 + " is not inherited";
  }
  return "unknown violation";
}

namespace {

// Depth-first cycle check over the immediate-cause graph.
bool has_cause_cycle(const EventStructure& es, EventId* witness) {
  std::map<EventId, int> state; // 0 unvisited, 1 on stack, 2 done
  auto visit = [&](auto&& self, const EventId& e) -> bool {
    int& s = state[e];
    if (s == 1) {
      *witness = e;
      return true;
    }
    if (s == 2) return false;
    s = 1;
    auto it = es.causes.find(e);
    if (it != es.causes.end())
      for (const EventId& c : it->second)
        if (es.has_event(c) && self(self, c)) return true;
    s = 2;
    return false;
  };
  for (const auto& [e, pre] : es.causes)
    if (visit(visit, e)) return true;
  return false;
}

} // namespace

EsReport validate_es(const EventStructure& es) {
  EsReport report;
  for (const auto& [e, pre] : es.causes)
    for (const EventId& c : pre)
      if (!es.has_event(c))
        report.violations.push_back({EsViolation::Kind::dangling_cause, e, c});
  for (const auto& [a, b] : es.conflicts) {
    if (!es.has_event(a))
      report.violations.push_back({EsViolation::Kind::dangling_conflict, a, b});
    if (!es.has_event(b))
      report.violations.push_back({EsViolation::Kind::dangling_conflict, b, a});
  }
  EventId cycle_witness;
  if (has_cause_cycle(es, &cycle_witness))
    report.violations.push_back({EsViolation::Kind::cyclic, cycle_witness, {}});
  for (const auto& [a, b] : es.conflicts) {
    if (a == b)
      report.violations.push_back({EsViolation::Kind::reflexive_conflict, a, b});
    if (!es.conflicts.count({b, a}))
      report.violations.push_back({EsViolation::Kind::not_symmetric, a, b});
  }
  if (!report.violations.empty()) return report; // heredity needs a sane order
  for (const auto& [a, b] : es.conflicts)
    for (const auto& [e, pre] : es.causes)
      if (causally_leq(es, a, e) && !es.conflicts.count({e, b}))
        report.violations.push_back({EsViolation::Kind::not_hereditary, e, b});
  return report;
}

EventStructure hereditary_closure(const EventStructure& es) {
  EventStructure out = es;
  std::set<std::pair<EventId, EventId>> closed;
  for (const auto& [a, b] : es.conflicts) {
    for (const auto& [a2, pre_a] : es.causes) {
      if (!causally_leq(es, a, a2)) continue;
      for (const auto& [b2, pre_b] : es.causes) {
        if (!causally_leq(es, b, b2)) continue;
        closed.insert({a2, b2});
        closed.insert({b2, a2});
      }
    }
  }
  out.conflicts.insert(closed.begin(), closed.end());
  return out;
}

bool causally_leq(const EventStructure& es, const EventId& a, const EventId& b) {
  if (a == b) return true;
  std::set<EventId> seen;
  std::vector<EventId> stack{b};
  while (!stack.empty()) {
    EventId e = stack.back();
    stack.pop_back();
    auto it = es.causes.find(e);
    if (it == es.causes.end()) continue;
    for (const EventId& c : it->second) {
      if (c == a) return true;
      if (seen.insert(c).second) stack.push_back(c);
    }
  }
  return false;
}

std::set<EventId> causes_closure(const EventStructure& es, const EventId& e) {
  std::set<EventId> out;
  std::vector<EventId> stack;
  auto it = es.causes.find(e);
  if (it == es.causes.end()) throw NotAConfiguration("unknown event " + e);
  stack.assign(it->second.begin(), it->second.end());
  while (!stack.empty()) {
    EventId cur = stack.back();
    stack.pop_back();
    if (!out.insert(cur).second) continue;
    auto ci = es.causes.find(cur);
    if (ci != es.causes.end()) stack.insert(stack.end(), ci->second.begin(), ci->second.end());
  }
  return out;
}

bool is_configuration(const EventStructure& es, const std::set<EventId>& x,
                      bool ignore_conflicts) {
  for (const EventId& e : x) {
    if (!es.has_event(e)) return false;
    for (const EventId& c : es.causes.at(e))
      if (!x.count(c)) return false;
  }
  if (!ignore_conflicts)
    for (const auto& [a, b] : es.conflicts)
      if (x.count(a) && x.count(b)) return false;
  return true;
}

std::set<EventId> maximal_events(const EventStructure& es, const std::set<EventId>& x) {
  std::set<EventId> out;
  for (const EventId& e : x) {
    bool covered = false;
    for (const EventId& other : x)
      if (other != e && causally_leq(es, e, other)) {
        covered = true;
        break;
      }
    if (!covered) out.insert(e);
  }
  return out;
}

std::vector<Configuration> configurations(const EventStructure& es, std::size_t max_events,
                                          bool ignore_conflicts) {
  if (es.causes.size() > max_events)
    throw TooLarge("event structure has " + std::to_string(es.causes.size()) +
                   " events, enumeration bound is " + std::to_string(max_events));
  std::set<Configuration> seen{{}};
  std::vector<Configuration> frontier{{}};
  while (!frontier.empty()) {
    std::vector<Configuration> next;
    for (const Configuration& x : frontier) {
      for (const auto& [e, pre] : es.causes) {
        if (x.count(e)) continue;
        Configuration y = x;
        y.insert(e);
        if (!is_configuration(es, y, ignore_conflicts)) continue;
        if (seen.insert(y).second) next.push_back(y);
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

TraceGraph trace_graph(const EventStructure& es, std::size_t max_events,
                       bool ignore_conflicts) {
  TraceGraph g;
  g.nodes = configurations(es, max_events, ignore_conflicts);
  for (const Configuration& x : g.nodes) {
    for (const auto& [e, pre] : es.causes) {
      if (x.count(e)) continue;
      Configuration y = x;
      y.insert(e);
      if (is_configuration(es, y, ignore_conflicts)) g.edges.push_back({x, e, y});
    }
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.from, a.event) < std::tie(b.from, b.event);
  });
  return g;
}

std::vector<EventId> canonical_chain(const EventStructure& es, const std::set<EventId>& x) {
  std::vector<EventId> chain;
  std::set<EventId> placed;
  while (placed.size() < x.size()) {
    bool advanced = false;
    for (const EventId& e : x) { // ascending id
      if (placed.count(e)) continue;
      const std::set<EventId>& pre = es.causes.at(e);
      if (std::all_of(pre.begin(), pre.end(),
                      [&](const EventId& c) { return placed.count(c) != 0; })) {
        chain.push_back(e);
        placed.insert(e);
        advanced = true;
        break;
      }
    }
    if (!advanced) throw NotAConfiguration("set is not downward closed");
  }
  return chain;
}

} // namespace copatch
