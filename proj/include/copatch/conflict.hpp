#ifndef COPATCH_CONFLICT_HPP
#define COPATCH_CONFLICT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "copatch/file.hpp"
#include "copatch/patch.hpp"

namespace copatch {

using LineId = std::uint32_t;
using OrderPair = std::pair<LineId, LineId>;

/// A conflict file: finitely many labeled lines with a transitive
/// relation. Unlike a plain file the relation need not be total,
/// irreflexive or antisymmetric; incomparable lines are conflicting
/// alternatives and cycles arise from opposed orderings.
///
/// The relation is kept transitively closed at all times. The vertex set
/// is the key set of `labels`.
struct ConflictFile {
  std::map<LineId, Label> labels;
  std::set<OrderPair> order;

  bool operator==(const ConflictFile&) const = default;

  bool has_vertex(LineId v) const { return labels.count(v) != 0; }
  bool related(LineId x, LineId y) const { return order.count({x, y}) != 0; }
  std::size_t size() const { return labels.size(); }
};

/// A partial map between conflict files, label-preserving and monotone
/// where defined. Not required to be injective or total: merging and
/// deleting lines are both morphisms.
struct PartialMorphism {
  ConflictFile source;
  ConflictFile target;
  std::map<LineId, LineId> map;

  bool operator==(const PartialMorphism&) const = default;

  std::optional<LineId> at(LineId v) const {
    auto it = map.find(v);
    return it == map.end() ? std::nullopt : std::optional<LineId>(it->second);
  }
  bool defined_at(LineId v) const { return map.count(v) != 0; }
};

/// Transitive closure of `pairs` over the given vertex set.
std::set<OrderPair> transitive_closure(const std::set<LineId>& vertices,
                                       const std::set<OrderPair>& pairs);

struct ObjectViolation {
  enum class Kind {
    dangling,       // order pair mentions a missing vertex
    not_transitive, // (x,y) and (y,z) present without (x,z)
  };
  Kind kind;
  LineId x = 0, y = 0, z = 0;
  std::string describe() const;
};

struct ObjectReport {
  std::vector<ObjectViolation> violations;
  bool ok() const { return violations.empty(); }
};

ObjectReport validate_object(const ConflictFile& x);

struct MorphismViolation {
  enum class Kind {
    bad_source,     // map defined on a vertex outside the source
    bad_target,     // map hits a vertex outside the target
    label_mismatch, // label not preserved at x
    not_monotone,   // x < y in the source but f(x) < f(y) fails
  };
  Kind kind;
  LineId x = 0, y = 0;
  std::string describe() const;
};

struct MorphismReport {
  std::vector<MorphismViolation> violations;
  bool ok() const { return violations.empty(); }
};

MorphismReport validate_morphism(const PartialMorphism& m);

/// The empty conflict file, initial object of the category.
ConflictFile initial_object();

/// Embeds a plain file: vertices 0..n-1 carrying the file's labels, with
/// the full strict total order i < j.
ConflictFile embed(const File& a);

/// Embeds a patch as a partial morphism between the embedded endpoints.
/// Functorial: embeds of composites are composites of embeds.
PartialMorphism embed_patch(const Patch& p);

PartialMorphism identity_morphism(const ConflictFile& x);

/// Composition in diagram order; defined where both legs are defined.
/// Throws SourceMismatch unless f.target equals g.source exactly.
PartialMorphism compose_p(const PartialMorphism& f, const PartialMorphism& g);

struct CoproductResult {
  ConflictFile apex;
  PartialMorphism inj_a;
  PartialMorphism inj_b;
};

/// Disjoint union with no order across the two sides. Apex vertices are
/// renumbered 0..k-1, left side first.
CoproductResult coproduct(const ConflictFile& a, const ConflictFile& b);

struct PushoutResult {
  ConflictFile apex;
  PartialMorphism leg_b; // B -> apex
  PartialMorphism leg_c; // C -> apex

  bool operator==(const PushoutResult&) const = default;
};

/// Pushout of the span B <-f- A -g-> C.
///
/// Elements of B and C are identified when they are images of a common
/// element of A; an element identified with an undefined image is
/// discarded, which propagates deletions. The apex order is the
/// transitive closure of the orders inherited from B and C on surviving
/// classes, and apex vertices are renumbered canonically: classes sorted
/// by their smallest member under the key (side, original id).
PushoutResult pushout(const PartialMorphism& f, const PartialMorphism& g);

/// The unique morphism out of a pushout apex determined by a cocone
/// (h : B -> D, k : C -> D) with h after f equal to k after g. Throws
/// NotACocone (with a witness) when the cocone condition fails.
PartialMorphism mediating(const PushoutResult& po, const PartialMorphism& h,
                          const PartialMorphism& k);

/// Coproduct version: any pair of morphisms into a common target.
PartialMorphism mediating(const CoproductResult& co, const PartialMorphism& h,
                          const PartialMorphism& k);

/// A label- and order-preserving bijection with order-preserving inverse,
/// or nullopt. Deterministic: the first witness in ascending search order.
std::optional<std::map<LineId, LineId>> is_isomorphic(const ConflictFile& a,
                                                      const ConflictFile& b);

/// The file embedding to x, when the relation of x is a strict total
/// order; nullopt otherwise.
std::optional<File> is_linear(const ConflictFile& x);

/// A graph with a basepoint that every vertex has exactly one edge to and
/// from. Totalizing a partial morphism through the basepoint gives an
/// equivalent presentation used as a composition oracle.
struct PointedGraph {
  std::map<LineId, Label> labels; // basepoint excluded
  LineId basepoint = 0;
  std::set<OrderPair> edges;

  bool operator==(const PointedGraph&) const = default;
};

struct PointedMorphism {
  PointedGraph source;
  PointedGraph target;
  std::map<LineId, LineId> map; // total, basepoint to basepoint

  bool operator==(const PointedMorphism&) const = default;
};

PointedGraph to_pointed(const ConflictFile& x);
PointedMorphism to_pointed(const PartialMorphism& m);
PartialMorphism from_pointed(const PointedMorphism& pm);
PointedMorphism compose_pointed(const PointedMorphism& f, const PointedMorphism& g);

} // namespace copatch

#endif
