#ifndef COPATCH_PATCH_HPP
#define COPATCH_PATCH_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "copatch/file.hpp"

namespace copatch {

/// A patch between two files: a partial map of line positions that is
/// injective, strictly increasing and label-preserving where defined.
/// The map records the unchanged lines; everything outside its domain
/// was deleted, everything outside its image was inserted.
///
/// A patch carries both endpoints in full, so application and validation
/// are self-contained; two patches are equal iff source lines, target
/// lines and map coincide.
struct Patch {
  File source;
  File target;
  std::vector<std::optional<std::size_t>> map; // indexed by source position

  std::optional<std::size_t> at(std::size_t i) const {
    return i < map.size() ? map[i] : std::nullopt;
  }
  bool operator==(const Patch&) const = default;
};

/// One violated patch invariant, with the offending source positions.
struct PatchViolation {
  enum class Kind {
    map_size,       // map does not cover exactly the source positions
    target_range,   // mapped index falls outside the target
    not_injective,  // positions i and j collide in the target
    not_increasing, // i < j but map(i) >= map(j)
    label_mismatch, // source line i differs from its image line
  };
  Kind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::string describe() const;
};

struct PatchReport {
  std::vector<PatchViolation> violations;
  bool ok() const { return violations.empty(); }
};

PatchReport validate_patch(const Patch& p);

Patch identity_patch(const File& a);

/// Composition in diagram order: f : a -> b, then g : b -> c.
/// Throws SourceMismatch unless f.target equals g.source line for line.
Patch compose(const Patch& f, const Patch& g);

/// Applies p to a file equal to p.source; throws SourceMismatch with the
/// first differing line index otherwise.
File apply_patch(const File& a, const Patch& p);

/// Monoidal tensor: acts as f on a left block and as g, shifted, on the
/// right block.
Patch tensor(const Patch& f, const Patch& g);

/// The generator s_i: inserts x at position i (0 <= i <= |a|).
Patch insert_line(const File& a, std::size_t i, const Label& x);

/// The generator d_i: deletes position i (0 <= i < |a|).
Patch delete_line(const File& a, std::size_t i);

/// A factorization of a patch into insertion/deletion generators. Each
/// step's position refers to the file as it exists at that step.
struct GeneratorStep {
  enum class Kind { del, ins };
  Kind kind;
  std::size_t pos;
  Label label; // meaningful for insertions only

  bool operator==(const GeneratorStep&) const = default;
};
using GeneratorSeq = std::vector<GeneratorStep>;

/// Canonical generator decomposition: deletions in descending position
/// order, then insertions in ascending position order. Replaying the
/// steps from p.source reproduces p exactly.
GeneratorSeq to_generators(const Patch& p);

/// Replays a generator sequence from the given file by composing the
/// corresponding elementary patches.
Patch replay_generators(const File& source, const GeneratorSeq& steps);

/// Patch inference: a valid patch a -> b whose domain of definition has
/// maximum cardinality (a longest common subsequence). Ties are broken
/// by the lexicographically smallest sequence of matched source indices,
/// then of matched target indices.
Patch diff(const File& a, const File& b);

} // namespace copatch

#endif
