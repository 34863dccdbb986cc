#ifndef COPATCH_ENCODING_HPP
#define COPATCH_ENCODING_HPP

#include <map>
#include <string>
#include <string_view>

#include "copatch/conflict.hpp"

namespace copatch {

/// Canonical text encoding of a conflict file:
///
///   copatch-object 1
///   node <id> <label>     one per vertex, ascending id, label percent-encoded
///   rel <x> <y>           one per order pair, sorted by (x, y)
///
/// The stored relation is the full transitive relation. Decoding accepts
/// exactly the canonical form, so both round trips are the identity.
std::string encode_object(const ConflictFile& x);
ConflictFile decode_object(std::string_view text);

/// SHA-256 over the canonical object encoding, lowercase hex.
std::string object_digest(const ConflictFile& x);

/// Canonical text encoding of a partial morphism:
///
///   copatch-morphism 1
///   src-digest <hex>
///   <canonical encoding of the target object>
///   map <src-id> <dst-id>  sorted by src-id; absent src-id = undefined
///
/// The source object travels as a digest only; binding the decoded form
/// against a candidate source checks it.
std::string encode_morphism(const PartialMorphism& m);
std::string encode_morphism_parts(const std::string& src_digest, const ConflictFile& target,
                                  const std::map<LineId, LineId>& map);

struct DecodedMorphism {
  std::string src_digest;
  ConflictFile target;
  std::map<LineId, LineId> map;

  bool operator==(const DecodedMorphism&) const = default;
};

DecodedMorphism decode_morphism(std::string_view text);

/// Reattaches a decoded morphism to its source object. Throws
/// DigestMismatch when the source's canonical encoding does not hash to
/// the recorded digest, ValidationError when the result would not be a
/// valid morphism.
PartialMorphism bind_morphism(const DecodedMorphism& dm, const ConflictFile& source);

/// Percent-encoding used for labels: %25 for %, %0A for LF, %0D for CR.
std::string encode_label(const Label& label);
Label decode_label(std::string_view text, std::size_t line_no);

} // namespace copatch

#endif
