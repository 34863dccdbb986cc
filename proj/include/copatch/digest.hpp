#ifndef COPATCH_DIGEST_HPP
#define COPATCH_DIGEST_HPP

#include <string>
#include <string_view>

namespace copatch {

/// SHA-256 of the given bytes as lowercase hex.
std::string sha256_hex(std::string_view bytes);

} // namespace copatch

#endif
