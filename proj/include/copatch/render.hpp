#ifndef COPATCH_RENDER_HPP
#define COPATCH_RENDER_HPP

#include <string>

#include "copatch/conflict.hpp"

namespace copatch {

/// Renders a conflict file as text. Linear objects print as their plain
/// lines. Otherwise strongly connected components of the relation are
/// condensed and emitted in dependency order: sets of simultaneously
/// minimal components become a conflict block
///
///   <<<<<<<
///   <first alternative>
///   =======
///   <second alternative>
///   >>>>>>>
///
/// and a component that is a genuine cycle prints as a block bracketed by
/// `(cycle` / `cycle)`. Output is deterministic and invariant under
/// renaming of line ids.
std::string render_conflicts(const ConflictFile& x);

} // namespace copatch

#endif
