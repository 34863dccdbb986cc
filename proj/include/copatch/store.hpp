#ifndef COPATCH_STORE_HPP
#define COPATCH_STORE_HPP

#include <filesystem>
#include <map>
#include <string>

#include "copatch/repository.hpp"

namespace copatch {

/// On-disk layout under `.copatch/`:
///
///   events/<event-id>   cause lines + canonical morphism encoding
///   messages/<event-id> optional commit message, raw text
///   heads               maximal event ids, one per line
///   lock                advisory lock taken for the duration of a writer
///
/// Every file is written to a temporary name and renamed into place;
/// `heads` is renamed last, so a killed writer leaves either the old or
/// the new repository, never a torn one. Events not reachable from
/// `heads` are ignored on load.
namespace store {

/// Test hook, called with a label at each write step; a hook that throws
/// or exits simulates a writer killed at that point.
extern void (*crash_hook)(const std::string& point);

std::filesystem::path dir_for(const std::filesystem::path& worktree_root);

bool present(const std::filesystem::path& worktree_root);

/// Creates an empty store. Throws StoreError if one already exists.
void init(const std::filesystem::path& worktree_root);

/// Loads the repository reachable from `heads`. Event files are verified
/// against their content address.
Repository load(const std::filesystem::path& worktree_root);

std::map<EventId, std::string> load_messages(const std::filesystem::path& worktree_root);

/// Writes every missing event file, new messages, then `heads`.
void commit(const std::filesystem::path& worktree_root, const Repository& repo,
            const std::map<EventId, std::string>& new_messages = {});

/// Atomic file replacement used for both store files and the working
/// file: write to a temporary sibling, then rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes,
                       const std::string& crash_point = {});

/// Exclusive advisory lock on `.copatch/lock`, released on destruction.
class Lock {
public:
  explicit Lock(const std::filesystem::path& worktree_root);
  ~Lock();
  Lock(const Lock&) = delete;
  Lock& operator=(const Lock&) = delete;

private:
  int fd_ = -1;
};

} // namespace store

} // namespace copatch

#endif
