#include "copatch/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <fstream>
#include <sstream>
#include <vector>

#include "copatch/digest.hpp"
#include "copatch/encoding.hpp"
#include "copatch/errors.hpp"

namespace copatch {
namespace store {

namespace fs = std::filesystem;

void (*crash_hook)(const std::string& point) = nullptr;

namespace {

void maybe_crash(const std::string& point) {
  if (crash_hook && !point.empty()) crash_hook(point);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool looks_like_event_id(const std::string& name) {
  return name.size() == 64 && name.find_first_not_of("0123456789abcdef") == std::string::npos;
}

} // namespace

fs::path dir_for(const fs::path& worktree_root) { return worktree_root / ".copatch"; }

bool present(const fs::path& worktree_root) {
  return fs::is_directory(dir_for(worktree_root));
}

void init(const fs::path& worktree_root) {
  fs::path dir = dir_for(worktree_root);
  if (fs::exists(dir)) throw StoreError("store already exists at " + dir.string());
  fs::create_directories(dir / "events");
  fs::create_directories(dir / "messages");
  write_file_atomic(dir / "heads", "");
}

void write_file_atomic(const fs::path& path, const std::string& bytes,
                       const std::string& crash_point) {
  fs::path tmp = path.parent_path() / (".tmp-" + path.filename().string());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out.flush()) throw StoreError("short write to " + tmp.string());
  }
  maybe_crash(crash_point.empty() ? "" : crash_point + "-temp");
  fs::rename(tmp, path);
  maybe_crash(crash_point.empty() ? "" : crash_point + "-renamed");
}

namespace {

EventRecord parse_event_file(const std::string& bytes, const EventId& id) {
  EventRecord rec;
  if (sha256_hex(bytes) != id)
    throw DigestMismatch("event file " + id + " does not match its content address");
  std::size_t pos = 0, line_no = 0;
  while (pos < bytes.size() && bytes.compare(pos, 6, "cause ") == 0) {
    std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string::npos) throw ParseError("unterminated cause line", line_no + 1);
    std::string cause = bytes.substr(pos + 6, nl - pos - 6);
    if (!looks_like_event_id(cause)) throw ParseError("malformed cause id", line_no + 1);
    rec.causes.insert(cause);
    pos = nl + 1;
    ++line_no;
  }
  DecodedMorphism dm = decode_morphism(std::string_view(bytes).substr(pos));
  rec.src_digest = dm.src_digest;
  auto target = is_linear(dm.target);
  if (!target)
    throw ValidationError("event " + id + " stores a non-linear base patch target");
  if (dm.target != embed(*target))
    throw ValidationError("event " + id + " stores a target object with non-canonical ids");
  rec.target = *target;
  // Map indices are positions in the embedded (linear) target object,
  // whose vertex v sits at position v by construction of embed().
  for (const auto& [s, d] : dm.map) rec.map[s] = d;
  return rec;
}

} // namespace

Repository load(const fs::path& worktree_root) {
  fs::path dir = dir_for(worktree_root);
  if (!fs::is_directory(dir)) throw StoreError("no copatch store at " + dir.string());
  Repository repo;

  std::vector<EventId> heads;
  {
    std::istringstream in(read_file(dir / "heads"));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!looks_like_event_id(line)) throw ParseError("malformed head id", line_no);
      heads.push_back(line);
    }
  }

  // Only events reachable from the heads belong to the repository;
  // anything else is debris from an interrupted writer.
  std::map<EventId, EventRecord> loaded;
  std::vector<EventId> stack = heads;
  while (!stack.empty()) {
    EventId id = stack.back();
    stack.pop_back();
    if (loaded.count(id)) continue;
    fs::path file = dir / "events" / id;
    if (!fs::exists(file)) throw StoreError("missing event file " + id);
    EventRecord rec = parse_event_file(read_file(file), id);
    for (const EventId& c : rec.causes) stack.push_back(c);
    loaded[id] = std::move(rec);
  }
  for (const auto& [id, rec] : loaded) {
    repo.events[id] = rec;
    repo.es.causes[id] = rec.causes;
  }

  EsReport report = validate_es(repo.es);
  if (!report.ok())
    throw ValidationError("store: " + report.violations[0].describe());
  std::set<EventId> expected(heads.begin(), heads.end());
  if (maximal_events(repo.es, repo.es.events()) != expected)
    throw ValidationError("store: heads file does not list the maximal events");
  return repo;
}

std::map<EventId, std::string> load_messages(const fs::path& worktree_root) {
  std::map<EventId, std::string> out;
  fs::path dir = dir_for(worktree_root) / "messages";
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (looks_like_event_id(name)) out[name] = read_file(entry.path());
  }
  return out;
}

void commit(const fs::path& worktree_root, const Repository& repo,
            const std::map<EventId, std::string>& new_messages) {
  fs::path dir = dir_for(worktree_root);
  if (!fs::is_directory(dir)) throw StoreError("no copatch store at " + dir.string());
  fs::create_directories(dir / "events");
  fs::create_directories(dir / "messages");
  for (const auto& [id, rec] : repo.events) {
    fs::path file = dir / "events" / id;
    if (!fs::exists(file)) write_file_atomic(file, event_bytes(rec), "event");
  }
  for (const auto& [id, text] : new_messages)
    write_file_atomic(dir / "messages" / id, text, "message");
  maybe_crash("pre-heads");
  std::string heads;
  for (const EventId& e : maximal_events(repo.es, repo.es.events())) heads += e + "\n";
  write_file_atomic(dir / "heads", heads, "heads");
}

Lock::Lock(const fs::path& worktree_root) {
  fs::path path = dir_for(worktree_root) / "lock";
  fd_ = ::open(path.c_str(), O_CREAT | O_RDWR | O_CLOEXEC, 0644);
  if (fd_ < 0) throw StoreError("cannot open lock file " + path.string());
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw StoreError("store is locked by another command");
  }
}

Lock::~Lock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

} // namespace store
} // namespace copatch
