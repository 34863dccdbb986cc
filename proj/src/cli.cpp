#include "copatch/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "copatch/encoding.hpp"
#include "copatch/errors.hpp"
#include "copatch/render.hpp"
#include "copatch/store.hpp"

namespace copatch {

namespace fs = std::filesystem;

namespace {

std::string tracked_name() {
  const char* env = std::getenv("COPATCH_FILE");
  return env && *env ? env : "FILE";
}

File read_working_file(const fs::path& root) {
  fs::path path = root / tracked_name();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("cannot read working file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return file_from_text(buf.str());
}

int print_state(const Repository& repo, std::ostream& out) {
  ConflictFile st = repo_state(repo);
  out << render_conflicts(st);
  return is_linear(st) ? 0 : 1;
}

int cmd_record(const fs::path& root, const std::string& message, bool resolution,
               std::ostream& out) {
  store::Lock lock(root);
  Repository repo = store::load(root);
  File working = read_working_file(root);
  EventId id = resolution ? resolve_file(repo, working) : record_file(repo, working);
  std::map<EventId, std::string> messages;
  if (!message.empty()) messages[id] = message + (message.back() == '\n' ? "" : "\n");
  store::commit(root, repo, messages);
  out << id << "\n";
  return 0;
}

int cmd_checkout(const fs::path& root, bool markers, std::ostream&) {
  Repository repo = store::load(root);
  ConflictFile st = repo_state(repo);
  auto lin = is_linear(st);
  if (!lin && !markers) throw ConflictedState("state is conflicted; use --markers");
  std::string text = lin ? file_to_text(*lin) : render_conflicts(st);
  store::write_file_atomic(root / tracked_name(), text);
  return 0;
}

int cmd_merge(const fs::path& root, const fs::path& other_root, std::ostream& out) {
  store::Lock lock(root);
  Repository mine = store::load(root);
  if (!store::present(other_root))
    throw StoreError("no copatch store at " + other_root.string());
  Repository theirs = store::load(other_root);
  Repository merged = import_repo(mine, theirs);
  std::map<EventId, std::string> messages = store::load_messages(other_root);
  store::commit(root, merged, messages);
  return print_state(merged, out);
}

int cmd_log(const fs::path& root, std::ostream& out) {
  Repository repo = store::load(root);
  auto messages = store::load_messages(root);
  std::vector<EventId> order = canonical_chain(repo.es, repo.es.events());
  for (const EventId& e : order) {
    out << "event " << e << "\n";
    for (const EventId& c : repo.events.at(e).causes) out << "cause " << c << "\n";
    auto msg = messages.find(e);
    if (msg != messages.end()) {
      std::string text = msg->second;
      if (!text.empty() && text.back() == '\n') text.pop_back();
      out << "message " << text << "\n";
    }
    out << "\n";
  }
  return 0;
}

int cmd_check(const fs::path& root, std::ostream& out) {
  Repository repo = store::load(root); // parse + digest + heads validation
  bool clean = true;
  EsReport report = validate_es(repo.es);
  for (const auto& violation : report.violations) {
    out << "invalid: " << violation.describe() << "\n";
    clean = false;
  }
  if (clean) {
    try {
      repo_state(repo);
    } catch (const BaseMismatch& e) {
      out << "invalid: " << e.what() << "\n";
      clean = false;
    }
  }
  if (clean) out << "ok\n";
  return clean ? 0 : 1;
}

} // namespace

int run_cli(const std::vector<std::string>& args, const fs::path& root, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"copatch: a patch-theory version control tool for one file"};
  app.require_subcommand(1);

  auto* init = app.add_subcommand("init", "create an empty store");
  std::string message;
  auto* record = app.add_subcommand("record", "record the working file as a new patch");
  record->add_option("-m,--message", message, "commit message")->required();
  auto* state_cmd = app.add_subcommand("state", "print the repository state");
  bool markers = false;
  auto* checkout = app.add_subcommand("checkout", "overwrite the working file with the state");
  checkout->add_flag("--markers", markers, "write conflict markers when conflicted");
  std::string merge_path;
  auto* merge = app.add_subcommand("merge", "import another repository's patches");
  merge->add_option("path", merge_path, "path to the other working tree")->required();
  auto* resolve = app.add_subcommand("resolve", "record the working file as a resolution");
  auto* log = app.add_subcommand("log", "list events in topological order");
  auto* check = app.add_subcommand("check", "validate the store");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (init->parsed()) {
      store::init(root);
      return 0;
    }
    if (record->parsed()) return cmd_record(root, message, /*resolution=*/false, out);
    if (resolve->parsed()) return cmd_record(root, /*message=*/"", /*resolution=*/true, out);
    if (state_cmd->parsed()) return print_state(store::load(root), out);
    if (checkout->parsed()) return cmd_checkout(root, markers, out);
    if (merge->parsed()) return cmd_merge(root, fs::path(merge_path), out);
    if (log->parsed()) return cmd_log(root, out);
    if (check->parsed()) return cmd_check(root, out);
    err << "error: no command\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const DigestMismatch& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const EventClash& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const BaseMismatch& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const StoreError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const ConflictedState& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NoChange& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

} // namespace copatch
