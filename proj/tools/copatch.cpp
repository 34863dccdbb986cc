#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "copatch/cli.hpp"
#include "copatch/store.hpp"

namespace {

std::string g_crash_point;

void crash_at(const std::string& point) {
  if (point == g_crash_point) ::_exit(9);
}

} // namespace

int main(int argc, char** argv) {
  // Fault injection for the kill-during-write tests: the process exits
  // hard at the named write step.
  if (const char* point = std::getenv("COPATCH_CRASH_POINT"); point && *point) {
    g_crash_point = point;
    copatch::store::crash_hook = &crash_at;
  }
  std::vector<std::string> args(argv + 1, argv + argc);
  return copatch::run_cli(args, std::filesystem::current_path(), std::cout, std::cerr);
}
