#include "copatch/file.hpp"

#include "copatch/errors.hpp"

namespace copatch {

bool is_valid_label(const Label& label) {
  return label.find('\n') == std::string::npos && label.find('\r') == std::string::npos;
}

File file_from_text(std::string_view text) {
  File out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line =
        nl == std::string_view::npos ? text.substr(start) : text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    Label label(line);
    if (!is_valid_label(label))
      throw ValidationError("line " + std::to_string(out.size() + 1) +
                            " contains a stray carriage return");
    out.push_back(std::move(label));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return out;
}

std::string file_to_text(const File& file) {
  std::string out;
  for (const Label& line : file) {
    out += line;
    out += '\n';
  }
  return out;
}

} // namespace copatch
