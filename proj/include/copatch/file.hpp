#ifndef COPATCH_FILE_HPP
#define COPATCH_FILE_HPP

#include <string>
#include <string_view>
#include <vector>

namespace copatch {

/// One line of a file: arbitrary bytes excluding the line terminators
/// 0x0A (LF) and 0x0D (CR).
using Label = std::string;

/// A file is a finite (possibly empty) sequence of labeled lines.
using File = std::vector<Label>;

bool is_valid_label(const Label& label);

/// Splits UTF-8 text on LF. A trailing LF does not create an empty last
/// line; a CR immediately preceding an LF is stripped. Any other CR, or
/// any other byte sequence that would make a line an invalid Label,
/// raises ValidationError.
File file_from_text(std::string_view text);

/// Inverse of file_from_text: every line is LF-terminated.
std::string file_to_text(const File& file);

} // namespace copatch

#endif
