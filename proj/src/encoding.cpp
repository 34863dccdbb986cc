#include "copatch/encoding.hpp"

#include <charconv>
#include <vector>

#include "copatch/digest.hpp"
#include "copatch/errors.hpp"

namespace copatch {

namespace {

constexpr std::string_view kObjectHeader = "copatch-object 1";
constexpr std::string_view kMorphismHeader = "copatch-morphism 1";

std::vector<std::string_view> split_lines(std::string_view text, std::size_t line_no) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos)
      throw ParseError("missing final newline", line_no + lines.size() + 1);
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

LineId parse_id(std::string_view token, std::size_t line_no) {
  LineId value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError("malformed id '" + std::string(token) + "'", line_no);
  return value;
}

} // namespace

std::string encode_label(const Label& label) {
  std::string out;
  out.reserve(label.size());
  for (char c : label) {
    switch (c) {
      case '%': out += "%25"; break;
      case '\n': out += "%0A"; break;
      case '\r': out += "%0D"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

Label decode_label(std::string_view text, std::size_t line_no) {
  Label out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out.push_back(text[i]);
      continue;
    }
    std::string_view esc = text.substr(i, 3);
    if (esc == "%25")
      out.push_back('%');
    else if (esc == "%0A")
      out.push_back('\n');
    else if (esc == "%0D")
      out.push_back('\r');
    else
      throw ParseError("bad escape '" + std::string(esc) + "'", line_no);
    i += 2;
  }
  return out;
}

std::string encode_object(const ConflictFile& x) {
  std::string out(kObjectHeader);
  out += '\n';
  for (const auto& [v, label] : x.labels)
    out += "node " + std::to_string(v) + " " + encode_label(label) + "\n";
  for (const auto& [a, b] : x.order)
    out += "rel " + std::to_string(a) + " " + std::to_string(b) + "\n";
  return out;
}

namespace {

// Parses the canonical node/rel body shared by objects and embedded
// target blocks. `lines` is consumed from `pos`; stops at the first line
// that is neither node nor rel.
ConflictFile parse_object_body(const std::vector<std::string_view>& lines, std::size_t& pos,
                               std::size_t line_offset) {
  ConflictFile x;
  bool seen_rel = false;
  std::optional<LineId> last_node;
  std::optional<OrderPair> last_rel;
  for (; pos < lines.size(); ++pos) {
    std::string_view line = lines[pos];
    std::size_t line_no = line_offset + pos + 1;
    if (line.substr(0, 5) == "node ") {
      if (seen_rel) throw ParseError("node line after rel lines", line_no);
      std::string_view rest = line.substr(5);
      std::size_t space = rest.find(' ');
      if (space == std::string_view::npos) throw ParseError("malformed node line", line_no);
      LineId id = parse_id(rest.substr(0, space), line_no);
      if (last_node && id <= *last_node)
        throw ParseError("node ids out of order", line_no);
      last_node = id;
      x.labels[id] = decode_label(rest.substr(space + 1), line_no);
      if (!is_valid_label(x.labels[id]))
        throw ValidationError("label of node " + std::to_string(id) +
                              " contains a line terminator");
    } else if (line.substr(0, 4) == "rel ") {
      seen_rel = true;
      std::string_view rest = line.substr(4);
      std::size_t space = rest.find(' ');
      if (space == std::string_view::npos) throw ParseError("malformed rel line", line_no);
      OrderPair pair{parse_id(rest.substr(0, space), line_no),
                     parse_id(rest.substr(space + 1), line_no)};
      if (!x.has_vertex(pair.first) || !x.has_vertex(pair.second))
        throw ParseError("rel mentions an unknown node", line_no);
      if (last_rel && !(*last_rel < pair)) throw ParseError("rel lines out of order", line_no);
      last_rel = pair;
      x.order.insert(pair);
    } else {
      break;
    }
  }
  ObjectReport report = validate_object(x);
  if (!report.ok()) throw ValidationError("decoded object: " + report.violations[0].describe());
  return x;
}

} // namespace

ConflictFile decode_object(std::string_view text) {
  std::vector<std::string_view> lines = split_lines(text, 0);
  if (lines.empty() || lines[0] != kObjectHeader) throw ParseError("missing object header", 1);
  std::size_t pos = 1;
  ConflictFile x = parse_object_body(lines, pos, 0);
  if (pos != lines.size()) throw ParseError("trailing content", pos + 1);
  return x;
}

std::string object_digest(const ConflictFile& x) { return sha256_hex(encode_object(x)); }

std::string encode_morphism_parts(const std::string& src_digest, const ConflictFile& target,
                                  const std::map<LineId, LineId>& map) {
  std::string out(kMorphismHeader);
  out += '\n';
  out += "src-digest " + src_digest + "\n";
  out += encode_object(target);
  for (const auto& [s, d] : map)
    out += "map " + std::to_string(s) + " " + std::to_string(d) + "\n";
  return out;
}

std::string encode_morphism(const PartialMorphism& m) {
  return encode_morphism_parts(object_digest(m.source), m.target, m.map);
}

DecodedMorphism decode_morphism(std::string_view text) {
  std::vector<std::string_view> lines = split_lines(text, 0);
  if (lines.empty() || lines[0] != kMorphismHeader)
    throw ParseError("missing morphism header", 1);
  if (lines.size() < 2 || lines[1].substr(0, 11) != "src-digest ")
    throw ParseError("missing src-digest", 2);
  DecodedMorphism dm;
  dm.src_digest = std::string(lines[1].substr(11));
  if (dm.src_digest.size() != 64 ||
      dm.src_digest.find_first_not_of("0123456789abcdef") != std::string::npos)
    throw ParseError("malformed src-digest", 2);
  if (lines.size() < 3 || lines[2] != kObjectHeader)
    throw ParseError("missing embedded target object", 3);
  std::size_t pos = 3;
  dm.target = parse_object_body(lines, pos, 0);
  std::optional<LineId> last_src;
  for (; pos < lines.size(); ++pos) {
    std::string_view line = lines[pos];
    std::size_t line_no = pos + 1;
    if (line.substr(0, 4) != "map ") throw ParseError("expected map line", line_no);
    std::string_view rest = line.substr(4);
    std::size_t space = rest.find(' ');
    if (space == std::string_view::npos) throw ParseError("malformed map line", line_no);
    LineId src = parse_id(rest.substr(0, space), line_no);
    LineId dst = parse_id(rest.substr(space + 1), line_no);
    if (last_src && src <= *last_src) throw ParseError("map lines out of order", line_no);
    last_src = src;
    if (!dm.target.has_vertex(dst))
      throw ParseError("map hits an unknown target node", line_no);
    dm.map[src] = dst;
  }
  return dm;
}

PartialMorphism bind_morphism(const DecodedMorphism& dm, const ConflictFile& source) {
  if (object_digest(source) != dm.src_digest)
    throw DigestMismatch("morphism source digest does not match the supplied object");
  PartialMorphism m{source, dm.target, dm.map};
  MorphismReport report = validate_morphism(m);
  if (!report.ok())
    throw ValidationError("bound morphism: " + report.violations[0].describe());
  return m;
}

} // namespace copatch
