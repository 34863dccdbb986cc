#include "copatch/render.hpp"

#include <algorithm>
#include <vector>

namespace copatch {

namespace {

struct Component {
  std::vector<LineId> members; // ascending id
  bool cyclic = false;
  std::string text; // rendered form, also the sort key inside a block

  std::string render_members(const ConflictFile& x) const {
    std::vector<std::pair<Label, LineId>> keyed;
    keyed.reserve(members.size());
    for (LineId v : members) keyed.push_back({x.labels.at(v), v});
    std::sort(keyed.begin(), keyed.end());
    std::string out;
    for (const auto& [label, id] : keyed) {
      out += label;
      out += '\n';
    }
    return out;
  }
};

} // namespace

std::string render_conflicts(const ConflictFile& x) {
  if (auto file = is_linear(x)) return file_to_text(*file);

  // Strongly connected components: u ~ v iff u < v and v < u (the stored
  // relation is transitively closed, so reachability is the relation
  // itself), plus the singleton case.
  std::vector<LineId> ids;
  for (const auto& [v, label] : x.labels) ids.push_back(v);
  std::map<LineId, std::size_t> comp_of;
  std::vector<Component> comps;
  for (LineId v : ids) {
    if (comp_of.count(v)) continue;
    Component comp;
    for (LineId w : ids)
      if (w == v || (x.related(v, w) && x.related(w, v))) {
        comp.members.push_back(w);
        comp_of[w] = comps.size();
      }
    comp.cyclic = comp.members.size() > 1 || x.related(v, v);
    comp.text = comp.cyclic ? "(cycle\n" + comp.render_members(x) + "cycle)\n"
                            : x.labels.at(v) + "\n";
    comps.push_back(std::move(comp));
  }

  std::vector<bool> emitted(comps.size(), false);
  std::size_t remaining = comps.size();
  std::string out;
  while (remaining > 0) {
    // Currently minimal components: nothing un-emitted strictly below them.
    std::vector<std::size_t> minimal;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (emitted[i]) continue;
      bool is_minimal = true;
      for (const auto& [a, b] : x.order) {
        std::size_t ca = comp_of.at(a), cb = comp_of.at(b);
        if (cb == i && ca != i && !emitted[ca]) {
          is_minimal = false;
          break;
        }
      }
      if (is_minimal) minimal.push_back(i);
    }
    std::sort(minimal.begin(), minimal.end(), [&](std::size_t a, std::size_t b) {
      return comps[a].text < comps[b].text;
    });
    if (minimal.size() == 1) {
      out += comps[minimal[0]].text;
    } else {
      out += "<<<<<<<\n";
      for (std::size_t k = 0; k < minimal.size(); ++k) {
        if (k > 0) out += "=======\n";
        out += comps[minimal[k]].text;
      }
      out += ">>>>>>>\n";
    }
    for (std::size_t i : minimal) emitted[i] = true;
    remaining -= minimal.size();
  }
  return out;
}

} // namespace copatch
