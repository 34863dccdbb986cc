#include "copatch/patch.hpp"

#include <algorithm>
#include <set>

#include "copatch/errors.hpp"

namespace copatch {

std::string PatchViolation::describe() const {
  switch (kind) {
    case Kind::map_size:
      return "map size differs from source length";
    case Kind::target_range:
      return "position " + std::to_string(i) + " maps outside the target";
    case Kind::not_injective:
      return "positions " + std::to_string(i) + " and " + std::to_string(j) +
             " map to the same target line";
    case Kind::not_increasing:
      return "positions " + std::to_string(i) + " and " + std::to_string(j) +
             " are not mapped in increasing order";
    case Kind::label_mismatch:
      return "position " + std::to_string(i) + " maps to a line with a different label";
  }
  return "unknown violation";
}

PatchReport validate_patch(const Patch& p) {
  PatchReport report;
  if (p.map.size() != p.source.size()) {
    report.violations.push_back({PatchViolation::Kind::map_size, p.map.size(), p.source.size()});
    return report;
  }
  for (std::size_t i = 0; i < p.map.size(); ++i) {
    if (!p.map[i]) continue;
    if (*p.map[i] >= p.target.size()) {
      report.violations.push_back({PatchViolation::Kind::target_range, i, 0});
      continue;
    }
    if (p.source[i] != p.target[*p.map[i]])
      report.violations.push_back({PatchViolation::Kind::label_mismatch, i, 0});
  }
  std::size_t prev = 0;
  bool have_prev = false;
  std::size_t prev_pos = 0;
  for (std::size_t i = 0; i < p.map.size(); ++i) {
    if (!p.map[i] || *p.map[i] >= p.target.size()) continue;
    if (have_prev) {
      if (*p.map[i] == prev)
        report.violations.push_back({PatchViolation::Kind::not_injective, prev_pos, i});
      else if (*p.map[i] < prev)
        report.violations.push_back({PatchViolation::Kind::not_increasing, prev_pos, i});
    }
    prev = *p.map[i];
    prev_pos = i;
    have_prev = true;
  }
  return report;
}

Patch identity_patch(const File& a) {
  Patch p{a, a, {}};
  p.map.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p.map.emplace_back(i);
  return p;
}

Patch compose(const Patch& f, const Patch& g) {
  if (f.target != g.source)
    throw SourceMismatch("compose: target of the first patch differs from source of the second");
  Patch r{f.source, g.target, {}};
  r.map.reserve(f.map.size());
  for (const auto& fi : f.map) {
    if (fi && *fi < g.map.size() && g.map[*fi])
      r.map.emplace_back(*g.map[*fi]);
    else
      r.map.emplace_back(std::nullopt);
  }
  return r;
}

File apply_patch(const File& a, const Patch& p) {
  std::size_t limit = std::min(a.size(), p.source.size());
  for (std::size_t i = 0; i < limit; ++i)
    if (a[i] != p.source[i]) throw SourceMismatch("apply: line differs from patch source", i);
  if (a.size() != p.source.size())
    throw SourceMismatch("apply: file length differs from patch source", limit);
  return p.target;
}

Patch tensor(const Patch& f, const Patch& g) {
  Patch r;
  r.source = f.source;
  r.source.insert(r.source.end(), g.source.begin(), g.source.end());
  r.target = f.target;
  r.target.insert(r.target.end(), g.target.begin(), g.target.end());
  r.map = f.map;
  for (const auto& gi : g.map)
    r.map.emplace_back(gi ? std::optional<std::size_t>(f.target.size() + *gi) : std::nullopt);
  return r;
}

Patch insert_line(const File& a, std::size_t i, const Label& x) {
  if (i > a.size())
    throw PositionOutOfRange("insert at " + std::to_string(i) + " in a file of " +
                             std::to_string(a.size()) + " lines");
  Patch p;
  p.source = a;
  p.target = a;
  p.target.insert(p.target.begin() + static_cast<std::ptrdiff_t>(i), x);
  p.map.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) p.map.emplace_back(j < i ? j : j + 1);
  return p;
}

Patch delete_line(const File& a, std::size_t i) {
  if (i >= a.size())
    throw PositionOutOfRange("delete at " + std::to_string(i) + " in a file of " +
                             std::to_string(a.size()) + " lines");
  Patch p;
  p.source = a;
  p.target = a;
  p.target.erase(p.target.begin() + static_cast<std::ptrdiff_t>(i));
  p.map.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (j == i)
      p.map.emplace_back(std::nullopt);
    else
      p.map.emplace_back(j < i ? j : j - 1);
  }
  return p;
}

GeneratorSeq to_generators(const Patch& p) {
  PatchReport report = validate_patch(p);
  if (!report.ok()) throw InvalidPatch("to_generators: " + report.violations[0].describe());
  GeneratorSeq steps;
  for (std::size_t i = p.map.size(); i-- > 0;)
    if (!p.map[i]) steps.push_back({GeneratorStep::Kind::del, i, {}});
  std::set<std::size_t> image;
  for (const auto& m : p.map)
    if (m) image.insert(*m);
  for (std::size_t j = 0; j < p.target.size(); ++j)
    if (!image.count(j)) steps.push_back({GeneratorStep::Kind::ins, j, p.target[j]});
  return steps;
}

Patch replay_generators(const File& source, const GeneratorSeq& steps) {
  Patch acc = identity_patch(source);
  for (const GeneratorStep& step : steps) {
    if (step.kind == GeneratorStep::Kind::del)
      acc = compose(acc, delete_line(acc.target, step.pos));
    else
      acc = compose(acc, insert_line(acc.target, step.pos, step.label));
  }
  return acc;
}

Patch diff(const File& a, const File& b) {
  const std::size_t n = a.size(), m = b.size();
  Patch p{a, b, std::vector<std::optional<std::size_t>>(n)};

  // Matching the common prefix first agrees with the greedy walk below.
  std::size_t pre = 0;
  while (pre < n && pre < m && a[pre] == b[pre]) {
    p.map[pre] = pre;
    ++pre;
  }
  const std::size_t rows = n - pre, cols = m - pre;
  if (rows == 0 || cols == 0) return p;

  // dp[i][j] = LCS length of a[pre+i..] vs b[pre+j..].
  std::vector<std::vector<std::uint32_t>> dp(rows + 1,
                                             std::vector<std::uint32_t>(cols + 1, 0));
  for (std::size_t i = rows; i-- > 0;)
    for (std::size_t j = cols; j-- > 0;) {
      std::uint32_t best = std::max(dp[i + 1][j], dp[i][j + 1]);
      if (a[pre + i] == b[pre + j]) best = std::max(best, 1 + dp[i + 1][j + 1]);
      dp[i][j] = best;
    }

  // Greedy walk: always take the smallest matchable source index, then the
  // smallest target index, that keeps a maximum completion reachable.
  std::size_t i = 0, j = 0;
  std::uint32_t cur = dp[0][0];
  while (cur > 0) {
    bool advanced = false;
    for (std::size_t s = i; s < rows && dp[s][j] == cur && !advanced; ++s) {
      for (std::size_t t = j; t < cols && dp[s][t] == cur; ++t) {
        if (a[pre + s] == b[pre + t] && 1 + dp[s + 1][t + 1] == cur) {
          p.map[pre + s] = pre + t;
          i = s + 1;
          j = t + 1;
          --cur;
          advanced = true;
          break;
        }
      }
    }
    if (!advanced) break; // unreachable for a correct table
  }
  return p;
}

} // namespace copatch
