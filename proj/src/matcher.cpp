#include "matcher.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>
#include <unordered_set>

#include "error.hpp"
#include "textnorm.hpp"

namespace kpkit::matcher {

const char* to_string(MatcherKind kind) noexcept {
  return kind == MatcherKind::Exact ? "exact" : "partial";
}

MatcherKind parse_matcher_kind(std::string_view name) {
  if (name == "exact") return MatcherKind::Exact;
  if (name == "partial") return MatcherKind::Partial;
  throw Error(ErrorCode::InvalidArgument, "unknown matcher '" + std::string(name) + "'");
}

Cutoff Cutoff::top(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "cutoff must be >= 1");
  return Cutoff(Kind::Top, k);
}

Cutoff Cutoff::parse(std::string_view text) {
  if (text == "O" || text == "o") return golden_count();
  if (text == "all") return all();
  std::size_t k = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::InvalidArgument, "invalid cutoff '" + std::string(text) + "'");
  return top(k);
}

std::size_t Cutoff::resolve(std::size_t golden_size) const noexcept {
  switch (kind_) {
    case Kind::Top:
      return k_;
    case Kind::GoldenCount:
      return golden_size;
    case Kind::All:
      break;
  }
  return static_cast<std::size_t>(-1);
}

std::string Cutoff::label() const {
  switch (kind_) {
    case Kind::Top:
      return std::to_string(k_);
    case Kind::GoldenCount:
      return "O";
    case Kind::All:
      break;
  }
  return "all";
}

std::vector<std::string> dedup_preserving_order(std::span<const std::string> items) {
  std::vector<std::string> out;
  std::unordered_set<std::string_view> seen;
  out.reserve(items.size());
  for (const auto& s : items)
    if (seen.insert(s).second) out.push_back(s);
  return out;
}

bool partially_matches(std::string_view a, std::string_view b) {
  return textnorm::contains_tokens(b, a) || textnorm::contains_tokens(a, b);
}

namespace {

struct Prepared {
  std::vector<std::string> predictions;
  std::vector<std::string> golden;
  MatchReport report;
};

Prepared prepare(std::span<const std::string> predictions, std::span<const std::string> golden, Cutoff cutoff,
                 MatcherKind kind) {
  Prepared p;
  p.golden = dedup_preserving_order(golden);
  p.predictions = dedup_preserving_order(predictions);
  std::size_t limit = cutoff.resolve(p.golden.size());
  if (p.predictions.size() > limit) p.predictions.resize(limit);
  p.report.cutoff = cutoff;
  p.report.kind = kind;
  return p;
}

void collect_unmatched_golden(Prepared& p, const std::vector<bool>& used) {
  for (std::size_t g = 0; g < p.golden.size(); ++g)
    if (!used[g]) p.report.unmatched_golden.push_back(p.golden[g]);
}

}  // namespace

MatchReport exact_match(std::span<const std::string> predictions, std::span<const std::string> golden,
                        Cutoff cutoff) {
  Prepared p = prepare(predictions, golden, cutoff, MatcherKind::Exact);
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t g = 0; g < p.golden.size(); ++g) index.emplace(p.golden[g], g);
  std::vector<bool> used(p.golden.size(), false);
  for (const auto& pred : p.predictions) {
    auto it = index.find(pred);
    if (it != index.end() && !used[it->second]) {
      used[it->second] = true;
      p.report.matched_pairs.emplace_back(pred, p.golden[it->second]);
    } else {
      p.report.unmatched_predictions.push_back(pred);
    }
  }
  collect_unmatched_golden(p, used);
  return std::move(p.report);
}

MatchReport partial_match(std::span<const std::string> predictions, std::span<const std::string> golden,
                          Cutoff cutoff) {
  Prepared p = prepare(predictions, golden, cutoff, MatcherKind::Partial);
  std::vector<bool> used(p.golden.size(), false);
  for (const auto& pred : p.predictions) {
    bool matched = false;
    for (std::size_t g = 0; g < p.golden.size(); ++g) {
      if (used[g] || !partially_matches(pred, p.golden[g])) continue;
      used[g] = true;
      p.report.matched_pairs.emplace_back(pred, p.golden[g]);
      matched = true;
      break;
    }
    if (!matched) p.report.unmatched_predictions.push_back(pred);
  }
  collect_unmatched_golden(p, used);
  return std::move(p.report);
}

MatchReport match(MatcherKind kind, std::span<const std::string> predictions, std::span<const std::string> golden,
                  Cutoff cutoff) {
  return kind == MatcherKind::Exact ? exact_match(predictions, golden, cutoff)
                                    : partial_match(predictions, golden, cutoff);
}

}  // namespace kpkit::matcher
