#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kpkit::matcher {

enum class MatcherKind { Exact, Partial };

const char* to_string(MatcherKind kind) noexcept;
MatcherKind parse_matcher_kind(std::string_view name);

/// How many ranked predictions are considered: the top k, the top |golden|
/// ("O"), or all of them.
class Cutoff {
 public:
  enum class Kind { Top, GoldenCount, All };

  static Cutoff top(std::size_t k);
  static Cutoff golden_count() { return Cutoff(Kind::GoldenCount, 0); }
  static Cutoff all() { return Cutoff(Kind::All, 0); }
  /// "5", "O" or "all".
  static Cutoff parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t resolve(std::size_t golden_size) const noexcept;
  std::string label() const;

  bool operator==(const Cutoff&) const = default;

 private:
  Cutoff(Kind kind, std::size_t k) : kind_(kind), k_(k) {}
  Kind kind_;
  std::size_t k_;
};

struct MatchReport {
  std::string doc_id;
  Cutoff cutoff = Cutoff::all();
  MatcherKind kind = MatcherKind::Exact;
  std::vector<std::pair<std::string, std::string>> matched_pairs;  // (prediction, golden)
  std::vector<std::string> unmatched_predictions;
  std::vector<std::string> unmatched_golden;

  /// Predictions scanned after dedup and cutoff.
  std::size_t considered() const noexcept { return matched_pairs.size() + unmatched_predictions.size(); }
  std::size_t golden_size() const noexcept { return matched_pairs.size() + unmatched_golden.size(); }
};

/// Drops repeated strings, keeping the first (highest-ranked) occurrence.
std::vector<std::string> dedup_preserving_order(std::span<const std::string> items);

/// `a` is a token-boundary substring of `b` or vice versa.
bool partially_matches(std::string_view a, std::string_view b);

// Both matchers take stemmed strings. Predictions are deduplicated, cut off,
// then scanned in rank order; a matched golden entry is removed so it cannot
// be counted again.
MatchReport exact_match(std::span<const std::string> predictions, std::span<const std::string> golden,
                        Cutoff cutoff);
MatchReport partial_match(std::span<const std::string> predictions, std::span<const std::string> golden,
                          Cutoff cutoff);

MatchReport match(MatcherKind kind, std::span<const std::string> predictions,
                  std::span<const std::string> golden, Cutoff cutoff);

}  // namespace kpkit::matcher
