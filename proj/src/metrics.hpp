#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "matcher.hpp"

namespace kpkit::metrics {

enum class Subset { Present, Absent, All };

const char* to_string(Subset subset) noexcept;
Subset parse_subset(std::string_view name);

struct DocScore {
  std::string doc_id;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::string cutoff;  // "5", "O", ...
  matcher::MatcherKind matcher = matcher::MatcherKind::Exact;
  Subset subset = Subset::All;
  std::size_t matched = 0;
  std::size_t considered = 0;
  std::size_t golden = 0;
};

double f1_score(double precision, double recall) noexcept;

/// Precision over the predictions considered, recall over `golden_size`.
/// Returns nullopt when golden_size is 0: the document has no golden
/// keyphrases in this subset and is left out of the average.
std::optional<DocScore> score_document(const matcher::MatchReport& report, std::size_t golden_size,
                                       Subset subset = Subset::All);

struct Summary {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t documents = 0;
};

/// Macro average over documents. Throws on an empty list.
Summary aggregate(std::span<const DocScore> scores);

struct ConfusionMatrix {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::size_t positives() const noexcept { return tp + fn; }
  std::size_t negatives() const noexcept { return tn + fp; }
  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  // Rows are the true label, columns (predicted true, predicted false).
  double true_row_true() const noexcept;
  double true_row_false() const noexcept;
  double false_row_true() const noexcept;
  double false_row_false() const noexcept;
};

struct Verdict {
  bool label;
  bool predicted;
};

struct BinaryEvalResult {
  double accuracy = 0.0;
  ConfusionMatrix confusion;
};

BinaryEvalResult binary_eval(std::span<const Verdict> verdicts);

std::string render_confusion_grid(const BinaryEvalResult& result);

}  // namespace kpkit::metrics
