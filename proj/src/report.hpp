#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aggregate.hpp"
#include "corpus.hpp"
#include "matcher.hpp"
#include "metrics.hpp"

// End-to-end evaluation of prediction files against a corpus, plus the text
// renderings shared by the C API and the CLI.
namespace kpkit::report {

struct SystemPredictions {
  std::string name;
  std::vector<aggregate::PredictionRecord> records;
};

struct EvalOptions {
  std::string dataset = "dataset";
  std::vector<matcher::Cutoff> cutoffs{matcher::Cutoff::top(5), matcher::Cutoff::golden_count()};
  std::vector<matcher::MatcherKind> matchers{matcher::MatcherKind::Exact, matcher::MatcherKind::Partial};
  std::vector<metrics::Subset> subsets{metrics::Subset::Present, metrics::Subset::Absent, metrics::Subset::All};
  // Prediction records whose id is not in the corpus that are tolerated.
  std::size_t max_unknown_ids = 0;
  bool keep_match_reports = false;
  unsigned threads = 0;
};

struct EvalCell {
  metrics::Subset subset = metrics::Subset::All;
  matcher::MatcherKind matcher = matcher::MatcherKind::Exact;
  matcher::Cutoff cutoff = matcher::Cutoff::all();
  std::optional<metrics::Summary> summary;  // empty when every document was excluded
  std::size_t excluded = 0;                 // documents with no golden keyphrase in the subset
  std::vector<metrics::DocScore> doc_scores;
};

struct CellReport {
  std::size_t cell = 0;  // index into SystemEval::cells
  matcher::MatchReport report;
};

struct SystemEval {
  std::string name;
  std::vector<EvalCell> cells;
  // Doc-major, cell-minor; filled only when keep_match_reports is set.
  std::vector<CellReport> reports;
  std::size_t unknown_ids = 0;
  std::size_t docs_without_predictions = 0;
};

struct EvalResult {
  std::string dataset;
  std::vector<SystemEval> systems;
};

EvalResult evaluate(const corpus::CorpusSplit& split, const std::vector<SystemPredictions>& systems,
                    const EvalOptions& options);

std::string render_eval_tsv(const EvalResult& result);
std::string render_eval_json(const EvalResult& result);
/// Long per-document table: system doc_id subset matcher cutoff precision recall f1
std::string render_score_dump(const EvalResult& result);
std::string render_match_dump(const EvalResult& result);

enum class Format { Tsv, Json, Text };
Format parse_format(std::string_view name);

std::string render_stats(const std::string& dataset, const corpus::CorpusStats& stats, Format format);

struct LabelledPair {
  std::string doc_id;
  std::string keyphrase;
  bool label = false;
};

/// pairs-tsv rows: doc_id, keyphrase, true|false. `#` lines are skipped.
std::vector<LabelledPair> parse_labelled_pairs(std::istream& in);
std::vector<LabelledPair> load_labelled_pairs(const std::filesystem::path& path);

struct BinaryEvalReport {
  metrics::BinaryEvalResult result;
  std::size_t missing_verdicts = 0;
};

/// Joins labelled pairs with verdicts on (doc_id, normalized keyphrase); pairs
/// without a verdict are counted and skipped.
BinaryEvalReport binary_eval(const std::vector<LabelledPair>& pairs, const aggregate::VerdictTable& verdicts);

std::string render_binary_eval(const BinaryEvalReport& report, Format format);

}  // namespace kpkit::report
