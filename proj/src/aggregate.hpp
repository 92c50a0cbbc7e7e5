#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kpkit::aggregate {

/// Model output for one document: one sequence for greedy decoding, N for
/// beams. Sequences hold raw keyphrase strings and may be empty.
struct PredictionRecord {
  std::string doc_id;
  std::vector<std::vector<std::string>> sequences;
};

struct RankedKeyphrase {
  std::string phrase;  // normalized
  double score = 0.0;  // number of sequences containing the phrase
};

struct RankedPredictions {
  std::string doc_id;
  std::vector<RankedKeyphrase> keyphrases;

  std::vector<std::string> phrases() const;
};

/// Reads prediction JSON-lines. Each line is {"id", "sequences": [...]} or
/// {"id", "keyphrases": [...]}; a sequence given as a string is split on
/// `delimiter`.
std::vector<PredictionRecord> parse_predictions(std::istream& in, const std::string& delimiter = ";");
std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path,
                                               const std::string& delimiter = ";");

std::vector<std::string> split_sequence(const std::string& sequence, const std::string& delimiter);

/// Ranks phrases by how many sequences contain them (each sequence votes once
/// per phrase). Ties: lower mean position within the sequences, then
/// lexicographic order of the normalized phrase.
RankedPredictions majority_vote(const PredictionRecord& record);

std::string render_rankings_jsonl(const std::vector<RankedPredictions>& rankings);

class VerdictTable {
 public:
  /// Returns false if (doc_id, keyphrase) is already present.
  bool add(const std::string& doc_id, const std::string& normalized_keyphrase, bool relevant);
  std::optional<bool> find(const std::string& doc_id, const std::string& normalized_keyphrase) const;
  std::size_t size() const noexcept { return table_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, bool> table_;
};

/// Verdict JSON-lines: {"id", "keyphrase", "relevant": bool} or
/// {"id", "keyphrase", "score": real}; scored lines need a threshold
/// (relevant iff score >= threshold). Keyphrases are normalized on load.
VerdictTable parse_verdicts(std::istream& in, std::optional<double> threshold = std::nullopt);
VerdictTable load_verdicts(const std::filesystem::path& path, std::optional<double> threshold = std::nullopt);

enum class MissingPolicy { Keep, Drop };
MissingPolicy parse_missing_policy(std::string_view name);

struct FilterOutcome {
  RankedPredictions predictions;
  std::size_t removed = 0;
  std::size_t missing = 0;  // phrases without a verdict
};

FilterOutcome apply_filter(const RankedPredictions& predictions, const VerdictTable& verdicts,
                           MissingPolicy missing_policy = MissingPolicy::Keep);

}  // namespace kpkit::aggregate
