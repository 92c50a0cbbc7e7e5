#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "aggregate.hpp"
#include "corpus.hpp"

namespace kpkit::sampler {

/// Keyphrase co-occurrence graph over a split. Nodes are the normalized
/// golden keyphrases (the global set K) in lexicographic order; two nodes are
/// adjacent when some document lists both.
class CooccurrenceGraph {
 public:
  using NodeId = std::uint32_t;

  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::string& stemmed(NodeId n) const { return stemmed_[n]; }
  const std::vector<std::pair<NodeId, NodeId>>& edges() const noexcept { return edges_; }

  std::size_t component_count() const noexcept { return members_.size(); }
  /// Components are labelled in order of their lexicographically first member.
  std::uint32_t component(NodeId n) const { return component_[n]; }
  const std::vector<NodeId>& members(std::uint32_t component) const { return members_[component]; }

  std::optional<NodeId> find(const std::string& normalized) const;
  /// Nodes whose stemmed form equals `stemmed`.
  const std::vector<NodeId>* with_stem(const std::string& stemmed) const;

  friend CooccurrenceGraph build_graph(const corpus::CorpusSplit& split);

 private:
  std::vector<std::string> nodes_;
  std::vector<std::string> stemmed_;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<std::uint32_t> component_;
  std::vector<std::vector<NodeId>> members_;
  std::unordered_map<std::string, NodeId> index_;
  std::unordered_map<std::string, std::vector<NodeId>> by_stem_;
};

CooccurrenceGraph build_graph(const corpus::CorpusSplit& split);

enum class NegativeKind { None, Soft, Hard };
const char* to_string(NegativeKind kind) noexcept;

struct FilterTrainingExample {
  std::string doc_id;
  std::string keyphrase;  // normalized
  bool label = false;
  NegativeKind negative_kind = NegativeKind::None;
};

struct SampleDiagnostics {
  std::size_t positives_using_fallback = 0;  // C(k_p) \ K_d was empty
  std::size_t soft_shortfall = 0;            // fewer soft negatives than requested
  std::size_t hard_shortfall = 0;            // hard slots backfilled with soft negatives

  SampleDiagnostics& operator+=(const SampleDiagnostics& o);
};

/// Soft-negative candidates of one positive: C(k_p) \ K_d, excluding anything
/// stem-equal to a golden keyphrase of the document.
std::vector<std::string> soft_candidates(const corpus::Document& doc, const CooccurrenceGraph& graph,
                                         const std::string& positive);

struct SampleResult {
  std::vector<FilterTrainingExample> examples;
  SampleDiagnostics diagnostics;
};

/// One positive per golden keyphrase, each followed by `ratio` negatives drawn
/// uniformly without replacement from C(k_p) \ K_d, topped up from K \ K_d.
SampleResult sample_soft(const corpus::Document& doc, const CooccurrenceGraph& graph, std::size_t ratio,
                         std::uint64_t seed);

/// Per positive: `hard` negatives taken in rank order from the generated
/// phrases not in K_d (each used once per document), and `soft` soft
/// negatives plus one extra for every missing hard negative.
SampleResult sample_mixed(const corpus::Document& doc, const CooccurrenceGraph& graph,
                          const aggregate::RankedPredictions& generated, std::size_t soft, std::size_t hard,
                          std::uint64_t seed);

SampleResult sample_soft_split(const corpus::CorpusSplit& split, const CooccurrenceGraph& graph, std::size_t ratio,
                               std::uint64_t seed, unsigned threads);
SampleResult sample_mixed_split(const corpus::CorpusSplit& split, const CooccurrenceGraph& graph,
                                const std::vector<aggregate::RankedPredictions>& generated, std::size_t soft,
                                std::size_t hard, std::uint64_t seed, unsigned threads);

enum class ExampleFormat { PairsTsv, PromptText };
ExampleFormat parse_example_format(std::string_view name);

/// Whitespace tokens of `text`, at most `budget` of them, single-space joined.
std::string truncate_tokens(const std::string& text, std::size_t budget);

/// "Keyphrase: <k> Document: <title>. <abstract> Relevant:" cut to `budget`
/// whitespace tokens by shortening the document part.
std::string prompt_input(const std::string& keyphrase, const corpus::Document& doc, std::size_t budget);

std::string render_filter_examples(const std::vector<FilterTrainingExample>& examples,
                                   const corpus::CorpusSplit& split, ExampleFormat format,
                                   std::size_t token_budget = 512);

struct GenerationOptions {
  bool sorted_variant = false;
  std::string delimiter = ";";
  std::string task_prefix = "Generate keyphrases:";
  std::size_t token_budget = 512;
};

struct GenTrainingExample {
  std::string doc_id;
  std::string input_text;
  std::string target_text;
  bool sorted_variant = false;
};

/// Target joins the golden keyphrases with "<delimiter> "; the sorted variant
/// puts present keyphrases first, keeping annotation order inside each group.
std::vector<GenTrainingExample> generation_examples(const corpus::CorpusSplit& split,
                                                    const GenerationOptions& options, unsigned threads = 1);
std::string render_generation_jsonl(const std::vector<GenTrainingExample>& examples);

}  // namespace kpkit::sampler
