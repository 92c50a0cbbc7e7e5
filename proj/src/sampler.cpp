#include "sampler.hpp"

#include <algorithm>
#include <json.hpp>
#include <numeric>
#include <unordered_set>

#include "error.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "textnorm.hpp"

namespace kpkit::sampler {

using NodeId = CooccurrenceGraph::NodeId;

std::optional<NodeId> CooccurrenceGraph::find(const std::string& normalized) const {
  auto it = index_.find(normalized);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<NodeId>* CooccurrenceGraph::with_stem(const std::string& stemmed) const {
  auto it = by_stem_.find(stemmed);
  return it == by_stem_.end() ? nullptr : &it->second;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

CooccurrenceGraph build_graph(const corpus::CorpusSplit& split) {
  if (split.documents.empty()) throw Error(ErrorCode::Empty, "empty split");
  CooccurrenceGraph g;

  std::vector<std::vector<std::string>> doc_phrases;
  doc_phrases.reserve(split.documents.size());
  for (const auto& doc : split.documents) {
    std::vector<std::string> phrases;
    for (const auto& k : doc.keyphrases) {
      std::string n = textnorm::normalize(k);
      if (!n.empty()) phrases.push_back(std::move(n));
    }
    g.nodes_.insert(g.nodes_.end(), phrases.begin(), phrases.end());
    doc_phrases.push_back(std::move(phrases));
  }
  std::sort(g.nodes_.begin(), g.nodes_.end());
  g.nodes_.erase(std::unique(g.nodes_.begin(), g.nodes_.end()), g.nodes_.end());

  g.stemmed_.reserve(g.nodes_.size());
  for (NodeId i = 0; i < g.nodes_.size(); ++i) {
    g.index_.emplace(g.nodes_[i], i);
    g.stemmed_.push_back(textnorm::stem_phrase(g.nodes_[i]));
    g.by_stem_[g.stemmed_.back()].push_back(i);
  }

  DisjointSets sets(g.nodes_.size());
  for (const auto& phrases : doc_phrases) {
    std::vector<NodeId> ids;
    for (const auto& p : phrases) ids.push_back(g.index_.at(p));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (std::size_t a = 0; a < ids.size(); ++a) {
      if (a > 0) sets.unite(ids[0], ids[a]);
      for (std::size_t b = a + 1; b < ids.size(); ++b) g.edges_.emplace_back(ids[a], ids[b]);
    }
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

  std::vector<std::uint32_t> label_of_root(g.nodes_.size(), UINT32_MAX);
  g.component_.resize(g.nodes_.size());
  for (NodeId i = 0; i < g.nodes_.size(); ++i) {
    std::size_t root = sets.find(i);
    if (label_of_root[root] == UINT32_MAX) {
      label_of_root[root] = static_cast<std::uint32_t>(g.members_.size());
      g.members_.emplace_back();
    }
    g.component_[i] = label_of_root[root];
    g.members_[label_of_root[root]].push_back(i);
  }
  return g;
}

const char* to_string(NegativeKind kind) noexcept {
  switch (kind) {
    case NegativeKind::Soft:
      return "soft";
    case NegativeKind::Hard:
      return "hard";
    case NegativeKind::None:
      break;
  }
  return "none";
}

SampleDiagnostics& SampleDiagnostics::operator+=(const SampleDiagnostics& o) {
  positives_using_fallback += o.positives_using_fallback;
  soft_shortfall += o.soft_shortfall;
  hard_shortfall += o.hard_shortfall;
  return *this;
}

namespace {

std::unordered_set<std::string> golden_stems(const corpus::Document& doc) {
  std::unordered_set<std::string> stems;
  for (const auto& k : doc.keyphrases) stems.insert(textnorm::normalize_and_stem(k));
  return stems;
}

// Sorted node ids whose stem is in `stems`.
std::vector<NodeId> nodes_with_stems(const CooccurrenceGraph& g, const std::unordered_set<std::string>& stems) {
  std::vector<NodeId> out;
  for (const auto& s : stems)
    if (const auto* ids = g.with_stem(s)) out.insert(out.end(), ids->begin(), ids->end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Draws min(count, base_size - excluded.size()) distinct positions of
// [0, base_size) that are not in `excluded` (sorted, unique), uniformly, with
// Floyd's algorithm over the ranks of the allowed positions.
std::vector<std::size_t> draw_excluding(std::size_t base_size, const std::vector<std::size_t>& excluded,
                                        std::size_t count, Rng& rng) {
  std::size_t allowed = base_size - excluded.size();
  count = std::min(count, allowed);
  std::vector<std::size_t> ranks;
  std::unordered_set<std::size_t> taken;
  for (std::size_t j = allowed - count; j < allowed; ++j) {
    std::size_t t = bounded_uniform(rng, j + 1);
    std::size_t pick = taken.count(t) ? j : t;
    taken.insert(pick);
    ranks.push_back(pick);
  }
  std::vector<std::size_t> positions;
  positions.reserve(ranks.size());
  for (std::size_t r : ranks) {
    std::size_t pos = r;
    for (std::size_t e : excluded) {
      if (e <= pos)
        ++pos;
      else
        break;
    }
    positions.push_back(pos);
  }
  return positions;
}

// Soft negatives for one positive: first from its component, then from all
// of K. `excluded` holds sorted node ids that may not be drawn.
std::vector<NodeId> draw_soft(const CooccurrenceGraph& g, NodeId positive, std::size_t need,
                              const std::vector<NodeId>& excluded, Rng& rng, SampleDiagnostics& diag) {
  const auto& members = g.members(g.component(positive));
  std::vector<std::size_t> member_excluded;
  for (NodeId e : excluded) {
    auto it = std::lower_bound(members.begin(), members.end(), e);
    if (it != members.end() && *it == e) member_excluded.push_back(static_cast<std::size_t>(it - members.begin()));
  }
  if (members.size() == member_excluded.size()) ++diag.positives_using_fallback;

  std::vector<NodeId> chosen;
  for (std::size_t pos : draw_excluding(members.size(), member_excluded, need, rng)) chosen.push_back(members[pos]);
  if (chosen.size() < need) {
    std::vector<std::size_t> all_excluded(excluded.begin(), excluded.end());
    all_excluded.insert(all_excluded.end(), chosen.begin(), chosen.end());
    std::sort(all_excluded.begin(), all_excluded.end());
    all_excluded.erase(std::unique(all_excluded.begin(), all_excluded.end()), all_excluded.end());
    for (std::size_t id : draw_excluding(g.nodes().size(), all_excluded, need - chosen.size(), rng))
      chosen.push_back(static_cast<NodeId>(id));
  }
  diag.soft_shortfall += need - chosen.size();
  return chosen;
}

NodeId require_node(const CooccurrenceGraph& g, const corpus::Document& doc, const std::string& normalized) {
  auto id = g.find(normalized);
  if (!id)
    throw Error(ErrorCode::InvalidArgument,
                "keyphrase '" + normalized + "' of document '" + doc.id + "' is not in the co-occurrence graph");
  return *id;
}

void require_negatives_exist(const CooccurrenceGraph& g, const corpus::Document& doc,
                             const std::vector<NodeId>& excluded) {
  if (g.nodes().size() == excluded.size())
    throw Error(ErrorCode::NoNegatives, "no negatives available for document '" + doc.id + "'");
}

}  // namespace

std::vector<std::string> soft_candidates(const corpus::Document& doc, const CooccurrenceGraph& graph,
                                         const std::string& positive) {
  NodeId node = require_node(graph, doc, textnorm::normalize(positive));
  auto excluded = nodes_with_stems(graph, golden_stems(doc));
  std::vector<std::string> out;
  for (NodeId m : graph.members(graph.component(node)))
    if (!std::binary_search(excluded.begin(), excluded.end(), m)) out.push_back(graph.nodes()[m]);
  return out;
}

SampleResult sample_soft(const corpus::Document& doc, const CooccurrenceGraph& graph, std::size_t ratio,
                         std::uint64_t seed) {
  if (ratio == 0) throw Error(ErrorCode::InvalidArgument, "ratio must be >= 1");
  SampleResult result;
  auto excluded = nodes_with_stems(graph, golden_stems(doc));
  require_negatives_exist(graph, doc, excluded);
  Rng rng(stream_seed(seed, fnv1a64(doc.id)));
  for (const auto& k : doc.keyphrases) {
    std::string positive = textnorm::normalize(k);
    NodeId node = require_node(graph, doc, positive);
    result.examples.push_back({doc.id, positive, true, NegativeKind::None});
    for (NodeId n : draw_soft(graph, node, ratio, excluded, rng, result.diagnostics))
      result.examples.push_back({doc.id, graph.nodes()[n], false, NegativeKind::Soft});
  }
  return result;
}

SampleResult sample_mixed(const corpus::Document& doc, const CooccurrenceGraph& graph,
                          const aggregate::RankedPredictions& generated, std::size_t soft, std::size_t hard,
                          std::uint64_t seed) {
  if (soft + hard == 0) throw Error(ErrorCode::InvalidArgument, "need at least one negative per positive");
  SampleResult result;
  auto stems = golden_stems(doc);
  auto excluded = nodes_with_stems(graph, stems);

  struct Hard {
    std::string phrase;
    std::string stem;
  };
  std::vector<Hard> hard_pool;
  std::unordered_set<std::string> hard_stems;
  for (const auto& k : generated.keyphrases) {
    std::string stem = textnorm::stem_phrase(k.phrase);
    if (stem.empty() || stems.count(stem) || !hard_stems.insert(stem).second) continue;
    hard_pool.push_back({k.phrase, std::move(stem)});
  }

  Rng rng(stream_seed(seed, fnv1a64(doc.id)));
  std::size_t cursor = 0;
  for (const auto& k : doc.keyphrases) {
    std::string positive = textnorm::normalize(k);
    NodeId node = require_node(graph, doc, positive);
    result.examples.push_back({doc.id, positive, true, NegativeKind::None});

    std::vector<const Hard*> taken;
    while (taken.size() < hard && cursor < hard_pool.size()) taken.push_back(&hard_pool[cursor++]);
    std::size_t backfill = hard - taken.size();
    result.diagnostics.hard_shortfall += backfill;

    std::size_t need = soft + backfill;
    if (need > 0) {
      std::vector<NodeId> local_excluded = excluded;
      for (const Hard* h : taken)
        if (const auto* ids = graph.with_stem(h->stem)) local_excluded.insert(local_excluded.end(), ids->begin(), ids->end());
      std::sort(local_excluded.begin(), local_excluded.end());
      local_excluded.erase(std::unique(local_excluded.begin(), local_excluded.end()), local_excluded.end());
      require_negatives_exist(graph, doc, excluded);
      for (NodeId n : draw_soft(graph, node, need, local_excluded, rng, result.diagnostics))
        result.examples.push_back({doc.id, graph.nodes()[n], false, NegativeKind::Soft});
    }
    for (const Hard* h : taken) result.examples.push_back({doc.id, h->phrase, false, NegativeKind::Hard});
  }
  return result;
}

namespace {

template <typename PerDoc>
SampleResult sample_split(const corpus::CorpusSplit& split, unsigned threads, PerDoc&& per_doc) {
  std::vector<SampleResult> parts(split.documents.size());
  parallel_for(split.documents.size(), threads, [&](std::size_t i) { parts[i] = per_doc(split.documents[i]); });
  SampleResult out;
  for (auto& p : parts) {
    out.examples.insert(out.examples.end(), std::make_move_iterator(p.examples.begin()),
                        std::make_move_iterator(p.examples.end()));
    out.diagnostics += p.diagnostics;
  }
  return out;
}

}  // namespace

SampleResult sample_soft_split(const corpus::CorpusSplit& split, const CooccurrenceGraph& graph, std::size_t ratio,
                               std::uint64_t seed, unsigned threads) {
  return sample_split(split, threads,
                      [&](const corpus::Document& doc) { return sample_soft(doc, graph, ratio, seed); });
}

SampleResult sample_mixed_split(const corpus::CorpusSplit& split, const CooccurrenceGraph& graph,
                                const std::vector<aggregate::RankedPredictions>& generated, std::size_t soft,
                                std::size_t hard, std::uint64_t seed, unsigned threads) {
  std::unordered_map<std::string, const aggregate::RankedPredictions*> by_id;
  for (const auto& g : generated) by_id.emplace(g.doc_id, &g);
  for (const auto& doc : split.documents)
    if (!by_id.count(doc.id))
      throw Error(ErrorCode::IdMismatch, "no generated keyphrases for document '" + doc.id + "'");
  return sample_split(split, threads, [&](const corpus::Document& doc) {
    return sample_mixed(doc, graph, *by_id.at(doc.id), soft, hard, seed);
  });
}

ExampleFormat parse_example_format(std::string_view name) {
  if (name == "pairs-tsv") return ExampleFormat::PairsTsv;
  if (name == "prompt-text") return ExampleFormat::PromptText;
  throw Error(ErrorCode::InvalidArgument, "unknown example format '" + std::string(name) + "'");
}

namespace {

std::string document_text(const corpus::Document& doc) {
  std::string title = truncate_tokens(doc.title, SIZE_MAX);
  std::string abstract = truncate_tokens(doc.abstract, SIZE_MAX);
  if (abstract.empty()) return title.empty() ? std::string() : title + ".";
  return title + ". " + abstract;
}

}  // namespace

std::string truncate_tokens(const std::string& text, std::size_t budget) {
  std::string out;
  std::size_t used = 0;
  for (std::string_view tok : textnorm::split_whitespace(text)) {
    if (used == budget) break;
    if (!out.empty()) out.push_back(' ');
    out.append(tok);
    ++used;
  }
  return out;
}

std::string prompt_input(const std::string& keyphrase, const corpus::Document& doc, std::size_t budget) {
  std::size_t fixed = 3 + textnorm::split_whitespace(keyphrase).size();
  std::size_t doc_budget = budget > fixed ? budget - fixed : 0;
  std::string body = truncate_tokens(document_text(doc), doc_budget);
  std::string out = "Keyphrase: " + keyphrase + " Document:";
  if (!body.empty()) out += " " + body;
  out += " Relevant:";
  return out;
}

std::string render_filter_examples(const std::vector<FilterTrainingExample>& examples,
                                   const corpus::CorpusSplit& split, ExampleFormat format,
                                   std::size_t token_budget) {
  std::unordered_map<std::string, const corpus::Document*> docs;
  for (const auto& d : split.documents) docs.emplace(d.id, &d);
  std::string out;
  for (const auto& ex : examples) {
    const char* label = ex.label ? "true" : "false";
    if (format == ExampleFormat::PairsTsv) {
      out += ex.doc_id + "\t" + ex.keyphrase + "\t" + label + "\n";
    } else {
      auto it = docs.find(ex.doc_id);
      if (it == docs.end()) throw Error(ErrorCode::IdMismatch, "unknown document '" + ex.doc_id + "'");
      out += prompt_input(ex.keyphrase, *it->second, token_budget) + "\t" + label + "\n";
    }
  }
  return out;
}

std::vector<GenTrainingExample> generation_examples(const corpus::CorpusSplit& split,
                                                    const GenerationOptions& options, unsigned threads) {
  if (split.documents.empty()) throw Error(ErrorCode::Empty, "empty split");
  std::vector<GenTrainingExample> out(split.documents.size());
  std::string joiner = options.delimiter + " ";
  parallel_for(split.documents.size(), threads, [&](std::size_t i) {
    const auto& doc = split.documents[i];
    std::vector<std::string> order;
    if (options.sorted_variant) {
      auto parts = corpus::partition_present_absent(doc);
      order = std::move(parts.present);
      order.insert(order.end(), parts.absent.begin(), parts.absent.end());
    } else {
      order = doc.keyphrases;
    }
    GenTrainingExample& ex = out[i];
    ex.doc_id = doc.id;
    ex.sorted_variant = options.sorted_variant;
    ex.input_text = truncate_tokens(options.task_prefix + " " + document_text(doc), options.token_budget);
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k > 0) ex.target_text += joiner;
      ex.target_text += order[k];
    }
  });
  return out;
}

std::string render_generation_jsonl(const std::vector<GenTrainingExample>& examples) {
  std::string out;
  for (const auto& ex : examples) {
    nlohmann::ordered_json j;
    j["id"] = ex.doc_id;
    j["input"] = ex.input_text;
    j["target"] = ex.target_text;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace kpkit::sampler
