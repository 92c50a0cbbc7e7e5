#include <kpkit/kpkit.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aggregate.hpp"
#include "corpus.hpp"
#include "digest.hpp"
#include "error.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "sampler.hpp"
#include "significance.hpp"
#include "textnorm.hpp"

using namespace kpkit;

struct kpk_string {
  std::string value;
};
struct kpk_corpus {
  corpus::CorpusSplit split;
};
struct kpk_predictions {
  std::vector<aggregate::PredictionRecord> records;
};
struct kpk_rankings {
  std::vector<aggregate::RankedPredictions> rankings;
};
struct kpk_verdicts {
  aggregate::VerdictTable table;
};
struct kpk_eval {
  report::EvalResult result;
};
struct kpk_scores {
  significance::ScoreMatrix matrix;
};
struct kpk_hsd {
  significance::HsdResult result;
};
struct kpk_graph {
  sampler::CooccurrenceGraph graph;
};
struct kpk_examples {
  sampler::SampleResult result;
};

namespace {

thread_local std::string last_error;

kpk_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return KPK_ERR_INVALID_ARGUMENT;
    case ErrorCode::Io:
      return KPK_ERR_IO;
    case ErrorCode::Parse:
      return KPK_ERR_PARSE;
    case ErrorCode::Empty:
      return KPK_ERR_EMPTY;
    case ErrorCode::NoNegatives:
      return KPK_ERR_NO_NEGATIVES;
    case ErrorCode::IdMismatch:
      return KPK_ERR_ID_MISMATCH;
    case ErrorCode::Internal:
      break;
  }
  return KPK_ERR_INTERNAL;
}

template <typename Fn>
kpk_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return KPK_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return KPK_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return KPK_ERR_INTERNAL;
  }
}

void require(bool condition, const char* what) {
  if (!condition) throw Error(ErrorCode::InvalidArgument, what);
}

template <typename T>
void publish(std::unique_ptr<T> value, T** out) {
  *out = value.release();
}

void publish_string(std::string s, kpk_string** out) {
  publish(std::make_unique<kpk_string>(kpk_string{std::move(s)}), out);
}

report::Format to_format(kpk_format f) {
  switch (f) {
    case KPK_FORMAT_TSV:
      return report::Format::Tsv;
    case KPK_FORMAT_JSON:
      return report::Format::Json;
    case KPK_FORMAT_TEXT:
      return report::Format::Text;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown format");
}

std::vector<std::string> strings(const char* const* items, size_t n) {
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) {
    require(items[i] != nullptr, "null string in list");
    out.emplace_back(items[i]);
  }
  return out;
}

}  // namespace

extern "C" {

const char* kpk_version(void) { return KPKIT_VERSION; }

const char* kpk_status_name(kpk_status status) {
  switch (status) {
    case KPK_OK:
      return "ok";
    case KPK_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case KPK_ERR_IO:
      return "io";
    case KPK_ERR_PARSE:
      return "parse";
    case KPK_ERR_EMPTY:
      return "empty";
    case KPK_ERR_NO_NEGATIVES:
      return "no_negatives";
    case KPK_ERR_ID_MISMATCH:
      return "id_mismatch";
    case KPK_ERR_INTERNAL:
      break;
  }
  return "internal";
}

const char* kpk_last_error(void) { return last_error.c_str(); }

const char* kpk_string_data(const kpk_string* s) { return s ? s->value.c_str() : ""; }
size_t kpk_string_size(const kpk_string* s) { return s ? s->value.size() : 0; }
void kpk_string_free(kpk_string* s) { delete s; }

kpk_status kpk_file_sha256(const char* path, kpk_string** out) {
  return guarded([&] {
    require(path && out, "null argument");
    publish_string(sha256_file(path), out);
  });
}

kpk_status kpk_normalize(const char* text, kpk_string** out) {
  return guarded([&] {
    require(text && out, "null argument");
    publish_string(textnorm::normalize(text), out);
  });
}

kpk_status kpk_stem_phrase(const char* normalized, kpk_string** out) {
  return guarded([&] {
    require(normalized && out, "null argument");
    publish_string(textnorm::stem_phrase(normalized), out);
  });
}

/* corpus */

kpk_status kpk_corpus_load(const char* path, size_t malformed_tolerance, kpk_corpus** out) {
  return guarded([&] {
    require(path && out, "null argument");
    corpus::LoadOptions options;
    options.malformed_tolerance = malformed_tolerance;
    publish(std::make_unique<kpk_corpus>(kpk_corpus{corpus::load_corpus(path, options)}), out);
  });
}

void kpk_corpus_free(kpk_corpus* c) { delete c; }
size_t kpk_corpus_size(const kpk_corpus* c) { return c ? c->split.documents.size() : 0; }
size_t kpk_corpus_duplicate_keyphrases(const kpk_corpus* c) {
  return c ? c->split.diagnostics.duplicate_keyphrases : 0;
}
size_t kpk_corpus_skipped_lines(const kpk_corpus* c) { return c ? c->split.diagnostics.skipped_lines.size() : 0; }

kpk_status kpk_corpus_stats_compute(const kpk_corpus* c, unsigned threads, kpk_corpus_stats* out) {
  return guarded([&] {
    require(c && out, "null argument");
    auto s = corpus::corpus_stats(c->split, threads);
    *out = {s.doc_count, s.keyphrase_count, s.absent_count, s.mean_keyphrases_per_doc, s.absent_ratio};
  });
}

kpk_status kpk_corpus_stats_render(const kpk_corpus_stats* stats, const char* dataset, kpk_format format,
                                   kpk_string** out) {
  return guarded([&] {
    require(stats && out, "null argument");
    corpus::CorpusStats s{stats->doc_count, stats->keyphrase_count, stats->absent_count,
                          stats->mean_keyphrases_per_doc, stats->absent_ratio};
    publish_string(report::render_stats(dataset ? dataset : "dataset", s, to_format(format)), out);
  });
}

/* predictions */

kpk_status kpk_predictions_load(const char* path, const char* delimiter, kpk_predictions** out) {
  return guarded([&] {
    require(path && out, "null argument");
    auto records = aggregate::load_predictions(path, delimiter ? delimiter : ";");
    publish(std::make_unique<kpk_predictions>(kpk_predictions{std::move(records)}), out);
  });
}

void kpk_predictions_free(kpk_predictions* p) { delete p; }
size_t kpk_predictions_size(const kpk_predictions* p) { return p ? p->records.size() : 0; }

kpk_status kpk_rankings_vote(const kpk_predictions* p, unsigned threads, kpk_rankings** out) {
  return guarded([&] {
    require(p && out, "null argument");
    auto r = std::make_unique<kpk_rankings>();
    r->rankings.resize(p->records.size());
    parallel_for(p->records.size(), threads,
                 [&](size_t i) { r->rankings[i] = aggregate::majority_vote(p->records[i]); });
    publish(std::move(r), out);
  });
}

void kpk_rankings_free(kpk_rankings* r) { delete r; }
size_t kpk_rankings_size(const kpk_rankings* r) { return r ? r->rankings.size() : 0; }

kpk_status kpk_rankings_render(const kpk_rankings* r, kpk_string** out) {
  return guarded([&] {
    require(r && out, "null argument");
    publish_string(aggregate::render_rankings_jsonl(r->rankings), out);
  });
}

kpk_status kpk_verdicts_load(const char* path, const double* threshold, kpk_verdicts** out) {
  return guarded([&] {
    require(path && out, "null argument");
    std::optional<double> t;
    if (threshold) t = *threshold;
    publish(std::make_unique<kpk_verdicts>(kpk_verdicts{aggregate::load_verdicts(path, t)}), out);
  });
}

void kpk_verdicts_free(kpk_verdicts* v) { delete v; }

kpk_status kpk_rankings_filter(const kpk_rankings* r, const kpk_verdicts* v, kpk_missing_policy policy,
                               kpk_rankings** out, size_t* removed, size_t* missing) {
  return guarded([&] {
    require(r && v && out, "null argument");
    auto p = policy == KPK_MISSING_DROP ? aggregate::MissingPolicy::Drop : aggregate::MissingPolicy::Keep;
    auto filtered = std::make_unique<kpk_rankings>();
    size_t total_removed = 0, total_missing = 0;
    for (const auto& ranking : r->rankings) {
      auto outcome = aggregate::apply_filter(ranking, v->table, p);
      total_removed += outcome.removed;
      total_missing += outcome.missing;
      filtered->rankings.push_back(std::move(outcome.predictions));
    }
    if (removed) *removed = total_removed;
    if (missing) *missing = total_missing;
    publish(std::move(filtered), out);
  });
}

/* evaluation */

void kpk_eval_options_init(kpk_eval_options* o) {
  if (!o) return;
  *o = kpk_eval_options{};
  o->dataset = "dataset";
}

kpk_status kpk_eval_run(const kpk_corpus* c, const kpk_predictions* const* systems, const char* const* names,
                        size_t n_systems, const kpk_eval_options* o, kpk_eval** out) {
  return guarded([&] {
    require(c && out && (n_systems == 0 || (systems && names)), "null argument");
    report::EvalOptions options;
    if (o) {
      if (o->dataset) options.dataset = o->dataset;
      if (o->cutoffs) {
        options.cutoffs.clear();
        for (const auto& s : strings(o->cutoffs, o->n_cutoffs)) options.cutoffs.push_back(matcher::Cutoff::parse(s));
      }
      if (o->matchers) {
        options.matchers.clear();
        for (const auto& s : strings(o->matchers, o->n_matchers))
          options.matchers.push_back(matcher::parse_matcher_kind(s));
      }
      if (o->subsets) {
        options.subsets.clear();
        for (const auto& s : strings(o->subsets, o->n_subsets)) options.subsets.push_back(metrics::parse_subset(s));
      }
      options.max_unknown_ids = o->max_unknown_ids;
      options.keep_match_reports = o->keep_match_reports != 0;
      options.threads = o->threads;
    }
    std::vector<report::SystemPredictions> sys;
    for (size_t i = 0; i < n_systems; ++i) {
      require(systems[i] && names[i], "null system");
      sys.push_back({names[i], systems[i]->records});
    }
    publish(std::make_unique<kpk_eval>(kpk_eval{report::evaluate(c->split, sys, options)}), out);
  });
}

void kpk_eval_free(kpk_eval* e) { delete e; }

kpk_status kpk_eval_f1(const kpk_eval* e, size_t system, const char* subset, const char* matcher_name,
                       const char* cutoff, double* f1) {
  return guarded([&] {
    require(e && subset && matcher_name && cutoff && f1, "null argument");
    require(system < e->result.systems.size(), "system index out of range");
    auto s = metrics::parse_subset(subset);
    auto m = matcher::parse_matcher_kind(matcher_name);
    auto k = matcher::Cutoff::parse(cutoff);
    for (const auto& cell : e->result.systems[system].cells) {
      if (cell.subset != s || cell.matcher != m || !(cell.cutoff == k)) continue;
      if (!cell.summary) throw Error(ErrorCode::Empty, "every document was excluded from this cell");
      *f1 = cell.summary->f1;
      return;
    }
    throw Error(ErrorCode::InvalidArgument, "cell was not evaluated");
  });
}

kpk_status kpk_eval_render(const kpk_eval* e, kpk_format format, kpk_string** out) {
  return guarded([&] {
    require(e && out, "null argument");
    publish_string(format == KPK_FORMAT_JSON ? report::render_eval_json(e->result) : report::render_eval_tsv(e->result),
                   out);
  });
}

kpk_status kpk_eval_render_scores(const kpk_eval* e, kpk_string** out) {
  return guarded([&] {
    require(e && out, "null argument");
    publish_string(report::render_score_dump(e->result), out);
  });
}

kpk_status kpk_eval_render_matches(const kpk_eval* e, kpk_string** out) {
  return guarded([&] {
    require(e && out, "null argument");
    publish_string(report::render_match_dump(e->result), out);
  });
}

namespace {
kpk_confusion to_c(const report::BinaryEvalReport& r) {
  const auto& c = r.result.confusion;
  return {c.tp, c.fp, c.tn, c.fn, r.result.accuracy, r.missing_verdicts};
}
}  // namespace

kpk_status kpk_binary_eval(const int* labels, const int* predicted, size_t n, kpk_confusion* out) {
  return guarded([&] {
    require(out && (n == 0 || (labels && predicted)), "null argument");
    std::vector<metrics::Verdict> v;
    v.reserve(n);
    for (size_t i = 0; i < n; ++i) v.push_back({labels[i] != 0, predicted[i] != 0});
    *out = to_c(report::BinaryEvalReport{metrics::binary_eval(v), 0});
  });
}

kpk_status kpk_binary_eval_files(const char* examples_path, const kpk_verdicts* v, kpk_confusion* out) {
  return guarded([&] {
    require(examples_path && v && out, "null argument");
    *out = to_c(report::binary_eval(report::load_labelled_pairs(examples_path), v->table));
  });
}

kpk_status kpk_confusion_render(const kpk_confusion* c, kpk_format format, kpk_string** out) {
  return guarded([&] {
    require(c && out, "null argument");
    report::BinaryEvalReport r;
    r.result.confusion = {c->tp, c->fp, c->tn, c->fn};
    r.result.accuracy = c->accuracy;
    r.missing_verdicts = c->missing_verdicts;
    publish_string(report::render_binary_eval(r, to_format(format)), out);
  });
}

/* significance */

kpk_status kpk_scores_create(size_t n_docs, size_t n_systems, const double* row_major, const char* const* doc_ids,
                             const char* const* systems, kpk_scores** out) {
  return guarded([&] {
    require(row_major && doc_ids && systems && out, "null argument");
    significance::ScoreMatrix m;
    m.docs = strings(doc_ids, n_docs);
    m.systems = strings(systems, n_systems);
    m.scores.assign(row_major, row_major + n_docs * n_systems);
    significance::validate(m);
    publish(std::make_unique<kpk_scores>(kpk_scores{std::move(m)}), out);
  });
}

kpk_status kpk_scores_load(const char* const* paths, size_t n_paths, const char* subset, const char* matcher_name,
                           const char* cutoff, kpk_scores** out) {
  return guarded([&] {
    require(paths && out, "null argument");
    std::vector<std::filesystem::path> files;
    for (const auto& p : strings(paths, n_paths)) files.emplace_back(p);
    significance::DumpSelector sel;
    if (subset) sel.subset = subset;
    if (matcher_name) sel.matcher = matcher_name;
    if (cutoff) sel.cutoff = cutoff;
    publish(std::make_unique<kpk_scores>(kpk_scores{significance::load_score_matrix(files, sel)}), out);
  });
}

void kpk_scores_free(kpk_scores* s) { delete s; }

void kpk_hsd_options_init(kpk_hsd_options* o) {
  if (!o) return;
  significance::HsdOptions d;
  *o = {d.permutations, d.alpha, d.seed, d.threads};
}

kpk_status kpk_hsd_run(const kpk_scores* s, const kpk_hsd_options* o, kpk_hsd** out) {
  return guarded([&] {
    require(s && o && out, "null argument");
    significance::HsdOptions options{o->permutations, o->alpha, o->seed, o->threads};
    publish(std::make_unique<kpk_hsd>(kpk_hsd{significance::tukey_hsd(s->matrix, options)}), out);
  });
}

void kpk_hsd_free(kpk_hsd* h) { delete h; }
size_t kpk_hsd_system_count(const kpk_hsd* h) { return h ? h->result.systems.size() : 0; }
double kpk_hsd_p_value(const kpk_hsd* h, size_t i, size_t j) {
  if (!h || i >= h->result.systems.size() || j >= h->result.systems.size()) return -1.0;
  return h->result.p(i, j);
}
int kpk_hsd_degenerate(const kpk_hsd* h) { return h && h->result.degenerate ? 1 : 0; }

kpk_status kpk_hsd_render(const kpk_hsd* h, kpk_format format, kpk_string** out) {
  return guarded([&] {
    require(h && out, "null argument");
    publish_string(format == KPK_FORMAT_JSON ? significance::render_json(h->result)
                                             : significance::render_pvalues_tsv(h->result),
                   out);
  });
}

kpk_status kpk_hsd_render_letters(const kpk_hsd* h, kpk_string** out) {
  return guarded([&] {
    require(h && out, "null argument");
    publish_string(significance::render_letters_tsv(h->result), out);
  });
}

/* training data */

kpk_status kpk_graph_build(const kpk_corpus* c, kpk_graph** out) {
  return guarded([&] {
    require(c && out, "null argument");
    publish(std::make_unique<kpk_graph>(kpk_graph{sampler::build_graph(c->split)}), out);
  });
}

void kpk_graph_free(kpk_graph* g) { delete g; }
size_t kpk_graph_node_count(const kpk_graph* g) { return g ? g->graph.nodes().size() : 0; }
size_t kpk_graph_edge_count(const kpk_graph* g) { return g ? g->graph.edges().size() : 0; }
size_t kpk_graph_component_count(const kpk_graph* g) { return g ? g->graph.component_count() : 0; }

kpk_status kpk_graph_soft_candidates(const kpk_graph* g, const kpk_corpus* c, const char* doc_id,
                                     const char* keyphrase, kpk_string** out) {
  return guarded([&] {
    require(g && c && doc_id && keyphrase && out, "null argument");
    for (const auto& doc : c->split.documents) {
      if (doc.id != doc_id) continue;
      std::string joined;
      for (const auto& k : sampler::soft_candidates(doc, g->graph, keyphrase)) joined += k + "\n";
      publish_string(std::move(joined), out);
      return;
    }
    throw Error(ErrorCode::IdMismatch, std::string("unknown document '") + doc_id + "'");
  });
}

kpk_status kpk_sample_soft(const kpk_corpus* c, const kpk_graph* g, size_t ratio, uint64_t seed, unsigned threads,
                           kpk_examples** out) {
  return guarded([&] {
    require(c && g && out, "null argument");
    publish(std::make_unique<kpk_examples>(
                kpk_examples{sampler::sample_soft_split(c->split, g->graph, ratio, seed, threads)}),
            out);
  });
}

kpk_status kpk_sample_mixed(const kpk_corpus* c, const kpk_graph* g, const kpk_rankings* generated, size_t soft,
                            size_t hard, uint64_t seed, unsigned threads, kpk_examples** out) {
  return guarded([&] {
    require(c && g && generated && out, "null argument");
    publish(std::make_unique<kpk_examples>(kpk_examples{
                sampler::sample_mixed_split(c->split, g->graph, generated->rankings, soft, hard, seed, threads)}),
            out);
  });
}

void kpk_examples_free(kpk_examples* e) { delete e; }
size_t kpk_examples_size(const kpk_examples* e) { return e ? e->result.examples.size() : 0; }

void kpk_examples_diagnostics(const kpk_examples* e, kpk_sample_diagnostics* out) {
  if (!e || !out) return;
  const auto& d = e->result.diagnostics;
  *out = {d.positives_using_fallback, d.soft_shortfall, d.hard_shortfall};
}

kpk_status kpk_examples_render(const kpk_examples* e, const kpk_corpus* c, kpk_example_format format,
                               size_t token_budget, kpk_string** out) {
  return guarded([&] {
    require(e && c && out, "null argument");
    require(!e->result.examples.empty(), "no examples to write");
    auto f = format == KPK_EXAMPLES_PROMPT_TEXT ? sampler::ExampleFormat::PromptText : sampler::ExampleFormat::PairsTsv;
    publish_string(sampler::render_filter_examples(e->result.examples, c->split, f, token_budget), out);
  });
}

void kpk_generation_options_init(kpk_generation_options* o) {
  if (!o) return;
  sampler::GenerationOptions d;
  *o = {0, ";", "Generate keyphrases:", d.token_budget, 0};
}

kpk_status kpk_generation_examples_render(const kpk_corpus* c, const kpk_generation_options* o, kpk_string** out) {
  return guarded([&] {
    require(c && out, "null argument");
    sampler::GenerationOptions options;
    unsigned threads = 0;
    if (o) {
      options.sorted_variant = o->sorted_variant != 0;
      if (o->delimiter) options.delimiter = o->delimiter;
      if (o->task_prefix) options.task_prefix = o->task_prefix;
      options.token_budget = o->token_budget;
      threads = o->threads;
    }
    publish_string(sampler::render_generation_jsonl(sampler::generation_examples(c->split, options, threads)), out);
  });
}

}  // extern "C"
