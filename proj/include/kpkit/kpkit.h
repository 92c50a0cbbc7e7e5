/*
 * kpkit: keyphrase generation experiment toolkit, C interface.
 *
 * Every object is an opaque handle created by a kpk_*_load / _build / _run
 * call and released with the matching kpk_*_free (free functions accept
 * NULL). Functions that can fail return a kpk_status; on failure the output
 * handle is left untouched and kpk_last_error() describes the problem.
 * Strings produced by the library are kpk_string handles.
 *
 * Handles are immutable after creation and may be shared between threads.
 */
#ifndef KPKIT_KPKIT_H
#define KPKIT_KPKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(KPKIT_BUILDING_LIBRARY)
#define KPK_API __attribute__((visibility("default")))
#else
#define KPK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kpk_status {
  KPK_OK = 0,
  KPK_ERR_INVALID_ARGUMENT = 1,
  KPK_ERR_IO = 2,
  KPK_ERR_PARSE = 3,
  KPK_ERR_EMPTY = 4,
  KPK_ERR_NO_NEGATIVES = 5,
  KPK_ERR_ID_MISMATCH = 6,
  KPK_ERR_INTERNAL = 7
} kpk_status;

typedef enum kpk_format { KPK_FORMAT_TSV = 0, KPK_FORMAT_JSON = 1, KPK_FORMAT_TEXT = 2 } kpk_format;

typedef struct kpk_string kpk_string;
typedef struct kpk_corpus kpk_corpus;
typedef struct kpk_predictions kpk_predictions;
typedef struct kpk_rankings kpk_rankings;
typedef struct kpk_verdicts kpk_verdicts;
typedef struct kpk_eval kpk_eval;
typedef struct kpk_scores kpk_scores;
typedef struct kpk_hsd kpk_hsd;
typedef struct kpk_graph kpk_graph;
typedef struct kpk_examples kpk_examples;

KPK_API const char* kpk_version(void);
KPK_API const char* kpk_status_name(kpk_status status);
/* Message of the last failure on the calling thread ("" if none). */
KPK_API const char* kpk_last_error(void);

KPK_API const char* kpk_string_data(const kpk_string* s);
KPK_API size_t kpk_string_size(const kpk_string* s);
KPK_API void kpk_string_free(kpk_string* s);

KPK_API kpk_status kpk_file_sha256(const char* path, kpk_string** out);

/* ---- text normalization ------------------------------------------------ */

KPK_API kpk_status kpk_normalize(const char* text, kpk_string** out);
KPK_API kpk_status kpk_stem_phrase(const char* normalized, kpk_string** out);

/* ---- corpus ------------------------------------------------------------ */

/* JSON-lines corpus: {"id", "title", "abstract", "keyphrases": [...]}. */
KPK_API kpk_status kpk_corpus_load(const char* path, size_t malformed_tolerance, kpk_corpus** out);
KPK_API void kpk_corpus_free(kpk_corpus* corpus);
KPK_API size_t kpk_corpus_size(const kpk_corpus* corpus);
KPK_API size_t kpk_corpus_duplicate_keyphrases(const kpk_corpus* corpus);
KPK_API size_t kpk_corpus_skipped_lines(const kpk_corpus* corpus);

typedef struct kpk_corpus_stats {
  size_t doc_count;
  size_t keyphrase_count;
  size_t absent_count;
  double mean_keyphrases_per_doc;
  double absent_ratio;
} kpk_corpus_stats;

KPK_API kpk_status kpk_corpus_stats_compute(const kpk_corpus* corpus, unsigned threads, kpk_corpus_stats* out);
KPK_API kpk_status kpk_corpus_stats_render(const kpk_corpus_stats* stats, const char* dataset, kpk_format format,
                                           kpk_string** out);

/* ---- predictions, voting, filtering ------------------------------------ */

/* {"id", "sequences": [[...], ...]} or {"id", "keyphrases": [...]}; string
 * sequences are split on `delimiter` (NULL: ";"). */
KPK_API kpk_status kpk_predictions_load(const char* path, const char* delimiter, kpk_predictions** out);
KPK_API void kpk_predictions_free(kpk_predictions* predictions);
KPK_API size_t kpk_predictions_size(const kpk_predictions* predictions);

/* Majority vote over each record's sequences. */
KPK_API kpk_status kpk_rankings_vote(const kpk_predictions* predictions, unsigned threads, kpk_rankings** out);
KPK_API void kpk_rankings_free(kpk_rankings* rankings);
KPK_API size_t kpk_rankings_size(const kpk_rankings* rankings);
/* JSON-lines: {"id", "keyphrases": [...], "scores": [...]} */
KPK_API kpk_status kpk_rankings_render(const kpk_rankings* rankings, kpk_string** out);

/* {"id", "keyphrase", "relevant"} or {"id", "keyphrase", "score"}; scored
 * verdicts need a non-NULL threshold. */
KPK_API kpk_status kpk_verdicts_load(const char* path, const double* threshold, kpk_verdicts** out);
KPK_API void kpk_verdicts_free(kpk_verdicts* verdicts);

typedef enum kpk_missing_policy { KPK_MISSING_KEEP = 0, KPK_MISSING_DROP = 1 } kpk_missing_policy;

/* removed / missing may be NULL. */
KPK_API kpk_status kpk_rankings_filter(const kpk_rankings* rankings, const kpk_verdicts* verdicts,
                                       kpk_missing_policy policy, kpk_rankings** out, size_t* removed,
                                       size_t* missing);

/* ---- evaluation -------------------------------------------------------- */

typedef struct kpk_eval_options {
  const char* dataset;          /* column prefix, default "dataset" */
  const char* const* cutoffs;   /* "5", "O", "all"; NULL: {"5", "O"} */
  size_t n_cutoffs;
  const char* const* matchers;  /* "exact", "partial"; NULL: both */
  size_t n_matchers;
  const char* const* subsets;   /* "present", "absent", "all"; NULL: all three */
  size_t n_subsets;
  size_t max_unknown_ids;
  int keep_match_reports;
  unsigned threads;             /* 0: available parallelism */
} kpk_eval_options;

KPK_API void kpk_eval_options_init(kpk_eval_options* options);
KPK_API kpk_status kpk_eval_run(const kpk_corpus* corpus, const kpk_predictions* const* systems,
                                const char* const* names, size_t n_systems, const kpk_eval_options* options,
                                kpk_eval** out);
KPK_API void kpk_eval_free(kpk_eval* eval);
/* Macro-averaged F1 of one system and cell; KPK_ERR_EMPTY if every document
 * was excluded from the cell. */
KPK_API kpk_status kpk_eval_f1(const kpk_eval* eval, size_t system, const char* subset, const char* matcher,
                               const char* cutoff, double* f1);
KPK_API kpk_status kpk_eval_render(const kpk_eval* eval, kpk_format format, kpk_string** out);
/* Per-document long TSV (input for kpk_scores_load). */
KPK_API kpk_status kpk_eval_render_scores(const kpk_eval* eval, kpk_string** out);
/* Per-document match reports as JSON-lines (needs keep_match_reports). */
KPK_API kpk_status kpk_eval_render_matches(const kpk_eval* eval, kpk_string** out);

typedef struct kpk_confusion {
  size_t tp, fp, tn, fn;
  double accuracy;
  size_t missing_verdicts;
} kpk_confusion;

KPK_API kpk_status kpk_binary_eval(const int* labels, const int* predicted, size_t n, kpk_confusion* out);
/* Labelled pairs-tsv file joined with a verdict table. */
KPK_API kpk_status kpk_binary_eval_files(const char* examples_path, const kpk_verdicts* verdicts,
                                         kpk_confusion* out);
KPK_API kpk_status kpk_confusion_render(const kpk_confusion* confusion, kpk_format format, kpk_string** out);

/* ---- significance ------------------------------------------------------ */

KPK_API kpk_status kpk_scores_create(size_t n_docs, size_t n_systems, const double* row_major,
                                     const char* const* doc_ids, const char* const* systems, kpk_scores** out);
/* Wide TSV, JSON, or one or more per-document dumps filtered by
 * subset/matcher/cutoff (NULL: "all", "exact", "5"). */
KPK_API kpk_status kpk_scores_load(const char* const* paths, size_t n_paths, const char* subset,
                                   const char* matcher, const char* cutoff, kpk_scores** out);
KPK_API void kpk_scores_free(kpk_scores* scores);

typedef struct kpk_hsd_options {
  uint64_t permutations;
  double alpha;
  uint64_t seed;
  unsigned threads;
} kpk_hsd_options;

KPK_API void kpk_hsd_options_init(kpk_hsd_options* options);
KPK_API kpk_status kpk_hsd_run(const kpk_scores* scores, const kpk_hsd_options* options, kpk_hsd** out);
KPK_API void kpk_hsd_free(kpk_hsd* hsd);
KPK_API size_t kpk_hsd_system_count(const kpk_hsd* hsd);
KPK_API double kpk_hsd_p_value(const kpk_hsd* hsd, size_t i, size_t j);
KPK_API int kpk_hsd_degenerate(const kpk_hsd* hsd);
/* TSV: pairwise p-value matrix; JSON: systems, letters and pairs. */
KPK_API kpk_status kpk_hsd_render(const kpk_hsd* hsd, kpk_format format, kpk_string** out);
KPK_API kpk_status kpk_hsd_render_letters(const kpk_hsd* hsd, kpk_string** out);

/* ---- training data ----------------------------------------------------- */

KPK_API kpk_status kpk_graph_build(const kpk_corpus* corpus, kpk_graph** out);
KPK_API void kpk_graph_free(kpk_graph* graph);
KPK_API size_t kpk_graph_node_count(const kpk_graph* graph);
KPK_API size_t kpk_graph_edge_count(const kpk_graph* graph);
KPK_API size_t kpk_graph_component_count(const kpk_graph* graph);
/* Newline-separated soft-negative candidates of `keyphrase` in document
 * `doc_id`: its component minus the document's keyphrases. */
KPK_API kpk_status kpk_graph_soft_candidates(const kpk_graph* graph, const kpk_corpus* corpus, const char* doc_id,
                                             const char* keyphrase, kpk_string** out);

KPK_API kpk_status kpk_sample_soft(const kpk_corpus* corpus, const kpk_graph* graph, size_t ratio, uint64_t seed,
                                   unsigned threads, kpk_examples** out);
KPK_API kpk_status kpk_sample_mixed(const kpk_corpus* corpus, const kpk_graph* graph, const kpk_rankings* generated,
                                    size_t soft, size_t hard, uint64_t seed, unsigned threads, kpk_examples** out);
KPK_API void kpk_examples_free(kpk_examples* examples);
KPK_API size_t kpk_examples_size(const kpk_examples* examples);

typedef struct kpk_sample_diagnostics {
  size_t positives_using_fallback;
  size_t soft_shortfall;
  size_t hard_shortfall;
} kpk_sample_diagnostics;

KPK_API void kpk_examples_diagnostics(const kpk_examples* examples, kpk_sample_diagnostics* out);

typedef enum kpk_example_format { KPK_EXAMPLES_PAIRS_TSV = 0, KPK_EXAMPLES_PROMPT_TEXT = 1 } kpk_example_format;

KPK_API kpk_status kpk_examples_render(const kpk_examples* examples, const kpk_corpus* corpus,
                                       kpk_example_format format, size_t token_budget, kpk_string** out);

typedef struct kpk_generation_options {
  int sorted_variant;
  const char* delimiter;    /* default ";" */
  const char* task_prefix;  /* default "Generate keyphrases:" */
  size_t token_budget;      /* default 512 */
  unsigned threads;
} kpk_generation_options;

KPK_API void kpk_generation_options_init(kpk_generation_options* options);
/* JSON-lines: {"id", "input", "target"} */
KPK_API kpk_status kpk_generation_examples_render(const kpk_corpus* corpus, const kpk_generation_options* options,
                                                  kpk_string** out);

#ifdef __cplusplus
}
#endif

#endif /* KPKIT_KPKIT_H */
