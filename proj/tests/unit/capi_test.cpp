#include <gtest/gtest.h>
#include <kpkit/kpkit.h>

#include <string>
#include <vector>

#include "test_support.hpp"

namespace {

std::string take(kpk_string* s) {
  std::string out(kpk_string_data(s), kpk_string_size(s));
  kpk_string_free(s);
  return out;
}

std::string fixture(const char* name) { return kpkit::testutil::fixture(name).string(); }

}  // namespace

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(kpk_version(), "");
  EXPECT_STREQ(kpk_status_name(KPK_OK), "ok");
  EXPECT_STREQ(kpk_status_name(KPK_ERR_NO_NEGATIVES), "no_negatives");
}

TEST(CApi, Normalize) {
  kpk_string* s = nullptr;
  ASSERT_EQ(kpk_normalize("Self-Attention", &s), KPK_OK);
  EXPECT_EQ(take(s), "self attention");
  ASSERT_EQ(kpk_stem_phrase("word embeddings", &s), KPK_OK);
  EXPECT_EQ(take(s), "word embed");
}

TEST(CApi, NullArgumentsAreReported) {
  EXPECT_EQ(kpk_normalize(nullptr, nullptr), KPK_ERR_INVALID_ARGUMENT);
  EXPECT_STRNE(kpk_last_error(), "");
}

TEST(CApi, MissingFile) {
  kpk_corpus* c = nullptr;
  EXPECT_EQ(kpk_corpus_load("/nonexistent.jsonl", 0, &c), KPK_ERR_IO);
  EXPECT_EQ(c, nullptr);
  EXPECT_NE(std::string(kpk_last_error()).find("nonexistent"), std::string::npos);
}

TEST(CApi, CorpusStats) {
  kpk_corpus* c = nullptr;
  ASSERT_EQ(kpk_corpus_load(fixture("stats_10doc.jsonl").c_str(), 0, &c), KPK_OK);
  EXPECT_EQ(kpk_corpus_size(c), 10u);
  kpk_corpus_stats st{};
  ASSERT_EQ(kpk_corpus_stats_compute(c, 2, &st), KPK_OK);
  EXPECT_DOUBLE_EQ(st.absent_ratio, 0.15);
  kpk_string* s = nullptr;
  ASSERT_EQ(kpk_corpus_stats_render(&st, "demo", KPK_FORMAT_TSV, &s), KPK_OK);
  EXPECT_NE(take(s).find("demo\t10\t2.0000\t0.1500"), std::string::npos);
  kpk_corpus_free(c);
}

TEST(CApi, EvalPipeline) {
  kpk_corpus* c = nullptr;
  kpk_predictions* p = nullptr;
  ASSERT_EQ(kpk_corpus_load(fixture("eval_4doc.jsonl").c_str(), 0, &c), KPK_OK);
  ASSERT_EQ(kpk_predictions_load(fixture("eval_4doc_predictions.jsonl").c_str(), ";", &p), KPK_OK);
  const kpk_predictions* systems[] = {p};
  const char* names[] = {"m"};
  kpk_eval_options o;
  kpk_eval_options_init(&o);
  kpk_eval* e = nullptr;
  ASSERT_EQ(kpk_eval_run(c, systems, names, 1, &o, &e), KPK_OK) << kpk_last_error();
  double f1 = -1;
  ASSERT_EQ(kpk_eval_f1(e, 0, "all", "exact", "5", &f1), KPK_OK);
  EXPECT_NEAR(f1, 0.4375, 1e-12);
  EXPECT_EQ(kpk_eval_f1(e, 0, "all", "exact", "10", &f1), KPK_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(kpk_eval_f1(e, 3, "all", "exact", "5", &f1), KPK_ERR_INVALID_ARGUMENT);
  kpk_string* s = nullptr;
  ASSERT_EQ(kpk_eval_render(e, KPK_FORMAT_JSON, &s), KPK_OK);
  EXPECT_EQ(take(s).front(), '{');
  kpk_eval_free(e);
  kpk_predictions_free(p);
  kpk_corpus_free(c);
}

TEST(CApi, VoteAndFilter) {
  kpkit::testutil::TempDir dir;
  auto preds = dir.write("p.jsonl", R"({"id":"d","sequences":[["a","b","c"],["c"]]})" "\n");
  auto verd = dir.write("v.jsonl", R"({"id":"d","keyphrase":"b","relevant":false})" "\n");
  kpk_predictions* p = nullptr;
  kpk_rankings* r = nullptr;
  kpk_rankings* f = nullptr;
  kpk_verdicts* v = nullptr;
  ASSERT_EQ(kpk_predictions_load(preds.c_str(), nullptr, &p), KPK_OK);
  ASSERT_EQ(kpk_rankings_vote(p, 1, &r), KPK_OK);
  ASSERT_EQ(kpk_verdicts_load(verd.c_str(), nullptr, &v), KPK_OK);
  std::size_t removed = 0, missing = 0;
  ASSERT_EQ(kpk_rankings_filter(r, v, KPK_MISSING_KEEP, &f, &removed, &missing), KPK_OK);
  EXPECT_EQ(removed, 1u);
  EXPECT_EQ(missing, 2u);
  kpk_string* s = nullptr;
  ASSERT_EQ(kpk_rankings_render(f, &s), KPK_OK);
  EXPECT_EQ(take(s), "{\"id\":\"d\",\"keyphrases\":[\"c\",\"a\"],\"scores\":[2.0,1.0]}\n");
  kpk_rankings_free(f);
  kpk_rankings_free(r);
  kpk_verdicts_free(v);
  kpk_predictions_free(p);
}

TEST(CApi, BinaryEval) {
  std::vector<int> labels, predicted;
  for (int i = 0; i < 100; ++i) labels.push_back(1), predicted.push_back(i < 74);
  for (int i = 0; i < 100; ++i) labels.push_back(0), predicted.push_back(i < 1);
  kpk_confusion c{};
  ASSERT_EQ(kpk_binary_eval(labels.data(), predicted.data(), labels.size(), &c), KPK_OK);
  EXPECT_NEAR(c.accuracy, 0.865, 1e-12);
  EXPECT_EQ(kpk_binary_eval(nullptr, nullptr, 0, &c), KPK_ERR_EMPTY);
}

TEST(CApi, Hsd) {
  const double scores[] = {1, 0, 1, 0, 1, 0};
  const char* docs[] = {"a", "b", "c"};
  const char* systems[] = {"x", "y"};
  kpk_scores* m = nullptr;
  ASSERT_EQ(kpk_scores_create(3, 2, scores, docs, systems, &m), KPK_OK);
  kpk_hsd_options o;
  kpk_hsd_options_init(&o);
  EXPECT_EQ(o.permutations, 1000000u);
  o.permutations = 20000;
  o.seed = 4;
  kpk_hsd* h = nullptr;
  ASSERT_EQ(kpk_hsd_run(m, &o, &h), KPK_OK);
  EXPECT_NEAR(kpk_hsd_p_value(h, 0, 1), 0.25, 0.02);
  EXPECT_EQ(kpk_hsd_p_value(h, 0, 5), -1.0);
  o.permutations = 10;
  kpk_hsd* bad = nullptr;
  EXPECT_EQ(kpk_hsd_run(m, &o, &bad), KPK_ERR_INVALID_ARGUMENT);
  kpk_hsd_free(h);
  kpk_scores_free(m);
}

TEST(CApi, GraphAndSampling) {
  kpk_corpus* c = nullptr;
  ASSERT_EQ(kpk_corpus_load(fixture("three_components.jsonl").c_str(), 0, &c), KPK_OK);
  kpk_graph* g = nullptr;
  ASSERT_EQ(kpk_graph_build(c, &g), KPK_OK);
  EXPECT_EQ(kpk_graph_node_count(g), 7u);
  EXPECT_EQ(kpk_graph_component_count(g), 2u);
  kpk_string* s = nullptr;
  ASSERT_EQ(kpk_graph_soft_candidates(g, c, "d2", "transformers", &s), KPK_OK);
  EXPECT_EQ(take(s), "information retrieval\nsearch engine\nword embeddings\n");
  EXPECT_EQ(kpk_graph_soft_candidates(g, c, "nope", "x", &s), KPK_ERR_ID_MISMATCH);

  kpk_examples* ex = nullptr;
  ASSERT_EQ(kpk_sample_soft(c, g, 1, 1, 2, &ex), KPK_OK);
  EXPECT_EQ(kpk_examples_size(ex), 16u);
  kpk_sample_diagnostics d{};
  kpk_examples_diagnostics(ex, &d);
  EXPECT_EQ(d.positives_using_fallback, 2u);
  ASSERT_EQ(kpk_examples_render(ex, c, KPK_EXAMPLES_PAIRS_TSV, 512, &s), KPK_OK);
  EXPECT_EQ(take(s).rfind("d1\tinformation retrieval\ttrue\n", 0), 0u);
  kpk_examples_free(ex);

  kpk_generation_options go;
  kpk_generation_options_init(&go);
  go.sorted_variant = 1;
  ASSERT_EQ(kpk_generation_examples_render(c, &go, &s), KPK_OK);
  EXPECT_NE(take(s).find("\"target\":\"protein folding; molecular dynamics\""), std::string::npos);
  kpk_graph_free(g);
  kpk_corpus_free(c);
}
