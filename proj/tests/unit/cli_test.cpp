#include <gtest/gtest.h>

#include <json.hpp>

#include "cli_runner.hpp"
#include "test_support.hpp"

using namespace kpkit::testutil;
using nlohmann::json;

namespace {

std::string fx(const char* name) { return fixture(name).string(); }

}  // namespace

TEST(Cli, EvalTable) {
  auto r = run_cli({"eval", "--corpus", fx("eval_4doc.jsonl"), "--predictions", "m=" + fx("eval_4doc_predictions.jsonl")});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("# kpkit ", 0), 0u);
  EXPECT_NE(r.out.find("# input corpus "), std::string::npos);
  EXPECT_NE(r.out.find("m\t0.4500\t0.3750\t0.5750\t0.6250\t0.5000\t0.6667\t0.5000\t0.6667\t0.4375\t0.4167\t0.6375\t0.6667\n"),
            std::string::npos);
}

TEST(Cli, EvalJsonCarriesMeta) {
  auto r = run_cli({"eval", "--corpus", fx("eval_4doc.jsonl"), "--predictions", fx("eval_4doc_predictions.jsonl"),
                    "--format", "json", "--cutoff", "O", "--matcher", "exact", "--subset", "all"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["meta"]["config"]["cutoffs"], json::array({"O"}));
  EXPECT_EQ(j["meta"]["inputs"][0]["sha256"].get<std::string>().size(), 64u);
  EXPECT_FALSE(j["meta"]["config"].contains("threads"));
  ASSERT_TRUE(j["results"].is_object());
}

TEST(Cli, PerfectAndEmptyPredictions) {
  TempDir dir;
  auto gold = dir.write("gold.jsonl",
                        R"({"id":"e1","keyphrases":["drug discovery","graph neural networks","message passing"]})" "\n"
                        R"({"id":"e2","keyphrases":["attention mechanism","machine translation"]})" "\n"
                        R"({"id":"e3","keyphrases":["protein structure"]})" "\n"
                        R"({"id":"e4","keyphrases":["language model","speech recognition","acoustic model"]})" "\n");
  auto empty = dir.write("empty.jsonl", "");
  auto r = run_cli({"eval", "--corpus", fx("eval_4doc.jsonl"), "--predictions", "gold=" + gold.string(),
                    "--predictions", "none=" + empty.string(), "--cutoff", "O"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("gold\t1.0000\t1.0000\t1.0000\t1.0000\t1.0000\t1.0000\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("none\t0.0000\t0.0000\t0.0000\t0.0000\t0.0000\t0.0000\n"), std::string::npos) << r.out;
}

TEST(Cli, UnknownIdsFailWithJsonError) {
  TempDir dir;
  auto p = dir.write("p.jsonl", R"({"id":"zz","keyphrases":["x"]})" "\n");
  auto r = run_cli({"eval", "--corpus", fx("eval_4doc.jsonl"), "--predictions", p.string()});
  EXPECT_EQ(r.exit_code, 6);
  auto j = json::parse(r.err);
  EXPECT_EQ(j["error"]["code"], "id_mismatch");
  EXPECT_TRUE(r.out.empty());
  auto ok = run_cli({"eval", "--corpus", fx("eval_4doc.jsonl"), "--predictions", p.string(), "--max-unknown-ids", "1"});
  EXPECT_EQ(ok.exit_code, 0) << ok.err;
}

TEST(Cli, UsageErrorsAreJson) {
  auto r = run_cli({"eval", "--matcher", "fuzzy"});
  EXPECT_NE(r.exit_code, 0);
  EXPECT_EQ(json::parse(r.err)["error"]["code"], "usage");
  auto none = run_cli({});
  EXPECT_NE(none.exit_code, 0);
}

TEST(Cli, MalformedCorpus) {
  TempDir dir;
  auto c = dir.write("c.jsonl", "{broken\n");
  auto r = run_cli({"stats", c.string()});
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_EQ(json::parse(r.err)["error"]["code"], "parse");
}

TEST(Cli, Stats) {
  auto r = run_cli({"stats", fx("stats_10doc.jsonl"), "--dataset", "toy"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(strip_meta(r.out), "dataset\tdocs\tmean_keyphrases\tabsent_ratio\ntoy\t10\t2.0000\t0.1500\n");
}

TEST(Cli, NormalizeShowStems) {
  auto r = run_cli({"normalize", "--show-stems", "Word-Embeddings", "T5"});
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "Word-Embeddings\tword embeddings\tword embed\nT5\tt5\tt5\n");
  auto piped = run_cli({"normalize"}, "Self-Attention\n");
  EXPECT_EQ(piped.out, "Self-Attention\tself attention\n");
}

TEST(Cli, VoteFileLevel) {
  TempDir dir;
  auto p = dir.write("p.jsonl", R"({"id":"d1","sequences":[["a","b"],["a"],["a","c"]]})" "\n"
                                R"({"id":"d2","sequences":[["x","y"]]})" "\n"
                                R"({"id":"d3","sequences":[["a","a","b"]]})" "\n");
  auto r = run_cli({"vote", p.string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(strip_meta(r.out),
            "{\"id\":\"d1\",\"keyphrases\":[\"a\",\"b\",\"c\"],\"scores\":[3.0,1.0,1.0]}\n"
            "{\"id\":\"d2\",\"keyphrases\":[\"x\",\"y\"],\"scores\":[1.0,1.0]}\n"
            "{\"id\":\"d3\",\"keyphrases\":[\"a\",\"b\"],\"scores\":[1.0,1.0]}\n");
  // The ranked file loads back as predictions with the same order.
  auto ranked = dir.write("ranked.jsonl", r.out);
  auto again = run_cli({"vote", ranked.string()});
  EXPECT_NE(again.out.find("{\"id\":\"d1\",\"keyphrases\":[\"a\",\"b\",\"c\"]"), std::string::npos);
}

TEST(Cli, FilterFileLevel) {
  TempDir dir;
  auto p = dir.write("p.jsonl", R"({"id":"d","keyphrases":["a","b","c"]})" "\n");
  auto v = dir.write("v.jsonl", R"({"id":"d","keyphrase":"a","relevant":true})" "\n"
                                R"({"id":"d","keyphrase":"c","score":0.9})" "\n");
  auto r = run_cli({"filter", p.string(), "--verdicts", v.string(), "--threshold", "0.5"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(strip_meta(r.out), "{\"id\":\"d\",\"keyphrases\":[\"a\",\"b\",\"c\"],\"scores\":[1.0,1.0,1.0]}\n");
  auto meta = json::parse(r.out.substr(0, r.out.find('\n')));
  EXPECT_EQ(meta["_meta"]["summary"]["missing_verdicts"], 1);
  auto drop = run_cli({"filter", p.string(), "--verdicts", v.string(), "--threshold", "0.95", "--missing-policy", "drop"});
  EXPECT_EQ(strip_meta(drop.out), "{\"id\":\"d\",\"keyphrases\":[\"a\"],\"scores\":[1.0]}\n");
  auto no_threshold = run_cli({"filter", p.string(), "--verdicts", v.string()});
  EXPECT_EQ(no_threshold.exit_code, 1);
}

TEST(Cli, BinaryEvalFileLevel) {
  TempDir dir;
  std::string pairs, verdicts;
  for (int i = 0; i < 200; ++i) {
    bool label = i < 100;
    bool predicted = label ? i < 74 : i < 101;
    std::string kp = "k" + std::to_string(i);
    pairs += "d\t" + kp + "\t" + (label ? "true" : "false") + "\n";
    verdicts += R"({"id":"d","keyphrase":")" + kp + R"(","relevant":)" + (predicted ? "true" : "false") + "}\n";
  }
  auto p = dir.write("pairs.tsv", pairs);
  auto v = dir.write("v.jsonl", verdicts);
  auto r = run_cli({"binary-eval", p.string(), "--verdicts", v.string(), "--format", "json"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  auto j = json::parse(r.out)["results"];
  EXPECT_NEAR(j["accuracy"].get<double>(), 0.865, 1e-12);
  auto text = run_cli({"binary-eval", p.string(), "--verdicts", v.string()});
  EXPECT_NE(text.out.find("accuracy 0.8650"), std::string::npos);
}

TEST(Cli, SampleThreeComponents) {
  auto r = run_cli({"sample", "soft", "--corpus", fx("three_components.jsonl"), "--seed", "5"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  auto body = strip_meta(r.out);
  std::size_t d2_negatives = 0;
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("d2\t", 0) != 0 || line.substr(line.size() - 5) != "false") continue;
    ++d2_negatives;
    auto kp = line.substr(3, line.size() - 9);
    EXPECT_TRUE(kp == "information retrieval" || kp == "search engine" || kp == "word embeddings") << kp;
  }
  EXPECT_EQ(d2_negatives, 2u);
}

TEST(Cli, SampleGenSorted) {
  auto r = run_cli({"sample", "gen", "--corpus", fx("eval_4doc.jsonl"), "--sorted"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.out.find("\"target\":\"graph neural networks; message passing; drug discovery\""), std::string::npos);
}

TEST(Cli, SampleMixedNeedsAllDocuments) {
  auto r = run_cli({"sample", "mixed", "--corpus", fx("eval_4doc.jsonl"), "--predictions",
                    fx("eval_4doc_predictions.jsonl")});
  EXPECT_EQ(r.exit_code, 6) << r.err;
}

TEST(Cli, HsdFromScoreDumps) {
  TempDir dir;
  auto gold = dir.write("gold.jsonl",
                        R"({"id":"e1","keyphrases":["drug discovery","graph neural networks","message passing"]})" "\n"
                        R"({"id":"e2","keyphrases":["attention mechanism","machine translation"]})" "\n"
                        R"({"id":"e3","keyphrases":["protein structure"]})" "\n"
                        R"({"id":"e4","keyphrases":["language model","speech recognition","acoustic model"]})" "\n");
  auto dump = dir / "scores.tsv";
  auto e = run_cli({"eval", "--corpus", fx("eval_4doc.jsonl"), "--predictions", "m=" + fx("eval_4doc_predictions.jsonl"),
                    "--predictions", "gold=" + gold.string(), "--dump-scores", dump.string(), "-o",
                    (dir / "table.tsv").string()});
  ASSERT_EQ(e.exit_code, 0) << e.err;
  auto letters = dir / "letters.tsv";
  auto r = run_cli({"hsd", dump.string(), "--cutoff", "O", "--permutations", "5000", "--seed", "3", "--letters",
                    letters.string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  auto body = strip_meta(r.out);
  EXPECT_EQ(body.rfind("system\tm\tgold\n", 0), 0u) << body;
  auto lt = strip_meta(read_file(letters));
  EXPECT_EQ(lt.rfind("letter\tsystem\tmean\tbeats\n", 0), 0u) << lt;
  auto json_out = run_cli({"hsd", dump.string(), "--permutations", "5000", "--format", "json"});
  ASSERT_EQ(json_out.exit_code, 0) << json_out.err;
  EXPECT_EQ(json::parse(json_out.out)["results"]["permutations"], 5000);
}
