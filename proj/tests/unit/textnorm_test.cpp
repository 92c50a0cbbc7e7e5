#include <gtest/gtest.h>

#include <fstream>
#include <string>

#include "test_support.hpp"
#include "textnorm.hpp"

using namespace kpkit::textnorm;

TEST(Normalize, DashesBecomeSpaces) {
  EXPECT_EQ(normalize("Self-Attention"), "self attention");
  EXPECT_EQ(normalize("state-of-the-art!"), "state of the art");
  EXPECT_EQ(normalize("long\xE2\x80\x94range"), "long range");  // em dash
  EXPECT_EQ(normalize("a\xE2\x80\x93" "b"), "a b");              // en dash
}

TEST(Normalize, WhitespaceCollapses) {
  EXPECT_EQ(normalize("  word   embeddings "), "word embeddings");
  EXPECT_EQ(normalize("word\t\nembeddings"), "word embeddings");
  EXPECT_EQ(normalize(""), "");
  EXPECT_EQ(normalize(" \t "), "");
}

TEST(Normalize, PunctuationDropped) {
  EXPECT_EQ(normalize("(IR) systems, e.g. search"), "ir systems eg search");
  EXPECT_EQ(normalize("C++"), "c");
  EXPECT_EQ(normalize("\"quoted\""), "quoted");
}

TEST(Normalize, UnicodeCasefold) {
  EXPECT_EQ(normalize("STRASSE"), "strasse");
  EXPECT_EQ(normalize("Stra\xC3\x9F" "e"), "strasse");  // sharp s folds to ss
  EXPECT_EQ(normalize("R\xC3\x89SUM\xC3\x89"), "r\xC3\xA9sum\xC3\xA9");
}

TEST(Normalize, Idempotent) {
  for (const char* s : {"Self-Attention", "  A  b-C!! ", "T5 model", "R\xC3\x89SUM\xC3\x89 / CV"}) {
    auto once = normalize(s);
    EXPECT_EQ(normalize(once), once) << s;
  }
}

TEST(Porter, ReferenceVectors) {
  std::ifstream in(kpkit::testutil::fixture("porter_vectors.tsv"));
  ASSERT_TRUE(in) << "missing porter_vectors.tsv";
  std::string line;
  std::size_t checked = 0, wrong = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    ASSERT_NE(tab, std::string::npos) << line;
    std::string word = line.substr(0, tab), stem = line.substr(tab + 1);
    if (porter_stem(word) != stem) {
      ++wrong;
      ADD_FAILURE() << word << ": got " << porter_stem(word) << ", want " << stem;
    }
    ++checked;
  }
  EXPECT_GT(checked, 1000u);
  EXPECT_EQ(wrong, 0u);
}

TEST(Porter, ClassicExamples) {
  EXPECT_EQ(porter_stem("caresses"), "caress");
  EXPECT_EQ(porter_stem("ponies"), "poni");
  EXPECT_EQ(porter_stem("relational"), "relat");
  EXPECT_EQ(porter_stem("generalization"), "gener");
  EXPECT_EQ(porter_stem("hopping"), "hop");
  EXPECT_EQ(porter_stem("filing"), "file");
}

TEST(Porter, NonAlphabeticTokensUnchanged) {
  EXPECT_EQ(porter_stem("t5"), "t5");
  EXPECT_EQ(porter_stem("bert2"), "bert2");
  EXPECT_EQ(porter_stem("r\xC3\xA9sum\xC3\xA9s"), "r\xC3\xA9sum\xC3\xA9s");
  EXPECT_EQ(porter_stem(""), "");
}

TEST(StemPhrase, PerToken) {
  EXPECT_EQ(stem_phrase("word embeddings"), "word embed");
  EXPECT_EQ(stem_phrase("caresses ponies"), "caress poni");
  EXPECT_EQ(normalize_and_stem("Word-Embeddings"), "word embed");
  EXPECT_EQ(stem_phrase(""), "");
}

TEST(Analyze, KeepsAllThreeForms) {
  auto a = analyze("Neural Networks");
  EXPECT_EQ(a.raw, "Neural Networks");
  EXPECT_EQ(a.normalized, "neural networks");
  EXPECT_EQ(a.stemmed, "neural network");
}

TEST(ContainsTokens, RespectsBoundaries) {
  EXPECT_TRUE(contains_tokens("neural network model", "neural network"));
  EXPECT_TRUE(contains_tokens("neural network model", "network model"));
  EXPECT_TRUE(contains_tokens("neural network", "neural network"));
  EXPECT_FALSE(contains_tokens("neural networks", "network"));
  EXPECT_FALSE(contains_tokens("neural network", "ural net"));
  EXPECT_FALSE(contains_tokens("neural", "neural network"));
  EXPECT_FALSE(contains_tokens("neural network", ""));
  EXPECT_TRUE(contains_tokens("a b a b c", "a b c"));
}

TEST(SplitWhitespace, Tokens) {
  auto t = split_whitespace("  a bb\tccc ");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0], "a");
  EXPECT_EQ(t[2], "ccc");
}
