#include <gtest/gtest.h>

#include <random>

#include "error.hpp"
#include "matcher.hpp"
#include "oracles.hpp"

using namespace kpkit::matcher;
using V = std::vector<std::string>;

TEST(Cutoff, Parse) {
  EXPECT_EQ(Cutoff::parse("5"), Cutoff::top(5));
  EXPECT_EQ(Cutoff::parse("O"), Cutoff::golden_count());
  EXPECT_EQ(Cutoff::parse("all"), Cutoff::all());
  EXPECT_THROW(Cutoff::parse("0"), kpkit::Error);
  EXPECT_THROW(Cutoff::parse("five"), kpkit::Error);
  EXPECT_THROW(Cutoff::top(0), kpkit::Error);
  EXPECT_EQ(Cutoff::top(5).label(), "5");
  EXPECT_EQ(Cutoff::golden_count().label(), "O");
  EXPECT_EQ(Cutoff::golden_count().resolve(7), 7u);
}

TEST(ExactMatch, Identity) {
  auto r = exact_match(V{"neural network"}, V{"neural network"}, Cutoff::all());
  EXPECT_EQ(r.matched_pairs.size(), 1u);
}

TEST(ExactMatch, DuplicatePredictionCountsOnce) {
  auto r = exact_match(V{"a", "a"}, V{"a"}, Cutoff::all());
  EXPECT_EQ(r.matched_pairs.size(), 1u);
  EXPECT_EQ(r.considered(), 1u);
  EXPECT_TRUE(r.unmatched_predictions.empty());
}

TEST(ExactMatch, CutoffLimitsScan) {
  auto r = exact_match(V{"x", "y", "z"}, V{"y", "q"}, Cutoff::top(2));
  ASSERT_EQ(r.matched_pairs.size(), 1u);
  EXPECT_EQ(r.matched_pairs[0].first, "y");
  EXPECT_EQ(r.unmatched_predictions, V{"x"});
  EXPECT_EQ(r.unmatched_golden, V{"q"});
}

TEST(ExactMatch, DedupHappensBeforeCutoff) {
  auto r = exact_match(V{"a", "a", "b"}, V{"b"}, Cutoff::top(2));
  EXPECT_EQ(r.matched_pairs.size(), 1u);
}

TEST(PartialMatch, Containment) {
  EXPECT_TRUE(partially_matches("neural", "neural network evaluation"));
  EXPECT_TRUE(partially_matches("deep neural network", "neural network"));
  EXPECT_FALSE(partially_matches("neural net", "neural network"));
  EXPECT_EQ(partial_match(V{"neural"}, V{"neural network evaluation"}, Cutoff::all()).matched_pairs.size(), 1u);
  EXPECT_EQ(partial_match(V{"deep neural network"}, V{"neural network"}, Cutoff::all()).matched_pairs.size(), 1u);
}

TEST(PartialMatch, GreedyConsumesGolden) {
  auto r = partial_match(V{"net", "neural net"}, V{"neural net"}, Cutoff::all());
  ASSERT_EQ(r.matched_pairs.size(), 1u);
  EXPECT_EQ(r.matched_pairs[0].first, "net");
  EXPECT_EQ(r.unmatched_predictions, V{"neural net"});
  EXPECT_EQ(kpkit::oracle::max_partial_matching(V{"net", "neural net"}, V{"neural net"}), 1u);
}

TEST(PartialMatch, FirstGoldenInListOrder) {
  auto r = partial_match(V{"network"}, V{"neural network", "network model"}, Cutoff::all());
  ASSERT_EQ(r.matched_pairs.size(), 1u);
  EXPECT_EQ(r.matched_pairs[0].second, "neural network");
}

TEST(PartialMatch, ExactIsPartial) {
  auto r = partial_match(V{"a b"}, V{"a b"}, Cutoff::all());
  EXPECT_EQ(r.matched_pairs.size(), 1u);
}

TEST(Match, EmptyInputs) {
  EXPECT_EQ(exact_match(V{}, V{"a"}, Cutoff::top(5)).matched_pairs.size(), 0u);
  EXPECT_EQ(partial_match(V{"a"}, V{}, Cutoff::golden_count()).considered(), 0u);
}

// Random instances over a small alphabet of stemmed phrases where several
// entries contain each other.
class MatcherOracle : public ::testing::Test {
 protected:
  const V alphabet{"a", "b", "a b", "b c", "a b c", "c", "d", "c d", "e", "d e f", "f", "a c"};

  V draw(std::mt19937_64& rng, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(0, max_len), pick(0, alphabet.size() - 1);
    V out(len(rng));
    for (auto& s : out) s = alphabet[pick(rng)];
    return out;
  }
};

TEST_F(MatcherOracle, ExactEqualsMultisetIntersection) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 3000; ++i) {
    auto preds = draw(rng, 8), golden = kpkit::oracle::dedup_cut(draw(rng, 8), 8);
    std::size_t k = 1 + rng() % 8;
    auto r = exact_match(preds, golden, Cutoff::top(k));
    auto considered = kpkit::oracle::dedup_cut(preds, k);
    ASSERT_EQ(r.matched_pairs.size(), kpkit::oracle::exact_count(considered, golden));
    ASSERT_EQ(r.considered(), considered.size());
    ASSERT_EQ(r.golden_size(), golden.size());
  }
}

TEST_F(MatcherOracle, PartialFollowsGreedyRuleAndNeverExceedsOptimum) {
  std::mt19937_64 rng(11);
  std::size_t diverged = 0, below_exact = 0, total = 0;
  for (int i = 0; i < 3000; ++i) {
    auto preds = draw(rng, 6), golden = kpkit::oracle::dedup_cut(draw(rng, 6), 6);
    auto considered = kpkit::oracle::dedup_cut(preds, preds.size());
    auto r = partial_match(preds, golden, Cutoff::all());
    auto optimum = kpkit::oracle::max_partial_matching(considered, golden);
    ASSERT_EQ(r.matched_pairs.size(), kpkit::oracle::greedy_partial(considered, golden));
    ASSERT_LE(r.matched_pairs.size(), optimum);
    // Greedy partial matching may even fall below the exact count: an early
    // partial hit can take the golden phrase a later exact hit needed.
    below_exact += r.matched_pairs.size() < kpkit::oracle::exact_count(considered, golden);
    diverged += r.matched_pairs.size() != optimum;
    ++total;
  }
  RecordProperty("greedy_divergence_rate", std::to_string(static_cast<double>(diverged) / total));
  std::cout << "greedy vs optimum divergence: " << diverged << "/" << total << ", below exact: " << below_exact
            << "\n";
}
