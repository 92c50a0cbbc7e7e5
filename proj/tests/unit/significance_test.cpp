#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "error.hpp"
#include "oracles.hpp"
#include "significance.hpp"

using namespace kpkit::significance;

namespace {

ScoreMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  ScoreMatrix m;
  for (std::size_t j = 0; j < rows[0].size(); ++j) m.systems.push_back("sys" + std::to_string(j));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.docs.push_back("d" + std::to_string(i));
    m.scores.insert(m.scores.end(), rows[i].begin(), rows[i].end());
  }
  return m;
}

HsdOptions opts(std::uint64_t b, std::uint64_t seed = 1, unsigned threads = 1) {
  HsdOptions o;
  o.permutations = b;
  o.seed = seed;
  o.threads = threads;
  return o;
}

}  // namespace

TEST(Hsd, IdenticalColumnsGiveOne) {
  auto m = from_rows({{0.1, 0.1, 0.9}, {0.5, 0.5, 0.2}, {0.3, 0.3, 0.7}, {0.0, 0.0, 1.0}});
  auto r = tukey_hsd(m, opts(5000));
  EXPECT_EQ(r.p(0, 1), 1.0);
  EXPECT_EQ(r.p(1, 0), 1.0);
  EXPECT_EQ(r.p(0, 0), 1.0);
}

TEST(Hsd, ExhaustiveOracleSmall) {
  std::vector<std::vector<double>> rows{{1, 0}, {1, 0}, {1, 0}};
  auto exact = kpkit::oracle::exhaustive_hsd(rows);
  EXPECT_DOUBLE_EQ(exact[1], 0.25);
  auto r = tukey_hsd(from_rows(rows), opts(20000));
  EXPECT_NEAR(r.p(0, 1), 0.25, 0.02);
}

TEST(Hsd, ExhaustiveOracleThreeSystems) {
  std::vector<std::vector<double>> rows{{0.9, 0.2, 0.4}, {0.7, 0.1, 0.5}, {0.8, 0.6, 0.3}, {0.6, 0.0, 0.2}};
  auto exact = kpkit::oracle::exhaustive_hsd(rows);
  auto r = tukey_hsd(from_rows(rows), opts(20000, 3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) EXPECT_NEAR(r.p(i, j), exact[i * 3 + j], 0.02) << i << "," << j;
}

TEST(Hsd, DeterministicAcrossThreads) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u;
  std::vector<std::vector<double>> rows(40, std::vector<double>(4));
  for (auto& row : rows)
    for (auto& v : row) v = u(rng);
  auto m = from_rows(rows);
  auto a = tukey_hsd(m, opts(4000, 9, 1));
  auto b = tukey_hsd(m, opts(4000, 9, 3));
  EXPECT_EQ(a.p_values, b.p_values);
  auto c = tukey_hsd(m, opts(4000, 10, 1));
  EXPECT_NE(a.p_values, c.p_values);
}

TEST(Hsd, ShiftInvariant) {
  std::vector<std::vector<double>> rows{{0.9, 0.2, 0.4}, {0.7, 0.1, 0.5}, {0.8, 0.6, 0.3}, {0.6, 0.0, 0.2}};
  auto shifted = rows;
  for (auto& row : shifted)
    for (auto& v : row) v += 0.3;
  auto a = tukey_hsd(from_rows(rows), opts(3000));
  auto b = tukey_hsd(from_rows(shifted), opts(3000));
  EXPECT_EQ(a.p_values, b.p_values);
}

TEST(Hsd, ConstantRowsAreDegenerate) {
  auto r = tukey_hsd(from_rows({{0.5, 0.5}, {0.2, 0.2}}), opts(1000));
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.p(0, 1), 1.0);
}

TEST(Hsd, StrongEffectIsSignificant) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 30; ++i) rows.push_back({0.8 + 0.001 * i, 0.2, 0.21});
  auto r = tukey_hsd(from_rows(rows), opts(5000));
  EXPECT_LT(r.p(0, 1), 0.01);
  EXPECT_TRUE(r.beats(0, 1));
  EXPECT_FALSE(r.beats(1, 0));
  auto letters = render_letters_tsv(r);
  EXPECT_NE(letters.find("a\tsys0"), std::string::npos);
}

TEST(Hsd, RejectsBadOptions) {
  auto m = from_rows({{1, 0}, {0, 1}});
  EXPECT_THROW(tukey_hsd(m, opts(999)), kpkit::Error);
  auto o = opts(1000);
  o.alpha = 1.0;
  EXPECT_THROW(tukey_hsd(m, o), kpkit::Error);
  EXPECT_THROW(tukey_hsd(from_rows({{1}, {0}}), opts(1000)), kpkit::Error);
  EXPECT_THROW(tukey_hsd(from_rows({{1, 0}}), opts(1000)), kpkit::Error);
}

TEST(Hsd, Letters) {
  EXPECT_EQ(system_letter(0), "a");
  EXPECT_EQ(system_letter(25), "z");
  EXPECT_EQ(system_letter(26), "A");
  EXPECT_EQ(system_letter(52), "s52");
}

TEST(ScoreInput, WideTsv) {
  std::istringstream in("# comment\ndoc_id\tA\tB\nd1\t0.5\t0.25\nd2\t1\t0\n");
  auto m = parse_wide_tsv(in);
  EXPECT_EQ(m.systems, (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(m.at(1, 0), 1.0);
  EXPECT_EQ(m.at(0, 1), 0.25);
}

TEST(ScoreInput, Json) {
  std::istringstream in(R"({"systems":["A","B"],"docs":["d1","d2"],"scores":[[0.5,0.25],[1,0]]})");
  auto m = parse_json(in);
  EXPECT_EQ(m.docs.size(), 2u);
  EXPECT_EQ(m.at(0, 1), 0.25);
}

TEST(ScoreInput, Dumps) {
  std::istringstream a(
      "# kpkit\nsystem\tdoc_id\tsubset\tmatcher\tcutoff\tprecision\trecall\tf1\n"
      "A\td1\tall\texact\t5\t1\t1\t1\n"
      "A\td1\tall\texact\tO\t1\t1\t0.9\n"
      "A\td2\tall\texact\t5\t0\t0\t0\n");
  std::istringstream b(
      "system\tdoc_id\tsubset\tmatcher\tcutoff\tprecision\trecall\tf1\n"
      "B\td2\tall\texact\t5\t1\t1\t0.5\n"
      "B\td1\tall\texact\t5\t1\t1\t0.25\n");
  auto m = parse_score_dump({&a, &b}, DumpSelector{});
  ASSERT_EQ(m.systems, (std::vector<std::string>{"A", "B"}));
  ASSERT_EQ(m.docs, (std::vector<std::string>{"d1", "d2"}));
  EXPECT_EQ(m.at(0, 0), 1.0);
  EXPECT_EQ(m.at(0, 1), 0.25);
  EXPECT_EQ(m.at(1, 1), 0.5);
}

TEST(ScoreInput, DumpWithMissingCellFails) {
  std::istringstream a(
      "system\tdoc_id\tsubset\tmatcher\tcutoff\tprecision\trecall\tf1\n"
      "A\td1\tall\texact\t5\t1\t1\t1\nA\td2\tall\texact\t5\t1\t1\t1\nB\td1\tall\texact\t5\t1\t1\t1\n");
  EXPECT_THROW(parse_score_dump({&a}, DumpSelector{}), kpkit::Error);
}
