#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace kpkit::significance {

/// Documents x systems matrix of per-document scores, row-major.
struct ScoreMatrix {
  std::vector<std::string> systems;
  std::vector<std::string> docs;
  std::vector<double> scores;

  std::size_t rows() const noexcept { return docs.size(); }
  std::size_t cols() const noexcept { return systems.size(); }
  double at(std::size_t doc, std::size_t system) const { return scores[doc * systems.size() + system]; }
};

/// Throws unless there are >= 2 systems, >= 2 documents, one finite score per
/// cell and no repeated names.
void validate(const ScoreMatrix& matrix);

struct HsdOptions {
  std::uint64_t permutations = 1'000'000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: available parallelism
};

struct HsdResult {
  std::vector<std::string> systems;
  std::vector<double> means;
  std::vector<double> p_values;  // cols x cols, symmetric, diagonal 1
  std::uint64_t permutations = 0;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  bool degenerate = false;  // every row constant; all p reported as 1

  double p(std::size_t i, std::size_t j) const { return p_values[i * systems.size() + j]; }
  /// i has the higher mean and the pair difference is significant at alpha.
  bool beats(std::size_t i, std::size_t j) const { return i != j && means[i] > means[j] && p(i, j) <= alpha; }
};

/// Randomized Tukey HSD. Each permutation independently shuffles the scores
/// inside every row and records max_{i,j} |mean_i - mean_j|; the p-value of a
/// pair is (#{t_b >= d_ij} + 1) / (B + 1). Permutations come in fixed blocks
/// of 256, each drawing from a generator seeded by (seed, block index), so the
/// result does not depend on threads.
HsdResult tukey_hsd(const ScoreMatrix& matrix, const HsdOptions& options);

/// Column label used in letter tables: a..z, then A..Z, then s<index>.
std::string system_letter(std::size_t index);

std::string render_pvalues_tsv(const HsdResult& result);
std::string render_letters_tsv(const HsdResult& result);
std::string render_json(const HsdResult& result);

// Score matrix inputs.
//   wide TSV: header "doc_id<TAB>sysA<TAB>sysB...", one row per document
//   JSON: {"systems": [...], "docs": [...], "scores": [[...], ...]}
//   per-document dump (long TSV written by `eval --dump-scores`):
//     system doc_id subset matcher cutoff precision recall f1
ScoreMatrix parse_wide_tsv(std::istream& in);
ScoreMatrix parse_json(std::istream& in);

struct DumpSelector {
  std::string subset = "all";
  std::string matcher = "exact";
  std::string cutoff = "5";
  std::string metric = "f1";
};

/// Builds the matrix from one or more dump streams; rows and columns follow
/// first appearance.
ScoreMatrix parse_score_dump(const std::vector<std::istream*>& inputs, const DumpSelector& selector);

/// Detects JSON vs wide TSV vs dump from the content.
ScoreMatrix load_score_matrix(const std::vector<std::filesystem::path>& paths, const DumpSelector& selector);

}  // namespace kpkit::significance
