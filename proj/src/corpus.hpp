#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace kpkit::corpus {

struct Document {
  std::string id;
  std::string title;
  std::string abstract;
  std::vector<std::string> keyphrases;  // golden set K_d, first occurrence kept
};

struct LoadDiagnostics {
  std::size_t duplicate_keyphrases = 0;
  std::size_t empty_keyphrases = 0;
  std::vector<std::size_t> skipped_lines;  // 1-based
};

struct CorpusSplit {
  std::string name = "test";
  std::vector<Document> documents;
  LoadDiagnostics diagnostics;
};

enum class CorpusFormat { JsonLines };

struct LoadOptions {
  CorpusFormat format = CorpusFormat::JsonLines;
  std::string split_name = "test";
  // Number of malformed lines that may be skipped before loading fails.
  std::size_t malformed_tolerance = 0;
};

CorpusSplit load_corpus(const std::filesystem::path& path, const LoadOptions& options = {});
CorpusSplit parse_corpus(std::istream& in, const LoadOptions& options = {});

/// normalize + stem of title + " " + abstract; the haystack for presence tests.
std::string stemmed_text(const Document& doc);

struct Partition {
  std::vector<std::string> present;
  std::vector<std::string> absent;
};

Partition partition_present_absent(const Document& doc);
/// Same as above with a precomputed stemmed_text(doc).
Partition partition_present_absent(const Document& doc, const std::string& stemmed_doc);

bool is_present(const std::string& stemmed_keyphrase, const std::string& stemmed_doc);

struct CorpusStats {
  std::size_t doc_count = 0;
  std::size_t keyphrase_count = 0;
  std::size_t absent_count = 0;
  double mean_keyphrases_per_doc = 0.0;
  double absent_ratio = 0.0;
};

CorpusStats corpus_stats(const CorpusSplit& split, unsigned threads = 1);

}  // namespace kpkit::corpus
