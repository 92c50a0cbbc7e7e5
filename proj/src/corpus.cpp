#include "corpus.hpp"

#include <fstream>
#include <istream>
#include <json.hpp>
#include <unordered_set>

#include "error.hpp"
#include "parallel.hpp"
#include "textnorm.hpp"

namespace kpkit::corpus {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  std::size_t b = 0, e = s.size();
  while (b < e && space(s[b])) ++b;
  while (e > b && space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

const json& require(const json& obj, const char* key, json::value_t type) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::Parse, std::string("missing field '") + key + "'");
  if (it->type() != type) throw Error(ErrorCode::Parse, std::string("field '") + key + "' has the wrong type");
  return *it;
}

Document parse_document(const json& obj, LoadDiagnostics& diag) {
  if (!obj.is_object()) throw Error(ErrorCode::Parse, "line is not a JSON object");
  Document doc;
  const json& id = obj.at("id");
  if (id.is_string())
    doc.id = id.get<std::string>();
  else if (id.is_number_integer())
    doc.id = id.dump();
  else
    throw Error(ErrorCode::Parse, "field 'id' must be a string");
  if (doc.id.empty()) throw Error(ErrorCode::Parse, "empty document id");
  doc.title = require(obj, "title", json::value_t::string).get<std::string>();
  doc.abstract = require(obj, "abstract", json::value_t::string).get<std::string>();

  std::unordered_set<std::string> seen;
  for (const json& k : require(obj, "keyphrases", json::value_t::array)) {
    if (!k.is_string()) throw Error(ErrorCode::Parse, "keyphrases must be strings");
    std::string raw = trim(k.get<std::string>());
    std::string norm = textnorm::normalize(raw);
    if (norm.empty()) {
      ++diag.empty_keyphrases;
      continue;
    }
    if (!seen.insert(norm).second) {
      ++diag.duplicate_keyphrases;
      continue;
    }
    doc.keyphrases.push_back(std::move(raw));
  }
  if (doc.keyphrases.empty()) throw Error(ErrorCode::Parse, "document '" + doc.id + "' has no keyphrases");
  return doc;
}

}  // namespace

CorpusSplit parse_corpus(std::istream& in, const LoadOptions& options) {
  CorpusSplit split;
  split.name = options.split_name;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      json obj = json::parse(line);
      if (obj.is_object() && obj.contains("_meta")) continue;
      LoadDiagnostics local;
      Document doc = parse_document(obj, local);
      if (!ids.insert(doc.id).second) throw Error(ErrorCode::Parse, "duplicate document id '" + doc.id + "'");
      split.diagnostics.duplicate_keyphrases += local.duplicate_keyphrases;
      split.diagnostics.empty_keyphrases += local.empty_keyphrases;
      split.documents.push_back(std::move(doc));
    } catch (const std::exception& e) {
      split.diagnostics.skipped_lines.push_back(lineno);
      if (split.diagnostics.skipped_lines.size() > options.malformed_tolerance)
        throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (split.documents.empty()) throw Error(ErrorCode::Empty, "no documents");
  return split;
}

CorpusSplit load_corpus(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read corpus file " + path.string());
  return parse_corpus(in, options);
}

std::string stemmed_text(const Document& doc) {
  return textnorm::normalize_and_stem(doc.title + " " + doc.abstract);
}

bool is_present(const std::string& stemmed_keyphrase, const std::string& stemmed_doc) {
  return textnorm::contains_tokens(stemmed_doc, stemmed_keyphrase);
}

Partition partition_present_absent(const Document& doc, const std::string& stemmed_doc) {
  Partition p;
  for (const auto& k : doc.keyphrases) {
    if (is_present(textnorm::normalize_and_stem(k), stemmed_doc))
      p.present.push_back(k);
    else
      p.absent.push_back(k);
  }
  return p;
}

Partition partition_present_absent(const Document& doc) {
  return partition_present_absent(doc, stemmed_text(doc));
}

CorpusStats corpus_stats(const CorpusSplit& split, unsigned threads) {
  if (split.documents.empty()) throw Error(ErrorCode::Empty, "empty split");
  std::vector<std::size_t> absent(split.documents.size());
  parallel_for(split.documents.size(), threads, [&](std::size_t i) {
    absent[i] = partition_present_absent(split.documents[i]).absent.size();
  });
  CorpusStats s;
  s.doc_count = split.documents.size();
  for (std::size_t i = 0; i < s.doc_count; ++i) {
    s.keyphrase_count += split.documents[i].keyphrases.size();
    s.absent_count += absent[i];
  }
  s.mean_keyphrases_per_doc = static_cast<double>(s.keyphrase_count) / static_cast<double>(s.doc_count);
  s.absent_ratio = static_cast<double>(s.absent_count) / static_cast<double>(s.keyphrase_count);
  return s;
}

}  // namespace kpkit::corpus
