#include "aggregate.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <unordered_map>
#include <unordered_set>

#include "error.hpp"
#include "textnorm.hpp"

namespace kpkit::aggregate {

using nlohmann::json;

std::vector<std::string> RankedPredictions::phrases() const {
  std::vector<std::string> out;
  out.reserve(keyphrases.size());
  for (const auto& k : keyphrases) out.push_back(k.phrase);
  return out;
}

std::vector<std::string> split_sequence(const std::string& sequence, const std::string& delimiter) {
  std::vector<std::string> out;
  auto keep = [&](std::string_view piece) {
    auto first = piece.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return;
    auto last = piece.find_last_not_of(" \t\r\n");
    out.emplace_back(piece.substr(first, last - first + 1));
  };
  std::string_view rest(sequence);
  if (delimiter.empty()) {
    keep(rest);
    return out;
  }
  for (;;) {
    std::size_t pos = rest.find(delimiter);
    keep(rest.substr(0, pos));
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + delimiter.size());
  }
  return out;
}

namespace {

std::vector<std::string> read_sequence(const json& value, const std::string& delimiter) {
  if (value.is_string()) return split_sequence(value.get<std::string>(), delimiter);
  if (!value.is_array()) throw Error(ErrorCode::Parse, "a sequence must be a string or an array of strings");
  std::vector<std::string> out;
  for (const auto& k : value) {
    if (!k.is_string()) throw Error(ErrorCode::Parse, "keyphrases must be strings");
    out.push_back(k.get<std::string>());
  }
  return out;
}

std::string read_id(const json& obj) {
  auto it = obj.find("id");
  if (it == obj.end()) throw Error(ErrorCode::Parse, "missing field 'id'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return it->dump();
  throw Error(ErrorCode::Parse, "field 'id' must be a string");
}

template <typename Fn>
void for_each_json_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json obj = json::parse(line);
      if (!obj.is_object()) throw Error(ErrorCode::Parse, "line is not a JSON object");
      if (obj.contains("_meta")) continue;
      fn(obj);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace

std::vector<PredictionRecord> parse_predictions(std::istream& in, const std::string& delimiter) {
  std::vector<PredictionRecord> records;
  std::unordered_set<std::string> ids;
  for_each_json_line(in, [&](const json& obj) {
    PredictionRecord rec;
    rec.doc_id = read_id(obj);
    if (auto it = obj.find("sequences"); it != obj.end()) {
      if (!it->is_array()) throw Error(ErrorCode::Parse, "'sequences' must be an array");
      for (const auto& seq : *it) rec.sequences.push_back(read_sequence(seq, delimiter));
    } else if (auto kp = obj.find("keyphrases"); kp != obj.end()) {
      rec.sequences.push_back(read_sequence(*kp, delimiter));
    } else {
      throw Error(ErrorCode::Parse, "record needs 'sequences' or 'keyphrases'");
    }
    if (rec.sequences.empty()) rec.sequences.emplace_back();
    if (!ids.insert(rec.doc_id).second)
      throw Error(ErrorCode::Parse, "duplicate prediction record for '" + rec.doc_id + "'");
    records.push_back(std::move(rec));
  });
  return records;
}

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path, const std::string& delimiter) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read predictions file " + path.string());
  return parse_predictions(in, delimiter);
}

RankedPredictions majority_vote(const PredictionRecord& record) {
  struct Tally {
    std::size_t votes = 0;
    std::size_t position_sum = 0;
  };
  std::unordered_map<std::string, Tally> tally;
  for (const auto& sequence : record.sequences) {
    std::unordered_set<std::string> seen;
    std::size_t position = 0;
    for (const auto& raw : sequence) {
      std::string phrase = textnorm::normalize(raw);
      if (phrase.empty() || !seen.insert(phrase).second) continue;
      ++position;
      Tally& t = tally[phrase];
      ++t.votes;
      t.position_sum += position;
    }
  }

  std::vector<std::pair<std::string, Tally>> entries(tally.begin(), tally.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second.votes != b.second.votes) return a.second.votes > b.second.votes;
    // mean positions compared without division
    std::size_t lhs = a.second.position_sum * b.second.votes;
    std::size_t rhs = b.second.position_sum * a.second.votes;
    if (lhs != rhs) return lhs < rhs;
    return a.first < b.first;
  });

  RankedPredictions out;
  out.doc_id = record.doc_id;
  out.keyphrases.reserve(entries.size());
  for (auto& [phrase, t] : entries) out.keyphrases.push_back({phrase, static_cast<double>(t.votes)});
  return out;
}

std::string render_rankings_jsonl(const std::vector<RankedPredictions>& rankings) {
  std::string out;
  for (const auto& r : rankings) {
    nlohmann::ordered_json j;
    j["id"] = r.doc_id;
    j["keyphrases"] = r.phrases();
    auto& scores = j["scores"] = nlohmann::ordered_json::array();
    for (const auto& k : r.keyphrases) scores.push_back(k.score);
    out += j.dump();
    out += '\n';
  }
  return out;
}

bool VerdictTable::add(const std::string& doc_id, const std::string& keyphrase, bool relevant) {
  return table_.emplace(std::make_pair(doc_id, keyphrase), relevant).second;
}

std::optional<bool> VerdictTable::find(const std::string& doc_id, const std::string& keyphrase) const {
  auto it = table_.find(std::make_pair(doc_id, keyphrase));
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

VerdictTable parse_verdicts(std::istream& in, std::optional<double> threshold) {
  VerdictTable table;
  for_each_json_line(in, [&](const json& obj) {
    std::string id = read_id(obj);
    auto kp = obj.find("keyphrase");
    if (kp == obj.end() || !kp->is_string()) throw Error(ErrorCode::Parse, "missing string field 'keyphrase'");
    bool relevant = false;
    if (auto rel = obj.find("relevant"); rel != obj.end()) {
      if (!rel->is_boolean()) throw Error(ErrorCode::Parse, "'relevant' must be true or false");
      relevant = rel->get<bool>();
    } else if (auto score = obj.find("score"); score != obj.end()) {
      if (!score->is_number()) throw Error(ErrorCode::Parse, "'score' must be a number");
      if (!threshold) throw Error(ErrorCode::InvalidArgument, "scored verdicts need a threshold");
      relevant = score->get<double>() >= *threshold;
    } else {
      throw Error(ErrorCode::Parse, "verdict needs 'relevant' or 'score'");
    }
    std::string key = textnorm::normalize(kp->get<std::string>());
    if (!table.add(id, key, relevant))
      throw Error(ErrorCode::Parse, "duplicate verdict for ('" + id + "', '" + key + "')");
  });
  return table;
}

VerdictTable load_verdicts(const std::filesystem::path& path, std::optional<double> threshold) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read verdict file " + path.string());
  return parse_verdicts(in, threshold);
}

MissingPolicy parse_missing_policy(std::string_view name) {
  if (name == "keep") return MissingPolicy::Keep;
  if (name == "drop") return MissingPolicy::Drop;
  throw Error(ErrorCode::InvalidArgument, "unknown missing policy '" + std::string(name) + "'");
}

FilterOutcome apply_filter(const RankedPredictions& predictions, const VerdictTable& verdicts,
                           MissingPolicy missing_policy) {
  FilterOutcome out;
  out.predictions.doc_id = predictions.doc_id;
  for (const auto& k : predictions.keyphrases) {
    auto verdict = verdicts.find(predictions.doc_id, k.phrase);
    bool keep;
    if (verdict) {
      keep = *verdict;
    } else {
      ++out.missing;
      keep = missing_policy == MissingPolicy::Keep;
    }
    if (keep)
      out.predictions.keyphrases.push_back(k);
    else
      ++out.removed;
  }
  return out;
}

}  // namespace kpkit::aggregate
