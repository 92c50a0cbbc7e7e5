#include "report.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "error.hpp"
#include "parallel.hpp"
#include "textnorm.hpp"

namespace kpkit::report {

using matcher::Cutoff;
using matcher::MatcherKind;
using metrics::Subset;

namespace {

struct PreparedDoc {
  std::string stemmed_text;
  std::vector<std::string> golden_all, golden_present, golden_absent;  // stemmed, unique
};

PreparedDoc prepare(const corpus::Document& doc) {
  PreparedDoc p;
  p.stemmed_text = corpus::stemmed_text(doc);
  std::unordered_set<std::string> seen;
  for (const auto& k : doc.keyphrases) {
    std::string s = textnorm::normalize_and_stem(k);
    if (s.empty() || !seen.insert(s).second) continue;
    (corpus::is_present(s, p.stemmed_text) ? p.golden_present : p.golden_absent).push_back(s);
    p.golden_all.push_back(std::move(s));
  }
  return p;
}

const std::vector<std::string>& golden_for(const PreparedDoc& d, Subset s) {
  switch (s) {
    case Subset::Present:
      return d.golden_present;
    case Subset::Absent:
      return d.golden_absent;
    case Subset::All:
      break;
  }
  return d.golden_all;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string column_name(const std::string& dataset, const EvalCell& c) {
  return dataset + "/" + metrics::to_string(c.subset) + "/" + matcher::to_string(c.matcher) + "/F1@" +
         c.cutoff.label();
}

}  // namespace

EvalResult evaluate(const corpus::CorpusSplit& split, const std::vector<SystemPredictions>& systems,
                    const EvalOptions& options) {
  const auto& docs = split.documents;
  std::vector<PreparedDoc> prepared(docs.size());
  parallel_for(docs.size(), options.threads, [&](std::size_t i) { prepared[i] = prepare(docs[i]); });

  std::unordered_map<std::string, std::size_t> doc_index;
  for (std::size_t i = 0; i < docs.size(); ++i) doc_index.emplace(docs[i].id, i);

  std::vector<EvalCell> cell_template;
  for (Subset s : options.subsets)
    for (MatcherKind m : options.matchers)
      for (const Cutoff& c : options.cutoffs) {
        EvalCell cell;
        cell.subset = s;
        cell.matcher = m;
        cell.cutoff = c;
        cell_template.push_back(cell);
      }

  EvalResult result;
  result.dataset = options.dataset;
  for (const auto& system : systems) {
    SystemEval eval;
    eval.name = system.name;
    eval.cells = cell_template;

    std::vector<const aggregate::PredictionRecord*> record_of(docs.size(), nullptr);
    for (const auto& rec : system.records) {
      auto it = doc_index.find(rec.doc_id);
      if (it == doc_index.end())
        ++eval.unknown_ids;
      else
        record_of[it->second] = &rec;
    }
    if (eval.unknown_ids > options.max_unknown_ids)
      throw Error(ErrorCode::IdMismatch, "system '" + system.name + "': " + std::to_string(eval.unknown_ids) +
                                             " prediction ids are not in the corpus");

    // per document, per cell
    std::vector<std::vector<std::optional<metrics::DocScore>>> scores(docs.size());
    std::vector<std::vector<matcher::MatchReport>> reports(docs.size());
    parallel_for(docs.size(), options.threads, [&](std::size_t d) {
      const PreparedDoc& pd = prepared[d];
      std::vector<std::string> pred_all, pred_present, pred_absent;
      if (record_of[d]) {
        for (const auto& k : aggregate::majority_vote(*record_of[d]).keyphrases) {
          std::string s = textnorm::stem_phrase(k.phrase);
          if (s.empty()) continue;
          (corpus::is_present(s, pd.stemmed_text) ? pred_present : pred_absent).push_back(s);
          pred_all.push_back(std::move(s));
        }
      }
      auto& row = scores[d];
      row.reserve(cell_template.size());
      for (const auto& cell : cell_template) {
        const auto& golden = golden_for(pd, cell.subset);
        const auto& preds = cell.subset == Subset::Present  ? pred_present
                            : cell.subset == Subset::Absent ? pred_absent
                                                            : pred_all;
        matcher::MatchReport rep = matcher::match(cell.matcher, preds, golden, cell.cutoff);
        rep.doc_id = docs[d].id;
        row.push_back(metrics::score_document(rep, golden.size(), cell.subset));
        if (options.keep_match_reports) reports[d].push_back(std::move(rep));
      }
    });

    for (std::size_t d = 0; d < docs.size(); ++d) {
      if (!record_of[d]) ++eval.docs_without_predictions;
      for (std::size_t c = 0; c < eval.cells.size(); ++c) {
        if (scores[d][c])
          eval.cells[c].doc_scores.push_back(std::move(*scores[d][c]));
        else
          ++eval.cells[c].excluded;
      }
      if (options.keep_match_reports)
        for (std::size_t c = 0; c < reports[d].size(); ++c) eval.reports.push_back({c, std::move(reports[d][c])});
    }
    for (auto& cell : eval.cells)
      if (!cell.doc_scores.empty()) cell.summary = metrics::aggregate(cell.doc_scores);
    result.systems.push_back(std::move(eval));
  }
  return result;
}

std::string render_eval_tsv(const EvalResult& result) {
  std::ostringstream out;
  out << "system";
  if (!result.systems.empty())
    for (const auto& c : result.systems.front().cells) out << '\t' << column_name(result.dataset, c);
  out << '\n';
  for (const auto& s : result.systems) {
    out << s.name;
    for (const auto& c : s.cells) out << '\t' << (c.summary ? fmt("%.4f", c.summary->f1) : std::string("NA"));
    out << '\n';
  }
  return out.str();
}

std::string render_eval_json(const EvalResult& result) {
  nlohmann::ordered_json j;
  j["dataset"] = result.dataset;
  auto& systems = j["systems"] = nlohmann::ordered_json::array();
  for (const auto& s : result.systems) {
    nlohmann::ordered_json sj;
    sj["name"] = s.name;
    sj["unknown_ids"] = s.unknown_ids;
    sj["docs_without_predictions"] = s.docs_without_predictions;
    auto& cells = sj["results"] = nlohmann::ordered_json::array();
    for (const auto& c : s.cells) {
      nlohmann::ordered_json cj;
      cj["subset"] = metrics::to_string(c.subset);
      cj["matcher"] = matcher::to_string(c.matcher);
      cj["metric"] = "F1@" + c.cutoff.label();
      if (c.summary) {
        cj["precision"] = c.summary->precision;
        cj["recall"] = c.summary->recall;
        cj["f1"] = c.summary->f1;
      } else {
        cj["precision"] = nullptr;
        cj["recall"] = nullptr;
        cj["f1"] = nullptr;
      }
      cj["documents"] = c.doc_scores.size();
      cj["excluded"] = c.excluded;
      cells.push_back(std::move(cj));
    }
    systems.push_back(std::move(sj));
  }
  return j.dump(2) + "\n";
}

std::string render_score_dump(const EvalResult& result) {
  std::ostringstream out;
  out << "system\tdoc_id\tsubset\tmatcher\tcutoff\tprecision\trecall\tf1\n";
  for (const auto& s : result.systems)
    for (const auto& c : s.cells)
      for (const auto& d : c.doc_scores)
        out << s.name << '\t' << d.doc_id << '\t' << metrics::to_string(c.subset) << '\t'
            << matcher::to_string(c.matcher) << '\t' << c.cutoff.label() << '\t' << fmt("%.10g", d.precision) << '\t'
            << fmt("%.10g", d.recall) << '\t' << fmt("%.10g", d.f1) << '\n';
  return out.str();
}

std::string render_match_dump(const EvalResult& result) {
  std::string out;
  for (const auto& s : result.systems) {
    for (const auto& r : s.reports) {
      const EvalCell& c = s.cells[r.cell];
      nlohmann::ordered_json j;
      j["system"] = s.name;
      j["id"] = r.report.doc_id;
      j["subset"] = metrics::to_string(c.subset);
      j["matcher"] = matcher::to_string(c.matcher);
      j["cutoff"] = c.cutoff.label();
      auto& pairs = j["matched"] = nlohmann::ordered_json::array();
      for (const auto& [p, g] : r.report.matched_pairs) pairs.push_back({p, g});
      j["unmatched_predictions"] = r.report.unmatched_predictions;
      j["unmatched_golden"] = r.report.unmatched_golden;
      out += j.dump() + "\n";
    }
  }
  return out;
}

Format parse_format(std::string_view name) {
  if (name == "tsv") return Format::Tsv;
  if (name == "json") return Format::Json;
  if (name == "text") return Format::Text;
  throw Error(ErrorCode::InvalidArgument, "unknown format '" + std::string(name) + "'");
}

std::string render_stats(const std::string& dataset, const corpus::CorpusStats& s, Format format) {
  switch (format) {
    case Format::Json: {
      nlohmann::ordered_json j;
      j["dataset"] = dataset;
      j["docs"] = s.doc_count;
      j["keyphrases"] = s.keyphrase_count;
      j["absent_keyphrases"] = s.absent_count;
      j["mean_keyphrases_per_doc"] = s.mean_keyphrases_per_doc;
      j["absent_ratio"] = s.absent_ratio;
      return j.dump(2) + "\n";
    }
    case Format::Tsv:
      return "dataset\tdocs\tmean_keyphrases\tabsent_ratio\n" + dataset + "\t" + std::to_string(s.doc_count) + "\t" +
             fmt("%.4f", s.mean_keyphrases_per_doc) + "\t" + fmt("%.4f", s.absent_ratio) + "\n";
    case Format::Text:
      break;
  }
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-20s %10s %16s %13s\n%-20s %10zu %16.2f %13.4f\n", "dataset", "docs",
                "mean_keyphrases", "absent_ratio", dataset.c_str(), s.doc_count, s.mean_keyphrases_per_doc,
                s.absent_ratio);
  return buf;
}

std::vector<LabelledPair> parse_labelled_pairs(std::istream& in) {
  std::vector<LabelledPair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t a = line.find('\t');
    std::size_t b = a == std::string::npos ? a : line.find('\t', a + 1);
    if (b == std::string::npos || line.find('\t', b + 1) != std::string::npos)
      throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": expected doc_id, keyphrase, label");
    std::string label = line.substr(b + 1);
    if (label != "true" && label != "false")
      throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": label must be true or false");
    out.push_back({line.substr(0, a), line.substr(a + 1, b - a - 1), label == "true"});
  }
  return out;
}

std::vector<LabelledPair> load_labelled_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  return parse_labelled_pairs(in);
}

BinaryEvalReport binary_eval(const std::vector<LabelledPair>& pairs, const aggregate::VerdictTable& verdicts) {
  BinaryEvalReport report;
  std::vector<metrics::Verdict> joined;
  joined.reserve(pairs.size());
  for (const auto& p : pairs) {
    auto v = verdicts.find(p.doc_id, textnorm::normalize(p.keyphrase));
    if (!v) {
      ++report.missing_verdicts;
      continue;
    }
    joined.push_back({p.label, *v});
  }
  report.result = metrics::binary_eval(joined);
  return report;
}

std::string render_binary_eval(const BinaryEvalReport& report, Format format) {
  const auto& r = report.result;
  const auto& c = r.confusion;
  switch (format) {
    case Format::Json: {
      nlohmann::ordered_json j;
      j["accuracy"] = r.accuracy;
      j["tp"] = c.tp;
      j["fp"] = c.fp;
      j["tn"] = c.tn;
      j["fn"] = c.fn;
      j["columns"] = {"predicted_true", "predicted_false"};
      j["rows"] = {{"true", {c.true_row_true(), c.true_row_false()}}, {"false", {c.false_row_true(), c.false_row_false()}}};
      j["missing_verdicts"] = report.missing_verdicts;
      return j.dump(2) + "\n";
    }
    case Format::Tsv: {
      std::string out = "label\tpredicted_true\tpredicted_false\tcount_true\tcount_false\n";
      out += "true\t" + fmt("%.4f", c.true_row_true()) + "\t" + fmt("%.4f", c.true_row_false()) + "\t" +
             std::to_string(c.tp) + "\t" + std::to_string(c.fn) + "\n";
      out += "false\t" + fmt("%.4f", c.false_row_true()) + "\t" + fmt("%.4f", c.false_row_false()) + "\t" +
             std::to_string(c.fp) + "\t" + std::to_string(c.tn) + "\n";
      out += "accuracy\t" + fmt("%.4f", r.accuracy) + "\t\t\t\n";
      return out;
    }
    case Format::Text:
      break;
  }
  return metrics::render_confusion_grid(r);
}

}  // namespace kpkit::report
