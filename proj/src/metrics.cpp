#include "metrics.hpp"

#include <cstdio>

#include "error.hpp"

namespace kpkit::metrics {

const char* to_string(Subset subset) noexcept {
  switch (subset) {
    case Subset::Present:
      return "present";
    case Subset::Absent:
      return "absent";
    case Subset::All:
      break;
  }
  return "all";
}

Subset parse_subset(std::string_view name) {
  if (name == "present") return Subset::Present;
  if (name == "absent") return Subset::Absent;
  if (name == "all") return Subset::All;
  throw Error(ErrorCode::InvalidArgument, "unknown subset '" + std::string(name) + "'");
}

double f1_score(double precision, double recall) noexcept {
  double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

std::optional<DocScore> score_document(const matcher::MatchReport& report, std::size_t golden_size, Subset subset) {
  if (golden_size == 0) return std::nullopt;
  DocScore s;
  s.doc_id = report.doc_id;
  s.cutoff = report.cutoff.label();
  s.matcher = report.kind;
  s.subset = subset;
  s.matched = report.matched_pairs.size();
  s.considered = report.considered();
  s.golden = golden_size;
  s.precision = s.considered == 0 ? 0.0 : static_cast<double>(s.matched) / static_cast<double>(s.considered);
  s.recall = static_cast<double>(s.matched) / static_cast<double>(golden_size);
  s.f1 = f1_score(s.precision, s.recall);
  return s;
}

Summary aggregate(std::span<const DocScore> scores) {
  if (scores.empty()) throw Error(ErrorCode::Empty, "no document scores to aggregate");
  Summary out;
  for (const auto& s : scores) {
    out.precision += s.precision;
    out.recall += s.recall;
    out.f1 += s.f1;
  }
  auto n = static_cast<double>(scores.size());
  out.precision /= n;
  out.recall /= n;
  out.f1 /= n;
  out.documents = scores.size();
  return out;
}

namespace {
double rate(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
}
}  // namespace

double ConfusionMatrix::true_row_true() const noexcept { return rate(tp, positives()); }
double ConfusionMatrix::true_row_false() const noexcept { return rate(fn, positives()); }
double ConfusionMatrix::false_row_true() const noexcept { return rate(fp, negatives()); }
double ConfusionMatrix::false_row_false() const noexcept { return rate(tn, negatives()); }

BinaryEvalResult binary_eval(std::span<const Verdict> verdicts) {
  if (verdicts.empty()) throw Error(ErrorCode::Empty, "no verdicts to evaluate");
  BinaryEvalResult r;
  for (const auto& v : verdicts) {
    if (v.label)
      ++(v.predicted ? r.confusion.tp : r.confusion.fn);
    else
      ++(v.predicted ? r.confusion.fp : r.confusion.tn);
  }
  r.accuracy = rate(r.confusion.tp + r.confusion.tn, r.confusion.total());
  return r;
}

std::string render_confusion_grid(const BinaryEvalResult& result) {
  const auto& c = result.confusion;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "accuracy %.4f\n"
                "%-12s %10s %10s\n"
                "%-12s %10.4f %10.4f\n"
                "%-12s %10.4f %10.4f\n"
                "%-12s %10zu %10zu\n"
                "%-12s %10zu %10zu\n",
                result.accuracy, "label\\pred", "true", "false",  //
                "true", c.true_row_true(), c.true_row_false(),    //
                "false", c.false_row_true(), c.false_row_false(), //
                "true (n)", c.tp, c.fn,                            //
                "false (n)", c.fp, c.tn);
  return buf;
}

}  // namespace kpkit::metrics
