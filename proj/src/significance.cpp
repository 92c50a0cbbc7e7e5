#include "significance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "error.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace kpkit::significance {

void validate(const ScoreMatrix& m) {
  if (m.cols() < 2) throw Error(ErrorCode::InvalidArgument, "score matrix needs at least 2 systems");
  if (m.rows() < 2) throw Error(ErrorCode::InvalidArgument, "score matrix needs at least 2 documents");
  if (m.scores.size() != m.rows() * m.cols())
    throw Error(ErrorCode::InvalidArgument, "score matrix has missing cells");
  for (double v : m.scores)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "score matrix contains a non-finite value");
  std::unordered_set<std::string> names(m.systems.begin(), m.systems.end());
  if (names.size() != m.systems.size()) throw Error(ErrorCode::InvalidArgument, "duplicate system name");
  std::unordered_set<std::string> docs(m.docs.begin(), m.docs.end());
  if (docs.size() != m.docs.size()) throw Error(ErrorCode::InvalidArgument, "duplicate document id");
}

HsdResult tukey_hsd(const ScoreMatrix& matrix, const HsdOptions& options) {
  validate(matrix);
  if (options.permutations < 1000) throw Error(ErrorCode::InvalidArgument, "permutations must be >= 1000");
  if (!(options.alpha > 0.0 && options.alpha < 1.0))
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");

  const std::size_t n = matrix.rows();
  const std::size_t m = matrix.cols();
  const std::uint64_t perms = options.permutations;

  HsdResult result;
  result.systems = matrix.systems;
  result.permutations = perms;
  result.alpha = options.alpha;
  result.seed = options.seed;
  result.p_values.assign(m * m, 1.0);

  // Work with column sums; differences of means are sums / n.
  std::vector<double> sums(m, 0.0);
  double max_abs = 0.0;
  bool degenerate = true;
  for (std::size_t r = 0; r < n; ++r) {
    const double* row = &matrix.scores[r * m];
    for (std::size_t c = 0; c < m; ++c) {
      sums[c] += row[c];
      max_abs = std::max(max_abs, std::abs(row[c]));
      if (row[c] != row[0]) degenerate = false;
    }
  }
  result.means.resize(m);
  for (std::size_t c = 0; c < m; ++c) result.means[c] = sums[c] / static_cast<double>(n);
  result.degenerate = degenerate;
  if (degenerate) return result;

  // Sums that are equal in exact arithmetic may differ in the last bits once
  // the summation order changes.
  const double tolerance = 1e-9 * max_abs * static_cast<double>(n);

  // Shuffle steps 1..m-1 draw from [0, i+1); consecutive steps are grouped so
  // that one 64-bit draw serves a whole group.
  struct Batch {
    std::size_t first = 1, count = 0;
    std::uint64_t product = 1;
  };
  std::vector<Batch> batches;
  std::vector<std::uint64_t> bounds(m);
  for (std::size_t i = 1; i < m; ++i) {
    bounds[i] = i + 1;
    if (batches.empty() || batches.back().product * (i + 1) > (std::uint64_t{1} << 32)) batches.push_back({i, 0, 1});
    batches.back().count += 1;
    batches.back().product *= i + 1;
  }

  // Permutations are generated in fixed blocks, each with its own stream, so
  // the statistics do not depend on how blocks are spread over threads.
  constexpr std::uint64_t block = 256;
  const std::uint64_t blocks = (perms + block - 1) / block;
  std::vector<double> stats(perms);
  parallel_for(blocks, options.threads, [&](std::size_t blk) {
    std::vector<double> colsum(m), shuffled(m);
    std::vector<std::uint64_t> draws(m);
    Rng rng(stream_seed(options.seed, blk));
    const std::uint64_t last = std::min<std::uint64_t>(perms, (blk + 1) * block);
    for (std::uint64_t b = blk * block; b < last; ++b) {
      std::fill(colsum.begin(), colsum.end(), 0.0);
      const double* row = matrix.scores.data();
      for (std::size_t r = 0; r < n; ++r, row += m) {
        for (const auto& batch : batches)
          bounded_uniform_batch(rng, &bounds[batch.first], batch.count, batch.product, &draws[batch.first]);
        // inside-out Fisher-Yates
        shuffled[0] = row[0];
        for (std::size_t i = 1; i < m; ++i) {
          std::size_t j = draws[i];
          shuffled[i] = shuffled[j];
          shuffled[j] = row[i];
        }
        for (std::size_t c = 0; c < m; ++c) colsum[c] += shuffled[c];
      }
      auto [lo, hi] = std::minmax_element(colsum.begin(), colsum.end());
      stats[b] = *hi - *lo;
    }
  });

  std::sort(stats.begin(), stats.end());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      double d = std::abs(sums[i] - sums[j]);
      auto first = std::lower_bound(stats.begin(), stats.end(), d - tolerance);
      auto exceed = static_cast<double>(stats.end() - first);
      double p = (exceed + 1.0) / (static_cast<double>(perms) + 1.0);
      result.p_values[i * m + j] = p;
      result.p_values[j * m + i] = p;
    }
  }
  return result;
}

std::string system_letter(std::size_t index) {
  if (index < 26) return std::string(1, static_cast<char>('a' + index));
  if (index < 52) return std::string(1, static_cast<char>('A' + index - 26));
  return "s" + std::to_string(index);
}

namespace {
std::string fmt_p(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", p);
  return buf;
}
}  // namespace

std::string render_pvalues_tsv(const HsdResult& r) {
  std::ostringstream out;
  out << "system";
  for (const auto& s : r.systems) out << '\t' << s;
  out << '\n';
  for (std::size_t i = 0; i < r.systems.size(); ++i) {
    out << r.systems[i];
    for (std::size_t j = 0; j < r.systems.size(); ++j) out << '\t' << (i == j ? std::string("-") : fmt_p(r.p(i, j)));
    out << '\n';
  }
  return out.str();
}

std::string render_letters_tsv(const HsdResult& r) {
  std::ostringstream out;
  out << "letter\tsystem\tmean\tbeats\n";
  for (std::size_t i = 0; i < r.systems.size(); ++i) {
    std::string beaten;
    for (std::size_t j = 0; j < r.systems.size(); ++j)
      if (r.beats(i, j)) beaten += system_letter(j);
    char mean[32];
    std::snprintf(mean, sizeof mean, "%.4f", r.means[i]);
    out << system_letter(i) << '\t' << r.systems[i] << '\t' << mean << '\t' << beaten << '\n';
  }
  return out.str();
}

std::string render_json(const HsdResult& r) {
  nlohmann::ordered_json j;
  j["permutations"] = r.permutations;
  j["alpha"] = r.alpha;
  j["seed"] = r.seed;
  j["degenerate"] = r.degenerate;
  auto& systems = j["systems"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.systems.size(); ++i) {
    std::string beaten;
    for (std::size_t k = 0; k < r.systems.size(); ++k)
      if (r.beats(i, k)) beaten += system_letter(k);
    systems.push_back({{"name", r.systems[i]}, {"letter", system_letter(i)}, {"mean", r.means[i]}, {"beats", beaten}});
  }
  auto& pairs = j["pairwise"] = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < r.systems.size(); ++a)
    for (std::size_t b = a + 1; b < r.systems.size(); ++b)
      pairs.push_back({{"a", r.systems[a]},
                       {"b", r.systems[b]},
                       {"p", r.p(a, b)},
                       {"significant", r.p(a, b) <= r.alpha}});
  return j.dump(2) + "\n";
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

bool skip_line(const std::string& line) { return line.empty() || line[0] == '#'; }

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "not a number: '" + s + "'");
  }
}

}  // namespace

ScoreMatrix parse_wide_tsv(std::istream& in) {
  ScoreMatrix m;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (skip_line(line)) continue;
    auto fields = split_tabs(line);
    if (!header) {
      if (fields.size() < 2) throw Error(ErrorCode::Parse, "score matrix header needs doc_id and systems");
      m.systems.assign(fields.begin() + 1, fields.end());
      header = true;
      continue;
    }
    if (fields.size() != m.systems.size() + 1)
      throw Error(ErrorCode::Parse, "row '" + fields[0] + "' has the wrong number of cells");
    m.docs.push_back(fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c) m.scores.push_back(parse_double(fields[c]));
  }
  validate(m);
  return m;
}

ScoreMatrix parse_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Parse, std::string("score matrix JSON: ") + e.what());
  }
  if (j.contains("results")) j = j["results"];
  ScoreMatrix m;
  try {
    m.systems = j.at("systems").get<std::vector<std::string>>();
    m.docs = j.at("docs").get<std::vector<std::string>>();
    for (const auto& row : j.at("scores")) {
      if (row.size() != m.systems.size()) throw Error(ErrorCode::Parse, "score row has the wrong number of cells");
      for (const auto& v : row) m.scores.push_back(v.get<double>());
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Parse, std::string("score matrix JSON: ") + e.what());
  }
  if (m.scores.size() != m.docs.size() * m.systems.size())
    throw Error(ErrorCode::Parse, "score matrix JSON: rows do not match docs");
  validate(m);
  return m;
}

ScoreMatrix parse_score_dump(const std::vector<std::istream*>& inputs, const DumpSelector& sel) {
  static const std::map<std::string, std::size_t> metric_column{{"precision", 5}, {"recall", 6}, {"f1", 7}};
  auto metric = metric_column.find(sel.metric);
  if (metric == metric_column.end()) throw Error(ErrorCode::InvalidArgument, "unknown metric '" + sel.metric + "'");

  ScoreMatrix m;
  std::unordered_map<std::string, std::size_t> sys_index, doc_index;
  std::map<std::pair<std::size_t, std::size_t>, double> cells;
  for (std::istream* in : inputs) {
    std::string line;
    while (std::getline(*in, line)) {
      if (skip_line(line)) continue;
      auto f = split_tabs(line);
      if (f.size() != 8) throw Error(ErrorCode::Parse, "score dump lines need 8 columns");
      if (f[0] == "system") continue;  // header
      if (f[2] != sel.subset || f[3] != sel.matcher || f[4] != sel.cutoff) continue;
      auto [s, new_sys] = sys_index.emplace(f[0], m.systems.size());
      if (new_sys) m.systems.push_back(f[0]);
      auto [d, new_doc] = doc_index.emplace(f[1], m.docs.size());
      if (new_doc) m.docs.push_back(f[1]);
      if (!cells.emplace(std::make_pair(d->second, s->second), parse_double(f[metric->second])).second)
        throw Error(ErrorCode::Parse, "duplicate score for system '" + f[0] + "' document '" + f[1] + "'");
    }
  }
  if (cells.size() != m.docs.size() * m.systems.size())
    throw Error(ErrorCode::InvalidArgument, "systems were not scored on the same documents");
  m.scores.resize(cells.size());
  for (const auto& [key, v] : cells) m.scores[key.first * m.systems.size() + key.second] = v;
  validate(m);
  return m;
}

ScoreMatrix load_score_matrix(const std::vector<std::filesystem::path>& paths, const DumpSelector& selector) {
  if (paths.empty()) throw Error(ErrorCode::InvalidArgument, "no score input given");
  std::vector<std::ifstream> files;
  files.reserve(paths.size());
  for (const auto& p : paths) {
    files.emplace_back(p);
    if (!files.back()) throw Error(ErrorCode::Io, "cannot read " + p.string());
  }

  // Sniff the first file.
  std::ifstream& first = files.front();
  std::string line;
  std::streampos start = first.tellg();
  while (std::getline(first, line) && skip_line(line)) {
  }
  first.clear();
  first.seekg(start);
  auto lead = line.find_first_not_of(" \t");
  bool is_json = lead != std::string::npos && line[lead] == '{';
  bool is_dump = !is_json && split_tabs(line).size() == 8 && split_tabs(line)[0] == "system";

  if (is_dump) {
    std::vector<std::istream*> streams;
    for (auto& f : files) streams.push_back(&f);
    return parse_score_dump(streams, selector);
  }
  if (paths.size() != 1) throw Error(ErrorCode::InvalidArgument, "only per-document dumps can be combined");
  return is_json ? parse_json(first) : parse_wide_tsv(first);
}

}  // namespace kpkit::significance
