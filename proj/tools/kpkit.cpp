// kpkit command line front end. Everything goes through the C API.

#include <kpkit/kpkit.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kUsageExit = 64;

struct Failure {
  kpk_status status;
  std::string message;
};

void check(kpk_status status) {
  if (status != KPK_OK) throw Failure{status, kpk_last_error()};
}

template <auto Free>
struct Deleter {
  template <typename T>
  void operator()(T* p) const {
    Free(p);
  }
};

using Corpus = std::unique_ptr<kpk_corpus, Deleter<kpk_corpus_free>>;
using Predictions = std::unique_ptr<kpk_predictions, Deleter<kpk_predictions_free>>;
using Rankings = std::unique_ptr<kpk_rankings, Deleter<kpk_rankings_free>>;
using Verdicts = std::unique_ptr<kpk_verdicts, Deleter<kpk_verdicts_free>>;
using Eval = std::unique_ptr<kpk_eval, Deleter<kpk_eval_free>>;
using Scores = std::unique_ptr<kpk_scores, Deleter<kpk_scores_free>>;
using Hsd = std::unique_ptr<kpk_hsd, Deleter<kpk_hsd_free>>;
using Graph = std::unique_ptr<kpk_graph, Deleter<kpk_graph_free>>;
using Examples = std::unique_ptr<kpk_examples, Deleter<kpk_examples_free>>;

// Calls fn(&raw) and returns the string result.
template <typename Fn>
std::string fetch(Fn&& fn) {
  kpk_string* raw = nullptr;
  check(fn(&raw));
  std::string out(kpk_string_data(raw), kpk_string_size(raw));
  kpk_string_free(raw);
  return out;
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

// Provenance block shared by every output.
class Meta {
 public:
  explicit Meta(std::string command) : command_(std::move(command)) {}

  ordered_json& config() { return config_; }

  void input(const std::string& role, const std::string& path) {
    std::string digest = fetch([&](kpk_string** out) { return kpk_file_sha256(path.c_str(), out); });
    inputs_.push_back({{"role", role}, {"path", path}, {"sha256", digest}});
  }

  void summary(const std::string& key, ordered_json value) { summary_[key] = std::move(value); }

  ordered_json to_json() const {
    ordered_json j;
    j["tool"] = "kpkit";
    j["version"] = kpk_version();
    j["command"] = command_;
    j["config"] = config_.is_null() ? ordered_json::object() : config_;
    j["inputs"] = inputs_.is_null() ? ordered_json::array() : inputs_;
    if (!summary_.is_null()) j["summary"] = summary_;
    return j;
  }

  std::string hash_header() const {
    std::string out = "# kpkit " + std::string(kpk_version()) + " " + command_ + "\n";
    out += "# config " + to_json()["config"].dump() + "\n";
    for (const auto& in : inputs_) {
      out += "# input " + in["role"].get<std::string>() + " " + in["path"].get<std::string>() + " sha256:" +
             in["sha256"].get<std::string>() + "\n";
    }
    if (!summary_.is_null()) out += "# summary " + summary_.dump() + "\n";
    return out;
  }

 private:
  std::string command_;
  ordered_json config_;
  ordered_json inputs_;
  ordered_json summary_;
};

enum class Layout { Table, Json, JsonLines };

std::string with_meta(const Meta& meta, Layout layout, const std::string& body) {
  switch (layout) {
    case Layout::Table:
      return meta.hash_header() + body;
    case Layout::Json: {
      ordered_json j;
      j["meta"] = meta.to_json();
      j["results"] = ordered_json::parse(body);
      return j.dump(2) + "\n";
    }
    case Layout::JsonLines:
      return ordered_json{{"_meta", meta.to_json()}}.dump() + "\n" + body;
  }
  return body;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{KPK_ERR_IO, "cannot write " + path};
  out << content;
  if (!out) throw Failure{KPK_ERR_IO, "write failed for " + path};
}

kpk_format to_format(const std::string& name) {
  if (name == "tsv") return KPK_FORMAT_TSV;
  if (name == "json") return KPK_FORMAT_JSON;
  return KPK_FORMAT_TEXT;
}

Layout layout_for(kpk_format f) { return f == KPK_FORMAT_JSON ? Layout::Json : Layout::Table; }

Corpus load_corpus(const std::string& path, std::size_t tolerance) {
  kpk_corpus* raw = nullptr;
  check(kpk_corpus_load(path.c_str(), tolerance, &raw));
  return Corpus(raw);
}

Predictions load_predictions(const std::string& path, const std::string& delimiter) {
  kpk_predictions* raw = nullptr;
  check(kpk_predictions_load(path.c_str(), delimiter.c_str(), &raw));
  return Predictions(raw);
}

Rankings vote(const kpk_predictions* p, unsigned threads) {
  kpk_rankings* raw = nullptr;
  check(kpk_rankings_vote(p, threads, &raw));
  return Rankings(raw);
}

Verdicts load_verdicts(const std::string& path, std::optional<double> threshold) {
  kpk_verdicts* raw = nullptr;
  check(kpk_verdicts_load(path.c_str(), threshold ? &*threshold : nullptr, &raw));
  return Verdicts(raw);
}

Graph build_graph(const kpk_corpus* corpus) {
  kpk_graph* raw = nullptr;
  check(kpk_graph_build(corpus, &raw));
  return Graph(raw);
}

// Options every subcommand may carry.
struct Common {
  std::string output;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-o,--output", c.output, "Output file (default: stdout)");
  cmd->add_option("--threads", c.threads, "Worker threads (0: available parallelism)");
}

// ---- stats ----

struct StatsArgs {
  Common common;
  std::string corpus;
  std::string dataset = "dataset";
  std::string format = "tsv";
  std::size_t tolerance = 0;
};

void run_stats(const StatsArgs& a) {
  Meta meta("stats");
  meta.config() = {{"dataset", a.dataset}, {"format", a.format}, {"malformed_tolerance", a.tolerance}};
  meta.input("corpus", a.corpus);
  auto corpus = load_corpus(a.corpus, a.tolerance);
  kpk_corpus_stats stats{};
  check(kpk_corpus_stats_compute(corpus.get(), a.common.threads, &stats));
  meta.summary("duplicate_keyphrases", kpk_corpus_duplicate_keyphrases(corpus.get()));
  meta.summary("skipped_lines", kpk_corpus_skipped_lines(corpus.get()));
  auto fmt = to_format(a.format);
  std::string body = fetch([&](kpk_string** out) {
    return kpk_corpus_stats_render(&stats, a.dataset.c_str(), fmt, out);
  });
  write_output(a.common.output, with_meta(meta, layout_for(fmt), body));
}

// ---- normalize ----

struct NormalizeArgs {
  std::vector<std::string> text;
  bool show_stems = false;
};

void run_normalize(const NormalizeArgs& a) {
  auto one = [&](const std::string& raw) {
    std::string norm = fetch([&](kpk_string** out) { return kpk_normalize(raw.c_str(), out); });
    std::cout << raw << '\t' << norm;
    if (a.show_stems) {
      std::string stem = fetch([&](kpk_string** out) { return kpk_stem_phrase(norm.c_str(), out); });
      std::cout << '\t' << stem;
    }
    std::cout << '\n';
  };
  if (!a.text.empty()) {
    for (const auto& t : a.text) one(t);
    return;
  }
  std::string line;
  while (std::getline(std::cin, line)) one(line);
}

// ---- eval ----

struct EvalArgs {
  Common common;
  std::string corpus;
  std::vector<std::string> predictions;
  std::string dataset = "dataset";
  std::vector<std::string> cutoffs{"5", "O"};
  std::vector<std::string> matchers{"exact", "partial"};
  std::vector<std::string> subsets{"present", "absent", "all"};
  std::string delimiter = ";";
  std::size_t max_unknown_ids = 0;
  std::size_t tolerance = 0;
  std::string dump_scores;
  std::string dump_matches;
  std::string format = "tsv";
};

void run_eval(const EvalArgs& a) {
  Meta meta("eval");
  std::vector<std::string> names, paths;
  for (const auto& spec : a.predictions) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) {
      names.push_back(std::filesystem::path(spec).stem().string());
      paths.push_back(spec);
    } else {
      names.push_back(spec.substr(0, eq));
      paths.push_back(spec.substr(eq + 1));
    }
    if (names.back().empty()) throw Failure{KPK_ERR_INVALID_ARGUMENT, "empty system name in '" + spec + "'"};
  }
  meta.config() = {{"dataset", a.dataset},
                   {"systems", names},
                   {"cutoffs", a.cutoffs},
                   {"matchers", a.matchers},
                   {"subsets", a.subsets},
                   {"delimiter", a.delimiter},
                   {"max_unknown_ids", a.max_unknown_ids},
                   {"malformed_tolerance", a.tolerance},
                   {"format", a.format}};
  meta.input("corpus", a.corpus);
  for (std::size_t i = 0; i < paths.size(); ++i) meta.input("predictions:" + names[i], paths[i]);

  auto corpus = load_corpus(a.corpus, a.tolerance);
  std::vector<Predictions> owned;
  std::vector<const kpk_predictions*> systems;
  for (const auto& p : paths) {
    owned.push_back(load_predictions(p, a.delimiter));
    systems.push_back(owned.back().get());
  }
  auto cutoffs = c_strings(a.cutoffs);
  auto matchers = c_strings(a.matchers);
  auto subsets = c_strings(a.subsets);
  auto c_names = c_strings(names);

  kpk_eval_options options;
  kpk_eval_options_init(&options);
  options.dataset = a.dataset.c_str();
  options.cutoffs = cutoffs.data();
  options.n_cutoffs = cutoffs.size();
  options.matchers = matchers.data();
  options.n_matchers = matchers.size();
  options.subsets = subsets.data();
  options.n_subsets = subsets.size();
  options.max_unknown_ids = a.max_unknown_ids;
  options.keep_match_reports = a.dump_matches.empty() ? 0 : 1;
  options.threads = a.common.threads;

  kpk_eval* raw = nullptr;
  check(kpk_eval_run(corpus.get(), systems.data(), c_names.data(), systems.size(), &options, &raw));
  Eval eval(raw);

  auto fmt = to_format(a.format);
  std::string body = fetch([&](kpk_string** out) { return kpk_eval_render(eval.get(), fmt, out); });
  write_output(a.common.output, with_meta(meta, layout_for(fmt), body));
  if (!a.dump_scores.empty()) {
    std::string dump = fetch([&](kpk_string** out) { return kpk_eval_render_scores(eval.get(), out); });
    write_output(a.dump_scores, with_meta(meta, Layout::Table, dump));
  }
  if (!a.dump_matches.empty()) {
    std::string dump = fetch([&](kpk_string** out) { return kpk_eval_render_matches(eval.get(), out); });
    write_output(a.dump_matches, with_meta(meta, Layout::JsonLines, dump));
  }
}

// ---- vote ----

struct VoteArgs {
  Common common;
  std::string predictions;
  std::string delimiter = ";";
};

void run_vote(const VoteArgs& a) {
  Meta meta("vote");
  meta.config() = {{"delimiter", a.delimiter}};
  meta.input("predictions", a.predictions);
  auto preds = load_predictions(a.predictions, a.delimiter);
  auto ranked = vote(preds.get(), a.common.threads);
  std::string body = fetch([&](kpk_string** out) { return kpk_rankings_render(ranked.get(), out); });
  write_output(a.common.output, with_meta(meta, Layout::JsonLines, body));
}

// ---- filter ----

struct FilterArgs {
  Common common;
  std::string predictions;
  std::string verdicts;
  std::optional<double> threshold;
  std::string missing_policy = "keep";
  std::string delimiter = ";";
};

void run_filter(const FilterArgs& a) {
  Meta meta("filter");
  meta.config() = {{"missing_policy", a.missing_policy}, {"delimiter", a.delimiter}};
  meta.config()["threshold"] = a.threshold ? ordered_json(*a.threshold) : ordered_json(nullptr);
  meta.input("predictions", a.predictions);
  meta.input("verdicts", a.verdicts);
  auto preds = load_predictions(a.predictions, a.delimiter);
  auto ranked = vote(preds.get(), a.common.threads);
  auto verdicts = load_verdicts(a.verdicts, a.threshold);
  kpk_rankings* raw = nullptr;
  std::size_t removed = 0, missing = 0;
  auto policy = a.missing_policy == "drop" ? KPK_MISSING_DROP : KPK_MISSING_KEEP;
  check(kpk_rankings_filter(ranked.get(), verdicts.get(), policy, &raw, &removed, &missing));
  Rankings filtered(raw);
  meta.summary("removed", removed);
  meta.summary("missing_verdicts", missing);
  std::string body = fetch([&](kpk_string** out) { return kpk_rankings_render(filtered.get(), out); });
  write_output(a.common.output, with_meta(meta, Layout::JsonLines, body));
}

// ---- binary-eval ----

struct BinaryArgs {
  Common common;
  std::string examples;
  std::string verdicts;
  std::optional<double> threshold;
  std::string format = "text";
};

void run_binary_eval(const BinaryArgs& a) {
  Meta meta("binary-eval");
  meta.config() = {{"format", a.format}};
  meta.config()["threshold"] = a.threshold ? ordered_json(*a.threshold) : ordered_json(nullptr);
  meta.input("examples", a.examples);
  meta.input("verdicts", a.verdicts);
  auto verdicts = load_verdicts(a.verdicts, a.threshold);
  kpk_confusion confusion{};
  check(kpk_binary_eval_files(a.examples.c_str(), verdicts.get(), &confusion));
  auto fmt = to_format(a.format);
  std::string body = fetch([&](kpk_string** out) { return kpk_confusion_render(&confusion, fmt, out); });
  write_output(a.common.output, with_meta(meta, layout_for(fmt), body));
}

// ---- sample ----

struct SampleArgs {
  Common common;
  std::string corpus;
  std::size_t tolerance = 0;
  std::uint64_t seed = 0;
  std::size_t ratio = 1;
  std::string predictions;
  std::string delimiter = ";";
  std::size_t soft = 1;
  std::size_t hard = 1;
  std::string example_format = "pairs-tsv";
  std::size_t token_budget = 512;
  bool sorted = false;
  std::string task_prefix = "Generate keyphrases:";
};

void write_examples(Meta& meta, const SampleArgs& a, const kpk_corpus* corpus, const kpk_examples* examples) {
  kpk_sample_diagnostics d{};
  kpk_examples_diagnostics(examples, &d);
  meta.summary("examples", kpk_examples_size(examples));
  meta.summary("positives_using_fallback", d.positives_using_fallback);
  meta.summary("soft_shortfall", d.soft_shortfall);
  meta.summary("hard_shortfall", d.hard_shortfall);
  auto fmt = a.example_format == "prompt-text" ? KPK_EXAMPLES_PROMPT_TEXT : KPK_EXAMPLES_PAIRS_TSV;
  std::string body = fetch([&](kpk_string** out) {
    return kpk_examples_render(examples, corpus, fmt, a.token_budget, out);
  });
  write_output(a.common.output, with_meta(meta, Layout::Table, body));
}

void run_sample_soft(const SampleArgs& a) {
  Meta meta("sample soft");
  meta.config() = {{"seed", a.seed},
                   {"ratio", a.ratio},
                   {"example_format", a.example_format},
                   {"token_budget", a.token_budget},
                   {"malformed_tolerance", a.tolerance}};
  meta.input("corpus", a.corpus);
  auto corpus = load_corpus(a.corpus, a.tolerance);
  auto graph = build_graph(corpus.get());
  kpk_examples* raw = nullptr;
  check(kpk_sample_soft(corpus.get(), graph.get(), a.ratio, a.seed, a.common.threads, &raw));
  Examples examples(raw);
  write_examples(meta, a, corpus.get(), examples.get());
}

void run_sample_mixed(const SampleArgs& a) {
  Meta meta("sample mixed");
  meta.config() = {{"seed", a.seed},
                   {"soft", a.soft},
                   {"hard", a.hard},
                   {"delimiter", a.delimiter},
                   {"example_format", a.example_format},
                   {"token_budget", a.token_budget},
                   {"malformed_tolerance", a.tolerance}};
  meta.input("corpus", a.corpus);
  meta.input("predictions", a.predictions);
  auto corpus = load_corpus(a.corpus, a.tolerance);
  auto graph = build_graph(corpus.get());
  auto preds = load_predictions(a.predictions, a.delimiter);
  auto ranked = vote(preds.get(), a.common.threads);
  kpk_examples* raw = nullptr;
  check(kpk_sample_mixed(corpus.get(), graph.get(), ranked.get(), a.soft, a.hard, a.seed, a.common.threads, &raw));
  Examples examples(raw);
  write_examples(meta, a, corpus.get(), examples.get());
}

void run_sample_gen(const SampleArgs& a) {
  Meta meta("sample gen");
  meta.config() = {{"sorted", a.sorted},
                   {"delimiter", a.delimiter},
                   {"task_prefix", a.task_prefix},
                   {"token_budget", a.token_budget},
                   {"malformed_tolerance", a.tolerance}};
  meta.input("corpus", a.corpus);
  auto corpus = load_corpus(a.corpus, a.tolerance);
  kpk_generation_options options;
  kpk_generation_options_init(&options);
  options.sorted_variant = a.sorted ? 1 : 0;
  options.delimiter = a.delimiter.c_str();
  options.task_prefix = a.task_prefix.c_str();
  options.token_budget = a.token_budget;
  options.threads = a.common.threads;
  std::string body = fetch([&](kpk_string** out) {
    return kpk_generation_examples_render(corpus.get(), &options, out);
  });
  write_output(a.common.output, with_meta(meta, Layout::JsonLines, body));
}

// ---- hsd ----

struct HsdArgs {
  Common common;
  std::vector<std::string> inputs;
  std::string subset = "all";
  std::string matcher = "exact";
  std::string cutoff = "5";
  std::uint64_t permutations = 1000000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::string format = "tsv";
  std::string letters;
};

void run_hsd(const HsdArgs& a) {
  Meta meta("hsd");
  meta.config() = {{"subset", a.subset},   {"matcher", a.matcher}, {"cutoff", a.cutoff},
                   {"permutations", a.permutations}, {"alpha", a.alpha}, {"seed", a.seed},
                   {"format", a.format}};
  for (const auto& in : a.inputs) meta.input("scores", in);
  auto paths = c_strings(a.inputs);
  kpk_scores* raw_scores = nullptr;
  check(kpk_scores_load(paths.data(), paths.size(), a.subset.c_str(), a.matcher.c_str(), a.cutoff.c_str(),
                        &raw_scores));
  Scores scores(raw_scores);
  kpk_hsd_options options;
  kpk_hsd_options_init(&options);
  options.permutations = a.permutations;
  options.alpha = a.alpha;
  options.seed = a.seed;
  options.threads = a.common.threads;
  kpk_hsd* raw = nullptr;
  check(kpk_hsd_run(scores.get(), &options, &raw));
  Hsd hsd(raw);
  meta.summary("degenerate", kpk_hsd_degenerate(hsd.get()) != 0);
  auto fmt = to_format(a.format);
  std::string body = fetch([&](kpk_string** out) { return kpk_hsd_render(hsd.get(), fmt, out); });
  write_output(a.common.output, with_meta(meta, layout_for(fmt), body));
  if (!a.letters.empty()) {
    std::string letters = fetch([&](kpk_string** out) { return kpk_hsd_render_letters(hsd.get(), out); });
    write_output(a.letters, with_meta(meta, Layout::Table, letters));
  }
}

void report_error(const std::string& code, const std::string& message) {
  ordered_json j;
  j["error"] = {{"code", code}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Keyphrase evaluation, aggregation, sampling and significance toolkit", "kpkit"};
  app.set_version_flag("--version", std::string(kpk_version()));
  app.require_subcommand(1);

  const std::vector<std::string> table_formats{"tsv", "json"};
  const std::vector<std::string> text_formats{"tsv", "json", "text"};

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics (absent ratio)");
  stats_cmd->add_option("corpus", stats.corpus, "Corpus JSON-lines file")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--dataset", stats.dataset, "Dataset label");
  stats_cmd->add_option("--format", stats.format)->check(CLI::IsMember(text_formats));
  stats_cmd->add_option("--malformed-tolerance", stats.tolerance, "Malformed lines to skip before failing");
  add_common(stats_cmd, stats.common);

  NormalizeArgs normalize;
  auto* norm_cmd = app.add_subcommand("normalize", "Print normalized forms (reads stdin when no text given)");
  norm_cmd->add_option("text", normalize.text);
  norm_cmd->add_flag("--show-stems", normalize.show_stems, "Also print the stemmed form");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "F1@k for exact/partial matching over present/absent/all");
  eval_cmd->add_option("--corpus", eval.corpus)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--predictions", eval.predictions, "name=path, repeatable")->required();
  eval_cmd->add_option("--dataset", eval.dataset);
  eval_cmd->add_option("--cutoff", eval.cutoffs, "k, O or all; repeatable")->delimiter(',');
  eval_cmd->add_option("--matcher", eval.matchers)->delimiter(',')->check(CLI::IsMember({"exact", "partial"}));
  eval_cmd->add_option("--subset", eval.subsets)
      ->delimiter(',')
      ->check(CLI::IsMember({"present", "absent", "all"}));
  eval_cmd->add_option("--delimiter", eval.delimiter, "Separator inside flat prediction strings");
  eval_cmd->add_option("--max-unknown-ids", eval.max_unknown_ids);
  eval_cmd->add_option("--malformed-tolerance", eval.tolerance);
  eval_cmd->add_option("--dump-scores", eval.dump_scores, "Per-document scores (TSV)");
  eval_cmd->add_option("--dump-matches", eval.dump_matches, "Per-document match reports (JSON-lines)");
  eval_cmd->add_option("--format", eval.format)->check(CLI::IsMember(table_formats));
  add_common(eval_cmd, eval.common);

  VoteArgs vote_args;
  auto* vote_cmd = app.add_subcommand("vote", "Majority voting over generated sequences");
  vote_cmd->add_option("predictions", vote_args.predictions)->required()->check(CLI::ExistingFile);
  vote_cmd->add_option("--delimiter", vote_args.delimiter);
  add_common(vote_cmd, vote_args.common);

  FilterArgs filter;
  auto* filter_cmd = app.add_subcommand("filter", "Drop predictions judged irrelevant");
  filter_cmd->add_option("predictions", filter.predictions)->required()->check(CLI::ExistingFile);
  filter_cmd->add_option("--verdicts", filter.verdicts)->required()->check(CLI::ExistingFile);
  filter_cmd->add_option("--threshold", filter.threshold, "Score threshold for scored verdicts");
  filter_cmd->add_option("--missing-policy", filter.missing_policy)->check(CLI::IsMember({"keep", "drop"}));
  filter_cmd->add_option("--delimiter", filter.delimiter);
  add_common(filter_cmd, filter.common);

  BinaryArgs binary;
  auto* binary_cmd = app.add_subcommand("binary-eval", "Accuracy and confusion matrix of filter verdicts");
  binary_cmd->add_option("examples", binary.examples, "Labelled pairs-tsv file")
      ->required()
      ->check(CLI::ExistingFile);
  binary_cmd->add_option("--verdicts", binary.verdicts)->required()->check(CLI::ExistingFile);
  binary_cmd->add_option("--threshold", binary.threshold);
  binary_cmd->add_option("--format", binary.format)->check(CLI::IsMember(text_formats));
  add_common(binary_cmd, binary.common);

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Training data generation");
  sample_cmd->require_subcommand(1);
  auto add_sample_common = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", sample.corpus)->required()->check(CLI::ExistingFile);
    cmd->add_option("--malformed-tolerance", sample.tolerance);
    cmd->add_option("--token-budget", sample.token_budget);
    add_common(cmd, sample.common);
  };
  auto add_filter_format = [&](CLI::App* cmd) {
    cmd->add_option("--seed", sample.seed);
    cmd->add_option("--example-format", sample.example_format)
        ->check(CLI::IsMember({"pairs-tsv", "prompt-text"}));
  };
  auto* gen_cmd = sample_cmd->add_subcommand("gen", "Generator training pairs");
  add_sample_common(gen_cmd);
  gen_cmd->add_flag("--sorted", sample.sorted, "Present keyphrases before absent ones");
  gen_cmd->add_option("--delimiter", sample.delimiter);
  gen_cmd->add_option("--task-prefix", sample.task_prefix);
  auto* soft_cmd = sample_cmd->add_subcommand("soft", "Filter examples with soft negatives");
  add_sample_common(soft_cmd);
  add_filter_format(soft_cmd);
  soft_cmd->add_option("--ratio", sample.ratio, "Negatives per positive")->check(CLI::PositiveNumber);
  auto* mixed_cmd = sample_cmd->add_subcommand("mixed", "Filter examples with soft and hard negatives");
  add_sample_common(mixed_cmd);
  add_filter_format(mixed_cmd);
  mixed_cmd->add_option("--predictions", sample.predictions, "Model predictions for hard negatives")
      ->required()
      ->check(CLI::ExistingFile);
  mixed_cmd->add_option("--delimiter", sample.delimiter);
  mixed_cmd->add_option("--soft", sample.soft, "Soft negatives per positive");
  mixed_cmd->add_option("--hard", sample.hard, "Hard negatives per positive");

  HsdArgs hsd;
  auto* hsd_cmd = app.add_subcommand("hsd", "Randomized Tukey HSD over per-document scores");
  hsd_cmd->add_option("scores", hsd.inputs, "Score dumps, wide TSV or JSON matrix")
      ->required()
      ->check(CLI::ExistingFile);
  hsd_cmd->add_option("--subset", hsd.subset)->check(CLI::IsMember({"present", "absent", "all"}));
  hsd_cmd->add_option("--matcher", hsd.matcher)->check(CLI::IsMember({"exact", "partial"}));
  hsd_cmd->add_option("--cutoff", hsd.cutoff);
  hsd_cmd->add_option("--permutations", hsd.permutations);
  hsd_cmd->add_option("--alpha", hsd.alpha);
  hsd_cmd->add_option("--seed", hsd.seed);
  hsd_cmd->add_option("--format", hsd.format)->check(CLI::IsMember(table_formats));
  hsd_cmd->add_option("--letters", hsd.letters, "Write the letters table here");
  add_common(hsd_cmd, hsd.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return kUsageExit;
  }

  try {
    if (*stats_cmd) run_stats(stats);
    else if (*norm_cmd) run_normalize(normalize);
    else if (*eval_cmd) run_eval(eval);
    else if (*vote_cmd) run_vote(vote_args);
    else if (*filter_cmd) run_filter(filter);
    else if (*binary_cmd) run_binary_eval(binary);
    else if (*gen_cmd) run_sample_gen(sample);
    else if (*soft_cmd) run_sample_soft(sample);
    else if (*mixed_cmd) run_sample_mixed(sample);
    else if (*hsd_cmd) run_hsd(hsd);
  } catch (const Failure& f) {
    report_error(kpk_status_name(f.status), f.message);
    return static_cast<int>(f.status);
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return static_cast<int>(KPK_ERR_INTERNAL);
  }
  return 0;
}
