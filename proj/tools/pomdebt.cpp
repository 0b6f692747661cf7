// pomdebt: command-line front end over the pomdebt library.
//
//   scan       build files under --root -> comment JSONL
//   detect     --root or comment JSONL -> SATD JSONL + corpus summary
//   train      coded corpus -> model file
//   eval       coded corpus -> classifier comparison table
//   classify   model + SATD JSONL -> records with predictions
//   readiness  SATD JSONL + forge fixtures (or --live) -> verdict JSONL + drafts
//   report     records -> frequency tables, co-occurrence CSVs, summary
//
// Exit status: 0 success, 1 partial (skipped inputs), 2 fatal or usage error.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pomdebt/corpus.hpp"
#include "pomdebt/error.hpp"
#include "pomdebt/forge.hpp"
#include "pomdebt/pipeline.hpp"
#include "pomdebt/readiness.hpp"
#include "pomdebt/record.hpp"
#include "pomdebt/report.hpp"

namespace fs = std::filesystem;
using namespace pomdebt;

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kFatal = 2;

struct Options {
  std::string root;
  std::string in;
  std::string out;
  std::string keywords;
  std::string model;
  std::string fixtures;
  std::string drafts;
  std::string format = "text";
  std::string task = "reason";
  std::string algorithm = "auto";
  std::string features = "ngram-idf";
  std::string jira_base;
  std::string github_api;
  std::uint64_t seed = 7;
  int rounds = 10;
  double test_fraction = 0.1;
  std::size_t budget = 20;
  std::size_t top = 5;
  unsigned threads = 1;
  bool live = false;
  bool single_repo = false;
};

// Output goes to --out, or stdout when it is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      if (const auto parent = fs::path(path).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
      }
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorCode::IoError, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  bool to_stdout() const { return !file_.is_open(); }

 private:
  std::ofstream file_;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  f << text;
}

std::vector<SatdRecord> load_records(const std::string& path) {
  if (path.empty()) throw Error(ErrorCode::Precondition, "--in is required");
  if (path == "-") return read_records(std::cin);
  return ingest_coded_corpus(path);
}

Task task_of(const Options& o) {
  const auto t = parse_task(o.task);
  if (!t) throw Error(ErrorCode::Precondition, "--task must be reason or purpose");
  return *t;
}

Format format_of(const Options& o) {
  const auto f = parse_format(o.format);
  if (!f) throw Error(ErrorCode::Precondition, "--format must be json, csv, md or text");
  return *f;
}

std::string dump(const nlohmann::ordered_json& j) {
  return j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

std::string dump(const nlohmann::json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

void report_skipped(const std::vector<ScanIssue>& skipped) {
  for (const auto& s : skipped) std::cerr << fmt::format("skipped {}: {}\n", s.path, s.reason);
}

int cmd_scan(const Options& o) {
  if (o.root.empty()) throw Error(ErrorCode::Precondition, "--root is required");
  DiscoverOptions discover;
  discover.single_repo = o.single_repo;
  auto scan = scan_comments(o.root, discover, o.threads);

  std::vector<SatdRecord> records;
  for (const auto& f : scan.files) {
    for (const auto& c : f.comments) {
      SatdRecord r;
      r.comment = c;
      r.location = classify_location(c);
      records.push_back(std::move(r));
    }
  }
  make_record_ids(records);
  Output out(o.out);
  for (const auto& r : records) {
    auto j = comment_to_json(r.comment, r.location);
    nlohmann::ordered_json line;
    line["schema_version"] = kSchemaVersion;
    line["id"] = r.id;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() != "schema_version") line[it.key()] = it.value();
    }
    out.stream() << dump(line) << '\n';
  }
  std::cerr << fmt::format("{} build files, {} comments\n", scan.files.size(), records.size());
  report_skipped(scan.skipped);
  return scan.skipped.empty() ? kOk : kPartial;
}

int cmd_detect(const Options& o) {
  const auto keywords =
      load_keyword_set(o.keywords.empty() ? std::nullopt : std::optional<fs::path>(o.keywords));
  CorpusScan scan;
  if (!o.root.empty()) {
    DiscoverOptions discover;
    discover.single_repo = o.single_repo;
    scan = scan_corpus(o.root, keywords, discover, o.threads);
  } else if (!o.in.empty()) {
    scan = detect_in_records(load_records(o.in), keywords);
  } else {
    throw Error(ErrorCode::Precondition, "detect needs --root or --in");
  }
  for (auto& r : scan.records) {
    r.links = extract_links(r.comment.text);
    for (auto& l : r.links) l.comment_ref = r.id;
  }

  Output out(o.out);
  write_jsonl(out.stream(), scan.records);
  std::ostream& summary = out.to_stdout() ? std::cerr : std::cout;
  const auto format = format_of(o);
  if (format == Format::Json) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["keyword_set"] = keywords.source_tag;
    j["repos"] = scan.n_repos;
    j["build_files"] = scan.n_build_files;
    j["comments"] = scan.n_comments;
    j["satd_comments"] = scan.n_satd;
    auto skipped = nlohmann::ordered_json::array();
    for (const auto& s : scan.skipped) skipped.push_back({{"path", s.path}, {"reason", s.reason}});
    j["skipped"] = skipped;
    summary << dump(j) << '\n';
  } else {
    summary << format_corpus_summary(scan);
  }
  return scan.skipped.empty() ? kOk : kPartial;
}

PipelineConfig fixed_config(const Options& o, Algorithm algorithm) {
  PipelineConfig c;
  c.algorithm = algorithm;
  c.hyperparams.seed = o.seed;
  const auto mode = parse_feature_mode(o.features);
  if (!mode) throw Error(ErrorCode::Precondition, "--features must be ngram-idf or tfidf");
  c.features = *mode;
  return c;
}

int cmd_train(const Options& o) {
  if (o.model.empty()) throw Error(ErrorCode::Precondition, "--model is required");
  const auto task = task_of(o);
  const auto corpus = corpus_from_records(load_records(o.in), task);
  Pipeline pipeline;
  if (o.algorithm == "auto") {
    auto result = model_search(corpus, o.budget, o.seed, o.threads);
    for (const auto& t : result.log) {
      std::cout << fmt::format("trial {:>2}  {:<40} weighted-F1 {:.4f}{}\n", t.index, t.config.describe(),
                               t.weighted_f1, t.error.empty() ? "" : "  (" + t.error + ")");
    }
    std::cout << fmt::format("selected trial {}: {}\n", result.best_trial,
                             result.log[result.best_trial].config.describe());
    pipeline = std::move(result.best);
  } else {
    const auto algorithm = parse_algorithm(o.algorithm);
    if (!algorithm) throw Error(ErrorCode::Precondition, "--algorithm must be auto, nb, knn or svm");
    pipeline = train_pipeline(fixed_config(o, *algorithm), corpus, o.threads);
    std::cout << fmt::format("trained {}\n", pipeline.config.describe());
  }
  pipeline.task = task;
  Output out(o.model);
  out.stream() << dump(pipeline.to_json()) << '\n';
  return kOk;
}

int cmd_eval(const Options& o) {
  const auto task = task_of(o);
  const auto format = format_of(o);
  const auto corpus = corpus_from_records(load_records(o.in), task);

  std::vector<std::pair<std::string, EvalReport>> columns;
  const auto search = model_search(corpus, o.budget, o.seed, o.threads);
  const auto& chosen = search.log[search.best_trial].config;
  auto report = cross_validate(corpus, pipeline_trainer(chosen), o.rounds, o.test_fraction, o.seed,
                               o.threads);
  report.model = chosen.describe();
  columns.emplace_back("auto", std::move(report));

  const std::vector<std::pair<std::string, PipelineConfig>> baselines = [&] {
    PipelineConfig nb;
    nb.algorithm = Algorithm::NaiveBayes;
    nb.features = FeatureMode::Tfidf;
    PipelineConfig svm;
    svm.algorithm = Algorithm::Svm;
    svm.features = FeatureMode::Tfidf;
    svm.hyperparams.seed = o.seed;
    PipelineConfig knn;
    knn.algorithm = Algorithm::Knn;
    knn.features = FeatureMode::Tfidf;
    return std::vector<std::pair<std::string, PipelineConfig>>{{"NB", nb}, {"SVM", svm}, {"kNN", knn}};
  }();
  for (const auto& [name, config] : baselines) {
    auto r = cross_validate(corpus, pipeline_trainer(config), o.rounds, o.test_fraction, o.seed,
                            o.threads);
    r.model = config.describe();
    columns.emplace_back(name, std::move(r));
  }

  Output out(o.out);
  if (format == Format::Json) {
    nlohmann::json j;
    j["schema_version"] = EvalReport::kSchemaVersion;
    j["task"] = std::string(to_string(task));
    auto trials = nlohmann::json::array();
    for (const auto& t : search.log) {
      trials.push_back({{"index", t.index},
                        {"config", t.config.describe()},
                        {"weighted_f1", t.weighted_f1},
                        {"error", t.error}});
    }
    j["search"] = {{"budget", o.budget}, {"seed", o.seed}, {"best_trial", search.best_trial}, {"trials", trials}};
    auto reports = nlohmann::json::array();
    for (const auto& [name, r] : columns) {
      auto item = r.to_json();
      item["column"] = name;
      reports.push_back(std::move(item));
    }
    j["reports"] = std::move(reports);
    out.stream() << dump(j) << '\n';
  } else {
    if (format != Format::Csv) {
      out.stream() << fmt::format("Performance of classifiers for SATD {} ({} rounds, test fraction {}, seed {})\n",
                                  to_string(task), o.rounds, o.test_fraction, o.seed);
      out.stream() << fmt::format("auto = {}\n\n", chosen.describe());
    }
    out.stream() << format_eval_table(columns, format);
  }
  return kOk;
}

int cmd_classify(const Options& o) {
  if (o.model.empty()) throw Error(ErrorCode::Precondition, "--model is required");
  std::ifstream model_file(o.model, std::ios::binary);
  if (!model_file) throw Error(ErrorCode::IoError, "cannot open " + o.model);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(model_file);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, std::string("model file: ") + e.what());
  }
  const auto pipeline = Pipeline::from_json(j);
  if (!pipeline.task) throw Error(ErrorCode::SchemaError, "model file does not name its task");
  const auto task = *pipeline.task;
  if (pipeline.label_names() != merged_label_names(task)) {
    throw Error(ErrorCode::SchemaError, "model labels do not match the task's label set");
  }

  auto records = load_records(o.in);
  for (auto& r : records) {
    const auto p = pipeline.predict(preprocess(r.comment.text));
    Prediction prediction{MergedLabel{task, p.label}, p.scores};
    if (task == Task::Reason) {
      r.predicted_reason = std::move(prediction);
    } else {
      r.predicted_purpose = std::move(prediction);
    }
  }
  Output out(o.out);
  write_jsonl(out.stream(), records);
  return kOk;
}

std::string draft_file_name(const std::string& id) {
  std::string name;
  for (char c : id) {
    const bool safe = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    name.push_back(safe ? c : '_');
  }
  return name + ".md";
}

int cmd_readiness(const Options& o) {
  if (o.fixtures.empty() == !o.live) {
    throw Error(ErrorCode::Precondition, "readiness needs exactly one of --fixtures DIR or --live");
  }
  ForgeConfig config;
  if (!o.jira_base.empty()) config.jira_base = o.jira_base;
  if (!o.github_api.empty()) config.github_api = o.github_api;
  std::unique_ptr<HttpTransport> transport;
  if (o.live) {
    transport = std::make_unique<LiveTransport>(LiveOptions::from_environment());
  } else {
    if (!fs::is_directory(o.fixtures)) throw Error(ErrorCode::IoError, "no fixture directory " + o.fixtures);
    transport = std::make_unique<FixtureTransport>(o.fixtures);
  }

  const auto records = load_records(o.in);
  const auto verdicts = assess_records(records, *transport, config, o.threads);

  Output out(o.out);
  for (const auto& v : verdicts) out.stream() << dump(verdict_to_json(v)) << '\n';

  std::map<Outcome, std::size_t> tally;
  for (const auto& v : verdicts) ++tally[v.outcome];
  std::ostream& summary = out.to_stdout() ? std::cerr : std::cout;
  summary << fmt::format("{} records: {} ready, {} on hold, {} excluded, {} without actionable link\n",
                         verdicts.size(), tally[Outcome::Ready], tally[Outcome::OnHold],
                         tally[Outcome::Excluded], tally[Outcome::NoActionableLink]);

  if (!o.drafts.empty()) {
    fs::create_directories(o.drafts);
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (verdicts[i].outcome != Outcome::Ready) continue;
      write_text(fs::path(o.drafts) / draft_file_name(records[i].id),
                 draft_remediation_report(records[i], verdicts[i]));
    }
  }
  return kOk;
}

int cmd_report(const Options& o) {
  if (o.out.empty()) throw Error(ErrorCode::Precondition, "--out DIR is required");
  const auto format = format_of(o);
  const bool csv = format == Format::Csv;
  const std::string ext = csv ? ".csv" : ".md";
  const auto table_format = csv ? Format::Csv : Format::Markdown;
  const auto records = load_records(o.in);
  fs::create_directories(o.out);
  const fs::path dir(o.out);

  std::optional<std::map<LocationCategory, std::size_t>> loc;
  std::size_t skipped = 0;
  if (!o.root.empty()) {
    DiscoverOptions discover;
    discover.single_repo = o.single_repo;
    auto scan = discover_build_files(o.root, discover);
    skipped = scan.issues.size();
    std::map<LocationCategory, std::size_t> totals;
    for (const auto& f : scan.files) {
      std::ifstream in(f.path, std::ios::binary);
      std::stringstream buffer;
      buffer << in.rdbuf();
      try {
        for (const auto& [category, lines] : measure_location_loc(buffer.str())) totals[category] += lines;
      } catch (const Error&) {
        ++skipped;
      }
    }
    loc = std::move(totals);
  }

  std::vector<SatdRecord> reason_coded;
  std::vector<SatdRecord> purpose_coded;
  for (const auto& r : records) {
    if (r.reason) reason_coded.push_back(r);
    if (r.purpose) purpose_coded.push_back(r);
  }

  std::string summary = "# SATD report\n\n";
  summary += fmt::format("Records: {} ({} with a reason label, {} with a purpose label)\n\n", records.size(),
                         reason_coded.size(), purpose_coded.size());

  const auto locations = format_frequency_table("Location", location_frequencies(records, loc), table_format);
  write_text(dir / ("locations" + ext), locations);
  summary += "## Locations\n\n" + format_frequency_table("Location", location_frequencies(records, loc), Format::Markdown) + "\n";

  if (!reason_coded.empty()) {
    const auto rows = reason_frequencies(reason_coded);
    write_text(dir / ("reasons" + ext), format_frequency_table("Reason", rows, table_format));
    summary += "## Reasons\n\n" + format_frequency_table("Reason", rows, Format::Markdown) + "\n";
    const auto m = co_occurrence(reason_coded, CoDims::LocationReason);
    write_text(dir / "location_reason.csv", co_matrix_csv(m));
    write_text(dir / "location_reason_pct.csv", co_matrix_conditional_csv(m));
  }
  if (!purpose_coded.empty()) {
    const auto rows = purpose_frequencies(purpose_coded);
    write_text(dir / ("purposes" + ext), format_frequency_table("Purpose", rows, table_format));
    summary += "## Purposes\n\n" + format_frequency_table("Purpose", rows, Format::Markdown) + "\n";
    const auto m = co_occurrence(purpose_coded, CoDims::LocationPurpose);
    write_text(dir / "location_purpose.csv", co_matrix_csv(m));
    write_text(dir / "location_purpose_pct.csv", co_matrix_conditional_csv(m));
  }

  std::vector<FeatureRow> features;
  for (auto task : {Task::Reason, Task::Purpose}) {
    const auto& coded = task == Task::Reason ? reason_coded : purpose_coded;
    if (coded.empty()) continue;
    const auto corpus = corpus_from_records(coded, task);
    std::vector<LabelledDoc> docs;
    for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
      docs.push_back({corpus.docs[i], corpus.label_names[corpus.labels[i]]});
    }
    const auto vocab = build_ngram_vocabulary(docs, 4, o.threads);
    auto rows = top_features(vocab, o.top, corpus.label_names);
    features.insert(features.end(), rows.begin(), rows.end());
  }
  if (!features.empty()) {
    write_text(dir / ("features" + ext), format_top_features(features, table_format));
    summary += "## Frequent n-gram features\n\n" + format_top_features(features, Format::Markdown) + "\n";
  }
  write_text(dir / "summary.md", summary);
  std::cout << fmt::format("wrote report for {} records to {}\n", records.size(), dir.string());
  return skipped == 0 ? kOk : kPartial;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-admitted technical debt in Maven build files"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_threads = [&](CLI::App* cmd) {
    cmd->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  };

  auto* scan = app.add_subcommand("scan", "Extract comments from every pom.xml under --root");
  scan->add_option("--root", o.root, "Corpus root (one directory per repository)")->required();
  scan->add_option("--out", o.out, "Comment JSONL (default stdout)");
  scan->add_flag("--single-repo", o.single_repo, "Treat --root as one repository");
  add_threads(scan);

  auto* detect = app.add_subcommand("detect", "Keyword-based SATD detection");
  detect->add_option("--root", o.root, "Corpus root to scan");
  detect->add_option("--in", o.in, "Comment JSONL from `scan`");
  detect->add_option("--keywords", o.keywords, "Keyword file (default: bundled list)");
  detect->add_option("--out", o.out, "SATD JSONL (default stdout)");
  detect->add_option("--format", o.format, "Summary format: text|json");
  detect->add_flag("--single-repo", o.single_repo, "Treat --root as one repository");
  add_threads(detect);

  auto* train = app.add_subcommand("train", "Train a reason or purpose classifier");
  train->add_option("--in", o.in, "Coded corpus JSONL")->required();
  train->add_option("--model", o.model, "Model file to write")->required();
  train->add_option("--task", o.task, "reason|purpose");
  train->add_option("--algorithm", o.algorithm, "auto|nb|knn|svm");
  train->add_option("--features", o.features, "ngram-idf|tfidf (fixed algorithms)");
  train->add_option("--seed", o.seed, "Random seed");
  train->add_option("--budget", o.budget, "Search trials for --algorithm auto");
  add_threads(train);

  auto* eval = app.add_subcommand("eval", "Compare classifiers with repeated stratified splits");
  eval->add_option("--in", o.in, "Coded corpus JSONL")->required();
  eval->add_option("--task", o.task, "reason|purpose");
  eval->add_option("--seed", o.seed, "Random seed");
  eval->add_option("--rounds", o.rounds, "Evaluation rounds")->check(CLI::PositiveNumber);
  eval->add_option("--test-fraction", o.test_fraction, "Test share per round");
  eval->add_option("--budget", o.budget, "Search trials for the auto column");
  eval->add_option("--format", o.format, "text|json|csv|md");
  eval->add_option("--out", o.out, "Output file (default stdout)");
  add_threads(eval);

  auto* classify = app.add_subcommand("classify", "Predict reason or purpose labels");
  classify->add_option("--model", o.model, "Model file from `train`")->required();
  classify->add_option("--in", o.in, "SATD JSONL")->required();
  classify->add_option("--out", o.out, "Output JSONL (default stdout)");

  auto* readiness = app.add_subcommand("readiness", "Find SATD whose referenced issue is fixed");
  readiness->add_option("--in", o.in, "SATD JSONL")->required();
  readiness->add_option("--fixtures", o.fixtures, "Recorded forge responses");
  readiness->add_flag("--live", o.live, "Query GitHub/JIRA (GITHUB_TOKEN, JIRA_TOKEN)");
  readiness->add_option("--out", o.out, "Verdict JSONL (default stdout)");
  readiness->add_option("--drafts", o.drafts, "Directory for Markdown drafts of ready records");
  readiness->add_option("--jira-base", o.jira_base, "JIRA base URL for bare keys");
  readiness->add_option("--github-api", o.github_api, "GitHub API base URL");
  add_threads(readiness);

  auto* report = app.add_subcommand("report", "Frequency tables, co-occurrence and features");
  report->add_option("--in", o.in, "Records JSONL")->required();
  report->add_option("--out", o.out, "Output directory")->required();
  report->add_option("--root", o.root, "Corpus root, for lines of code per location");
  report->add_option("--format", o.format, "md|csv");
  report->add_option("--top", o.top, "Features per class");
  report->add_flag("--single-repo", o.single_repo, "Treat --root as one repository");
  add_threads(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kFatal;
  }

  try {
    if (*scan) return cmd_scan(o);
    if (*detect) return cmd_detect(o);
    if (*train) return cmd_train(o);
    if (*eval) return cmd_eval(o);
    if (*classify) return cmd_classify(o);
    if (*readiness) return cmd_readiness(o);
    if (*report) return cmd_report(o);
  } catch (const Error& e) {
    std::cerr << fmt::format("pomdebt: {}: {}\n", to_string(e.code()), e.what());
    return kFatal;
  } catch (const std::exception& e) {
    std::cerr << "pomdebt: " << e.what() << '\n';
    return kFatal;
  }
  return kFatal;
}
