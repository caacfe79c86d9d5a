#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include "priorart/error.hpp"
#include "priorart/eval.hpp"
#include "priorart/pipeline.hpp"
#include "priorart/trec.hpp"

namespace fs = std::filesystem;

namespace priorart {

namespace {

struct CommonOptions {
  std::string workspace;
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool workspace_required = true) {
  auto* w = cmd->add_option("-w,--workspace", o.workspace, "workspace directory");
  if (workspace_required) w->required();
  cmd->add_option("-c,--config", o.config_path, "config file (key = value)")->check(CLI::ExistingFile);
  cmd->add_option("--set", o.sets, "override a config key: key=value (repeatable)");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--threads", o.threads, "worker threads");
}

PipelineConfig resolve_config(const CommonOptions& o) {
  PipelineConfig cfg;
  if (!o.config_path.empty()) {
    cfg.load_file(o.config_path);
  } else if (!o.workspace.empty() && fs::exists(Workspace{o.workspace}.config())) {
    cfg.load_file(Workspace{o.workspace}.config().string());
  }
  for (const auto& s : o.sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    cfg.set(s.substr(0, eq), s.substr(eq + 1));
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.threads) cfg.threads = *o.threads;
  cfg.validate();
  return cfg;
}

void save_config(const Workspace& ws, const PipelineConfig& cfg) {
  fs::create_directories(ws.root);
  std::ofstream out(ws.config(), std::ios::binary);
  if (!out) throw IoError("cannot write " + ws.config().string());
  out << cfg.canonical();
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"priorart: multilingual patent prior-art retrieval pipeline"};
  app.require_subcommand(1);
  app.fallthrough(false);

  CommonOptions common;
  IngestPaths ingest;
  bool index_stats = false;
  std::string eval_run, eval_qrels, eval_grade = "all";

  using Stage = std::function<void(const Workspace&, const PipelineConfig&, StageLog&)>;
  std::vector<std::pair<CLI::App*, std::pair<std::string, Stage>>> stages;
  auto stage = [&](const std::string& name, const std::string& help, Stage fn) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, common, name != "eval");
    stages.push_back({cmd, {name, std::move(fn)}});
    return cmd;
  };

  stage("gen", "generate a synthetic corpus into <workspace>/input", stage_gen);
  auto* ingest_cmd = stage("ingest", "validate and normalize corpus, topics, qrels and terminology",
                           [&](const Workspace& ws, const PipelineConfig& cfg, StageLog& log) {
                             stage_ingest(ws, cfg, ingest, log);
                           });
  ingest_cmd->add_option("--corpus", ingest.corpus, "corpus JSON Lines file");
  ingest_cmd->add_option("--topics-train", ingest.topics_train, "training topics JSON Lines file");
  ingest_cmd->add_option("--topics-test", ingest.topics_test, "test topics JSON Lines file");
  ingest_cmd->add_option("--qrels-train", ingest.qrels_train, "training qrels");
  ingest_cmd->add_option("--qrels-test", ingest.qrels_test, "test qrels");
  ingest_cmd->add_option("--termdb", ingest.termdb, "terminology database TSV");
  ingest_cmd->add_option("--domains", ingest.domains, "IPC-to-domain map TSV");
  auto* index_cmd = stage("index", "build the lemma, phrase and concept indexes",
                          [&](const Workspace& ws, const PipelineConfig& cfg, StageLog& log) {
                            if (index_stats) {
                              print_index_stats(ws, log);
                            } else {
                              stage_index(ws, cfg, log);
                            }
                          });
  index_cmd->add_flag("--stats", index_stats, "print index statistics and accounting identities instead of building");
  stage("worksets", "build working sets and the cited-patents run", stage_worksets);
  stage("retrieve", "run every retrieval model over every topic split", stage_retrieve);
  stage("train-merge", "train per-model confidence regressors", stage_train_merge);
  stage("merge", "merge the per-model runs with predicted confidences", stage_merge);
  stage("train-rerank", "train the metadata re-ranking model", stage_train_rerank);
  stage("rerank", "re-rank the merged runs", stage_rerank);
  auto* eval_cmd = stage("eval", "evaluate runs (workspace reports, or --run with --qrels)", stage_eval);
  eval_cmd->add_option("--run", eval_run, "run file to evaluate instead of the workspace runs");
  eval_cmd->add_option("--qrels", eval_qrels, "qrels file for --run");
  eval_cmd->add_option("--grade", eval_grade, "relevance grade filter: all or high")->check(CLI::IsMember({"all", "high"}));
  stage("pipeline", "run every stage end to end", run_pipeline);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  StageLog log{out, err};
  try {
    for (auto& [cmd, named] : stages) {
      if (!cmd->parsed()) continue;
      const auto& [name, fn] = named;
      if (name == "eval" && !eval_run.empty()) {
        if (eval_qrels.empty()) throw ConfigError("eval --run requires --qrels");
        if (!fs::is_regular_file(eval_run)) throw IoError("missing input file: " + eval_run);
        if (!fs::is_regular_file(eval_qrels)) throw IoError("missing input file: " + eval_qrels);
        std::vector<std::string> warnings;
        auto metrics = evaluate_run(fs::path(eval_run).stem().string(), read_run_file(eval_run),
                                    read_qrels(eval_qrels),
                                    eval_grade == "high" ? GradeFilter::HighlyRelevant : GradeFilter::AllRelevant,
                                    &warnings);
        for (const auto& w : warnings) err << "warning: " << w << "\n";
        out << format_report({metrics});
        return 0;
      }
      if (common.workspace.empty()) throw ConfigError(name + " requires --workspace");
      auto cfg = resolve_config(common);
      if (name == "eval") {
        cfg.eval_grade = eval_grade == "high" ? GradeFilter::HighlyRelevant : cfg.eval_grade;
      }
      Workspace ws{common.workspace};
      const bool read_only = name == "index" && index_stats;
      if (!read_only && name != "pipeline") save_config(ws, cfg);
      const auto start = std::chrono::steady_clock::now();
      fn(ws, cfg, log);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      if (!read_only && name != "pipeline") record_stage(ws, cfg, name, elapsed.count());
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace priorart
