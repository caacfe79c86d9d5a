#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "priorart/config.hpp"

namespace priorart {

// Directory layout of a pipeline workspace.
//   input/      generated or user-supplied corpus, topics, qrels, termdb, domains
//   store/      validated, name-normalized copies plus citations.tsv
//   index/      <analyzer>.idx and phrases.tsv
//   worksets/   <split>.tsv and <split>.trace.csv
//   runs/<split>/  <model>.run, query_stats.tsv, cited.run, merged*.run, final.run
//   models/     merge/<model>.json, rerank.json
//   reports/    eval_<split>.txt and .csv
//   manifest.json, config.txt
struct Workspace {
  std::filesystem::path root;

  std::filesystem::path input() const { return root / "input"; }
  std::filesystem::path store() const { return root / "store"; }
  std::filesystem::path index() const { return root / "index"; }
  std::filesystem::path worksets() const { return root / "worksets"; }
  std::filesystem::path runs(const std::string& split) const { return root / "runs" / split; }
  std::filesystem::path models() const { return root / "models"; }
  std::filesystem::path reports() const { return root / "reports"; }
  std::filesystem::path manifest() const { return root / "manifest.json"; }
  std::filesystem::path config() const { return root / "config.txt"; }

  // Splits with prepared topics in store/, in a fixed order.
  std::vector<std::string> splits() const;
};

struct StageLog {
  std::ostream& out;
  std::ostream& err;
};

struct IngestPaths {
  std::optional<std::string> corpus;
  std::optional<std::string> topics_train;
  std::optional<std::string> topics_test;
  std::optional<std::string> qrels_train;
  std::optional<std::string> qrels_test;
  std::optional<std::string> termdb;
  std::optional<std::string> domains;
};

void stage_gen(const Workspace& ws, const PipelineConfig& cfg, StageLog& log);
void stage_ingest(const Workspace& ws, const PipelineConfig& cfg, const IngestPaths& paths, StageLog& log);
void stage_index(const Workspace& ws, const PipelineConfig& cfg, StageLog& log);
void print_index_stats(const Workspace& ws, StageLog& log);
void stage_worksets(const Workspace& ws, const PipelineConfig& cfg, StageLog& log);
void stage_retrieve(const Workspace& ws, const PipelineConfig& cfg, StageLog& log);
void stage_train_merge(const Workspace& ws, const PipelineConfig& cfg, StageLog& log);
void stage_merge(const Workspace& ws, const PipelineConfig& cfg, StageLog& log);
void stage_train_rerank(const Workspace& ws, const PipelineConfig& cfg, StageLog& log);
void stage_rerank(const Workspace& ws, const PipelineConfig& cfg, StageLog& log);
void stage_eval(const Workspace& ws, const PipelineConfig& cfg, StageLog& log);

// All stages in order; generates input/ first when it has no corpus.
void run_pipeline(const Workspace& ws, const PipelineConfig& cfg, StageLog& log);

// Adds or replaces a stage entry (wall seconds) in manifest.json.
void record_stage(const Workspace& ws, const PipelineConfig& cfg, const std::string& stage, double seconds);

// Batch entry point: parses `args` (without the program name), runs the
// subcommand and returns the exit code. Diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace priorart
