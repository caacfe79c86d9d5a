#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "priorart/eval.hpp"
#include "priorart/regress.hpp"
#include "priorart/retrieve.hpp"
#include "priorart/syngen.hpp"
#include "priorart/workingset.hpp"

namespace priorart {

// Every tunable of the batch pipeline. Text form: one `key = value` per line,
// `#` comments, optional `[section]` headers that prefix the following keys
// with `section.`.
struct PipelineConfig {
  std::uint64_t seed = 7;
  unsigned threads = 1;
  bool monolingual = false;

  SynParams gen;

  std::uint64_t phrase_min_count = 3;
  double phrase_dice_threshold = 0.25;

  RetrievalParams retrieval;
  std::vector<std::string> models;  // model ids; empty means all ten

  bool worksets_enabled = true;
  WorkingSetParams workset;

  std::string merge_training = "topics";  // "topics" or "validation"
  std::size_t validation_size = 4131;
  std::size_t validation_min_citations = 4;
  ModelKind merge_learner = ModelKind::KernelRbf;

  bool rerank_enabled = true;
  ModelKind rerank_learner = ModelKind::KernelRbf;
  std::size_t rerank_negatives = 20;

  std::size_t cv_folds = 5;
  std::size_t max_training_rows = 1000;
  std::vector<double> ridge_grid = {0.0, 1e-3, 1e-2, 1e-1, 1.0};
  std::vector<double> gamma_grid = {0.01, 0.1, 1.0, 10.0};
  std::vector<double> reg_grid = {1e-3, 1e-2, 1e-1, 1.0};

  GradeFilter eval_grade = GradeFilter::AllRelevant;

  // Throws ConfigError for unknown keys or malformed values.
  void set(std::string_view key, std::string_view value);
  void load_text(std::string_view text);
  void load_file(const std::string& path);
  // Throws ConfigError when any bound is violated.
  void validate() const;

  std::vector<ModelSpec> model_specs() const;
  TrainingOptions training_options(ModelKind kind) const;

  // Sorted `key = value` lines covering every key.
  std::string canonical() const;
  // FNV-1a 64 of canonical() with threads fixed, as 16 hex digits.
  std::string hash() const;

  static const std::vector<std::string>& keys();
};

}  // namespace priorart
