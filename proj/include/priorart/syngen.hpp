#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "priorart/corpus.hpp"
#include "priorart/eval.hpp"
#include "priorart/terminology.hpp"

namespace priorart {

struct SynParams {
  std::size_t n_patents = 2000;
  std::size_t n_clusters = 20;
  std::size_t subtopics_per_cluster = 5;
  std::size_t vocab_size = 3000;     // concepts, each rendered in EN/FR/DE
  double lang_en = 0.69;             // language-of-proceedings mix
  double lang_de = 0.23;
  double lang_fr = 0.07;
  double citation_density = 3.0;     // mean description citations per patent
  std::size_t ecla_per_cluster = 4;
  double family_fraction = 0.05;     // patents filed as divisionals of an earlier one
  double b1_fraction = 0.5;          // patents with a trilingual B1 version
  std::size_t n_train_topics = 100;
  std::size_t n_test_topics = 100;
  std::size_t description_paragraphs = 5;
  std::size_t paragraph_words = 30;  // content words per paragraph
};

// Throws ConfigError for infeasible parameters.
void validate(const SynParams& params);

struct SyntheticCorpus {
  std::vector<PatentRecord> patents;  // raw names, cited_ids unresolved
  std::vector<PatentRecord> train_topics;
  std::vector<PatentRecord> test_topics;
  Qrels train_qrels;
  Qrels test_qrels;
  std::vector<ConceptEntry> concepts;
  DomainMap domains;

  // Ground truth, parallel to `patents`.
  std::vector<std::uint32_t> cluster;
  std::vector<std::uint32_t> subtopic;  // global subtopic index
};

// Deterministic for a given seed and parameters (single-threaded).
SyntheticCorpus generate(std::uint64_t seed, const SynParams& params);

// Writes corpus.jsonl, topics_train.jsonl, topics_test.jsonl, qrels_train.txt,
// qrels_test.txt, termdb.tsv and domains.tsv into `dir` (created if needed).
void write_synthetic(const SyntheticCorpus& corpus, const std::string& dir);

// Civil date for a day count since 1970-01-01.
std::string iso_date(std::int64_t days_since_epoch);

}  // namespace priorart
