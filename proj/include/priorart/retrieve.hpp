#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "priorart/analyze.hpp"
#include "priorart/index.hpp"
#include "priorart/ranked_list.hpp"

namespace priorart {

// Whole-document query, analyzed like the target index.
struct Query {
  std::string topic_id;
  TermBag terms;

  std::uint64_t length() const;
};

enum class ScoringModel { KL, BM25 };

struct KlParams {
  double lambda = 0.4;  // Jelinek-Mercer weight of the collection model
};

struct Bm25Params {
  double k1 = 1.5;
  double b = 1.5;
  double k3 = 3.0;
};

struct RetrievalParams {
  KlParams kl;
  Bm25Params bm25;
  std::size_t cutoff = kDefaultCutoff;
};

// Throws ConfigError on out-of-range parameters. BM25 additionally needs
// k1·(b − 1) < 1 so the length normalization stays positive for tf ≥ 1.
void validate(const KlParams& p);
void validate(const Bm25Params& p);

// Σ_t P(t|q)·log[(1−λ)·tf/|d| + λ·ctf/|C|] over query terms with ctf > 0.
double score_kl(const Query& query, std::uint32_t doc, const TermIndex& index,
                const KlParams& params = {});

// Okapi BM25 with idf = max(0, log((N − df + 0.5)/(df + 0.5))).
double score_bm25(const Query& query, std::uint32_t doc, const TermIndex& index,
                  const Bm25Params& params = {});

struct ModelSpec {
  ScoringModel scoring = ScoringModel::KL;
  AnalyzerKind analyzer = AnalyzerKind::LemmaEN;
};

std::string model_id(const ModelSpec& spec);  // "kl-lemma-en", "bm25-concept", ...
ModelSpec parse_model_id(std::string_view id);
// The ten model combinations, KL first.
std::vector<ModelSpec> all_models();

// Scores the candidates (docs sharing a term with the query, restricted to
// `working_set` when given) and returns the top `cutoff`. The topic patent is
// never returned. Throws EmptyQueryError for a query without terms.
RankedList retrieve(const Query& query, const TermIndex& index, const ModelSpec& model,
                    const RetrievalParams& params, const std::vector<std::string>* working_set = nullptr);

}  // namespace priorart
