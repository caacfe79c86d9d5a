#include "priorart/retrieve.hpp"

#include <algorithm>
#include <cmath>

#include "priorart/error.hpp"

namespace priorart {

std::vector<std::string> RankedList::doc_ids() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.doc_id);
  return out;
}

void sort_and_cut(std::vector<RankedEntry>& entries, std::size_t cutoff) {
  auto better = [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  };
  if (entries.size() > cutoff) {
    std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(cutoff),
                      entries.end(), better);
    entries.resize(cutoff);
  } else {
    std::sort(entries.begin(), entries.end(), better);
  }
}

std::uint64_t Query::length() const {
  std::uint64_t n = 0;
  for (const auto& [_, c] : terms) n += c;
  return n;
}

void validate(const KlParams& p) {
  if (!(p.lambda > 0.0 && p.lambda < 1.0)) throw ConfigError("KL lambda must lie in (0, 1)");
}

void validate(const Bm25Params& p) {
  if (!(p.k1 >= 0.0 && p.b >= 0.0 && p.k3 >= 0.0)) throw ConfigError("BM25 parameters must be >= 0");
  if (!(p.k1 * (p.b - 1.0) < 1.0)) throw ConfigError("BM25 requires k1*(b-1) < 1");
}

namespace {

std::uint32_t tf_in(const TermIndex& index, std::uint32_t term, std::uint32_t doc) {
  const auto& list = index.postings(term);
  auto it = std::lower_bound(list.begin(), list.end(), doc,
                             [](const Posting& p, std::uint32_t d) { return p.doc < d; });
  return it != list.end() && it->doc == doc ? it->tf : 0;
}

void require_terms(const Query& q) {
  if (q.length() == 0) throw EmptyQueryError("empty query for topic " + q.topic_id);
}

double idf(const TermIndex& index, std::uint32_t term) {
  double n = static_cast<double>(index.num_docs());
  double df = index.doc_freq(term);
  return std::max(0.0, std::log((n - df + 0.5) / (df + 0.5)));
}

double bm25_tf_part(double tf, double doc_len, double avgdl, const Bm25Params& p) {
  double norm = avgdl > 0.0 ? doc_len / avgdl : 0.0;
  return tf * (p.k1 + 1.0) / (tf + p.k1 * (1.0 - p.b + p.b * norm));
}

double bm25_query_part(double qtf, const Bm25Params& p) { return qtf * (p.k3 + 1.0) / (p.k3 + qtf); }

}  // namespace

double score_kl(const Query& query, std::uint32_t doc, const TermIndex& index, const KlParams& params) {
  require_terms(query);
  const double qlen = static_cast<double>(query.length());
  const double clen = static_cast<double>(index.collection_length());
  const double dlen = index.doc_length(doc);
  double score = 0.0;
  for (const auto& [term, qtf] : query.terms) {
    auto t = index.term_id(term);
    if (!t || index.collection_tf(*t) == 0) continue;
    double background = params.lambda * static_cast<double>(index.collection_tf(*t)) / clen;
    double ml = dlen > 0.0 ? (1.0 - params.lambda) * tf_in(index, *t, doc) / dlen : 0.0;
    score += (qtf / qlen) * std::log(ml + background);
  }
  return score;
}

double score_bm25(const Query& query, std::uint32_t doc, const TermIndex& index,
                  const Bm25Params& params) {
  require_terms(query);
  const double avgdl = index.avg_doc_length();
  const double dlen = index.doc_length(doc);
  double score = 0.0;
  for (const auto& [term, qtf] : query.terms) {
    auto t = index.term_id(term);
    if (!t) continue;
    double tf = tf_in(index, *t, doc);
    if (tf == 0.0) continue;
    score += idf(index, *t) * bm25_tf_part(tf, dlen, avgdl, params) * bm25_query_part(qtf, params);
  }
  return score;
}

std::string model_id(const ModelSpec& spec) {
  std::string prefix = spec.scoring == ScoringModel::KL ? "kl-" : "bm25-";
  return prefix + std::string(analyzer_name(spec.analyzer));
}

ModelSpec parse_model_id(std::string_view id) {
  ModelSpec spec;
  if (id.starts_with("kl-")) {
    spec.scoring = ScoringModel::KL;
    id.remove_prefix(3);
  } else if (id.starts_with("bm25-")) {
    spec.scoring = ScoringModel::BM25;
    id.remove_prefix(5);
  } else {
    throw ConfigError("unknown model id '" + std::string(id) + "'");
  }
  spec.analyzer = parse_analyzer_kind(id);
  return spec;
}

std::vector<ModelSpec> all_models() {
  std::vector<ModelSpec> out;
  for (auto scoring : {ScoringModel::KL, ScoringModel::BM25}) {
    for (auto kind : kAnalyzerKinds) out.push_back({scoring, kind});
  }
  return out;
}

RankedList retrieve(const Query& query, const TermIndex& index, const ModelSpec& model,
                    const RetrievalParams& params, const std::vector<std::string>* working_set) {
  if (params.cutoff < 1) throw ConfigError("cutoff must be >= 1");
  require_terms(query);
  if (model.scoring == ScoringModel::KL) validate(params.kl); else validate(params.bm25);

  const std::size_t n = index.num_docs();
  std::vector<char> allowed;
  if (working_set) {
    allowed.assign(n, 0);
    for (const auto& id : *working_set) {
      if (auto d = index.doc_ordinal(id)) allowed[*d] = 1;
    }
  }
  std::vector<double> acc(n, 0.0);
  std::vector<char> touched(n, 0);
  std::vector<std::uint32_t> candidates;
  double base = 0.0;

  const double qlen = static_cast<double>(query.length());
  const double clen = static_cast<double>(index.collection_length());
  const double avgdl = index.avg_doc_length();
  for (const auto& [term, qtf] : query.terms) {
    auto t = index.term_id(term);
    if (!t || index.collection_tf(*t) == 0) continue;
    double term_weight = 0.0;
    double log_background = 0.0;
    double background = 0.0;
    if (model.scoring == ScoringModel::KL) {
      term_weight = qtf / qlen;
      background = params.kl.lambda * static_cast<double>(index.collection_tf(*t)) / clen;
      log_background = std::log(background);
      base += term_weight * log_background;
    } else {
      term_weight = idf(index, *t) * bm25_query_part(qtf, params.bm25);
    }
    for (const auto& p : index.postings(*t)) {
      if (working_set && !allowed[p.doc]) continue;
      if (!touched[p.doc]) {
        touched[p.doc] = 1;
        candidates.push_back(p.doc);
      }
      double dlen = index.doc_length(p.doc);
      if (model.scoring == ScoringModel::KL) {
        double ml = (1.0 - params.kl.lambda) * p.tf / dlen;
        acc[p.doc] += term_weight * (std::log(ml + background) - log_background);
      } else {
        acc[p.doc] += term_weight * bm25_tf_part(p.tf, dlen, avgdl, params.bm25);
      }
    }
  }

  RankedList out;
  out.topic_id = query.topic_id;
  out.model_id = model_id(model);
  auto self = index.doc_ordinal(query.topic_id);
  out.entries.reserve(candidates.size());
  for (auto d : candidates) {
    if (self && *self == d) continue;
    out.entries.push_back({index.doc_id(d), base + acc[d]});
  }
  sort_and_cut(out.entries, params.cutoff);
  return out;
}

}  // namespace priorart
