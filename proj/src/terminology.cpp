#include "priorart/terminology.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "priorart/corpus.hpp"
#include "priorart/error.hpp"

namespace priorart {

namespace {

std::size_t lang_index(Language l) { return static_cast<std::size_t>(l); }

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::set<DomainId> parse_domains(std::string_view csv, std::size_t lineno) {
  std::set<DomainId> out;
  for (auto part : split(csv, ',')) {
    auto t = trim(part);
    if (t.empty()) continue;
    try {
      std::size_t used = 0;
      int d = std::stoi(std::string(t), &used);
      if (used != t.size()) throw std::invalid_argument("trailing");
      out.insert(d);
    } catch (const std::exception&) {
      throw ParseError("bad domain id '" + std::string(t) + "'", 0, lineno);
    }
  }
  if (out.empty()) throw ParseError("entry without domain", 0, lineno);
  return out;
}

std::string domains_csv(const std::set<DomainId>& domains) {
  std::string out;
  for (auto d : domains) {
    if (!out.empty()) out.push_back(',');
    out += std::to_string(d);
  }
  return out;
}

std::string lemma_key(const std::string& term, const Lexicon& lex) {
  std::string key;
  for (const auto& t : analyze_text(term, lex).tokens) {
    if (!key.empty()) key.push_back(' ');
    key += t.lemma;
  }
  return key;
}

bool intersects(const std::set<DomainId>& a, const std::set<DomainId>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

// --- domain map -----------------------------------------------------------------

void DomainMap::add(const std::string& ipc_prefix, std::set<DomainId> domains) {
  if (domains.empty()) throw ConfigError("IPC prefix " + ipc_prefix + " maps to no domain");
  map_[ipc_prefix].insert(domains.begin(), domains.end());
}

const std::set<DomainId>* DomainMap::find(const std::string& ipc_prefix) const {
  auto it = map_.find(ipc_prefix);
  return it == map_.end() ? nullptr : &it->second;
}

DomainMap DomainMap::from_text(std::string_view text) {
  DomainMap map;
  std::size_t lineno = 0;
  for (auto line : split(text, '\n')) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != 2) throw ParseError("domain map: expected 2 fields", 0, lineno);
    map.add(std::string(trim(fields[0])), parse_domains(fields[1], lineno));
  }
  return map;
}

DomainMap DomainMap::load(const std::string& path) {
  try {
    return from_text(read_all(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + std::to_string(e.line()) + ": " + e.what(), 0, e.line());
  }
}

void DomainMap::save(const std::string& path) const {
  std::map<std::string, std::set<DomainId>> sorted(map_.begin(), map_.end());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& [prefix, domains] : sorted) out << prefix << '\t' << domains_csv(domains) << '\n';
}

std::set<DomainId> patent_domains(const std::vector<std::string>& ecla,
                                  const std::vector<std::string>& ipc, const DomainMap& map) {
  auto collect = [&](const std::vector<std::string>& codes) {
    std::set<DomainId> out;
    for (const auto& c : codes) {
      if (const auto* d = map.find(ipc_class3(c))) out.insert(d->begin(), d->end());
    }
    return out;
  };
  auto from_ecla = collect(ecla);
  return from_ecla.empty() ? collect(ipc) : from_ecla;
}

// --- terminology database ---------------------------------------------------------

TerminologyDB TerminologyDB::from_entries(const std::vector<ConceptEntry>& input,
                                          const Lexicons& lexicons) {
  // Canonical order so the result does not depend on input order.
  std::vector<ConceptEntry> entries = input;
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.concept_id < b.concept_id; });

  std::map<std::pair<std::size_t, std::string>, std::vector<std::size_t>> by_term;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (const auto& t : entries[i].terms) {
      auto key = lemma_key(t.term, lexicons.get(t.language));
      if (key.empty()) continue;
      auto& list = by_term[{lang_index(t.language), key}];
      if (list.empty() || list.back() != i) list.push_back(i);
    }
  }
  UnionFind uf(entries.size());
  for (const auto& [_, list] : by_term) {
    for (std::size_t a = 0; a < list.size(); ++a) {
      for (std::size_t b = a + 1; b < list.size(); ++b) {
        if (intersects(entries[list[a]].domains, entries[list[b]].domains)) uf.unite(list[a], list[b]);
      }
    }
  }

  TerminologyDB db;
  std::map<std::size_t, std::size_t> root_to_concept;
  std::vector<std::set<std::string>> sources;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto root = uf.find(i);
    auto [it, fresh] = root_to_concept.emplace(root, db.concepts_.size());
    if (fresh) {
      ConceptEntry merged;
      merged.concept_id = entries[root].concept_id;
      db.concepts_.push_back(std::move(merged));
      sources.emplace_back();
    }
    auto& c = db.concepts_[it->second];
    for (const auto& t : entries[i].terms) {
      auto existing = std::find_if(c.terms.begin(), c.terms.end(), [&](const ConceptTerm& x) {
        return x.language == t.language && x.term == t.term;
      });
      if (existing == c.terms.end()) {
        c.terms.push_back(t);
      } else {
        existing->preferred = existing->preferred || t.preferred;
      }
    }
    c.domains.insert(entries[i].domains.begin(), entries[i].domains.end());
    if (!entries[i].source.empty()) sources[it->second].insert(entries[i].source);
  }
  for (std::size_t k = 0; k < db.concepts_.size(); ++k) {
    auto& c = db.concepts_[k];
    for (const auto& s : sources[k]) c.source += (c.source.empty() ? "" : ",") + s;
    std::sort(c.terms.begin(), c.terms.end(), [](const auto& a, const auto& b) {
      return std::tie(a.language, a.term) < std::tie(b.language, b.term);
    });
  }
  // Roots are the smallest index of each component and entries are sorted by
  // id, so concepts_ is already ordered by id.
  for (std::uint32_t k = 0; k < db.concepts_.size(); ++k) {
    for (const auto& t : db.concepts_[k].terms) {
      auto li = lang_index(t.language);
      auto key = lemma_key(t.term, lexicons.get(t.language));
      if (key.empty()) continue;
      auto& list = db.lookup_[li][key];
      if (std::find(list.begin(), list.end(), k) == list.end()) list.push_back(k);
      db.max_len_[li] = std::max<std::size_t>(db.max_len_[li],
                                              std::count(key.begin(), key.end(), ' ') + 1);
    }
  }
  return db;
}

TerminologyDB TerminologyDB::from_text(std::string_view text, const Lexicons& lexicons) {
  std::map<std::uint32_t, ConceptEntry> by_id;
  std::size_t lineno = 0;
  for (auto line : split(text, '\n')) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;
    auto f = split(line, '\t');
    if (f.size() != 6) throw ParseError("termdb: expected 6 fields, got " + std::to_string(f.size()), 0, lineno);
    std::uint32_t id = 0;
    try {
      std::size_t used = 0;
      auto v = std::stoul(std::string(f[0]), &used);
      if (used != f[0].size()) throw std::invalid_argument("trailing");
      id = static_cast<std::uint32_t>(v);
    } catch (const std::exception&) {
      throw ParseError("termdb: bad concept id", 0, lineno);
    }
    auto lang = parse_language(f[1]);
    if (!lang) throw ParseError("termdb: bad language '" + std::string(f[1]) + "'", 0, lineno);
    if (f[3] != "0" && f[3] != "1") throw ParseError("termdb: preferred flag must be 0 or 1", 0, lineno);
    if (trim(f[2]).empty()) throw ParseError("termdb: empty term", 0, lineno);
    auto& entry = by_id[id];
    entry.concept_id = id;
    entry.terms.push_back({*lang, std::string(trim(f[2])), f[3] == "1"});
    auto domains = parse_domains(f[4], lineno);
    entry.domains.insert(domains.begin(), domains.end());
    if (entry.source.empty()) entry.source = std::string(f[5]);
  }
  std::vector<ConceptEntry> entries;
  for (auto& [_, e] : by_id) entries.push_back(std::move(e));
  return from_entries(entries, lexicons);
}

TerminologyDB TerminologyDB::load(const std::string& path, const Lexicons& lexicons) {
  try {
    return from_text(read_all(path), lexicons);
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + std::to_string(e.line()) + ": " + e.what(), 0, e.line());
  }
}

void write_termdb(const std::string& path, const std::vector<ConceptEntry>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& e : entries) {
    for (const auto& t : e.terms) {
      out << e.concept_id << '\t' << language_code(t.language) << '\t' << t.term << '\t'
          << (t.preferred ? 1 : 0) << '\t' << domains_csv(e.domains) << '\t' << e.source << '\n';
    }
  }
}

const ConceptEntry* TerminologyDB::concept_by_id(std::uint32_t id) const {
  auto it = std::lower_bound(concepts_.begin(), concepts_.end(), id,
                             [](const ConceptEntry& c, std::uint32_t v) { return c.concept_id < v; });
  return it != concepts_.end() && it->concept_id == id ? &*it : nullptr;
}

const std::vector<std::uint32_t>* TerminologyDB::lookup(Language lang, const std::string& key) const {
  const auto& m = lookup_[lang_index(lang)];
  auto it = m.find(key);
  return it == m.end() ? nullptr : &it->second;
}

std::size_t TerminologyDB::max_term_length(Language lang) const { return max_len_[lang_index(lang)]; }

std::string concept_term(std::uint32_t concept_id) { return "c:" + std::to_string(concept_id); }

std::vector<std::uint32_t> tag_concepts(const TokenStream& stream,
                                        const std::set<DomainId>& domains,
                                        const TerminologyDB& db) {
  std::vector<std::uint32_t> out;
  const auto& toks = stream.tokens;
  const std::size_t max_len = db.max_term_length(stream.language);
  std::size_t i = 0;
  while (i < toks.size()) {
    std::size_t matched = 0;
    const std::vector<std::uint32_t>* candidates = nullptr;
    std::string key;
    std::vector<std::string> keys;
    for (std::size_t len = 1; len <= max_len && i + len <= toks.size(); ++len) {
      if (len > 1) key.push_back(' ');
      key += toks[i + len - 1].lemma;
      keys.push_back(key);
    }
    for (std::size_t len = keys.size(); len >= 1; --len) {
      if (auto* c = db.lookup(stream.language, keys[len - 1])) {
        candidates = c;
        matched = len;
        break;
      }
    }
    if (!candidates) {
      ++i;
      continue;
    }
    std::uint32_t chosen = 0;
    std::size_t surviving = 0;
    for (auto k : *candidates) {
      if (intersects(db.concepts()[k].domains, domains)) {
        chosen = db.concepts()[k].concept_id;
        ++surviving;
      }
    }
    if (surviving == 1) out.push_back(chosen);
    i += matched;
  }
  return out;
}

}  // namespace priorart
