#include "priorart/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <regex>

#include <json.hpp>

#include "priorart/embedded_data.hpp"
#include "priorart/error.hpp"
#include "priorart/lexicon.hpp"

namespace priorart {

using ordered_json = nlohmann::ordered_json;

std::string_view version_kind_name(VersionKind kind) {
  switch (kind) {
    case VersionKind::A1: return "A1";
    case VersionKind::A2: return "A2";
    case VersionKind::B1: return "B1";
    case VersionKind::B2: return "B2";
  }
  return "A1";
}

std::optional<VersionKind> parse_version_kind(std::string_view name) {
  if (name == "A1") return VersionKind::A1;
  if (name == "A2") return VersionKind::A2;
  if (name == "B1") return VersionKind::B1;
  if (name == "B2") return VersionKind::B2;
  return std::nullopt;
}

std::string_view citation_category_name(CitationCategory c) {
  switch (c) {
    case CitationCategory::X: return "X";
    case CitationCategory::Y: return "Y";
    case CitationCategory::A: return "A";
    case CitationCategory::D: return "D";
    case CitationCategory::OTHER: return "OTHER";
  }
  return "OTHER";
}

CitationCategory parse_citation_category(std::string_view name) {
  if (name == "X") return CitationCategory::X;
  if (name == "Y") return CitationCategory::Y;
  if (name == "A") return CitationCategory::A;
  if (name == "D") return CitationCategory::D;
  return CitationCategory::OTHER;
}

const std::string& PatentRecord::publication_date() const {
  static const std::string kEmpty;
  const std::string* best = nullptr;
  for (const auto& v : versions) {
    if (v.date.empty()) continue;
    if (!best || v.date < *best) best = &v.date;
  }
  return best ? *best : kEmpty;
}

const std::string& PatentRecord::latest_description() const {
  static const std::string kEmpty;
  for (auto it = versions.rbegin(); it != versions.rend(); ++it) {
    if (!it->description.empty()) return it->description;
  }
  return kEmpty;
}

std::string ipc_class3(std::string_view code) {
  return std::string(code.substr(0, std::min<std::size_t>(3, code.size())));
}

bool valid_class_code(std::string_view code) {
  static const std::regex pattern("^[A-H][0-9]{2}[A-Z]?.*");
  return std::regex_match(code.begin(), code.end(), pattern);
}

// --- record format --------------------------------------------------------

namespace {

std::vector<std::string> string_list(const ordered_json& obj, const char* key) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  for (const auto& v : *it) {
    if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string string_field(const ordered_json& obj, const char* key, bool required) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required) throw ParseError(std::string("missing field '") + key + "'");
    return {};
  }
  if (!it->is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

LangText lang_text(const ordered_json& obj, const char* key) {
  LangText out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_object()) throw ParseError(std::string("field '") + key + "' must be an object");
  for (auto lang : kLanguages) {
    out.get(lang) = string_field(*it, std::string(language_code(lang)).c_str(), false);
  }
  return out;
}

ordered_json lang_text_json(const LangText& t) {
  ordered_json out = ordered_json::object();
  for (auto lang : kLanguages) {
    if (!t.get(lang).empty()) out[std::string(language_code(lang))] = t.get(lang);
  }
  return out;
}

}  // namespace

PatentRecord parse_record(std::string_view line) {
  ordered_json obj;
  try {
    obj = ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed record: ") + e.what(), e.byte);
  }
  if (!obj.is_object()) throw ParseError("record must be a JSON object", 0);

  PatentRecord rec;
  rec.id = string_field(obj, "id", true);
  if (rec.id.empty()) throw ParseError("empty patent id");
  auto lang = parse_language(string_field(obj, "lang", true));
  if (!lang) throw ParseError("unknown language in record " + rec.id);
  rec.language = *lang;

  auto vit = obj.find("versions");
  if (vit == obj.end() || !vit->is_array() || vit->empty()) {
    throw ParseError("record " + rec.id + " has no versions");
  }
  for (const auto& vj : *vit) {
    if (!vj.is_object()) throw ParseError("version must be an object");
    PublicationVersion v;
    std::string kind = string_field(vj, "kind", true);
    auto k = parse_version_kind(kind);
    if (!k) throw ParseError("unknown version kind '" + kind + "' in record " + rec.id);
    v.kind = *k;
    v.date = string_field(vj, "date", false);
    v.title = lang_text(vj, "title");
    v.abstract_text = lang_text(vj, "abstract");
    v.claims = lang_text(vj, "claims");
    v.description = string_field(vj, "description", false);
    if (v.title.empty() && v.abstract_text.empty() && v.claims.empty() && v.description.empty()) {
      throw ParseError("version " + kind + " of record " + rec.id + " carries no text");
    }
    rec.versions.push_back(std::move(v));
  }
  std::stable_sort(rec.versions.begin(), rec.versions.end(),
                   [](const auto& a, const auto& b) { return a.kind < b.kind; });
  for (std::size_t i = 1; i < rec.versions.size(); ++i) {
    if (rec.versions[i].kind == rec.versions[i - 1].kind) {
      throw ParseError("duplicate version kind in record " + rec.id);
    }
  }

  rec.applicants = string_list(obj, "applicants");
  rec.inventors = string_list(obj, "inventors");
  rec.ipc_classes = string_list(obj, "ipc");
  rec.ecla_classes = string_list(obj, "ecla");
  rec.priority_ids = string_list(obj, "priorities");
  for (const auto& c : rec.ipc_classes) {
    if (!valid_class_code(c)) throw ParseError("invalid IPC code '" + c + "' in record " + rec.id);
  }
  for (const auto& c : rec.ecla_classes) {
    if (!valid_class_code(c)) throw ParseError("invalid ECLA code '" + c + "' in record " + rec.id);
  }
  rec.priority_date = string_field(obj, "priority_date", false);
  if (rec.priority_date.empty()) rec.priority_date = rec.publication_date();
  return rec;
}

std::string serialize_record(const PatentRecord& rec) {
  ordered_json obj;
  obj["id"] = rec.id;
  obj["lang"] = language_code(rec.language);
  ordered_json versions = ordered_json::array();
  for (const auto& v : rec.versions) {
    ordered_json vj;
    vj["kind"] = version_kind_name(v.kind);
    vj["date"] = v.date;
    vj["title"] = lang_text_json(v.title);
    vj["abstract"] = lang_text_json(v.abstract_text);
    vj["claims"] = lang_text_json(v.claims);
    vj["description"] = v.description;
    versions.push_back(std::move(vj));
  }
  obj["versions"] = std::move(versions);
  obj["applicants"] = rec.applicants;
  obj["inventors"] = rec.inventors;
  obj["ipc"] = rec.ipc_classes;
  obj["ecla"] = rec.ecla_classes;
  obj["priorities"] = rec.priority_ids;
  obj["priority_date"] = rec.priority_date;
  return obj.dump();
}

std::vector<PatentRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open record file: " + path);
  std::vector<PatentRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(parse_record(line));
    } catch (const ParseError& e) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what(), e.offset(), lineno);
    }
  }
  return out;
}

void write_records(const std::string& path, const std::vector<PatentRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write record file: " + path);
  for (const auto& r : records) out << serialize_record(r) << '\n';
}

// --- name normalization ---------------------------------------------------

namespace {

std::vector<std::string> name_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',' || c == '\n' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return ascii_lower(a) == ascii_lower(b);
}

std::vector<std::string> strip_person(const std::vector<std::string>& tokens,
                                      const NameGazetteer& g) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    bool drop = std::any_of(g.person_titles.begin(), g.person_titles.end(),
                            [&](const std::string& title) { return iequals(t, title); });
    if (!drop) out.push_back(t);
  }
  return out;
}

std::vector<std::string> strip_applicant(const std::vector<std::string>& tokens,
                                         const NameGazetteer& g) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t skip = 0;
    for (const auto& mark : g.applicant_marks) {  // longest first
      if (mark.empty() || i + mark.size() > tokens.size()) continue;
      bool match = true;
      for (std::size_t k = 0; k < mark.size() && match; ++k) match = iequals(tokens[i + k], mark[k]);
      if (match) {
        skip = mark.size();
        break;
      }
    }
    if (skip) {
      i += skip;
    } else {
      out.push_back(tokens[i++]);
    }
  }
  return out;
}

// Strips to a fixed point; falls back to the collapsed input when every
// token would be removed.
template <typename Strip>
std::string normalize_fixed_point(std::string_view raw, Strip strip) {
  auto tokens = name_tokens(raw);
  for (;;) {
    auto next = strip(tokens);
    if (next.empty() || next == tokens) return join(tokens);
    tokens = std::move(next);
  }
}

std::vector<std::string> entry_lines(std::string_view text) {
  std::vector<std::string> out;
  for (auto& line : split_lines(text)) {
    auto trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    out.emplace_back(trimmed);
  }
  return out;
}

}  // namespace

NameGazetteer NameGazetteer::from_lists(std::string_view person_titles,
                                        std::string_view entity_marks,
                                        std::string_view countries) {
  NameGazetteer g;
  g.person_titles = entry_lines(person_titles);
  for (const auto& src : {entity_marks, countries}) {
    for (const auto& e : entry_lines(src)) g.applicant_marks.push_back(name_tokens(e));
  }
  std::stable_sort(g.applicant_marks.begin(), g.applicant_marks.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return g;
}

const NameGazetteer& NameGazetteer::defaults() {
  static const NameGazetteer g = from_lists(*embedded_file("person_titles.txt"),
                                            *embedded_file("applicant_marks.txt"),
                                            *embedded_file("countries.txt"));
  return g;
}

std::string normalize_person_name(std::string_view raw, const NameGazetteer& gazetteer) {
  return normalize_fixed_point(raw, [&](const auto& t) { return strip_person(t, gazetteer); });
}

std::string normalize_applicant_name(std::string_view raw, const NameGazetteer& gazetteer) {
  return normalize_fixed_point(raw, [&](const auto& t) { return strip_applicant(t, gazetteer); });
}

// --- citations --------------------------------------------------------------

std::vector<CitationMention> extract_citations(std::string_view description,
                                               const std::unordered_set<std::string>& known_ids) {
  static const std::regex pattern(R"(\bEP[ \-]?(\d(?: ?\d){6})(?![0-9]))");
  std::vector<CitationMention> out;
  std::unordered_set<std::string> seen;
  for (const auto& paragraph : split_lines(description)) {
    auto begin = std::cregex_iterator(paragraph.data(), paragraph.data() + paragraph.size(), pattern);
    for (auto it = begin; it != std::cregex_iterator(); ++it) {
      std::string id = "EP";
      for (char c : (*it)[1].str()) {
        if (c != ' ') id.push_back(c);
      }
      if (!known_ids.count(id) || !seen.insert(id).second) continue;
      out.push_back({std::move(id), std::string(paragraph)});
    }
  }
  return out;
}

std::size_t CitationGraph::num_edges() const {
  std::size_t n = 0;
  for (const auto& v : cited) n += v.size();
  return n;
}

CitationGraph citation_graph(const std::vector<PatentRecord>& records) {
  std::unordered_map<std::string_view, std::uint32_t> ordinal;
  for (std::uint32_t i = 0; i < records.size(); ++i) ordinal.emplace(records[i].id, i);
  CitationGraph g;
  g.cited.resize(records.size());
  g.citers.resize(records.size());
  for (std::uint32_t u = 0; u < records.size(); ++u) {
    for (const auto& id : records[u].cited_ids) {
      auto it = ordinal.find(id);
      if (it == ordinal.end() || it->second == u) continue;
      g.cited[u].push_back(it->second);
    }
    std::sort(g.cited[u].begin(), g.cited[u].end());
    g.cited[u].erase(std::unique(g.cited[u].begin(), g.cited[u].end()), g.cited[u].end());
    for (auto v : g.cited[u]) g.citers[v].push_back(u);
  }
  return g;
}

// --- store ------------------------------------------------------------------

PatentRecord CorpusStore::normalized(PatentRecord rec) const {
  for (auto& a : rec.applicants) a = normalize_applicant_name(a, gazetteer_);
  for (auto& i : rec.inventors) i = normalize_person_name(i, gazetteer_);
  return rec;
}

std::vector<CitationMention> CorpusStore::resolve_citations(const PatentRecord& record) const {
  auto mentions = extract_citations(record.latest_description(), id_set_);
  std::erase_if(mentions, [&](const auto& m) { return m.id == record.id; });
  return mentions;
}

PatentRecord CorpusStore::prepare_topic(PatentRecord record) const {
  if (auto o = ordinal(record.id)) return records_[*o];
  record = normalized(std::move(record));
  record.cited_ids.clear();
  for (auto& m : resolve_citations(record)) record.cited_ids.push_back(std::move(m.id));
  return record;
}

CorpusStore CorpusStore::build(std::vector<PatentRecord> records, const NameGazetteer& gazetteer) {
  CorpusStore s;
  s.gazetteer_ = gazetteer;
  s.records_ = std::move(records);
  for (std::uint32_t i = 0; i < s.records_.size(); ++i) {
    auto& rec = s.records_[i];
    rec = s.normalized(std::move(rec));
    if (!s.ordinal_.emplace(rec.id, i).second) {
      throw ParseError("duplicate patent id " + rec.id);
    }
    s.id_set_.insert(rec.id);
  }
  for (auto& rec : s.records_) {
    rec.cited_ids.clear();
    for (auto& m : s.resolve_citations(rec)) {
      rec.cited_ids.push_back(m.id);
      s.edges_.push_back({rec.id, m.id, CitationCategory::D, std::move(m.paragraph)});
    }
  }
  s.graph_ = citation_graph(s.records_);

  auto add_unique = [](auto& map, const std::string& key, std::uint32_t i) {
    auto& list = map[key];
    if (list.empty() || list.back() != i) list.push_back(i);
  };
  for (std::uint32_t i = 0; i < s.records_.size(); ++i) {
    const auto& rec = s.records_[i];
    for (const auto& a : rec.applicants) add_unique(s.applicant_, a, i);
    for (const auto& v : rec.inventors) add_unique(s.inventor_, v, i);
    for (const auto& c : rec.ipc_classes) add_unique(s.ipc3_, ipc_class3(c), i);
    for (const auto& c : rec.ecla_classes) add_unique(s.ecla_, c, i);
    for (const auto& p : rec.priority_ids) add_unique(s.priority_, p, i);
  }
  return s;
}

CorpusStore CorpusStore::load(const std::string& path, const NameGazetteer& gazetteer) {
  return build(read_records(path), gazetteer);
}

std::optional<std::uint32_t> CorpusStore::ordinal(std::string_view id) const {
  auto it = ordinal_.find(std::string(id));
  if (it == ordinal_.end()) return std::nullopt;
  return it->second;
}

namespace {
const std::vector<std::uint32_t>& lookup(
    const std::unordered_map<std::string, std::vector<std::uint32_t>>& map, const std::string& key) {
  static const std::vector<std::uint32_t> kEmpty;
  auto it = map.find(key);
  return it == map.end() ? kEmpty : it->second;
}
}  // namespace

const std::vector<std::uint32_t>& CorpusStore::by_applicant(const std::string& n) const {
  return lookup(applicant_, n);
}
const std::vector<std::uint32_t>& CorpusStore::by_inventor(const std::string& n) const {
  return lookup(inventor_, n);
}
const std::vector<std::uint32_t>& CorpusStore::by_ipc_class3(const std::string& c) const {
  return lookup(ipc3_, c);
}
const std::vector<std::uint32_t>& CorpusStore::by_ecla(const std::string& c) const {
  return lookup(ecla_, c);
}
const std::vector<std::uint32_t>& CorpusStore::by_priority(const std::string& p) const {
  return lookup(priority_, p);
}

}  // namespace priorart
