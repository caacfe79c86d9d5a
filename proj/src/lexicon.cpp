#include "priorart/lexicon.hpp"

#include <fstream>
#include <sstream>

#include "priorart/embedded_data.hpp"
#include "priorart/error.hpp"

namespace priorart {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string utf8_lower(std::string_view s) {
  std::string out(s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto c = static_cast<unsigned char>(out[i]);
    if (c >= 'A' && c <= 'Z') {
      out[i] = static_cast<char>(c - 'A' + 'a');
    } else if (c == 0xC3 && i + 1 < out.size()) {
      auto d = static_cast<unsigned char>(out[i + 1]);
      // U+00C0..U+00DE except U+00D7 (multiplication sign)
      if (d >= 0x80 && d <= 0x9E && d != 0x97) out[i + 1] = static_cast<char>(d + 0x20);
      ++i;
    }
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

namespace {

bool is_number(std::string_view s) {
  return !s.empty() && s.front() >= '0' && s.front() <= '9';
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view embedded(const std::string& name) {
  auto text = embedded_file(name);
  if (!text) throw ConfigError("missing embedded lexicon " + name);
  return *text;
}

}  // namespace

std::string Lexicon::lemma(std::string_view lowered) const {
  if (is_number(lowered)) return std::string(lowered);
  for (const auto& rule : suffix_rules) {
    if (!ends_with(lowered, rule.suffix)) continue;
    std::size_t stem = lowered.size() - rule.suffix.size();
    if (stem < rule.min_stem) continue;
    return std::string(lowered.substr(0, stem)) + rule.replacement;
  }
  return std::string(lowered);
}

Lexicon Lexicon::from_text(Language lang, std::string_view stopwords, std::string_view suffixes) {
  Lexicon lex;
  lex.language = lang;
  for (auto line : split_lines(stopwords)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    lex.stopwords.insert(utf8_lower(t));
  }
  std::size_t lineno = 0;
  for (auto line : split(suffixes, '\n')) {
    ++lineno;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::istringstream fields{std::string(t)};
    SuffixRule rule;
    std::string replacement;
    if (!(fields >> rule.suffix >> replacement >> rule.min_stem)) {
      throw ParseError("bad suffix rule at line " + std::to_string(lineno), 0, lineno);
    }
    rule.replacement = replacement == "-" ? "" : replacement;
    lex.suffix_rules.push_back(std::move(rule));
  }
  return lex;
}

Lexicon Lexicon::from_files(Language lang, const std::string& stopword_path,
                            const std::string& suffix_path) {
  return from_text(lang, read_file(stopword_path), read_file(suffix_path));
}

const Lexicon& Lexicon::defaults(Language lang) {
  auto make = [](Language l) {
    std::string code(language_code(l));
    return from_text(l, embedded("stopwords_" + code + ".txt"), embedded("suffixes_" + code + ".txt"));
  };
  static const Lexicon en = make(Language::EN);
  static const Lexicon fr = make(Language::FR);
  static const Lexicon de = make(Language::DE);
  switch (lang) {
    case Language::FR: return fr;
    case Language::DE: return de;
    default: return en;
  }
}

const Lexicon& Lexicons::get(Language lang) const {
  switch (lang) {
    case Language::FR: return fr;
    case Language::DE: return de;
    default: return en;
  }
}

const Lexicons& Lexicons::defaults() {
  static const Lexicons lex;
  return lex;
}

}  // namespace priorart
