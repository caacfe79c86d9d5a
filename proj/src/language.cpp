#include "priorart/language.hpp"

namespace priorart {

std::string_view language_code(Language lang) {
  switch (lang) {
    case Language::EN: return "en";
    case Language::FR: return "fr";
    case Language::DE: return "de";
  }
  return "en";
}

std::optional<Language> parse_language(std::string_view code) {
  if (code == "en" || code == "EN") return Language::EN;
  if (code == "fr" || code == "FR") return Language::FR;
  if (code == "de" || code == "DE") return Language::DE;
  return std::nullopt;
}

const std::string& LangText::get(Language lang) const {
  switch (lang) {
    case Language::FR: return fr;
    case Language::DE: return de;
    default: return en;
  }
}

std::string& LangText::get(Language lang) {
  switch (lang) {
    case Language::FR: return fr;
    case Language::DE: return de;
    default: return en;
  }
}

}  // namespace priorart
