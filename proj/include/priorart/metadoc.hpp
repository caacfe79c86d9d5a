#pragma once

#include <string>
#include <vector>

#include "priorart/language.hpp"

namespace priorart {

struct CitationText {
  Language language = Language::EN;  // language of the citing description
  std::string text;
  friend bool operator==(const CitationText&, const CitationText&) = default;
};

// The merged text unit indexed for one patent: latest title, abstract and
// claims; earliest description; plus paragraphs of citing patents.
struct MetaDocument {
  std::string patent_id;
  Language language = Language::EN;
  LangText title;
  LangText abstract_text;
  LangText claims;
  std::string description;
  std::vector<CitationText> appended_citation_texts;
  // Carried along for concept disambiguation.
  std::vector<std::string> ipc_classes;
  std::vector<std::string> ecla_classes;

  bool empty() const {
    return title.empty() && abstract_text.empty() && claims.empty() && description.empty() &&
           appended_citation_texts.empty();
  }
  // All text available in `lang`, fields separated by newlines.
  std::string text_in(Language lang) const;
};

}  // namespace priorart
