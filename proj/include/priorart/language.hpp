#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace priorart {

enum class Language { EN, FR, DE };

inline constexpr std::array<Language, 3> kLanguages = {Language::EN, Language::FR, Language::DE};

// Lowercase code ("en", "fr", "de").
std::string_view language_code(Language lang);
std::optional<Language> parse_language(std::string_view code);

// Per-language text (title, abstract, claims).
struct LangText {
  std::string en;
  std::string fr;
  std::string de;

  const std::string& get(Language lang) const;
  std::string& get(Language lang);
  bool empty() const { return en.empty() && fr.empty() && de.empty(); }
  friend bool operator==(const LangText&, const LangText&) = default;
};

}  // namespace priorart
