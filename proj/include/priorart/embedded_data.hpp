#pragma once

#include <optional>
#include <string_view>

namespace priorart {

// Contents of a file shipped under data/lexicon, compiled into the library.
std::optional<std::string_view> embedded_file(std::string_view name);

}  // namespace priorart
