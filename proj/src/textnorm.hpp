#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kpkit::textnorm {

/// Casefolds (Unicode default folding), turns dash punctuation into spaces,
/// drops every other punctuation or symbol character, collapses whitespace
/// runs and trims. Invalid UTF-8 bytes are dropped.
std::string normalize(std::string_view text);

/// Porter (1980) stem of one lowercase token. Tokens containing anything
/// other than a-z are returned unchanged.
std::string porter_stem(std::string_view word);

/// Stems each space-separated token of an already normalized phrase and joins
/// the stems with single spaces.
std::string stem_phrase(std::string_view normalized);

struct StemmedKeyphrase {
  std::string raw;
  std::string normalized;
  std::string stemmed;
};

StemmedKeyphrase analyze(std::string_view raw);

/// normalize() followed by stem_phrase().
inline std::string normalize_and_stem(std::string_view text) {
  return stem_phrase(normalize(text));
}

std::vector<std::string_view> split_whitespace(std::string_view text);

/// True iff `needle` occurs in `haystack` starting and ending on token
/// boundaries (both strings single-space separated). Empty needles never match.
bool contains_tokens(std::string_view haystack, std::string_view needle);

}  // namespace kpkit::textnorm
