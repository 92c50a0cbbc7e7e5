#include "textnorm.hpp"

#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace kpkit::textnorm {

namespace {

enum class CharClass { Keep, Space, Drop };

CharClass classify(UChar32 c) {
  if (u_isUWhiteSpace(c)) return CharClass::Space;
  switch (u_charType(c)) {
    case U_DASH_PUNCTUATION:
      return CharClass::Space;
    case U_CONNECTOR_PUNCTUATION:
    case U_START_PUNCTUATION:
    case U_END_PUNCTUATION:
    case U_INITIAL_PUNCTUATION:
    case U_FINAL_PUNCTUATION:
    case U_OTHER_PUNCTUATION:
    case U_MATH_SYMBOL:
    case U_CURRENCY_SYMBOL:
    case U_MODIFIER_SYMBOL:
    case U_OTHER_SYMBOL:
    case U_CONTROL_CHAR:
    case U_FORMAT_CHAR:
    case U_UNASSIGNED:
    case U_PRIVATE_USE_CHAR:
    case U_SURROGATE:
      return CharClass::Drop;
    default:
      return CharClass::Keep;
  }
}

}  // namespace

std::string normalize(std::string_view text) {
  icu::UnicodeString folded = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  folded.foldCase(U_FOLD_CASE_DEFAULT);

  icu::UnicodeString cleaned;
  bool pending_space = false;
  for (int32_t i = 0; i < folded.length(); i = folded.moveIndex32(i, 1)) {
    UChar32 c = folded.char32At(i);
    if (c == 0xFFFD) continue;  // replacement char from invalid UTF-8
    switch (classify(c)) {
      case CharClass::Space:
        pending_space = !cleaned.isEmpty();
        break;
      case CharClass::Drop:
        break;
      case CharClass::Keep:
        if (pending_space) cleaned.append(static_cast<UChar>(' '));
        pending_space = false;
        cleaned.append(c);
        break;
    }
  }
  std::string out;
  cleaned.toUTF8String(out);
  return out;
}

std::string stem_phrase(std::string_view normalized) {
  std::string out;
  for (std::string_view token : split_whitespace(normalized)) {
    if (!out.empty()) out.push_back(' ');
    out += porter_stem(token);
  }
  return out;
}

StemmedKeyphrase analyze(std::string_view raw) {
  StemmedKeyphrase k;
  k.raw = std::string(raw);
  k.normalized = normalize(raw);
  k.stemmed = stem_phrase(k.normalized);
  return k;
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

bool contains_tokens(std::string_view haystack, std::string_view needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  std::size_t pos = haystack.find(needle);
  while (pos != std::string_view::npos) {
    bool left = pos == 0 || haystack[pos - 1] == ' ';
    std::size_t end = pos + needle.size();
    bool right = end == haystack.size() || haystack[end] == ' ';
    if (left && right) return true;
    pos = haystack.find(needle, pos + 1);
  }
  return false;
}

}  // namespace kpkit::textnorm
