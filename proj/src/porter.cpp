// Porter suffix-stripping stemmer, original 1980 rule set.

#include <algorithm>
#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "textnorm.hpp"

namespace kpkit::textnorm {

namespace {

bool is_vowel_letter(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// consonant[i] per the definition: y counts as a consonant at the start of
// the word or after a vowel.
std::vector<bool> consonant_flags(std::string_view w) {
  std::vector<bool> flags(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (is_vowel_letter(w[i]))
      flags[i] = false;
    else if (w[i] == 'y')
      flags[i] = i == 0 ? true : !flags[i - 1];
    else
      flags[i] = true;
  }
  return flags;
}

// m in [C](VC){m}[V]
int measure(std::string_view stem) {
  auto flags = consonant_flags(stem);
  int m = 0;
  for (std::size_t i = 1; i < flags.size(); ++i)
    if (!flags[i - 1] && flags[i]) ++m;
  return m;
}

bool contains_vowel(std::string_view stem) {
  auto flags = consonant_flags(stem);
  return std::find(flags.begin(), flags.end(), false) != flags.end();
}

bool is_consonant(std::string_view w, std::size_t i) { return consonant_flags(w)[i]; }

bool ends_double_consonant(std::string_view w) {
  return w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2] && is_consonant(w, w.size() - 1);
}

// *o: stem ends consonant-vowel-consonant, last consonant not w, x or y.
bool ends_cvc(std::string_view w) {
  if (w.size() < 3) return false;
  auto flags = consonant_flags(w);
  std::size_t n = w.size();
  char last = w[n - 1];
  return flags[n - 3] && !flags[n - 2] && flags[n - 1] && last != 'w' && last != 'x' && last != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

// The first rule whose suffix matches decides the outcome: if its stem
// satisfies the measure condition the replacement happens, otherwise the word
// is left alone. Rule lists are ordered so that the first match is the
// longest one.
template <std::size_t N, typename Cond>
std::string apply_first(std::string word, const std::array<Rule, N>& rules, Cond&& cond) {
  for (const Rule& r : rules) {
    if (!ends_with(word, r.suffix)) continue;
    std::string_view stem(word.data(), word.size() - r.suffix.size());
    if (cond(stem, r.suffix)) return std::string(stem) + std::string(r.replacement);
    return word;
  }
  return word;
}

std::string step1a(std::string w) {
  static constexpr std::array<Rule, 4> rules{{
      {"sses", "ss"},
      {"ies", "i"},
      {"ss", "ss"},
      {"s", ""},
  }};
  return apply_first(std::move(w), rules, [](std::string_view, std::string_view) { return true; });
}

std::string step1b(std::string w) {
  if (ends_with(w, "eed")) {
    std::string_view stem(w.data(), w.size() - 3);
    if (measure(stem) > 0) w.pop_back();
    return w;
  }
  std::string stem;
  bool stripped = false;
  for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
    if (ends_with(w, suffix)) {
      std::string_view candidate(w.data(), w.size() - suffix.size());
      if (contains_vowel(candidate)) {
        stem = std::string(candidate);
        stripped = true;
        break;
      }
    }
  }
  if (!stripped) return w;

  if (ends_with(stem, "at") || ends_with(stem, "bl") || ends_with(stem, "iz")) return stem + "e";
  if (ends_double_consonant(stem)) {
    char last = stem.back();
    if (last != 'l' && last != 's' && last != 'z') stem.pop_back();
    return stem;
  }
  if (measure(stem) == 1 && ends_cvc(stem)) return stem + "e";
  return stem;
}

std::string step1c(std::string w) {
  if (ends_with(w, "y") && contains_vowel(std::string_view(w.data(), w.size() - 1))) w.back() = 'i';
  return w;
}

bool positive_measure(std::string_view stem, std::string_view) { return measure(stem) > 0; }

std::string step2(std::string w) {
  static constexpr std::array<Rule, 20> rules{{
      {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},
      {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},    {"entli", "ent"},
      {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
      {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
      {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
  }};
  return apply_first(std::move(w), rules, positive_measure);
}

std::string step3(std::string w) {
  static constexpr std::array<Rule, 7> rules{{
      {"icate", "ic"},
      {"ative", ""},
      {"alize", "al"},
      {"iciti", "ic"},
      {"ical", "ic"},
      {"ful", ""},
      {"ness", ""},
  }};
  return apply_first(std::move(w), rules, positive_measure);
}

std::string step4(std::string w) {
  static constexpr std::array<Rule, 19> rules{{
      {"al", ""},   {"ance", ""}, {"ence", ""}, {"er", ""},  {"ic", ""},
      {"able", ""}, {"ible", ""}, {"ant", ""},  {"ement", ""}, {"ment", ""},
      {"ent", ""},  {"ion", ""},  {"ou", ""},   {"ism", ""}, {"ate", ""},
      {"iti", ""},  {"ous", ""},  {"ive", ""},  {"ize", ""},
  }};
  return apply_first(std::move(w), rules, [](std::string_view stem, std::string_view suffix) {
    if (measure(stem) <= 1) return false;
    if (suffix == "ion") return !stem.empty() && (stem.back() == 's' || stem.back() == 't');
    return true;
  });
}

std::string step5a(std::string w) {
  if (!ends_with(w, "e")) return w;
  std::string_view stem(w.data(), w.size() - 1);
  int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) w.pop_back();
  return w;
}

std::string step5b(std::string w) {
  if (ends_with(w, "ll") && measure(std::string_view(w.data(), w.size() - 1)) > 1) w.pop_back();
  return w;
}

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.empty() || !std::all_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; }))
    return std::string(word);
  std::string w(word);
  w = step1a(std::move(w));
  w = step1b(std::move(w));
  w = step1c(std::move(w));
  w = step2(std::move(w));
  w = step3(std::move(w));
  w = step4(std::move(w));
  w = step5a(std::move(w));
  w = step5b(std::move(w));
  return w;
}

}  // namespace kpkit::textnorm
