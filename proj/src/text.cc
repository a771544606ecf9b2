#include "typerank/text.h"

#include <algorithm>
#include <iterator>
#include <cctype>

namespace typerank {

namespace {

bool is_token_byte(unsigned char c) { return c >= 0x80 || std::isalnum(c); }

constexpr std::string_view kFunctionWords[] = {
    "a",       "about",   "above",   "after",   "again",   "against",
    "all",     "am",      "an",      "and",     "any",     "are",
    "as",      "at",      "be",      "been",    "before",  "being",
    "below",   "between", "both",    "but",     "by",      "can",
    "could",   "did",     "do",      "does",    "doing",   "down",
    "during",  "each",    "either",  "few",     "for",     "from",
    "further", "had",     "has",     "have",    "having",  "he",
    "her",     "here",    "hers",    "herself", "him",     "himself",
    "his",     "how",     "i",       "if",      "in",      "into",
    "is",      "it",      "its",     "itself",  "me",      "might",
    "more",    "most",    "must",    "my",      "myself",  "neither",
    "no",      "nor",     "not",     "of",      "off",     "on",
    "once",    "only",    "or",      "other",   "ought",   "our",
    "ours",    "ourselves", "out",   "over",    "own",     "same",
    "shall",   "she",     "should",  "so",      "some",    "such",
    "than",    "that",    "the",     "their",   "theirs",  "them",
    "themselves", "then", "there",   "these",   "they",    "this",
    "those",   "through", "to",      "too",     "under",   "until",
    "up",      "upon",    "us",      "very",    "via",     "was",
    "we",      "were",    "what",    "when",    "where",   "whether",
    "which",   "while",   "who",     "whom",    "whose",   "why",
    "will",    "with",    "within",  "without", "would",   "yet",
    "you",     "your",    "yours",   "yourself", "yourselves", "many",
    "much"};

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (is_token_byte(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string split_camel_case(std::string_view identifier) {
  std::string out;
  const auto n = identifier.size();
  for (std::size_t i = 0; i < n; ++i) {
    unsigned char c = identifier[i];
    if (!is_token_byte(c)) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
      continue;
    }
    if (std::isupper(c) && i > 0 && !out.empty() && out.back() != ' ') {
      unsigned char prev = identifier[i - 1];
      bool next_lower = i + 1 < n && std::islower(static_cast<unsigned char>(identifier[i + 1]));
      // Boundary before an uppercase letter that follows a lowercase letter or
      // digit, or that starts a new word after an acronym ("TVShow").
      if (std::islower(prev) || std::isdigit(prev) || (std::isupper(prev) && next_lower)) {
        out.push_back(' ');
      }
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::vector<std::string> ngram_set(const std::vector<std::string>& tokens, int n) {
  std::vector<std::string> grams;
  if (n < 1 || tokens.size() < static_cast<std::size_t>(n)) return grams;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string gram = tokens[i];
    for (int j = 1; j < n; ++j) {
      gram.push_back(' ');
      gram += tokens[i + j];
    }
    grams.push_back(std::move(gram));
  }
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  return grams;
}

bool is_function_word(std::string_view token) {
  return std::find(std::begin(kFunctionWords), std::end(kFunctionWords), token) !=
         std::end(kFunctionWords);
}

}  // namespace typerank
