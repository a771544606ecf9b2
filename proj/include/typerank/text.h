#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace typerank {

// Lowercases ASCII letters and splits on every run of non-alphanumeric ASCII
// bytes. Bytes >= 0x80 are kept inside tokens so UTF-8 words stay intact.
// No stemming.
std::vector<std::string> tokenize(std::string_view text);

// "MeanOfTransportation" -> "mean of transportation", "TVShow" -> "tv show".
std::string split_camel_case(std::string_view identifier);

// Space-joined n-grams of consecutive tokens, as a sorted set.
std::vector<std::string> ngram_set(const std::vector<std::string>& tokens, int n);

// Articles, prepositions, pronouns, auxiliaries, conjunctions and a few
// question words. Everything else counts as a content word.
bool is_function_word(std::string_view token);

}  // namespace typerank
