#include "geohalu/align/tokenizer.hpp"

#include <algorithm>
#include <set>

#include "geohalu/error.hpp"
#include "geohalu/text.hpp"

namespace geohalu::align {

Tokenizer::Tokenizer(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i)
    if (!ids_.emplace(tokens_[i], static_cast<int>(i)).second)
      throw ValidationError("duplicate token '" + tokens_[i] + "' in vocabulary");
}

Tokenizer Tokenizer::build(const std::vector<std::string>& texts) {
  std::set<std::string> vocab;
  for (const auto& t : texts)
    for (auto& w : split_whitespace(t)) vocab.insert(std::move(w));
  return Tokenizer(std::vector<std::string>(vocab.begin(), vocab.end()));
}

std::vector<int> Tokenizer::encode(std::string_view text) const {
  std::vector<int> out;
  for (const auto& w : split_whitespace(text)) {
    auto it = ids_.find(w);
    if (it == ids_.end()) throw ValidationError("token '" + w + "' is not in the vocabulary");
    out.push_back(it->second);
  }
  return out;
}

std::string Tokenizer::decode(const std::vector<int>& ids) const {
  std::vector<std::string> words;
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size())
      throw ValidationError("token id " + std::to_string(id) + " is out of range");
    words.push_back(tokens_[static_cast<std::size_t>(id)]);
  }
  return join(words, " ");
}

}  // namespace geohalu::align
