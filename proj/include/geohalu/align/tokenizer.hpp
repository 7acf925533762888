#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace geohalu::align {

// Whitespace tokenizer over a fixed vocabulary. Ids follow the sorted
// token order, so building from the same texts in any order gives the same
// ids.
class Tokenizer {
 public:
  Tokenizer() = default;
  explicit Tokenizer(std::vector<std::string> tokens);

  static Tokenizer build(const std::vector<std::string>& texts);

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Throws ValidationError for a token outside the vocabulary.
  std::vector<int> encode(std::string_view text) const;
  std::string decode(const std::vector<int>& ids) const;

  bool operator==(const Tokenizer& o) const { return tokens_ == o.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace geohalu::align
