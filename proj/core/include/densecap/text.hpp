#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace densecap {

using Tokens = std::vector<std::string>;

// Shared by vocabulary construction and every caption metric: lowercase,
// ASCII punctuation to spaces, split on whitespace.
Tokens tokenize(std::string_view text);

std::string join_tokens(std::span<const std::string> tokens);

class Vocabulary {
 public:
  static constexpr int kBos = 0;
  static constexpr int kEos = 1;
  static constexpr int kUnk = 2;

  Vocabulary();
  // tokens must start with <bos>, <eos>, <unk> and contain no duplicates.
  explicit Vocabulary(std::vector<std::string> tokens);

  int size() const noexcept { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::string& token(int id) const;
  int id(const std::string& token) const;  // <unk> for unknown words

  // Tokenizes and maps words to ids; appends <eos>.
  std::vector<int> encode(std::string_view caption) const;
  // Words up to (not including) the first <eos>; <bos> is skipped.
  Tokens words(std::span<const int> ids) const;
  std::string decode(std::span<const int> ids) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// Words with count < min_count map to <unk>. Order: frequency descending,
// then lexicographic. Throws DataError for an empty corpus.
Vocabulary build_vocab(std::span<const std::string> captions, int min_count = 1);

}  // namespace densecap
