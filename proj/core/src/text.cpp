#include "densecap/text.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "densecap/errors.hpp"

namespace densecap {

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c) || std::ispunct(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{"<bos>", "<eos>", "<unk>"}) {}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.size() < 3 || tokens_[kBos] != "<bos>" || tokens_[kEos] != "<eos>" || tokens_[kUnk] != "<unk>") {
    throw DataError("vocabulary must start with <bos>, <eos>, <unk>");
  }
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw DataError("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || id >= size()) throw DataError("token id " + std::to_string(id) + " outside vocabulary");
  return tokens_[static_cast<std::size_t>(id)];
}

int Vocabulary::id(const std::string& token) const {
  const auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

std::vector<int> Vocabulary::encode(std::string_view caption) const {
  std::vector<int> ids;
  for (const auto& w : tokenize(caption)) ids.push_back(id(w));
  ids.push_back(kEos);
  return ids;
}

Tokens Vocabulary::words(std::span<const int> ids) const {
  Tokens out;
  for (int id : ids) {
    if (id == kEos) break;
    if (id == kBos) continue;
    out.push_back(token(id));
  }
  return out;
}

std::string Vocabulary::decode(std::span<const int> ids) const {
  const Tokens w = words(ids);
  return join_tokens(w);
}

Vocabulary build_vocab(std::span<const std::string> captions, int min_count) {
  std::map<std::string, int> counts;
  for (const auto& c : captions) {
    for (auto& w : tokenize(c)) ++counts[w];
  }
  if (counts.empty()) throw DataError("cannot build a vocabulary from an empty caption corpus");
  std::vector<std::pair<std::string, int>> kept;
  for (auto& [w, n] : counts) {
    if (n >= min_count && w != "<bos>" && w != "<eos>" && w != "<unk>") kept.emplace_back(w, n);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens{"<bos>", "<eos>", "<unk>"};
  for (auto& [w, n] : kept) tokens.push_back(w);
  return Vocabulary(std::move(tokens));
}

}  // namespace densecap
