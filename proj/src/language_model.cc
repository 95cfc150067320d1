#include "sportscaster/language_model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sportscaster::translator {

namespace {
constexpr unsigned kBits = 20;
constexpr std::size_t kMaxSymbols = std::size_t{1} << kBits;
}  // namespace

LanguageModel::LanguageModel(std::size_t order, double k) : order_(order), k_(k) {
  if (order < 1 || order > kMaxOrder) throw std::invalid_argument("language model order must be 1..3");
  if (!(k > 0)) throw std::invalid_argument("language model k must be positive");
  for (std::string_view s : {kBos, kEos, kUnk}) intern(std::string(s));
}

std::size_t LanguageModel::intern(const std::string& word) {
  auto [it, inserted] = ids_.emplace(word, words_.size());
  if (inserted) {
    if (words_.size() + 1 >= kMaxSymbols) throw std::length_error("language model vocabulary too large");
    words_.push_back(word);
  }
  return it->second;
}

std::size_t LanguageModel::id_of(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  if (it == ids_.end() || it->second == 0) return 2;
  return it->second;
}

std::uint64_t LanguageModel::key(std::span<const std::size_t> ids) const {
  // The leading two bits hold the length so grams of different lengths never collide.
  std::uint64_t k = ids.size();
  for (std::size_t id : ids) k = (k << kBits) | id;
  return k;
}

void LanguageModel::fit(std::span<const std::vector<std::string>> sentences) {
  for (const auto& s : sentences)
    for (const std::string& w : s) {
      if (w == kBos || w == kEos || w == kUnk) throw std::invalid_argument("reserved token in language model input");
      intern(w);
    }
  for (const auto& s : sentences) {
    std::vector<std::size_t> ids(order_ - 1, 0);
    for (const std::string& w : s) ids.push_back(ids_.at(w));
    ids.push_back(1);
    for (std::size_t i = order_ - 1; i < ids.size(); ++i) {
      std::span<const std::size_t> gram(ids.data() + i + 1 - order_, order_);
      ++ngrams_[key(gram)];
      ++contexts_[key(gram.first(order_ - 1))];
    }
  }
}

void LanguageModel::add_ngram_count(const std::vector<std::string>& ngram, std::size_t count) {
  if (ngram.size() != order_) throw std::invalid_argument("n-gram length does not match model order");
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < ngram.size(); ++i) {
    const std::string& w = ngram[i];
    bool last = i + 1 == ngram.size();
    if (w == kBos && !last) ids.push_back(0);
    else if (w == kEos && last) ids.push_back(1);
    else if (w == kBos || w == kEos || w == kUnk) throw std::invalid_argument("misplaced boundary marker in n-gram");
    else ids.push_back(intern(w));
  }
  ngrams_[key(ids)] += count;
  contexts_[key(std::span<const std::size_t>(ids).first(order_ - 1))] += count;
}

double LanguageModel::prob_ids(std::span<const std::size_t> ngram) const {
  auto c = ngrams_.find(key(ngram));
  auto ctx = contexts_.find(key(ngram.first(order_ - 1)));
  double num = (c == ngrams_.end() ? 0.0 : static_cast<double>(c->second)) + k_;
  double den = (ctx == contexts_.end() ? 0.0 : static_cast<double>(ctx->second)) +
               k_ * static_cast<double>(extended_vocabulary_size());
  return num / den;
}

double LanguageModel::prob(std::span<const std::string> history, std::string_view word) const {
  if (history.size() != order_ - 1) throw std::invalid_argument("history length must be order - 1");
  std::vector<std::size_t> ids;
  for (const std::string& h : history) ids.push_back(h == kBos ? 0 : id_of(h));
  ids.push_back(word == kEos ? 1 : id_of(word));
  return prob_ids(ids);
}

double LanguageModel::log_prob(std::span<const std::string> sentence) const {
  std::vector<std::size_t> ids(order_ - 1, 0);
  for (const std::string& w : sentence) ids.push_back(id_of(w));
  ids.push_back(1);
  double lp = 0;
  for (std::size_t i = order_ - 1; i < ids.size(); ++i)
    lp += std::log(prob_ids(std::span<const std::size_t>(ids.data() + i + 1 - order_, order_)));
  return lp;
}

double LanguageModel::sentence_prob(std::span<const std::string> sentence) const {
  return std::exp(log_prob(sentence));
}

std::vector<std::pair<std::vector<std::string>, std::size_t>> LanguageModel::ngram_counts() const {
  std::vector<std::pair<std::vector<std::string>, std::size_t>> out;
  const std::uint64_t mask = kMaxSymbols - 1;
  for (const auto& [k, count] : ngrams_) {
    std::vector<std::string> gram(order_);
    std::uint64_t v = k;
    for (std::size_t i = order_; i-- > 0;) {
      gram[i] = words_[v & mask];
      v >>= kBits;
    }
    out.emplace_back(std::move(gram), count);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sportscaster::translator
