// Add-k smoothed n-gram model over sentences padded with boundary markers.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sportscaster::translator {

class LanguageModel {
 public:
  static constexpr std::string_view kBos = "<s>";
  static constexpr std::string_view kEos = "</s>";
  static constexpr std::string_view kUnk = "<unk>";
  static constexpr std::size_t kMaxOrder = 3;

  explicit LanguageModel(std::size_t order = 3, double k = 0.01);

  void fit(std::span<const std::vector<std::string>> sentences);

  std::size_t order() const { return order_; }
  double k() const { return k_; }
  // Training words plus </s> and <unk>: the outcomes every context spreads over.
  std::size_t extended_vocabulary_size() const { return words_.size() - 1; }
  const std::vector<std::string>& symbols() const { return words_; }

  // P(word | history) where history holds the preceding order-1 symbols.
  double prob(std::span<const std::string> history, std::string_view word) const;
  // Includes the final </s>.
  double log_prob(std::span<const std::string> sentence) const;
  double sentence_prob(std::span<const std::string> sentence) const;

  // Full-order n-gram counts, sorted, for serialization.
  std::vector<std::pair<std::vector<std::string>, std::size_t>> ngram_counts() const;
  void add_ngram_count(const std::vector<std::string>& ngram, std::size_t count);

 private:
  std::size_t id_of(std::string_view word) const;
  std::size_t intern(const std::string& word);
  std::uint64_t key(std::span<const std::size_t> ids) const;
  double prob_ids(std::span<const std::size_t> ngram) const;

  std::size_t order_;
  double k_;
  // 0 <s>, 1 </s>, 2 <unk>, then training words.
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> ids_;
  std::unordered_map<std::uint64_t, std::size_t> ngrams_;
  std::unordered_map<std::uint64_t, std::size_t> contexts_;
};

}  // namespace sportscaster::translator
