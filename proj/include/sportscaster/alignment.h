// Word-to-production lexical translation table trained with IBM Model 1 EM.
// Each word of a sentence aligns to one production of its MR's derivation or
// to NULL.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sportscaster/mrl.h"

namespace sportscaster::translator {

struct TrainingPair {
  std::vector<std::string> tokens;
  mrl::Mr mr;

  bool operator==(const TrainingPair&) const = default;
};

class EmptyTrainingSet : public std::invalid_argument {
 public:
  EmptyTrainingSet() : std::invalid_argument("empty training set") {}
};

// Alignment targets: the 46 productions by id, then NULL.
inline constexpr std::size_t kNullTarget = mrl::kNumProductions;
inline constexpr std::size_t kNumTargets = mrl::kNumProductions + 1;
// Add-k mass that keeps unseen (word, target) pairs off zero.
inline constexpr double kUnknownWordK = 1e-3;

class AlignmentModel {
 public:
  AlignmentModel() = default;
  // Uniform t(w|p) = 1/|V| over a sorted, deduplicated vocabulary.
  explicit AlignmentModel(std::vector<std::string> vocabulary);

  const std::vector<std::string>& vocabulary() const { return vocab_; }
  std::optional<std::size_t> word_id(std::string_view word) const;

  // Unsmoothed t(w|target); each target's column sums to 1.
  double t(std::size_t word, std::size_t target) const { return t_[target * vocab_.size() + word]; }
  void set_t(std::size_t word, std::size_t target, double value) { t_[target * vocab_.size() + word] = value; }

  // (t + k) / (1 + k(|V| + 1)) for known words, k / (1 + k(|V| + 1)) for
  // anything else, so every target keeps a proper distribution over the
  // vocabulary plus one unknown-word bucket.
  double prob(std::optional<std::size_t> word, std::size_t target) const;
  double prob(std::string_view word, std::size_t target) const { return prob(word_id(word), target); }
  double floor() const;

  // Corpus log-likelihood before training and after each EM iteration.
  std::vector<double> log_likelihood_history;

 private:
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> ids_;
  std::vector<double> t_;
};

// Alignment targets of an MR: its derivation, positions kept.
std::vector<std::size_t> derivation_targets(const mrl::Mr& mr);

AlignmentModel train_alignment(std::span<const TrainingPair> pairs, std::size_t iterations);

// Σ_pairs Σ_words log( Σ_{p ∈ derivation ∪ NULL} t(w|p) / (d + 1) ) on raw t.
double corpus_log_likelihood(std::span<const TrainingPair> pairs, const AlignmentModel& model);

}  // namespace sportscaster::translator
