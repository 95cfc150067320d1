#include "sportscaster/alignment.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace sportscaster::translator {

AlignmentModel::AlignmentModel(std::vector<std::string> vocabulary) {
  std::sort(vocabulary.begin(), vocabulary.end());
  vocabulary.erase(std::unique(vocabulary.begin(), vocabulary.end()), vocabulary.end());
  vocab_ = std::move(vocabulary);
  for (std::size_t i = 0; i < vocab_.size(); ++i) ids_.emplace(vocab_[i], i);
  double u = vocab_.empty() ? 0 : 1.0 / static_cast<double>(vocab_.size());
  t_.assign(kNumTargets * vocab_.size(), u);
}

std::optional<std::size_t> AlignmentModel::word_id(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

double AlignmentModel::floor() const {
  return kUnknownWordK / (1 + kUnknownWordK * static_cast<double>(vocab_.size() + 1));
}

double AlignmentModel::prob(std::optional<std::size_t> word, std::size_t target) const {
  double denom = 1 + kUnknownWordK * static_cast<double>(vocab_.size() + 1);
  if (!word) return kUnknownWordK / denom;
  return (t(*word, target) + kUnknownWordK) / denom;
}

std::vector<std::size_t> derivation_targets(const mrl::Mr& mr) {
  std::vector<std::size_t> out;
  for (mrl::ProductionId id : mrl::derivation(mr)) out.push_back(id.value);
  return out;
}

namespace {

struct IndexedPair {
  std::vector<std::size_t> words;
  std::vector<std::size_t> targets;  // derivation then NULL
};

std::vector<IndexedPair> index_pairs(std::span<const TrainingPair> pairs, const AlignmentModel& model) {
  std::vector<IndexedPair> out;
  out.reserve(pairs.size());
  for (const TrainingPair& p : pairs) {
    IndexedPair ip;
    for (const std::string& w : p.tokens) {
      auto id = model.word_id(w);
      if (!id) throw std::invalid_argument("word '" + w + "' is outside the alignment vocabulary");
      ip.words.push_back(*id);
    }
    ip.targets = derivation_targets(p.mr);
    ip.targets.push_back(kNullTarget);
    out.push_back(std::move(ip));
  }
  return out;
}

double log_likelihood(const std::vector<IndexedPair>& pairs, const AlignmentModel& model) {
  double ll = 0;
  for (const IndexedPair& p : pairs) {
    double inv = 1.0 / static_cast<double>(p.targets.size());
    for (std::size_t w : p.words) {
      double s = 0;
      for (std::size_t q : p.targets) s += model.t(w, q);
      ll += std::log(s * inv);
    }
  }
  return ll;
}

}  // namespace

AlignmentModel train_alignment(std::span<const TrainingPair> pairs, std::size_t iterations) {
  if (pairs.empty()) throw EmptyTrainingSet();
  if (iterations < 1) throw std::invalid_argument("alignment needs at least one iteration");
  std::set<std::string> words;
  for (const TrainingPair& p : pairs) words.insert(p.tokens.begin(), p.tokens.end());
  AlignmentModel model(std::vector<std::string>(words.begin(), words.end()));
  const std::size_t v = model.vocabulary().size();
  auto indexed = index_pairs(pairs, model);

  model.log_likelihood_history.push_back(log_likelihood(indexed, model));
  std::vector<double> counts(kNumTargets * v);
  std::vector<double> totals(kNumTargets);
  for (std::size_t iter = 0; iter < iterations; ++iter) {
    std::fill(counts.begin(), counts.end(), 0.0);
    std::fill(totals.begin(), totals.end(), 0.0);
    for (const IndexedPair& p : indexed) {
      for (std::size_t w : p.words) {
        double z = 0;
        for (std::size_t q : p.targets) z += model.t(w, q);
        for (std::size_t q : p.targets) {
          double post = model.t(w, q) / z;
          counts[q * v + w] += post;
          totals[q] += post;
        }
      }
    }
    for (std::size_t q = 0; q < kNumTargets; ++q) {
      if (totals[q] <= 0) continue;  // unseen target keeps its distribution
      for (std::size_t w = 0; w < v; ++w) model.set_t(w, q, counts[q * v + w] / totals[q]);
    }
    model.log_likelihood_history.push_back(log_likelihood(indexed, model));
  }
  return model;
}

double corpus_log_likelihood(std::span<const TrainingPair> pairs, const AlignmentModel& model) {
  return log_likelihood(index_pairs(pairs, model), model);
}

}  // namespace sportscaster::translator
