// Learning from ambiguous supervision: each round scores every sentence
// against each of its candidate MRs, keeps the best candidate per sentence,
// and retrains the translation model on the kept pairs.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sportscaster/corpus.h"
#include "sportscaster/metrics.h"
#include "sportscaster/strategic.h"
#include "sportscaster/translator.h"

namespace sportscaster::learner {

enum class StrategyKind { kRandom, kParseScore, kNistGen, kMeteorGen, kNistIgsl, kMeteorIgsl, kGold };

std::string_view name(StrategyKind kind);
std::optional<StrategyKind> strategy_from_name(std::string_view name);
bool uses_igsl(StrategyKind kind);

struct ScoringStrategy {
  StrategyKind kind = StrategyKind::kParseScore;
  // Drives the random strategy.
  std::uint64_t seed = 0;
  std::size_t nist_max_n = 5;
  // Generation caps used when scoring by generation.
  translator::GenerationLimits limits{16, 4};
};

class MissingStrategicModel : public std::invalid_argument {
 public:
  MissingStrategicModel() : std::invalid_argument("strategy needs a strategic model") {}
};

// Every sentence with every one of its candidates, sentence-major.
std::vector<translator::TrainingPair> initial_training_set(std::span<const corpus::AmbiguousExample> examples);

// Score of one (sentence, MR) pair under a strategy. Generation-based
// strategies compare the sentence against the model's best realization of
// the MR and score 0 when the predicate has no template; the *_igsl
// variants multiply by the predicate's strategic probability.
double evaluate_candidate(std::span<const std::string> tokens, const mrl::Mr& mr,
                          const translator::TranslationModel& model, const ScoringStrategy& strategy,
                          const strategic::StrategicModel* strategic = nullptr);

// evaluate_candidate with the model's generations memoized per MR.
class CandidateScorer {
 public:
  CandidateScorer(const translator::TranslationModel& model, const ScoringStrategy& strategy,
                  const strategic::StrategicModel* strategic);
  double score(std::span<const std::string> tokens, const mrl::Mr& mr);

 private:
  const std::optional<std::vector<std::string>>& generation(const mrl::Mr& mr);

  const translator::TranslationModel& model_;
  ScoringStrategy strategy_;
  const strategic::StrategicModel* strategic_;
  std::vector<std::optional<std::optional<std::vector<std::string>>>> generated_;
};

// Per example: chosen candidate index, its score, and whether the pair
// survived pruning.
struct Matching {
  std::vector<std::optional<std::size_t>> choice;
  std::vector<double> score;
  std::vector<bool> kept;

  // Same choices and pruning; scores are not compared.
  bool same_assignment(const Matching& other) const { return choice == other.choice && kept == other.kept; }
  std::size_t changed_from(const Matching& other) const;
};

struct IterationRecord {
  std::size_t iteration = 0;
  std::optional<double> matching_f1;
  std::size_t changed = 0;
};

struct DisambiguationResult {
  Matching matching;
  translator::TranslationModel model;
  std::optional<strategic::StrategicModel> strategic;
  std::size_t iterations_run = 0;
  std::vector<IterationRecord> history;
};

struct LoopOptions {
  std::size_t max_iter = 10;
  // Fraction of assigned pairs dropped, lowest scores first, each round.
  double prune_fraction = 0;
  // Replaces the all-candidates pairing for the first model.
  std::optional<std::vector<std::optional<std::size_t>>> initial_choice;
  translator::TrainOptions train;
  std::size_t igsl_max_iter = 50;
};

DisambiguationResult retrain_loop(const corpus::TrainingSet& data, const ScoringStrategy& strategy,
                                  const LoopOptions& options = {});

// Kept pairs as (game, comment) -> event id.
metrics::PredictedMatching predicted_matching(const corpus::TrainingSet& data, const Matching& matching);
// Gold of the examples in `data`; requires data.has_gold.
metrics::GoldMatching example_gold(const corpus::TrainingSet& data);
metrics::EvalReport matching_report(const corpus::TrainingSet& data, const Matching& matching);

struct ExternalAlignment {
  std::vector<std::optional<std::size_t>> choice;
  std::size_t accepted = 0;
  // Lines naming an unknown comment or an MR outside its candidates.
  std::size_t warnings = 0;
};

// `<game>\t<comment-id>\t<mr>` lines. Malformed lines throw
// corpus::FormatError; unusable ones are counted and skipped.
ExternalAlignment init_from_external(const corpus::TrainingSet& data, std::istream& in, const std::string& source);
ExternalAlignment init_from_external(const corpus::TrainingSet& data, const std::filesystem::path& file);

// 0, 0.05, ..., 0.4
std::vector<double> default_thresholds();

// Deterministic 1-in-5 validation membership of a comment.
bool in_validation_split(const std::string& game, std::size_t comment_id);

// Fraction of examples whose unrestricted parse does not abstain and lands
// on one of the example's candidates.
double candidate_consistency(const corpus::TrainingSet& data, const translator::TranslationModel& model);

struct SuperfluousCvResult {
  double threshold = 0;
  // (threshold, validation score) per threshold tried.
  std::vector<std::pair<double, double>> sweep;
  DisambiguationResult result;
};

SuperfluousCvResult superfluous_cv(const corpus::TrainingSet& data, std::span<const double> thresholds,
                                   const ScoringStrategy& strategy, const LoopOptions& options = {});

// One segment per gold-matched comment of `game`: the model's best
// realization of the gold MR against the pooled references for that MR.
std::vector<metrics::Segment> generation_segments(const corpus::Game& game, const translator::TranslationModel& model,
                                                  const metrics::ReferenceSets& references,
                                                  const translator::GenerationLimits& limits = {});

}  // namespace sportscaster::learner
