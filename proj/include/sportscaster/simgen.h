// Synthetic games and a template-driven commentator whose hidden choices are
// kept as the gold matching.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sportscaster/corpus.h"
#include "sportscaster/mrl.h"
#include "sportscaster/phrase_template.h"

namespace sportscaster::simgen {

using corpus::TimeMs;
using PredicateWeights = std::array<double, mrl::kNumPredicates>;

class EmptyLexicon : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Occurrence weights: the five most frequent event types use their counts in
// the reference English games; the remaining four are filled in.
PredicateWeights default_event_weights();
// Fraction of events of each type that draws a comment.
PredicateWeights default_comment_prob();

struct WorldConfig {
  TimeMs duration_ms = 3'600'000;
  double mean_event_gap_ms = 3850;
  // Gaps are min_event_gap_ms plus a geometric draw, so the mean gap holds.
  TimeMs min_event_gap_ms = 1;
  PredicateWeights event_type_weights = default_event_weights();
  std::uint64_t seed = 1;
};

struct WeightedTemplate {
  PhraseTemplate phrase;
  double weight = 1;
};

struct WeightedPhrase {
  std::vector<std::string> words;
  double weight = 1;
};

struct CommentatorProfile {
  PredicateWeights comment_prob = default_comment_prob();
  std::array<std::vector<WeightedTemplate>, mrl::kNumPredicates> lexicon;
  // Surface words per constant id; an empty list means the constant's token.
  std::array<std::vector<WeightedPhrase>, mrl::kNumConstants> surfaces;
  double superfluous_rate = 0.1;
  TimeMs lag_min_ms = 200;
  TimeMs lag_max_ms = 4800;
  std::vector<std::string> superfluous_vocabulary;
  std::size_t superfluous_min_words = 3;
  std::size_t superfluous_max_words = 6;
  std::string language = "en";
  std::uint64_t seed = 2;
};

// Several templates per predicate, goalie synonyms.
CommentatorProfile default_profile();
// One template per predicate, every constant realized as its own token.
CommentatorProfile sharp_profile();

void validate(const WorldConfig& config);
void validate(const CommentatorProfile& profile);

std::vector<corpus::GameEvent> simulate_events(const WorldConfig& config);

struct Commentary {
  std::vector<corpus::Comment> comments;
  corpus::GoldMatch gold;
};

// Comments are returned in time order with ids assigned in that order. Gold
// is canonical for `window_ms` (see corpus::canonicalize_gold); a comment
// whose lag puts its event outside the window is gold NONE.
Commentary commentate(std::span<const corpus::GameEvent> events, const CommentatorProfile& profile,
                      TimeMs window_ms = corpus::kDefaultWindowMs);

// The commentator's most likely sentence for `mr`: heaviest template and
// heaviest surface per argument, first listed on ties.
std::vector<std::string> hidden_realization(const mrl::Mr& mr, const CommentatorProfile& profile);

struct SimConfig {
  std::string profile_name = "default";
  std::size_t games = 4;
  TimeMs window_ms = corpus::kDefaultWindowMs;
  WorldConfig world;
  CommentatorProfile profile = default_profile();
};

// Keys: games, profile, seed, world_seed, commentator_seed, window_ms,
// duration_ms, mean_event_gap_ms, min_event_gap_ms, superfluous_rate,
// lag_min_ms, lag_max_ms, language, superfluous_vocabulary,
// weight.<pred>, comment_prob.<pred>, template.<pred>.
// template.<pred> holds `;`-separated alternatives, each optionally ending in
// `@ weight`. `profile` is applied first so the other keys refine it.
// Unknown keys and bad values throw std::invalid_argument.
SimConfig sim_config_from(const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> to_key_values(const SimConfig& config);

// Games "game1".."gameN", each with its own seeds derived from the config's.
corpus::Corpus simulate_corpus(const SimConfig& config);

}  // namespace sportscaster::simgen
