// Timestamped events and comments, the pairing window that turns them into
// ambiguously supervised examples, gold matchings, corpus files, and
// cross-validation splits.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sportscaster/mrl.h"

namespace sportscaster::corpus {

using TimeMs = std::int64_t;
inline constexpr TimeMs kDefaultWindowMs = 5000;

using PredicateCounts = std::array<std::size_t, mrl::kNumPredicates>;

struct GameEvent {
  TimeMs time_ms = 0;
  mrl::Mr mr;
  std::size_t id = 0;

  bool operator==(const GameEvent&) const = default;
};

struct Comment {
  TimeMs time_ms = 0;
  std::vector<std::string> tokens;
  std::string raw;
  std::string language;
  std::size_t id = 0;

  bool operator==(const Comment&) const = default;
};

// Tokenizes `raw`; throws std::invalid_argument when it has no tokens.
Comment make_comment(TimeMs time_ms, std::string language, std::string raw, std::size_t id);

struct AmbiguousExample {
  std::string game;
  Comment comment;
  // Events in the pairing window, ordered by time then id.
  std::vector<GameEvent> candidates;
};

// comment id -> generating event id; nullopt marks a superfluous comment.
using GoldMatch = std::map<std::size_t, std::optional<std::size_t>>;

struct Game {
  std::string name;
  std::vector<GameEvent> events;
  std::vector<Comment> comments;
  std::optional<GoldMatch> gold;

  bool operator==(const Game&) const = default;
};

struct Corpus {
  std::vector<Game> games;

  bool operator==(const Corpus&) const = default;
};

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& file, std::size_t line, const std::string& reason)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + reason), file_(file), line_(line) {}
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class DanglingGoldReference : public FormatError {
 public:
  using FormatError::FormatError;
};

class InsufficientGames : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Pairing {
  std::vector<AmbiguousExample> examples;
  // Comments with no event in their window; kept out of `examples`.
  std::size_t unpaired_comments = 0;
};

// An event belongs to a comment's window iff 0 <= comment - event <= window_ms.
Pairing pair_with_window(std::span<const GameEvent> events, std::span<const Comment> comments,
                         TimeMs window_ms = kDefaultWindowMs, const std::string& game = "");

// Ids of the events inside the comment's window, in time order.
std::vector<std::size_t> window_candidates(std::span<const GameEvent> events, const Comment& comment,
                                           TimeMs window_ms);

// Earliest event in the comment's window whose MR equals `mr`.
std::optional<std::size_t> resolve_gold(std::span<const GameEvent> events, const Comment& comment,
                                        const mrl::Mr& mr, TimeMs window_ms);

// Rewrites each gold event to the earliest in-window event with the same MR,
// which is what a gold file (MR strings, not event ids) can express.
GoldMatch canonicalize_gold(const Game& game, TimeMs window_ms = kDefaultWindowMs);

PredicateCounts count_predicates(std::span<const GameEvent> events);

// Reads a manifest of `<name>\t<events>\t<comments>\t<gold|->` lines; paths
// are relative to the manifest's directory.
Corpus load_corpus(const std::filesystem::path& manifest, TimeMs window_ms = kDefaultWindowMs);
Game load_game(const std::string& name, const std::filesystem::path& events, const std::filesystem::path& comments,
               const std::optional<std::filesystem::path>& gold, TimeMs window_ms = kDefaultWindowMs);

// Writes manifest.tsv plus <game>.events.tsv, <game>.comments.tsv and, when
// present, <game>.gold.tsv into `dir`. Returns the manifest path.
std::filesystem::path write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// All C(num_games, k_train) train sets, lexicographic, test = complement.
std::vector<Split> cv_splits(std::size_t num_games, std::size_t k_train);

// The ambiguous examples of a set of games, flattened, together with what
// the learners need beyond them.
struct TrainingSet {
  std::vector<AmbiguousExample> examples;
  // Occurrences of each predicate in the full traces of the included games.
  PredicateCounts event_counts{};
  std::size_t unpaired_comments = 0;
  // Per example, index of the gold event among its candidates (nullopt when
  // superfluous). Empty unless every included game carries gold.
  std::vector<std::optional<std::size_t>> gold;
  // Gold comments that have a correct MR.
  std::size_t gold_matched = 0;

  bool has_gold = false;
};

TrainingSet build_training_set(const Corpus& corpus, std::span<const std::size_t> games,
                               TimeMs window_ms = kDefaultWindowMs);
TrainingSet build_training_set(const Corpus& corpus, TimeMs window_ms = kDefaultWindowMs);

}  // namespace sportscaster::corpus
