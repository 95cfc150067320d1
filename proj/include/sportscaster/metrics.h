// Matching, parsing and generation scores.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sportscaster/corpus.h"
#include "sportscaster/mrl.h"

namespace sportscaster::metrics {

using Tokens = std::vector<std::string>;

struct EvalReport {
  std::string task;  // matching, parsing, generation or strategic
  std::string split = "all";
  std::size_t count = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::optional<double> bleu;
  std::optional<double> nist;

  bool operator==(const EvalReport&) const = default;
};

// 2PR/(P+R), or 0 when P+R = 0.
double f1_score(double precision, double recall);

// (game, comment id)
using CommentKey = std::pair<std::string, std::size_t>;
using PredictedMatching = std::map<CommentKey, std::size_t>;
using GoldMatching = std::map<CommentKey, std::optional<std::size_t>>;

// A predicted pair is correct iff gold maps its comment to that event.
// Recall is over gold entries with an event.
EvalReport matching_f1(const PredictedMatching& predicted, const GoldMatching& gold);

using Parses = std::map<CommentKey, std::optional<mrl::Mr>>;
using GoldMrs = std::map<CommentKey, mrl::Mr>;

// Only comments in `gold` count; precision over the non-abstaining ones.
EvalReport parsing_f1(const Parses& parses, const GoldMrs& gold);

GoldMatching gold_matching(const corpus::Corpus& corpus, std::span<const std::size_t> games);
GoldMrs gold_mrs(const corpus::Corpus& corpus, std::span<const std::size_t> games);

class EmptyReferences : public std::invalid_argument {
 public:
  EmptyReferences() : std::invalid_argument("segment without references") {}
};

struct Segment {
  Tokens candidate;
  std::vector<Tokens> references;
};

// Corpus BLEU over one document: clipped n-gram counts pooled over all
// segments, geometric mean of precisions 1..max_n, brevity penalty from the
// closest reference length of each segment (shorter on ties).
double bleu_document(std::span<const Segment> segments, std::size_t max_n = 4);

// Σ_n clipped n-gram precision of `candidate` against `reference`, times
// exp(β ln²(min(1, c/r))) with β set so the factor is 0.5 at c/r = 2/3.
double nist(const Tokens& candidate, const Tokens& reference, std::size_t max_n = 5);

struct MeteorAlignment {
  std::size_t matches = 0;
  std::size_t chunks = 0;
};

// Exact-match unigram alignment with the most matches and, among those, the
// fewest chunks. Searches exhaustively up to a node budget, then keeps the
// best alignment found, seeded by a greedy one.
MeteorAlignment meteor_alignment(const Tokens& candidate, const Tokens& reference);

// Fmean = 10PR/(R+9P), times 1 - 0.5 (chunks/matches)^3.
double meteor(const Tokens& candidate, const Tokens& reference);

using ReferenceSets = std::map<mrl::Mr, std::vector<Tokens>>;

// Every gold-matched comment of the given games, pooled by its event's MR.
ReferenceSets expand_references(const corpus::Corpus& corpus, std::span<const std::size_t> games);

}  // namespace sportscaster::metrics
