// Which event types get talked about: estimates of the per-predicate
// commentary probability, and the sportscast assembler that uses them.

#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sportscaster/corpus.h"
#include "sportscaster/mrl.h"
#include "sportscaster/prng.h"
#include "sportscaster/translator.h"

namespace sportscaster::strategic {

using Probabilities = std::array<double, mrl::kNumPredicates>;

struct StrategicModel {
  Probabilities prob{};
  corpus::PredicateCounts total_count{};

  bool operator==(const StrategicModel&) const = default;
};

class EmptyCandidates : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Predicates of each sentence's candidate events, in candidate order.
using CandidateTypes = std::vector<std::vector<mrl::Predicate>>;
CandidateTypes candidate_types(std::span<const corpus::AmbiguousExample> examples);

// prob = distinct matched events of the type / total occurrences (0 when
// the type never occurs). `choice[i]` indexes examples[i].candidates.
StrategicModel estimate_from_matching(std::span<const corpus::AmbiguousExample> examples,
                                      std::span<const std::optional<std::size_t>> choice,
                                      const corpus::PredicateCounts& total_count);

// One simultaneous update: each sentence spreads one unit over its
// candidates' types in proportion to their current probabilities, and each
// type's share total over its occurrence count is clamped to 1.
Probabilities igsl_step(const CandidateTypes& sentences, const Probabilities& current,
                        const corpus::PredicateCounts& total_count);

struct IgslResult {
  StrategicModel model;
  // Probabilities after each iteration, the first entry being iteration 1.
  std::vector<Probabilities> history;
  std::size_t iterations = 0;
  bool converged = false;
};

inline constexpr double kIgslTolerance = 1e-9;

// Starts from probability 1 for every type and iterates igsl_step until the
// largest change drops below kIgslTolerance or max_iter is reached.
IgslResult igsl(const CandidateTypes& sentences, const corpus::PredicateCounts& total_count,
                std::size_t max_iter = 50);
IgslResult igsl(std::span<const corpus::AmbiguousExample> examples, const corpus::PredicateCounts& total_count,
                std::size_t max_iter = 50);

// prob[i] / Σ prob over the given events; all zeros when the sum is 0.
std::vector<double> normalized_probabilities(std::span<const corpus::GameEvent> events, const StrategicModel& model);

// Stage one alone: index drawn in proportion to prob(type); nullopt when all are zero.
std::optional<std::size_t> pick_event(std::span<const corpus::GameEvent> events, const StrategicModel& model,
                                      Prng& prng);

// Picks one event in proportion to its type's probability, then keeps it
// with that probability.
std::optional<corpus::GameEvent> select_event(std::span<const corpus::GameEvent> events, const StrategicModel& model,
                                              Prng& prng);

struct TranscriptLine {
  corpus::TimeMs time_ms = 0;
  mrl::Mr mr;
  std::vector<std::string> sentence;

  bool operator==(const TranscriptLine&) const = default;
};

struct Sportscast {
  std::vector<TranscriptLine> lines;
  // Selected events whose type has no template.
  std::size_t skipped_no_template = 0;
};

struct SportscastOptions {
  std::size_t k = 5;
  corpus::TimeMs tick_ms = 1000;
  translator::GenerationLimits limits;
};

// Walks the trace in fixed ticks; events in [t, t + tick) co-occur. A
// verbalized event yields one of its top-k sentences drawn in proportion to
// score, stamped with the tick start.
Sportscast assemble_sportscast(std::span<const corpus::GameEvent> events, const StrategicModel& strategic,
                               const translator::TranslationModel& model, Prng& prng,
                               const SportscastOptions& options = {});

// `<predicate>\t<prob>\t<total_count>` per predicate in grammar order.
void save_strategic(const StrategicModel& model, std::ostream& out);
StrategicModel load_strategic(std::istream& in, const std::string& source);

// `<time_ms>\t<mr>\t<sentence>` lines.
void write_transcript(const Sportscast& cast, std::ostream& out);

}  // namespace sportscaster::strategic
