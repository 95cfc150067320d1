// The tactical model: lexical alignment, a template lexicon read off the
// alignment, and an n-gram language model. Parsing ranks MRs by how well
// their derivation explains a sentence; generation ranks template
// instantiations by LM probability times template and realization weights.

#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sportscaster/alignment.h"
#include "sportscaster/language_model.h"
#include "sportscaster/mrl.h"
#include "sportscaster/phrase_template.h"

namespace sportscaster::translator {

class NoTemplate : public std::runtime_error {
 public:
  explicit NoTemplate(mrl::Predicate p)
      : std::runtime_error("no template learned for " + std::string(mrl::name(p))), predicate_(p) {}
  mrl::Predicate predicate() const { return predicate_; }

 private:
  mrl::Predicate predicate_;
};

struct TemplateEntry {
  PhraseTemplate phrase;
  double weight = 0;
};

struct Realization {
  std::vector<std::string> words;
  double weight = 0;
};

// Weights are normalized per production; entries sorted by their text.
struct TemplateLexicon {
  std::array<std::vector<TemplateEntry>, mrl::kNumPredicates> templates;
  std::array<std::vector<Realization>, mrl::kNumConstants> realizations;
};

struct TranslationModel {
  AlignmentModel alignment;
  TemplateLexicon lexicon;
  LanguageModel lm;
};

struct TrainOptions {
  std::size_t alignment_iterations = 25;
  std::size_t lm_order = 3;
  double lm_k = 0.01;
};

// Every token goes to its highest-t target among the pair's derivation and
// NULL (ties: argument positions left to right, then the predicate, then
// NULL). Runs of one constant production become slot fillers. Pairs whose
// runs do not fill each argument exactly once contribute nothing.
TemplateLexicon extract_templates(std::span<const TrainingPair> pairs, const AlignmentModel& alignment);

TranslationModel train(std::span<const TrainingPair> pairs, const TrainOptions& options = {});

// Geometric mean over tokens of (1/(d+1)) Σ_{p ∈ derivation ∪ NULL} prob(w|p).
double score_pair(std::span<const std::string> tokens, const mrl::Mr& mr, const AlignmentModel& alignment);

// The score every MR gets when no token is known.
double abstention_floor(const AlignmentModel& alignment);

struct ScoredMr {
  mrl::Mr mr;
  double score = 0;
};

// Descending score, ties in canonical MR order. Empty (abstention) when the
// best score does not rise above abstention_floor. Without candidates every
// MR of the grammar is ranked.
std::vector<ScoredMr> parse_sentence(std::span<const std::string> tokens, const AlignmentModel& alignment,
                                     std::optional<std::span<const mrl::Mr>> candidates = std::nullopt);

struct Generated {
  std::vector<std::string> tokens;
  double score = 0;
};

// Caps on the templates and per-argument realizations tried, heaviest
// first; 0 means no cap.
struct GenerationLimits {
  std::size_t max_templates = 0;
  std::size_t max_realizations = 0;
};

// Top k distinct sentences, descending score, ties by tokens. A constant
// with no learned realization is spelled as its own token. Throws
// NoTemplate when the predicate has no template.
std::vector<Generated> generate_topk(const mrl::Mr& mr, const TranslationModel& model, std::size_t k,
                                     const GenerationLimits& limits = {});

// Sections [alignment], [templates], [lm]; tab-separated; reals with 12
// significant digits.
void save_model(const TranslationModel& model, std::ostream& out);
// Throws corpus::FormatError naming `source` and the line.
TranslationModel load_model(std::istream& in, const std::string& source);

}  // namespace sportscaster::translator
