#include "sportscaster/learner.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>

#include "sportscaster/prng.h"
#include "sportscaster/text.h"

namespace sportscaster::learner {

using corpus::AmbiguousExample;
using corpus::TrainingSet;
using translator::TrainingPair;
using translator::TranslationModel;

namespace {

constexpr std::pair<StrategyKind, std::string_view> kNames[] = {
    {StrategyKind::kRandom, "random"},       {StrategyKind::kParseScore, "parse_score"},
    {StrategyKind::kNistGen, "nist_gen"},    {StrategyKind::kMeteorGen, "meteor_gen"},
    {StrategyKind::kNistIgsl, "nist_igsl"},  {StrategyKind::kMeteorIgsl, "meteor_igsl"},
    {StrategyKind::kGold, "gold"},
};

bool uses_generation(StrategyKind k) {
  return k == StrategyKind::kNistGen || k == StrategyKind::kMeteorGen || k == StrategyKind::kNistIgsl ||
         k == StrategyKind::kMeteorIgsl;
}

double tactical(std::span<const std::string> tokens, const std::optional<std::vector<std::string>>& generated,
                const ScoringStrategy& strategy) {
  if (!generated) return 0;
  metrics::Tokens sentence(tokens.begin(), tokens.end());
  if (strategy.kind == StrategyKind::kNistGen || strategy.kind == StrategyKind::kNistIgsl)
    return metrics::nist(sentence, *generated, strategy.nist_max_n);
  return metrics::meteor(sentence, *generated);
}

std::optional<std::vector<std::string>> best_generation(const mrl::Mr& mr, const TranslationModel& model,
                                                        const translator::GenerationLimits& limits) {
  try {
    auto top = translator::generate_topk(mr, model, 1, limits);
    return std::move(top.front().tokens);
  } catch (const translator::NoTemplate&) {
    return std::nullopt;
  }
}

// Higher score first; then earliest event, canonical MR order, candidate index.
bool better(const AmbiguousExample& ex, std::size_t a, double sa, std::size_t b, double sb) {
  if (sa != sb) return sa > sb;
  const auto& ea = ex.candidates[a];
  const auto& eb = ex.candidates[b];
  if (ea.time_ms != eb.time_ms) return ea.time_ms < eb.time_ms;
  std::size_t ra = mrl::canonical_rank(ea.mr), rb = mrl::canonical_rank(eb.mr);
  if (ra != rb) return ra < rb;
  return a < b;
}

std::vector<TrainingPair> kept_pairs(const TrainingSet& data, const Matching& m) {
  std::vector<TrainingPair> pairs;
  for (std::size_t i = 0; i < data.examples.size(); ++i)
    if (m.choice[i] && m.kept[i])
      pairs.push_back({data.examples[i].comment.tokens, data.examples[i].candidates[*m.choice[i]].mr});
  return pairs;
}

std::vector<TrainingPair> chosen_pairs(const TrainingSet& data, const std::vector<std::optional<std::size_t>>& choice) {
  std::vector<TrainingPair> pairs;
  for (std::size_t i = 0; i < data.examples.size(); ++i)
    if (choice[i]) pairs.push_back({data.examples[i].comment.tokens, data.examples[i].candidates.at(*choice[i]).mr});
  return pairs;
}

Matching assign(const TrainingSet& data, CandidateScorer& scorer) {
  Matching m;
  const std::size_t n = data.examples.size();
  m.choice.resize(n);
  m.score.assign(n, 0.0);
  m.kept.assign(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    const AmbiguousExample& ex = data.examples[i];
    std::size_t best = 0;
    double best_score = 0;
    for (std::size_t c = 0; c < ex.candidates.size(); ++c) {
      double s = scorer.score(ex.comment.tokens, ex.candidates[c].mr);
      if (c == 0 || better(ex, c, s, best, best_score)) {
        best = c;
        best_score = s;
      }
    }
    m.choice[i] = best;
    m.score[i] = best_score;
  }
  return m;
}

void prune(Matching& m, double fraction) {
  if (fraction <= 0) return;
  std::vector<std::size_t> assigned;
  for (std::size_t i = 0; i < m.choice.size(); ++i)
    if (m.choice[i]) assigned.push_back(i);
  auto drop = static_cast<std::size_t>(fraction * static_cast<double>(assigned.size()));
  std::stable_sort(assigned.begin(), assigned.end(), [&](std::size_t a, std::size_t b) { return m.score[a] < m.score[b]; });
  for (std::size_t k = 0; k < drop && k < assigned.size(); ++k) m.kept[assigned[k]] = false;
}

std::optional<double> f1_of(const TrainingSet& data, const Matching& m) {
  if (!data.has_gold) return std::nullopt;
  return matching_report(data, m).f1;
}

TrainingSet subset(const TrainingSet& data, const std::vector<std::size_t>& idx) {
  TrainingSet out;
  out.event_counts = data.event_counts;
  out.has_gold = data.has_gold;
  for (std::size_t i : idx) {
    out.examples.push_back(data.examples[i]);
    if (data.has_gold) {
      out.gold.push_back(data.gold[i]);
      out.gold_matched += data.gold[i].has_value();
    }
  }
  return out;
}

}  // namespace

std::string_view name(StrategyKind kind) {
  for (const auto& [k, n] : kNames)
    if (k == kind) return n;
  return "?";
}

std::optional<StrategyKind> strategy_from_name(std::string_view n) {
  for (const auto& [k, s] : kNames)
    if (s == n) return k;
  return std::nullopt;
}

bool uses_igsl(StrategyKind kind) { return kind == StrategyKind::kNistIgsl || kind == StrategyKind::kMeteorIgsl; }

std::vector<TrainingPair> initial_training_set(std::span<const AmbiguousExample> examples) {
  std::vector<TrainingPair> pairs;
  for (const AmbiguousExample& ex : examples)
    for (const auto& e : ex.candidates) pairs.push_back({ex.comment.tokens, e.mr});
  return pairs;
}

double evaluate_candidate(std::span<const std::string> tokens, const mrl::Mr& mr, const TranslationModel& model,
                          const ScoringStrategy& strategy, const strategic::StrategicModel* strategic) {
  CandidateScorer scorer(model, strategy, strategic);
  return scorer.score(tokens, mr);
}

CandidateScorer::CandidateScorer(const TranslationModel& model, const ScoringStrategy& strategy,
                                 const strategic::StrategicModel* strategic)
    : model_(model), strategy_(strategy), strategic_(strategic) {
  if (uses_igsl(strategy.kind) && !strategic) throw MissingStrategicModel();
  if (uses_generation(strategy.kind)) generated_.resize(mrl::kNumMrs);
}

const std::optional<std::vector<std::string>>& CandidateScorer::generation(const mrl::Mr& mr) {
  auto& slot = generated_[mr.dense_index()];
  if (!slot) slot = best_generation(mr, model_, strategy_.limits);
  return *slot;
}

double CandidateScorer::score(std::span<const std::string> tokens, const mrl::Mr& mr) {
  switch (strategy_.kind) {
    case StrategyKind::kRandom:
    case StrategyKind::kGold:
    case StrategyKind::kParseScore:
      return translator::score_pair(tokens, mr, model_.alignment);
    case StrategyKind::kNistGen:
    case StrategyKind::kMeteorGen:
      return tactical(tokens, generation(mr), strategy_);
    case StrategyKind::kNistIgsl:
    case StrategyKind::kMeteorIgsl:
      return tactical(tokens, generation(mr), strategy_) * strategic_->prob[mrl::index(mr.predicate())];
  }
  return 0;
}

std::size_t Matching::changed_from(const Matching& other) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < choice.size(); ++i)
    if (i >= other.choice.size() || choice[i] != other.choice[i] || kept[i] != other.kept[i]) ++n;
  return n;
}

DisambiguationResult retrain_loop(const TrainingSet& data, const ScoringStrategy& strategy,
                                  const LoopOptions& options) {
  if (data.examples.empty()) throw translator::EmptyTrainingSet();
  if (options.prune_fraction < 0 || options.prune_fraction >= 1)
    throw std::invalid_argument("prune fraction must lie in [0, 1)");
  const std::size_t n = data.examples.size();
  DisambiguationResult result;

  if (strategy.kind == StrategyKind::kRandom) {
    Prng prng(strategy.seed);
    Matching m;
    m.kept.assign(n, true);
    m.score.assign(n, 0.0);
    for (const auto& ex : data.examples) m.choice.push_back(prng.below(ex.candidates.size()));
    result.model = translator::train(kept_pairs(data, m), options.train);
    result.iterations_run = 1;
    result.history.push_back({1, f1_of(data, m), n});
    result.matching = std::move(m);
    return result;
  }

  if (strategy.kind == StrategyKind::kGold) {
    if (!data.has_gold) throw std::invalid_argument("gold strategy needs gold annotations");
    result.model = translator::train(chosen_pairs(data, data.gold), options.train);
    // Sentences without a gold event still get the gold-trained model's best candidate.
    CandidateScorer scorer(result.model, {StrategyKind::kParseScore}, nullptr);
    Matching m = assign(data, scorer);
    for (std::size_t i = 0; i < n; ++i)
      if (data.gold[i]) m.choice[i] = data.gold[i];
    result.iterations_run = 1;
    result.history.push_back({1, f1_of(data, m), n});
    result.matching = std::move(m);
    return result;
  }

  if (uses_igsl(strategy.kind))
    result.strategic = strategic::igsl(data.examples, data.event_counts, options.igsl_max_iter).model;

  if (options.initial_choice) {
    if (options.initial_choice->size() != n) throw std::invalid_argument("initial choice size mismatch");
    result.model = translator::train(chosen_pairs(data, *options.initial_choice), options.train);
  } else {
    result.model = translator::train(initial_training_set(data.examples), options.train);
  }

  std::optional<Matching> previous;
  for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
    CandidateScorer scorer(result.model, strategy, result.strategic ? &*result.strategic : nullptr);
    Matching m = assign(data, scorer);
    prune(m, options.prune_fraction);
    result.iterations_run = iter;
    std::size_t changed = previous ? m.changed_from(*previous) : n;
    result.history.push_back({iter, f1_of(data, m), changed});
    if (previous && m.same_assignment(*previous)) {
      result.matching = std::move(m);
      return result;
    }
    result.model = translator::train(kept_pairs(data, m), options.train);
    previous = std::move(m);
  }
  result.matching = std::move(*previous);
  return result;
}

metrics::PredictedMatching predicted_matching(const TrainingSet& data, const Matching& m) {
  metrics::PredictedMatching out;
  for (std::size_t i = 0; i < data.examples.size(); ++i)
    if (m.choice[i] && m.kept[i]) {
      const auto& ex = data.examples[i];
      out[{ex.game, ex.comment.id}] = ex.candidates[*m.choice[i]].id;
    }
  return out;
}

metrics::GoldMatching example_gold(const TrainingSet& data) {
  if (!data.has_gold) throw std::invalid_argument("training set has no gold annotations");
  metrics::GoldMatching out;
  for (std::size_t i = 0; i < data.examples.size(); ++i) {
    const auto& ex = data.examples[i];
    std::optional<std::size_t> event;
    if (data.gold[i]) event = ex.candidates[*data.gold[i]].id;
    out[{ex.game, ex.comment.id}] = event;
  }
  return out;
}

metrics::EvalReport matching_report(const TrainingSet& data, const Matching& m) {
  return metrics::matching_f1(predicted_matching(data, m), example_gold(data));
}

ExternalAlignment init_from_external(const TrainingSet& data, std::istream& in, const std::string& source) {
  std::map<std::pair<std::string, std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < data.examples.size(); ++i)
    index[{data.examples[i].game, data.examples[i].comment.id}] = i;
  ExternalAlignment out;
  out.choice.resize(data.examples.size());
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    auto f = text::split(line, '\t');
    if (f.size() != 3) throw corpus::FormatError(source, ln, "expected game, comment id, MR");
    std::size_t cid = 0;
    try {
      std::size_t used = 0;
      if (f[1].empty() || f[1].front() == '-') throw std::invalid_argument("");
      cid = std::stoull(f[1], &used);
      if (used != f[1].size()) throw std::invalid_argument("");
    } catch (const std::logic_error&) {
      throw corpus::FormatError(source, ln, "bad comment id '" + f[1] + "'");
    }
    mrl::Mr mr;
    try {
      mr = mrl::parse_mr(f[2]);
    } catch (const mrl::MalformedMrError& e) {
      throw corpus::FormatError(source, ln, std::string("malformed MR: ") + e.what());
    }
    auto it = index.find({f[0], cid});
    if (it == index.end()) {
      ++out.warnings;
      continue;
    }
    const auto& cands = data.examples[it->second].candidates;
    std::optional<std::size_t> pick;
    for (std::size_t c = 0; c < cands.size() && !pick; ++c)
      if (cands[c].mr == mr) pick = c;
    if (!pick) {
      ++out.warnings;
      continue;
    }
    if (!out.choice[it->second]) ++out.accepted;
    out.choice[it->second] = pick;
  }
  return out;
}

ExternalAlignment init_from_external(const TrainingSet& data, const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw corpus::FormatError(file.string(), 0, "cannot open file");
  return init_from_external(data, in, file.string());
}

std::vector<double> default_thresholds() {
  std::vector<double> out;
  for (int i = 0; i <= 8; ++i) out.push_back(0.05 * i);
  return out;
}

bool in_validation_split(const std::string& game, std::size_t comment_id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : game) h = (h ^ c) * 0x100000001b3ULL;
  return mix64(h ^ mix64(comment_id)) % 5 == 0;
}

double candidate_consistency(const TrainingSet& data, const TranslationModel& model) {
  if (data.examples.empty()) return 0;
  std::size_t ok = 0;
  for (const auto& ex : data.examples) {
    auto ranked = translator::parse_sentence(ex.comment.tokens, model.alignment);
    if (ranked.empty()) continue;
    for (const auto& e : ex.candidates)
      if (e.mr == ranked.front().mr) {
        ++ok;
        break;
      }
  }
  return static_cast<double>(ok) / static_cast<double>(data.examples.size());
}

SuperfluousCvResult superfluous_cv(const TrainingSet& data, std::span<const double> thresholds,
                                   const ScoringStrategy& strategy, const LoopOptions& options) {
  if (thresholds.empty()) throw std::invalid_argument("no thresholds given");
  if (data.examples.empty()) throw translator::EmptyTrainingSet();
  std::vector<std::size_t> train_idx, val_idx;
  for (std::size_t i = 0; i < data.examples.size(); ++i)
    (in_validation_split(data.examples[i].game, data.examples[i].comment.id) ? val_idx : train_idx).push_back(i);
  TrainingSet train = subset(data, train_idx);
  TrainingSet val = subset(data, val_idx);

  std::vector<double> grid(thresholds.begin(), thresholds.end());
  std::sort(grid.begin(), grid.end());
  SuperfluousCvResult out;
  double best = -1;
  for (double theta : grid) {
    LoopOptions o = options;
    o.prune_fraction = theta;
    o.initial_choice.reset();
    double acc = train.examples.empty() ? 0.0 : candidate_consistency(val, retrain_loop(train, strategy, o).model);
    out.sweep.emplace_back(theta, acc);
    if (acc > best) {
      best = acc;
      out.threshold = theta;
    }
  }
  LoopOptions final_options = options;
  final_options.prune_fraction = out.threshold;
  out.result = retrain_loop(data, strategy, final_options);
  return out;
}

std::vector<metrics::Segment> generation_segments(const corpus::Game& game, const TranslationModel& model,
                                                  const metrics::ReferenceSets& references,
                                                  const translator::GenerationLimits& limits) {
  std::vector<metrics::Segment> out;
  if (!game.gold) return out;
  for (const auto& [cid, eid] : *game.gold) {
    if (!eid) continue;
    const mrl::Mr& mr = game.events.at(*eid).mr;
    metrics::Segment s;
    if (auto g = best_generation(mr, model, limits)) s.candidate = std::move(*g);
    s.references = references.at(mr);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sportscaster::learner
