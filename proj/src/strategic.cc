#include "sportscaster/strategic.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "sportscaster/text.h"

namespace sportscaster::strategic {

CandidateTypes candidate_types(std::span<const corpus::AmbiguousExample> examples) {
  CandidateTypes out;
  out.reserve(examples.size());
  for (const auto& ex : examples) {
    std::vector<mrl::Predicate> types;
    for (const auto& e : ex.candidates) types.push_back(e.mr.predicate());
    out.push_back(std::move(types));
  }
  return out;
}

StrategicModel estimate_from_matching(std::span<const corpus::AmbiguousExample> examples,
                                      std::span<const std::optional<std::size_t>> choice,
                                      const corpus::PredicateCounts& total_count) {
  if (choice.size() != examples.size()) throw std::invalid_argument("one choice per example required");
  std::set<std::pair<std::string, std::size_t>> matched;
  StrategicModel model;
  model.total_count = total_count;
  std::array<std::size_t, mrl::kNumPredicates> counts{};
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (!choice[i]) continue;
    const corpus::GameEvent& e = examples[i].candidates.at(*choice[i]);
    if (matched.emplace(examples[i].game, e.id).second) ++counts[mrl::index(e.mr.predicate())];
  }
  for (std::size_t p = 0; p < mrl::kNumPredicates; ++p)
    model.prob[p] = total_count[p] ? std::min(1.0, static_cast<double>(counts[p]) / static_cast<double>(total_count[p]))
                                   : 0.0;
  return model;
}

Probabilities igsl_step(const CandidateTypes& sentences, const Probabilities& current,
                        const corpus::PredicateCounts& total_count) {
  Probabilities match{};
  for (const auto& types : sentences) {
    if (types.empty()) throw EmptyCandidates("sentence without candidates");
    double denom = 0;
    for (mrl::Predicate p : types) denom += current[mrl::index(p)];
    if (denom <= 0) continue;
    for (mrl::Predicate p : types) match[mrl::index(p)] += current[mrl::index(p)] / denom;
  }
  Probabilities next{};
  for (std::size_t p = 0; p < mrl::kNumPredicates; ++p)
    next[p] = total_count[p] ? std::min(match[p] / static_cast<double>(total_count[p]), 1.0) : 0.0;
  return next;
}

IgslResult igsl(const CandidateTypes& sentences, const corpus::PredicateCounts& total_count, std::size_t max_iter) {
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  IgslResult result;
  result.model.total_count = total_count;
  Probabilities current;
  current.fill(1.0);
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    Probabilities next = igsl_step(sentences, current, total_count);
    double change = 0;
    for (std::size_t p = 0; p < mrl::kNumPredicates; ++p) change = std::max(change, std::abs(next[p] - current[p]));
    current = next;
    result.history.push_back(current);
    result.iterations = iter + 1;
    if (change < kIgslTolerance) {
      result.converged = true;
      break;
    }
  }
  result.model.prob = current;
  return result;
}

IgslResult igsl(std::span<const corpus::AmbiguousExample> examples, const corpus::PredicateCounts& total_count,
                std::size_t max_iter) {
  return igsl(candidate_types(examples), total_count, max_iter);
}

std::vector<double> normalized_probabilities(std::span<const corpus::GameEvent> events, const StrategicModel& model) {
  std::vector<double> out;
  double sum = 0;
  for (const auto& e : events) {
    out.push_back(model.prob[mrl::index(e.mr.predicate())]);
    sum += out.back();
  }
  for (double& p : out) p = sum > 0 ? p / sum : 0.0;
  return out;
}

std::optional<std::size_t> pick_event(std::span<const corpus::GameEvent> events, const StrategicModel& model,
                                      Prng& prng) {
  if (events.empty()) throw std::invalid_argument("select_event needs at least one event");
  std::vector<double> weights;
  double sum = 0;
  for (const auto& e : events) {
    weights.push_back(model.prob[mrl::index(e.mr.predicate())]);
    sum += weights.back();
  }
  if (!(sum > 0)) return std::nullopt;
  return prng.weighted(weights);
}

std::optional<corpus::GameEvent> select_event(std::span<const corpus::GameEvent> events, const StrategicModel& model,
                                              Prng& prng) {
  auto i = pick_event(events, model, prng);
  if (!i) return std::nullopt;
  const corpus::GameEvent& picked = events[*i];
  if (prng.uniform() < model.prob[mrl::index(picked.mr.predicate())]) return picked;
  return std::nullopt;
}

Sportscast assemble_sportscast(std::span<const corpus::GameEvent> events, const StrategicModel& strategic,
                               const translator::TranslationModel& model, Prng& prng,
                               const SportscastOptions& options) {
  if (options.k < 1) throw std::invalid_argument("k must be at least 1");
  if (options.tick_ms <= 0) throw std::invalid_argument("tick_ms must be positive");
  Sportscast cast;
  std::size_t i = 0;
  while (i < events.size()) {
    corpus::TimeMs tick = events[i].time_ms / options.tick_ms * options.tick_ms;
    std::size_t j = i;
    while (j < events.size() && events[j].time_ms < tick + options.tick_ms) ++j;
    auto picked = select_event(events.subspan(i, j - i), strategic, prng);
    i = j;
    if (!picked) continue;
    std::vector<translator::Generated> options_k;
    try {
      options_k = translator::generate_topk(picked->mr, model, options.k, options.limits);
    } catch (const translator::NoTemplate&) {
      ++cast.skipped_no_template;
      continue;
    }
    std::vector<double> scores;
    for (const auto& g : options_k) scores.push_back(g.score);
    std::size_t pick = 0;
    double total = 0;
    for (double s : scores) total += s;
    if (total > 0) pick = prng.weighted(scores);
    cast.lines.push_back({tick, picked->mr, options_k[pick].tokens});
  }
  return cast;
}

void save_strategic(const StrategicModel& model, std::ostream& out) {
  for (mrl::Predicate p : mrl::all_predicates())
    out << mrl::name(p) << '\t' << text::format_real(model.prob[mrl::index(p)]) << '\t'
        << model.total_count[mrl::index(p)] << '\n';
}

StrategicModel load_strategic(std::istream& in, const std::string& source) {
  StrategicModel model;
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = text::split(line, '\t');
    if (f.size() != 3) throw corpus::FormatError(source, ln, "expected predicate, prob, total_count");
    auto p = mrl::predicate_from_name(f[0]);
    if (!p) throw corpus::FormatError(source, ln, "unknown predicate '" + f[0] + "'");
    double prob = 0;
    std::size_t count = 0;
    try {
      std::size_t used = 0;
      prob = std::stod(f[1], &used);
      if (used != f[1].size()) throw std::invalid_argument("");
      count = std::stoull(f[2], &used);
      if (used != f[2].size() || f[2].front() == '-') throw std::invalid_argument("");
    } catch (const std::logic_error&) {
      throw corpus::FormatError(source, ln, "bad number");
    }
    if (!(prob >= 0 && prob <= 1)) throw corpus::FormatError(source, ln, "probability outside [0, 1]");
    model.prob[mrl::index(*p)] = prob;
    model.total_count[mrl::index(*p)] = count;
  }
  return model;
}

void write_transcript(const Sportscast& cast, std::ostream& out) {
  for (const auto& l : cast.lines)
    out << l.time_ms << '\t' << mrl::serialize_mr(l.mr) << '\t' << text::join(l.sentence) << '\n';
}

}  // namespace sportscaster::strategic
