#include "sportscaster/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace sportscaster::metrics {

namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngrams(const Tokens& tokens, std::size_t n) {
  NgramCounts out;
  if (tokens.size() < n) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++out[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                   tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return out;
}

std::size_t clipped_matches(const NgramCounts& cand, const std::vector<NgramCounts>& refs) {
  std::size_t m = 0;
  for (const auto& [gram, c] : cand) {
    std::size_t best = 0;
    for (const auto& r : refs)
      if (auto it = r.find(gram); it != r.end()) best = std::max(best, it->second);
    m += std::min(c, best);
  }
  return m;
}

}  // namespace

double f1_score(double precision, double recall) {
  return precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
}

EvalReport matching_f1(const PredictedMatching& predicted, const GoldMatching& gold) {
  std::size_t correct = 0;
  for (const auto& [key, event] : predicted)
    if (auto it = gold.find(key); it != gold.end() && it->second && *it->second == event) ++correct;
  std::size_t gold_pairs = 0;
  for (const auto& [key, event] : gold) gold_pairs += event.has_value();
  EvalReport r;
  r.task = "matching";
  r.count = predicted.size();
  r.precision = predicted.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(predicted.size());
  r.recall = gold_pairs ? static_cast<double>(correct) / static_cast<double>(gold_pairs) : 0.0;
  r.f1 = f1_score(*r.precision, *r.recall);
  return r;
}

EvalReport parsing_f1(const Parses& parses, const GoldMrs& gold) {
  std::size_t emitted = 0, correct = 0;
  for (const auto& [key, mr] : gold) {
    auto it = parses.find(key);
    if (it == parses.end() || !it->second) continue;
    ++emitted;
    correct += *it->second == mr;
  }
  EvalReport r;
  r.task = "parsing";
  r.count = gold.size();
  r.precision = emitted ? static_cast<double>(correct) / static_cast<double>(emitted) : 0.0;
  r.recall = gold.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(gold.size());
  r.f1 = f1_score(*r.precision, *r.recall);
  return r;
}

GoldMatching gold_matching(const corpus::Corpus& corpus, std::span<const std::size_t> games) {
  GoldMatching out;
  for (std::size_t g : games) {
    const auto& game = corpus.games.at(g);
    if (!game.gold) throw std::invalid_argument("game " + game.name + " has no gold matching");
    for (const auto& c : game.comments) {
      auto it = game.gold->find(c.id);
      out[{game.name, c.id}] = it == game.gold->end() ? std::nullopt : it->second;
    }
  }
  return out;
}

GoldMrs gold_mrs(const corpus::Corpus& corpus, std::span<const std::size_t> games) {
  GoldMrs out;
  for (std::size_t g : games) {
    const auto& game = corpus.games.at(g);
    if (!game.gold) throw std::invalid_argument("game " + game.name + " has no gold matching");
    for (const auto& [cid, eid] : *game.gold)
      if (eid) out.emplace(CommentKey{game.name, cid}, game.events.at(*eid).mr);
  }
  return out;
}

double bleu_document(std::span<const Segment> segments, std::size_t max_n) {
  if (max_n < 1) throw std::invalid_argument("max_n must be at least 1");
  std::vector<std::size_t> matched(max_n, 0), total(max_n, 0);
  std::size_t c = 0, r = 0;
  for (const Segment& s : segments) {
    if (s.references.empty()) throw EmptyReferences();
    c += s.candidate.size();
    std::size_t best = s.references.front().size();
    for (const auto& ref : s.references) {
      auto d = [&](std::size_t len) { return len > s.candidate.size() ? len - s.candidate.size() : s.candidate.size() - len; };
      if (d(ref.size()) < d(best) || (d(ref.size()) == d(best) && ref.size() < best)) best = ref.size();
    }
    r += best;
    for (std::size_t n = 1; n <= max_n; ++n) {
      NgramCounts cand = ngrams(s.candidate, n);
      std::vector<NgramCounts> refs;
      for (const auto& ref : s.references) refs.push_back(ngrams(ref, n));
      matched[n - 1] += clipped_matches(cand, refs);
      total[n - 1] += s.candidate.size() >= n ? s.candidate.size() - n + 1 : 0;
    }
  }
  if (c == 0) return 0;
  double log_sum = 0;
  for (std::size_t n = 0; n < max_n; ++n) {
    if (matched[n] == 0 || total[n] == 0) return 0;
    log_sum += std::log(static_cast<double>(matched[n]) / static_cast<double>(total[n]));
  }
  double bp = std::exp(std::min(0.0, 1.0 - static_cast<double>(r) / static_cast<double>(c)));
  return bp * std::exp(log_sum / static_cast<double>(max_n));
}

double nist(const Tokens& candidate, const Tokens& reference, std::size_t max_n) {
  if (candidate.empty() || reference.empty()) return 0;
  double sum = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    if (candidate.size() < n) break;
    NgramCounts cand = ngrams(candidate, n);
    std::size_t m = clipped_matches(cand, {ngrams(reference, n)});
    sum += static_cast<double>(m) / static_cast<double>(candidate.size() - n + 1);
  }
  const double beta = std::log(0.5) / std::pow(std::log(2.0 / 3.0), 2);
  double ratio = std::min(1.0, static_cast<double>(candidate.size()) / static_cast<double>(reference.size()));
  return sum * std::exp(beta * std::pow(std::log(ratio), 2));
}

namespace {

struct AlignmentSearch {
  const Tokens& cand;
  std::vector<std::vector<std::size_t>> options;  // reference positions per candidate position
  std::vector<std::size_t> need;                  // matches still owed, by candidate word id
  std::vector<std::size_t> word;                  // candidate word ids
  std::vector<std::size_t> left;                  // occurrences of the word at or after position
  std::vector<bool> used;
  std::size_t best_chunks = std::numeric_limits<std::size_t>::max();
  std::size_t nodes = 0;
  std::size_t budget = 200000;

  void dfs(std::size_t i, std::size_t chunks, std::ptrdiff_t last_i, std::ptrdiff_t last_j) {
    if (++nodes > budget || chunks >= best_chunks) return;
    if (i == cand.size()) {
      best_chunks = chunks;
      return;
    }
    std::size_t w = word[i];
    // Prefer extending the current chunk.
    std::vector<std::size_t> order = options[i];
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      bool ea = last_i == static_cast<std::ptrdiff_t>(i) - 1 && static_cast<std::ptrdiff_t>(a) == last_j + 1;
      bool eb = last_i == static_cast<std::ptrdiff_t>(i) - 1 && static_cast<std::ptrdiff_t>(b) == last_j + 1;
      return ea > eb;
    });
    if (need[w] > 0) {
      for (std::size_t j : order) {
        if (used[j]) continue;
        bool extends = last_i == static_cast<std::ptrdiff_t>(i) - 1 && static_cast<std::ptrdiff_t>(j) == last_j + 1;
        used[j] = true;
        --need[w];
        dfs(i + 1, chunks + (extends ? 0 : 1), static_cast<std::ptrdiff_t>(i), static_cast<std::ptrdiff_t>(j));
        ++need[w];
        used[j] = false;
      }
    }
    // Skipping is allowed while later occurrences can still pay what is owed.
    if (left[i] - 1 >= need[w]) dfs(i + 1, chunks, last_i, last_j);
  }
};

std::size_t count_chunks(const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::size_t chunks = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (k == 0 || pairs[k].first != pairs[k - 1].first + 1 || pairs[k].second != pairs[k - 1].second + 1) ++chunks;
  return chunks;
}

}  // namespace

MeteorAlignment meteor_alignment(const Tokens& candidate, const Tokens& reference) {
  std::unordered_map<std::string, std::size_t> ids;
  auto id = [&](const std::string& w) { return ids.emplace(w, ids.size()).first->second; };
  std::vector<std::size_t> cw, rw;
  for (const auto& w : candidate) cw.push_back(id(w));
  for (const auto& w : reference) rw.push_back(id(w));
  std::vector<std::size_t> cc(ids.size(), 0), rc(ids.size(), 0);
  for (std::size_t w : cw) ++cc[w];
  for (std::size_t w : rw) ++rc[w];

  MeteorAlignment out;
  for (std::size_t w = 0; w < ids.size(); ++w) out.matches += std::min(cc[w], rc[w]);
  if (out.matches == 0) return out;

  // Greedy seed: extend the running chunk when possible, else first free slot.
  std::vector<std::size_t> need(ids.size());
  for (std::size_t w = 0; w < ids.size(); ++w) need[w] = std::min(cc[w], rc[w]);
  {
    std::vector<bool> used(reference.size(), false);
    std::vector<std::size_t> owed = need;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < candidate.size(); ++i) {
      std::size_t w = cw[i];
      if (owed[w] == 0) continue;
      std::optional<std::size_t> pick;
      if (!pairs.empty() && pairs.back().first + 1 == i) {
        std::size_t j = pairs.back().second + 1;
        if (j < reference.size() && !used[j] && rw[j] == w) pick = j;
      }
      for (std::size_t j = 0; !pick && j < reference.size(); ++j)
        if (!used[j] && rw[j] == w) pick = j;
      used[*pick] = true;
      --owed[w];
      pairs.emplace_back(i, *pick);
    }
    out.chunks = count_chunks(pairs);
  }

  AlignmentSearch search{candidate, {}, need, cw, {}, std::vector<bool>(reference.size(), false)};
  search.best_chunks = out.chunks;
  search.options.resize(candidate.size());
  search.left.resize(candidate.size());
  std::vector<std::size_t> remaining = cc;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    search.left[i] = remaining[cw[i]]--;
    for (std::size_t j = 0; j < reference.size(); ++j)
      if (rw[j] == cw[i]) search.options[i].push_back(j);
  }
  search.dfs(0, 0, -2, -2);
  out.chunks = std::min(out.chunks, search.best_chunks);
  return out;
}

double meteor(const Tokens& candidate, const Tokens& reference) {
  if (candidate.empty() || reference.empty()) return 0;
  MeteorAlignment a = meteor_alignment(candidate, reference);
  if (a.matches == 0) return 0;
  double m = static_cast<double>(a.matches);
  double p = m / static_cast<double>(candidate.size());
  double r = m / static_cast<double>(reference.size());
  double fmean = 10 * p * r / (r + 9 * p);
  double penalty = 0.5 * std::pow(static_cast<double>(a.chunks) / m, 3);
  return fmean * (1 - penalty);
}

ReferenceSets expand_references(const corpus::Corpus& corpus, std::span<const std::size_t> games) {
  ReferenceSets out;
  for (std::size_t g : games) {
    const auto& game = corpus.games.at(g);
    if (!game.gold) throw std::invalid_argument("game " + game.name + " has no gold matching");
    for (const auto& [cid, eid] : *game.gold)
      if (eid) out[game.events.at(*eid).mr].push_back(game.comments.at(cid).tokens);
  }
  return out;
}

}  // namespace sportscaster::metrics
