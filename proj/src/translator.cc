#include "sportscaster/translator.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "sportscaster/corpus.h"
#include "sportscaster/text.h"

namespace sportscaster::translator {

namespace {

constexpr std::size_t kNoPosition = static_cast<std::size_t>(-1);

// Derivation position each token aligns to; kNoPosition for NULL.
std::vector<std::size_t> align_tokens(const TrainingPair& pair, const AlignmentModel& alignment,
                                      const std::vector<std::size_t>& targets) {
  std::vector<std::size_t> out;
  out.reserve(pair.tokens.size());
  // Preference order for ties.
  std::vector<std::size_t> order;
  for (std::size_t i = 1; i < targets.size(); ++i) order.push_back(i);
  order.push_back(0);
  order.push_back(kNoPosition);
  for (const std::string& w : pair.tokens) {
    auto id = alignment.word_id(w);
    std::size_t best = kNoPosition;
    double best_t = -1;
    for (std::size_t pos : order) {
      std::size_t target = pos == kNoPosition ? kNullTarget : targets[pos];
      double t = id ? alignment.t(*id, target) : 0.0;
      if (t > best_t) {
        best_t = t;
        best = pos;
      }
    }
    out.push_back(best);
  }
  return out;
}

template <typename Entry, typename Key>
std::vector<Entry> normalize(const std::map<Key, double>& counts) {
  double total = 0;
  for (const auto& kv : counts) total += kv.second;
  std::vector<Entry> out;
  for (const auto& [key, c] : counts) out.push_back(Entry{key, c / total});
  return out;
}

struct GenerationKey {
  std::vector<std::string> tokens;
  double log_score;
};

template <typename T, typename WeightOf, typename TextOf>
std::vector<const T*> heaviest(const std::vector<T>& items, std::size_t cap, WeightOf weight, TextOf text) {
  std::vector<const T*> out;
  for (const T& item : items) out.push_back(&item);
  if (cap == 0 || cap >= out.size()) return out;
  std::stable_sort(out.begin(), out.end(), [&](const T* a, const T* b) {
    if (weight(*a) != weight(*b)) return weight(*a) > weight(*b);
    return text(*a) < text(*b);
  });
  out.resize(cap);
  return out;
}

}  // namespace

TemplateLexicon extract_templates(std::span<const TrainingPair> pairs, const AlignmentModel& alignment) {
  std::array<std::map<PhraseTemplate, double>, mrl::kNumPredicates> template_counts;
  std::array<std::map<std::vector<std::string>, double>, mrl::kNumConstants> surface_counts;

  for (const TrainingPair& pair : pairs) {
    std::vector<std::size_t> targets = derivation_targets(pair.mr);
    std::vector<std::size_t> pos = align_tokens(pair, alignment, targets);
    const std::size_t arity = pair.mr.arity();

    PhraseTemplate phrase;
    std::vector<std::vector<std::string>> fillers(arity);
    std::vector<bool> filled(arity, false);
    bool ok = true;
    for (std::size_t i = 0; i < pair.tokens.size() && ok;) {
      if (pos[i] == kNoPosition || pos[i] == 0) {
        phrase.push_back({pair.tokens[i], 0});
        ++i;
        continue;
      }
      std::size_t target = targets[pos[i]];
      std::size_t j = i;
      while (j < pair.tokens.size() && pos[j] != kNoPosition && pos[j] != 0 && targets[pos[j]] == target) ++j;
      // A run of a repeated production fills that production's next open argument.
      std::size_t arg = arity;
      for (std::size_t a = 0; a < arity; ++a)
        if (!filled[a] && targets[a + 1] == target) {
          arg = a;
          break;
        }
      if (arg == arity) {
        ok = false;
        break;
      }
      filled[arg] = true;
      fillers[arg].assign(pair.tokens.begin() + static_cast<std::ptrdiff_t>(i),
                          pair.tokens.begin() + static_cast<std::ptrdiff_t>(j));
      phrase.push_back({"", arg + 1});
      i = j;
    }
    if (!ok || std::count(filled.begin(), filled.end(), true) != static_cast<std::ptrdiff_t>(arity)) continue;
    template_counts[mrl::index(pair.mr.predicate())][phrase] += 1;
    for (std::size_t a = 0; a < arity; ++a) surface_counts[pair.mr.args()[a].id()][fillers[a]] += 1;
  }

  TemplateLexicon lex;
  for (std::size_t p = 0; p < mrl::kNumPredicates; ++p)
    if (!template_counts[p].empty()) lex.templates[p] = normalize<TemplateEntry>(template_counts[p]);
  for (std::size_t c = 0; c < mrl::kNumConstants; ++c)
    if (!surface_counts[c].empty()) lex.realizations[c] = normalize<Realization>(surface_counts[c]);
  // Sort templates by their printed form.
  for (auto& ts : lex.templates)
    std::stable_sort(ts.begin(), ts.end(), [](const TemplateEntry& a, const TemplateEntry& b) {
      return template_to_string(a.phrase) < template_to_string(b.phrase);
    });
  return lex;
}

TranslationModel train(std::span<const TrainingPair> pairs, const TrainOptions& options) {
  if (pairs.empty()) throw EmptyTrainingSet();
  TranslationModel model{train_alignment(pairs, options.alignment_iterations), {},
                         LanguageModel(options.lm_order, options.lm_k)};
  model.lexicon = extract_templates(pairs, model.alignment);
  std::vector<std::vector<std::string>> sentences;
  sentences.reserve(pairs.size());
  for (const TrainingPair& p : pairs) sentences.push_back(p.tokens);
  model.lm.fit(sentences);
  return model;
}

double score_pair(std::span<const std::string> tokens, const mrl::Mr& mr, const AlignmentModel& alignment) {
  if (tokens.empty()) return 0;
  std::vector<std::size_t> targets = derivation_targets(mr);
  targets.push_back(kNullTarget);
  // fixed summation order, so MRs with the same derivation multiset score identically
  std::sort(targets.begin(), targets.end());
  double inv = 1.0 / static_cast<double>(targets.size());
  double log_sum = 0;
  for (const std::string& w : tokens) {
    auto id = alignment.word_id(w);
    double s = 0;
    for (std::size_t q : targets) s += alignment.prob(id, q);
    log_sum += std::log(s * inv);
  }
  return std::exp(log_sum / static_cast<double>(tokens.size()));
}

double abstention_floor(const AlignmentModel& alignment) { return alignment.floor(); }

std::vector<ScoredMr> parse_sentence(std::span<const std::string> tokens, const AlignmentModel& alignment,
                                     std::optional<std::span<const mrl::Mr>> candidates) {
  std::span<const mrl::Mr> pool = candidates ? *candidates : std::span<const mrl::Mr>(mrl::enumerate_mrs());
  std::vector<ScoredMr> out;
  if (tokens.empty() || pool.empty()) return out;

  // probs[i][q]: smoothed t(token_i | target q).
  std::vector<std::array<double, kNumTargets>> probs(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto id = alignment.word_id(tokens[i]);
    for (std::size_t q = 0; q < kNumTargets; ++q) probs[i][q] = alignment.prob(id, q);
  }
  out.reserve(pool.size());
  const double n = static_cast<double>(tokens.size());
  for (const mrl::Mr& mr : pool) {
    mrl::Derivation d = mrl::derivation(mr);
    // same summation order as score_pair
    std::array<std::size_t, 2 + mrl::kMaxArity> ids{};
    std::size_t m = 0;
    for (mrl::ProductionId p : d) ids[m++] = p.value;
    ids[m++] = kNullTarget;
    std::sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(m));
    double inv = 1.0 / static_cast<double>(m);
    double log_sum = 0;
    for (const auto& row : probs) {
      double s = 0;
      for (std::size_t k = 0; k < m; ++k) s += row[ids[k]];
      log_sum += std::log(s * inv);
    }
    out.push_back({mr, std::exp(log_sum / n)});
  }
  std::sort(out.begin(), out.end(), [](const ScoredMr& a, const ScoredMr& b) {
    if (a.score != b.score) return a.score > b.score;
    return mrl::canonical_rank(a.mr) < mrl::canonical_rank(b.mr);
  });
  const double floor = abstention_floor(alignment);
  if (out.front().score <= floor * (1 + 1e-12)) out.clear();
  return out;
}

std::vector<Generated> generate_topk(const mrl::Mr& mr, const TranslationModel& model, std::size_t k,
                                     const GenerationLimits& limits) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const auto& templates = model.lexicon.templates[mrl::index(mr.predicate())];
  if (templates.empty()) throw NoTemplate(mr.predicate());

  auto tmpl = heaviest(templates, limits.max_templates, [](const TemplateEntry& e) { return e.weight; },
                       [](const TemplateEntry& e) { return template_to_string(e.phrase); });

  std::vector<std::vector<Realization>> fallback(mr.arity());
  std::vector<std::vector<const Realization*>> options;
  for (std::size_t a = 0; a < mr.arity(); ++a) {
    mrl::Constant c = mr.args()[a];
    const auto& learned = model.lexicon.realizations[c.id()];
    if (learned.empty()) {
      fallback[a].push_back({{std::string(c.token())}, 1.0});
      options.push_back({&fallback[a].front()});
    } else {
      options.push_back(heaviest(learned, limits.max_realizations, [](const Realization& r) { return r.weight; },
                                 [](const Realization& r) { return r.words; }));
    }
  }

  std::map<std::vector<std::string>, double> best;
  std::vector<std::size_t> choice(mr.arity(), 0);
  std::vector<std::vector<std::string>> fillers(mr.arity());
  for (const TemplateEntry* t : tmpl) {
    std::fill(choice.begin(), choice.end(), 0);
    while (true) {
      double log_w = std::log(t->weight);
      for (std::size_t a = 0; a < mr.arity(); ++a) {
        fillers[a] = options[a][choice[a]]->words;
        log_w += std::log(options[a][choice[a]]->weight);
      }
      std::vector<std::string> tokens = instantiate(t->phrase, fillers);
      double log_score = model.lm.log_prob(tokens) + log_w;
      auto [it, inserted] = best.emplace(std::move(tokens), log_score);
      if (!inserted && log_score > it->second) it->second = log_score;
      // Advance the mixed-radix counter over argument realizations.
      std::size_t a = 0;
      while (a < mr.arity() && ++choice[a] == options[a].size()) choice[a++] = 0;
      if (a == mr.arity()) break;
    }
  }

  std::vector<GenerationKey> ranked;
  ranked.reserve(best.size());
  for (auto& [tokens, ls] : best) ranked.push_back({tokens, ls});
  std::size_t keep = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                    [](const GenerationKey& a, const GenerationKey& b) {
                      if (a.log_score != b.log_score) return a.log_score > b.log_score;
                      return a.tokens < b.tokens;
                    });
  std::vector<Generated> out;
  for (std::size_t i = 0; i < keep; ++i) out.push_back({std::move(ranked[i].tokens), std::exp(ranked[i].log_score)});
  return out;
}

void save_model(const TranslationModel& model, std::ostream& out) {
  const auto& vocab = model.alignment.vocabulary();
  out << "[alignment]\n";
  for (std::size_t q = 0; q < kNumTargets; ++q) {
    std::string target = q == kNullTarget ? "NULL" : mrl::to_string(mrl::ProductionId{static_cast<std::uint8_t>(q)});
    for (std::size_t w = 0; w < vocab.size(); ++w)
      out << target << '\t' << vocab[w] << '\t' << text::format_real(model.alignment.t(w, q)) << '\n';
  }
  out << "[templates]\n";
  for (mrl::Predicate p : mrl::all_predicates())
    for (const TemplateEntry& e : model.lexicon.templates[mrl::index(p)])
      out << mrl::to_string(mrl::s_production(p)) << '\t' << text::format_real(e.weight) << '\t'
          << template_to_string(e.phrase) << '\n';
  for (std::size_t c = 0; c < mrl::kNumConstants; ++c)
    for (const Realization& r : model.lexicon.realizations[c])
      out << mrl::to_string(mrl::constant_production(mrl::Constant::from_id(c))) << '\t'
          << text::format_real(r.weight) << '\t' << text::join(r.words) << '\n';
  out << "[lm]\n";
  out << "order\t" << model.lm.order() << '\n';
  out << "k\t" << text::format_real(model.lm.k()) << '\n';
  for (const auto& [gram, count] : model.lm.ngram_counts()) out << "ngram\t" << text::join(gram) << '\t' << count << '\n';
}

TranslationModel load_model(std::istream& in, const std::string& source) {
  enum class Section { kNone, kAlignment, kTemplates, kLm } section = Section::kNone;
  struct Entry {
    std::size_t target;
    std::string word;
    double prob;
  };
  std::vector<Entry> entries;
  std::vector<std::string> words;
  TemplateLexicon lex;
  std::optional<std::size_t> order;
  std::optional<double> k;
  std::vector<std::pair<std::vector<std::string>, std::size_t>> grams;

  auto fail = [&](std::size_t line, const std::string& why) { throw corpus::FormatError(source, line, why); };
  auto real = [&](const std::string& s, std::size_t line) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) fail(line, "bad number '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      fail(line, "bad number '" + s + "'");
    }
    return 0.0;
  };
  auto production = [&](const std::string& s, std::size_t line) {
    auto id = mrl::production_from_string(s);
    if (!id) fail(line, "unknown production '" + s + "'");
    return *id;
  };

  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "[alignment]") section = Section::kAlignment;
    else if (line == "[templates]") section = Section::kTemplates;
    else if (line == "[lm]") section = Section::kLm;
    else {
      auto f = text::split(line, '\t');
      if (f.size() < 2) fail(ln, "expected tab-separated fields");
      switch (section) {
        case Section::kNone:
          fail(ln, "record outside a section");
          break;
        case Section::kAlignment: {
          if (f.size() != 3) fail(ln, "expected production, word, probability");
          std::size_t target = f[0] == "NULL" ? kNullTarget : production(f[0], ln).value;
          entries.push_back({target, f[1], real(f[2], ln)});
          words.push_back(f[1]);
          break;
        }
        case Section::kTemplates: {
          if (f.size() != 3) fail(ln, "expected production, weight, phrase");
          mrl::ProductionId id = production(f[0], ln);
          double w = real(f[1], ln);
          if (mrl::is_constant_production(id)) {
            lex.realizations[mrl::constant_of(id).id()].push_back({text::split_whitespace(f[2]), w});
          } else {
            PhraseTemplate t = template_from_string(f[2]);
            lex.templates[id.value].push_back({std::move(t), w});
          }
          break;
        }
        case Section::kLm:
          if (f[0] == "order" && f.size() == 2) {
            order = static_cast<std::size_t>(real(f[1], ln));
          } else if (f[0] == "k" && f.size() == 2) {
            k = real(f[1], ln);
          } else if (f[0] == "ngram" && f.size() == 3) {
            double c = real(f[2], ln);
            if (c < 0 || c != std::floor(c)) fail(ln, "n-gram count must be a non-negative integer");
            grams.emplace_back(text::split_whitespace(f[1]), static_cast<std::size_t>(c));
          } else {
            fail(ln, "unknown language model record");
          }
          break;
      }
    }
  }
  if (!order || !k) fail(ln, "missing language model order or k");

  TranslationModel model{AlignmentModel(words), std::move(lex), LanguageModel(*order, *k)};
  for (const Entry& e : entries) model.alignment.set_t(*model.alignment.word_id(e.word), e.target, e.prob);
  for (const auto& [gram, count] : grams) {
    try {
      model.lm.add_ngram_count(gram, count);
    } catch (const std::invalid_argument& e) {
      fail(ln, e.what());
    }
  }
  for (mrl::Predicate p : mrl::all_predicates())
    for (const TemplateEntry& e : model.lexicon.templates[mrl::index(p)]) {
      std::size_t slots = slot_count(e.phrase);
      if (slots != mrl::arity(p)) fail(ln, "template slot count does not match arity of " + std::string(mrl::name(p)));
    }
  return model;
}

}  // namespace sportscaster::translator
