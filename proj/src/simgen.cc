#include "sportscaster/simgen.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "sportscaster/prng.h"
#include "sportscaster/text.h"

namespace sportscaster::simgen {

using corpus::Comment;
using corpus::GameEvent;
using mrl::Predicate;

namespace {

std::size_t pi(Predicate p) { return mrl::index(p); }

void add(CommentatorProfile& profile, Predicate p, std::string_view text, double weight) {
  profile.lexicon[pi(p)].push_back({template_from_string(text), weight});
}

const std::vector<std::string>& superfluous_words() {
  static const std::vector<std::string> words = {
      "what", "a",     "great",  "game",    "purple", "team",  "is",   "very",  "sloppy", "today",
      "nice", "play",  "crowd",  "loves",   "this",   "they",  "need", "score", "pink",   "looks",
      "tired", "wow",  "amazing", "strategy", "again", "keeper", "fans", "half",  "coach",  "wind"};
  return words;
}

std::vector<std::string> surface_of(mrl::Constant c, const CommentatorProfile& profile, Prng* prng) {
  const auto& options = profile.surfaces[c.id()];
  if (options.empty()) return {std::string(c.token())};
  if (!prng) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < options.size(); ++i)
      if (options[i].weight > options[best].weight) best = i;
    return options[best].words;
  }
  std::vector<double> w;
  for (const auto& o : options) w.push_back(o.weight);
  return options[prng->weighted(w)].words;
}

std::vector<std::string> realize(const mrl::Mr& mr, const CommentatorProfile& profile, Prng* prng) {
  const auto& templates = profile.lexicon[pi(mr.predicate())];
  if (templates.empty()) throw EmptyLexicon("no template for " + std::string(mrl::name(mr.predicate())));
  std::size_t pick = 0;
  if (prng) {
    std::vector<double> w;
    for (const auto& t : templates) w.push_back(t.weight);
    pick = prng->weighted(w);
  } else {
    for (std::size_t i = 1; i < templates.size(); ++i)
      if (templates[i].weight > templates[pick].weight) pick = i;
  }
  std::vector<std::vector<std::string>> fillers;
  for (mrl::Constant c : mr.args()) fillers.push_back(surface_of(c, profile, prng));
  return instantiate(templates[pick].phrase, fillers);
}

Predicate predicate_key(const std::string& key, std::size_t prefix_len) {
  auto p = mrl::predicate_from_name(std::string_view(key).substr(prefix_len));
  if (!p) throw std::invalid_argument("unknown predicate in key '" + key + "'");
  return *p;
}

double to_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number for '" + key + "': '" + value + "'");
  }
}

template <typename Int>
Int to_int(const std::string& key, const std::string& value) {
  Int v{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw std::invalid_argument("bad integer for '" + key + "': '" + value + "'");
  return v;
}

std::vector<WeightedTemplate> parse_templates(const std::string& key, const std::string& value) {
  std::vector<WeightedTemplate> out;
  for (const std::string& alt : text::split(value, ';')) {
    std::string_view body = text::trim(alt);
    double weight = 1;
    if (auto at = body.rfind('@'); at != std::string_view::npos) {
      weight = to_real(key, std::string(text::trim(body.substr(at + 1))));
      body = text::trim(body.substr(0, at));
    }
    if (body.empty()) throw std::invalid_argument("empty template in '" + key + "'");
    out.push_back({template_from_string(body), weight});
  }
  return out;
}

std::string templates_to_string(const std::vector<WeightedTemplate>& ts) {
  std::string out;
  for (const auto& t : ts) {
    if (!out.empty()) out += " ; ";
    out += template_to_string(t.phrase) + " @ " + text::format_real(t.weight);
  }
  return out;
}

}  // namespace

PredicateWeights default_event_weights() {
  PredicateWeights w{};
  w[pi(Predicate::kBallstopped)] = 5817;
  w[pi(Predicate::kKick)] = 2122;
  w[pi(Predicate::kPass)] = 1069;
  w[pi(Predicate::kTurnover)] = 566;
  w[pi(Predicate::kBadPass)] = 371;
  w[pi(Predicate::kPlaymode)] = 300;
  w[pi(Predicate::kDefense)] = 150;
  w[pi(Predicate::kSteal)] = 100;
  w[pi(Predicate::kBlock)] = 60;
  return w;
}

PredicateWeights default_comment_prob() {
  PredicateWeights p{};
  p[pi(Predicate::kBallstopped)] = 1.72e-4;
  p[pi(Predicate::kKick)] = 0.033;
  p[pi(Predicate::kPass)] = 0.999;
  p[pi(Predicate::kTurnover)] = 0.214;
  p[pi(Predicate::kBadPass)] = 0.429;
  p[pi(Predicate::kPlaymode)] = 0.3;
  p[pi(Predicate::kDefense)] = 0.3;
  p[pi(Predicate::kSteal)] = 0.4;
  p[pi(Predicate::kBlock)] = 0.6;
  return p;
}

CommentatorProfile default_profile() {
  CommentatorProfile p;
  add(p, Predicate::kPlaymode, "the referee calls <1>", 1);
  add(p, Predicate::kPlaymode, "<1> is called", 1);
  add(p, Predicate::kBallstopped, "the ball stops", 1);
  add(p, Predicate::kTurnover, "<1> loses the ball to <2>", 1);
  add(p, Predicate::kTurnover, "<2> takes the ball from <1>", 1);
  add(p, Predicate::kKick, "<1> kicks the ball", 2);
  add(p, Predicate::kKick, "<1> shoots", 1);
  add(p, Predicate::kPass, "<1> passes to <2>", 3);
  add(p, Predicate::kPass, "<1> kicks to <2>", 1);
  add(p, Predicate::kPass, "pass from <1> to <2>", 1);
  add(p, Predicate::kBadPass, "<1> makes a bad pass to <2>", 2);
  add(p, Predicate::kBadPass, "<1> misses the pass and <2> picks it up", 1);
  add(p, Predicate::kDefense, "<1> defends against <2>", 1);
  add(p, Predicate::kDefense, "<1> marks <2>", 1);
  add(p, Predicate::kSteal, "<1> steals the ball", 2);
  add(p, Predicate::kSteal, "<1> intercepts", 1);
  add(p, Predicate::kBlock, "<1> blocks the shot", 2);
  add(p, Predicate::kBlock, "great save by <1>", 1);
  p.surfaces[mrl::Constant::player(0).id()] = {{{"pink1"}, 3}, {{"pink", "goalie"}, 1}};
  p.surfaces[mrl::Constant::player(11).id()] = {{{"purple1"}, 3}, {{"purple", "goalie"}, 1}};
  p.superfluous_vocabulary = superfluous_words();
  return p;
}

CommentatorProfile sharp_profile() {
  CommentatorProfile p;
  add(p, Predicate::kPlaymode, "the referee calls <1>", 1);
  add(p, Predicate::kBallstopped, "the ball stops", 1);
  add(p, Predicate::kTurnover, "<2> takes the ball from <1>", 1);
  add(p, Predicate::kKick, "<1> kicks the ball", 1);
  add(p, Predicate::kPass, "<1> passes to <2>", 1);
  add(p, Predicate::kBadPass, "<1> makes a bad pass to <2>", 1);
  add(p, Predicate::kDefense, "<1> defends against <2>", 1);
  add(p, Predicate::kSteal, "<1> steals the ball", 1);
  add(p, Predicate::kBlock, "<1> blocks the shot", 1);
  p.superfluous_vocabulary = superfluous_words();
  return p;
}

void validate(const WorldConfig& config) {
  if (config.duration_ms <= 0) throw std::invalid_argument("duration_ms must be positive");
  if (config.min_event_gap_ms < 1) throw std::invalid_argument("min_event_gap_ms must be >= 1");
  if (!(config.mean_event_gap_ms >= static_cast<double>(config.min_event_gap_ms)))
    throw std::invalid_argument("mean_event_gap_ms must be >= min_event_gap_ms");
  bool positive = false;
  for (double w : config.event_type_weights) {
    if (!(w >= 0)) throw std::invalid_argument("event type weights must be non-negative");
    positive = positive || w > 0;
  }
  if (!positive) throw std::invalid_argument("at least one event type weight must be positive");
}

void validate(const CommentatorProfile& profile) {
  for (double p : profile.comment_prob)
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("comment_prob must lie in [0, 1]");
  if (!(profile.superfluous_rate >= 0 && profile.superfluous_rate < 1))
    throw std::invalid_argument("superfluous_rate must lie in [0, 1)");
  if (profile.lag_min_ms < 0 || profile.lag_max_ms < profile.lag_min_ms)
    throw std::invalid_argument("lag range must satisfy 0 <= min <= max");
  if (profile.superfluous_rate > 0 && profile.superfluous_vocabulary.empty())
    throw std::invalid_argument("superfluous comments need a vocabulary");
  if (profile.superfluous_min_words < 1 || profile.superfluous_max_words < profile.superfluous_min_words)
    throw std::invalid_argument("superfluous word counts must satisfy 1 <= min <= max");
  for (Predicate p : mrl::all_predicates()) {
    const auto& ts = profile.lexicon[pi(p)];
    if (ts.empty()) throw EmptyLexicon("no template for " + std::string(mrl::name(p)));
    for (const auto& t : ts) {
      if (!(t.weight > 0)) throw std::invalid_argument("template weights must be positive");
      std::vector<bool> seen(mrl::arity(p) + 1, false);
      for (const auto& item : t.phrase) {
        if (!item.is_slot()) continue;
        if (item.slot > mrl::arity(p) || seen[item.slot])
          throw std::invalid_argument("template '" + template_to_string(t.phrase) + "' has bad slots for " +
                                      std::string(mrl::name(p)));
        seen[item.slot] = true;
      }
      if (slot_count(t.phrase) != mrl::arity(p))
        throw std::invalid_argument("template '" + template_to_string(t.phrase) + "' needs " +
                                    std::to_string(mrl::arity(p)) + " slots");
    }
  }
  for (const auto& options : profile.surfaces)
    for (const auto& o : options)
      if (o.words.empty() || !(o.weight > 0)) throw std::invalid_argument("surface phrases need words and weight > 0");
}

std::vector<GameEvent> simulate_events(const WorldConfig& config) {
  validate(config);
  Prng prng(config.seed);
  std::vector<double> weights(config.event_type_weights.begin(), config.event_type_weights.end());
  // Geometric extra gap on {0, 1, ...} with mean (mean - min).
  double extra_mean = config.mean_event_gap_ms - static_cast<double>(config.min_event_gap_ms);
  double log_q = extra_mean > 0 ? std::log(extra_mean / (extra_mean + 1)) : 0;

  std::vector<GameEvent> events;
  TimeMs t = 0;
  while (true) {
    TimeMs gap = config.min_event_gap_ms;
    double u = prng.uniform();
    if (extra_mean > 0) gap += static_cast<TimeMs>(std::floor(std::log1p(-u) / log_q));
    t += gap;
    if (t > config.duration_ms) break;
    Predicate p = mrl::all_predicates()[prng.weighted(weights)];
    std::vector<mrl::Constant> args;
    for (mrl::Sort s : mrl::argument_sorts(p)) {
      auto pool = mrl::constants_of(s);
      args.push_back(pool[prng.below(pool.size())]);
    }
    events.push_back(GameEvent{t, mrl::Mr(p, args), events.size()});
  }
  return events;
}

Commentary commentate(std::span<const GameEvent> events, const CommentatorProfile& profile, TimeMs window_ms) {
  validate(profile);
  Prng prng(profile.seed);

  struct Draft {
    TimeMs time;
    std::string raw;
    std::optional<std::size_t> event;
  };
  std::vector<Draft> drafts;
  for (const GameEvent& e : events) {
    if (prng.uniform() >= profile.comment_prob[pi(e.mr.predicate())]) continue;
    TimeMs span = profile.lag_max_ms - profile.lag_min_ms + 1;
    TimeMs lag = profile.lag_min_ms + static_cast<TimeMs>(prng.below(static_cast<std::size_t>(span)));
    drafts.push_back({e.time_ms + lag, text::join(realize(e.mr, profile, &prng)), e.id});
  }

  std::size_t real = drafts.size();
  auto superfluous = static_cast<std::size_t>(
      std::llround(profile.superfluous_rate / (1 - profile.superfluous_rate) * static_cast<double>(real)));
  TimeMs end = events.empty() ? 0 : events.back().time_ms;
  for (std::size_t i = 0; i < superfluous; ++i) {
    TimeMs t = static_cast<TimeMs>(prng.below(static_cast<std::size_t>(end) + 1));
    std::size_t span = profile.superfluous_max_words - profile.superfluous_min_words + 1;
    std::size_t n = profile.superfluous_min_words + prng.below(span);
    std::vector<std::string> words;
    for (std::size_t j = 0; j < n; ++j)
      words.push_back(profile.superfluous_vocabulary[prng.below(profile.superfluous_vocabulary.size())]);
    drafts.push_back({t, text::join(words), std::nullopt});
  }
  std::stable_sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) { return a.time < b.time; });

  Commentary out;
  for (const Draft& d : drafts) {
    Comment c = corpus::make_comment(d.time, profile.language, d.raw, out.comments.size());
    std::optional<std::size_t> gold;
    if (d.event) gold = corpus::resolve_gold(events, c, events[*d.event].mr, window_ms);
    out.gold[c.id] = gold;
    out.comments.push_back(std::move(c));
  }
  return out;
}

std::vector<std::string> hidden_realization(const mrl::Mr& mr, const CommentatorProfile& profile) {
  return realize(mr, profile, nullptr);
}

SimConfig sim_config_from(const std::map<std::string, std::string>& kv) {
  SimConfig c;
  if (auto it = kv.find("profile"); it != kv.end()) {
    if (it->second == "sharp") c.profile = sharp_profile();
    else if (it->second != "default") throw std::invalid_argument("unknown profile '" + it->second + "'");
    c.profile_name = it->second;
  }
  if (auto it = kv.find("seed"); it != kv.end()) {
    auto seed = to_int<std::uint64_t>(it->first, it->second);
    c.world.seed = seed;
    c.profile.seed = mix64(seed);
  }
  for (const auto& [key, value] : kv) {
    if (key == "profile" || key == "seed") continue;
    if (key == "games") c.games = to_int<std::size_t>(key, value);
    else if (key == "world_seed") c.world.seed = to_int<std::uint64_t>(key, value);
    else if (key == "commentator_seed") c.profile.seed = to_int<std::uint64_t>(key, value);
    else if (key == "window_ms") c.window_ms = to_int<TimeMs>(key, value);
    else if (key == "duration_ms") c.world.duration_ms = to_int<TimeMs>(key, value);
    else if (key == "mean_event_gap_ms") c.world.mean_event_gap_ms = to_real(key, value);
    else if (key == "min_event_gap_ms") c.world.min_event_gap_ms = to_int<TimeMs>(key, value);
    else if (key == "superfluous_rate") c.profile.superfluous_rate = to_real(key, value);
    else if (key == "lag_min_ms") c.profile.lag_min_ms = to_int<TimeMs>(key, value);
    else if (key == "lag_max_ms") c.profile.lag_max_ms = to_int<TimeMs>(key, value);
    else if (key == "language") c.profile.language = value;
    else if (key == "superfluous_vocabulary") c.profile.superfluous_vocabulary = text::split_whitespace(value);
    else if (key.starts_with("weight.")) c.world.event_type_weights[pi(predicate_key(key, 7))] = to_real(key, value);
    else if (key.starts_with("comment_prob.")) c.profile.comment_prob[pi(predicate_key(key, 13))] = to_real(key, value);
    else if (key.starts_with("template.")) c.profile.lexicon[pi(predicate_key(key, 9))] = parse_templates(key, value);
    else throw std::invalid_argument("unknown simulation key '" + key + "'");
  }
  if (c.games < 1) throw std::invalid_argument("games must be >= 1");
  if (c.window_ms <= 0) throw std::invalid_argument("window_ms must be positive");
  validate(c.world);
  validate(c.profile);
  return c;
}

std::map<std::string, std::string> to_key_values(const SimConfig& c) {
  std::map<std::string, std::string> kv;
  kv["profile"] = c.profile_name;
  kv["games"] = std::to_string(c.games);
  kv["world_seed"] = std::to_string(c.world.seed);
  kv["commentator_seed"] = std::to_string(c.profile.seed);
  kv["window_ms"] = std::to_string(c.window_ms);
  kv["duration_ms"] = std::to_string(c.world.duration_ms);
  kv["mean_event_gap_ms"] = text::format_real(c.world.mean_event_gap_ms);
  kv["min_event_gap_ms"] = std::to_string(c.world.min_event_gap_ms);
  kv["superfluous_rate"] = text::format_real(c.profile.superfluous_rate);
  kv["lag_min_ms"] = std::to_string(c.profile.lag_min_ms);
  kv["lag_max_ms"] = std::to_string(c.profile.lag_max_ms);
  kv["language"] = c.profile.language;
  kv["superfluous_vocabulary"] = text::join(c.profile.superfluous_vocabulary);
  for (Predicate p : mrl::all_predicates()) {
    std::string n(mrl::name(p));
    kv["weight." + n] = text::format_real(c.world.event_type_weights[pi(p)]);
    kv["comment_prob." + n] = text::format_real(c.profile.comment_prob[pi(p)]);
    kv["template." + n] = templates_to_string(c.profile.lexicon[pi(p)]);
  }
  return kv;
}

corpus::Corpus simulate_corpus(const SimConfig& config) {
  corpus::Corpus out;
  for (std::size_t g = 0; g < config.games; ++g) {
    WorldConfig world = config.world;
    world.seed = mix64(config.world.seed + g);
    CommentatorProfile profile = config.profile;
    profile.seed = mix64(config.profile.seed + g);
    corpus::Game game;
    game.name = "game" + std::to_string(g + 1);
    game.events = simulate_events(world);
    Commentary commentary = commentate(game.events, profile, config.window_ms);
    game.comments = std::move(commentary.comments);
    game.gold = std::move(commentary.gold);
    out.games.push_back(std::move(game));
  }
  return out;
}

}  // namespace sportscaster::simgen
