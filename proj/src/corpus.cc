#include "sportscaster/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "sportscaster/text.h"

namespace sportscaster::corpus {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string(), 0, "cannot open file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

template <typename Int>
Int parse_int(const std::string& s, const fs::path& file, std::size_t line, const char* what) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw FormatError(file.string(), line, std::string("invalid ") + what + " '" + s + "'");
  return v;
}

mrl::Mr parse_mr_field(const std::string& s, const fs::path& file, std::size_t line) {
  try {
    return mrl::parse_mr(s);
  } catch (const mrl::MalformedMrError& e) {
    throw FormatError(file.string(), line, std::string("malformed MR: ") + e.what());
  }
}

// First index whose event time is >= t.
std::size_t lower_time(std::span<const GameEvent> events, TimeMs t) {
  auto it = std::lower_bound(events.begin(), events.end(), t,
                             [](const GameEvent& e, TimeMs v) { return e.time_ms < v; });
  return static_cast<std::size_t>(it - events.begin());
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void check_game_name(const std::string& name) {
  if (name.empty() || name.find_first_of("/\\\t\n") != std::string::npos || name == "." || name == "..")
    throw std::invalid_argument("unusable game name '" + name + "'");
}

}  // namespace

Comment make_comment(TimeMs time_ms, std::string language, std::string raw, std::size_t id) {
  Comment c;
  c.time_ms = time_ms;
  c.tokens = text::tokenize(raw, language);
  if (c.tokens.empty()) throw std::invalid_argument("comment has no tokens");
  c.raw = std::move(raw);
  c.language = std::move(language);
  c.id = id;
  return c;
}

std::vector<std::size_t> window_candidates(std::span<const GameEvent> events, const Comment& comment,
                                           TimeMs window_ms) {
  std::vector<std::size_t> out;
  std::size_t i = lower_time(events, comment.time_ms - window_ms);
  for (; i < events.size() && events[i].time_ms <= comment.time_ms; ++i) out.push_back(i);
  return out;
}

Pairing pair_with_window(std::span<const GameEvent> events, std::span<const Comment> comments, TimeMs window_ms,
                         const std::string& game) {
  if (window_ms <= 0) throw std::invalid_argument("window_ms must be positive");
  Pairing out;
  for (const Comment& c : comments) {
    auto ids = window_candidates(events, c, window_ms);
    if (ids.empty()) {
      ++out.unpaired_comments;
      continue;
    }
    AmbiguousExample ex{game, c, {}};
    ex.candidates.reserve(ids.size());
    for (std::size_t i : ids) ex.candidates.push_back(events[i]);
    out.examples.push_back(std::move(ex));
  }
  return out;
}

std::optional<std::size_t> resolve_gold(std::span<const GameEvent> events, const Comment& comment,
                                        const mrl::Mr& mr, TimeMs window_ms) {
  for (std::size_t i : window_candidates(events, comment, window_ms))
    if (events[i].mr == mr) return events[i].id;
  return std::nullopt;
}

GoldMatch canonicalize_gold(const Game& game, TimeMs window_ms) {
  GoldMatch out;
  if (!game.gold) return out;
  for (const auto& [cid, eid] : *game.gold) {
    if (!eid) {
      out[cid] = std::nullopt;
      continue;
    }
    const Comment& c = game.comments.at(cid);
    auto resolved = resolve_gold(game.events, c, game.events.at(*eid).mr, window_ms);
    if (!resolved)
      throw std::invalid_argument("gold event " + std::to_string(*eid) + " is outside the window of comment " +
                                  std::to_string(cid));
    out[cid] = resolved;
  }
  return out;
}

PredicateCounts count_predicates(std::span<const GameEvent> events) {
  PredicateCounts counts{};
  for (const GameEvent& e : events) ++counts[mrl::index(e.mr.predicate())];
  return counts;
}

Game load_game(const std::string& name, const fs::path& events_path, const fs::path& comments_path,
               const std::optional<fs::path>& gold_path, TimeMs window_ms) {
  Game game;
  game.name = name;

  auto lines = read_lines(events_path);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    auto fields = text::split(lines[ln], '\t');
    if (fields.size() != 2) throw FormatError(events_path.string(), ln + 1, "expected 2 tab-separated fields");
    auto t = parse_int<TimeMs>(fields[0], events_path, ln + 1, "time");
    if (t < 0) throw FormatError(events_path.string(), ln + 1, "negative time");
    if (!game.events.empty() && t < game.events.back().time_ms)
      throw FormatError(events_path.string(), ln + 1, "event times must be non-decreasing");
    game.events.push_back(GameEvent{t, parse_mr_field(fields[1], events_path, ln + 1), game.events.size()});
  }

  lines = read_lines(comments_path);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    auto fields = text::split(lines[ln], '\t');
    if (fields.size() < 3) throw FormatError(comments_path.string(), ln + 1, "expected 3 tab-separated fields");
    auto t = parse_int<TimeMs>(fields[0], comments_path, ln + 1, "time");
    if (t < 0) throw FormatError(comments_path.string(), ln + 1, "negative time");
    std::string raw = fields[2];
    for (std::size_t i = 3; i < fields.size(); ++i) raw += "\t" + fields[i];
    try {
      game.comments.push_back(make_comment(t, fields[1], std::move(raw), game.comments.size()));
    } catch (const std::invalid_argument& e) {
      throw FormatError(comments_path.string(), ln + 1, e.what());
    }
  }

  if (gold_path) {
    GoldMatch gold;
    lines = read_lines(*gold_path);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
      if (lines[ln].empty()) continue;
      auto fields = text::split(lines[ln], '\t');
      if (fields.size() != 2) throw FormatError(gold_path->string(), ln + 1, "expected 2 tab-separated fields");
      auto cid = parse_int<std::size_t>(fields[0], *gold_path, ln + 1, "comment id");
      if (cid >= game.comments.size())
        throw DanglingGoldReference(gold_path->string(), ln + 1, "no comment with id " + fields[0]);
      if (gold.count(cid)) throw FormatError(gold_path->string(), ln + 1, "duplicate comment id " + fields[0]);
      if (fields[1] == "NONE") {
        gold[cid] = std::nullopt;
        continue;
      }
      mrl::Mr mr = parse_mr_field(fields[1], *gold_path, ln + 1);
      auto eid = resolve_gold(game.events, game.comments[cid], mr, window_ms);
      if (!eid)
        throw DanglingGoldReference(gold_path->string(), ln + 1,
                                    "no event '" + fields[1] + "' in the window of comment " + fields[0]);
      gold[cid] = eid;
    }
    game.gold = std::move(gold);
  }
  return game;
}

Corpus load_corpus(const fs::path& manifest, TimeMs window_ms) {
  Corpus corpus;
  fs::path base = manifest.parent_path();
  auto lines = read_lines(manifest);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = text::trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    auto fields = text::split(line, '\t');
    if (fields.size() != 4) throw FormatError(manifest.string(), ln + 1, "expected 4 tab-separated fields");
    std::optional<fs::path> gold;
    if (fields[3] != "-") gold = base / fields[3];
    corpus.games.push_back(load_game(fields[0], base / fields[1], base / fields[2], gold, window_ms));
  }
  return corpus;
}

fs::path write_corpus(const Corpus& corpus, const fs::path& dir) {
  fs::create_directories(dir);
  std::ostringstream manifest;
  for (const Game& g : corpus.games) {
    check_game_name(g.name);
    std::string events_name = g.name + ".events.tsv";
    std::string comments_name = g.name + ".comments.tsv";
    std::string gold_name = g.gold ? g.name + ".gold.tsv" : "-";
    manifest << g.name << '\t' << events_name << '\t' << comments_name << '\t' << gold_name << '\n';

    std::ostringstream ev;
    for (const GameEvent& e : g.events) ev << e.time_ms << '\t' << mrl::serialize_mr(e.mr) << '\n';
    write_file(dir / events_name, ev.str());

    std::ostringstream cm;
    for (const Comment& c : g.comments) cm << c.time_ms << '\t' << c.language << '\t' << c.raw << '\n';
    write_file(dir / comments_name, cm.str());

    if (g.gold) {
      std::ostringstream gd;
      for (const auto& [cid, eid] : *g.gold)
        gd << cid << '\t' << (eid ? mrl::serialize_mr(g.events.at(*eid).mr) : std::string("NONE")) << '\n';
      write_file(dir / gold_name, gd.str());
    }
  }
  fs::path manifest_path = dir / "manifest.tsv";
  write_file(manifest_path, manifest.str());
  return manifest_path;
}

std::vector<Split> cv_splits(std::size_t num_games, std::size_t k_train) {
  if (k_train < 1 || k_train >= num_games)
    throw InsufficientGames("need 1 <= k_train < games (k_train=" + std::to_string(k_train) +
                            ", games=" + std::to_string(num_games) + ")");
  std::vector<Split> out;
  std::vector<std::size_t> pick(k_train);
  for (std::size_t i = 0; i < k_train; ++i) pick[i] = i;
  while (true) {
    Split s;
    s.train = pick;
    for (std::size_t g = 0; g < num_games; ++g)
      if (!std::binary_search(pick.begin(), pick.end(), g)) s.test.push_back(g);
    out.push_back(std::move(s));
    // Advance to the next combination in lexicographic order.
    std::size_t i = k_train;
    while (i > 0 && pick[i - 1] == num_games - k_train + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k_train; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

TrainingSet build_training_set(const Corpus& corpus, std::span<const std::size_t> games, TimeMs window_ms) {
  TrainingSet ts;
  ts.has_gold = !games.empty();
  for (std::size_t gi : games)
    if (!corpus.games.at(gi).gold) ts.has_gold = false;

  for (std::size_t gi : games) {
    const Game& g = corpus.games.at(gi);
    auto counts = count_predicates(g.events);
    for (std::size_t p = 0; p < counts.size(); ++p) ts.event_counts[p] += counts[p];
    Pairing pairing = pair_with_window(g.events, g.comments, window_ms, g.name);
    ts.unpaired_comments += pairing.unpaired_comments;
    for (AmbiguousExample& ex : pairing.examples) {
      if (ts.has_gold) {
        std::optional<std::size_t> gold_idx;
        auto it = g.gold->find(ex.comment.id);
        if (it != g.gold->end() && it->second) {
          for (std::size_t k = 0; k < ex.candidates.size(); ++k)
            if (ex.candidates[k].id == *it->second) gold_idx = k;
          if (!gold_idx)
            throw std::invalid_argument("gold event for comment " + std::to_string(ex.comment.id) + " of game " +
                                        g.name + " is not among its candidates");
        }
        ts.gold.push_back(gold_idx);
      }
      ts.examples.push_back(std::move(ex));
    }
    if (ts.has_gold)
      for (const auto& [cid, eid] : *g.gold)
        if (eid) ++ts.gold_matched;
  }
  return ts;
}

TrainingSet build_training_set(const Corpus& corpus, TimeMs window_ms) {
  std::vector<std::size_t> all(corpus.games.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return build_training_set(corpus, all, window_ms);
}

}  // namespace sportscaster::corpus
