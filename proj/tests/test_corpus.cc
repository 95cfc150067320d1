#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sportscaster/corpus.h"
#include "sportscaster/simgen.h"

using namespace sportscaster;
using namespace sportscaster::corpus;

namespace {

GameEvent ev(TimeMs t, const char* mr, std::size_t id) { return GameEvent{t, mrl::parse_mr(mr), id}; }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sportscaster_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void put(const std::filesystem::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

}  // namespace

TEST_CASE("window includes the boundary and excludes later events") {
  std::vector<GameEvent> events = {ev(0, "kick ( pink1 )", 0), ev(3000, "ballstopped", 1), ev(6000, "kick ( pink2 )", 2)};
  Comment at_edge = make_comment(5000, "en", "pink1 shoots", 0);
  CHECK(window_candidates(events, at_edge, 5000) == std::vector<std::size_t>{0, 1});
  Comment past = make_comment(5001, "en", "x", 1);
  CHECK(window_candidates(events, past, 5000) == std::vector<std::size_t>{1});
  Comment before = make_comment(-1, "en", "x", 2);
  CHECK(window_candidates(events, before, 5000).empty());
}

TEST_CASE("pairing drops comments with empty windows and counts them") {
  std::vector<GameEvent> events = {ev(10000, "kick ( pink1 )", 0)};
  std::vector<Comment> comments = {make_comment(1000, "en", "early", 0), make_comment(12000, "en", "pink1 kicks", 1)};
  Pairing p = pair_with_window(events, comments, 5000, "g");
  REQUIRE(p.examples.size() == 1);
  CHECK(p.unpaired_comments == 1);
  CHECK(p.examples[0].comment.id == 1);
  CHECK(p.examples[0].game == "g");
  CHECK(p.examples[0].candidates.size() == 1);
}

TEST_CASE("window properties on random traces") {
  simgen::WorldConfig w;
  w.duration_ms = 200000;
  auto events = simulate_events(w);
  for (TimeMs t = 0; t < 200000; t += 777) {
    Comment c = make_comment(t, "en", "w", 0);
    auto ids = window_candidates(events, c, 5000);
    for (std::size_t id : ids) {
      CHECK(events[id].time_ms <= t);
      CHECK(t - events[id].time_ms <= 5000);
    }
    std::size_t expected = 0;
    for (const auto& e : events) expected += e.time_ms <= t && t - e.time_ms <= 5000;
    CHECK(ids.size() == expected);
    // monotone in the window size
    CHECK(window_candidates(events, c, 2000).size() <= ids.size());
  }
}

TEST_CASE("gold resolves to the earliest in-window event with the MR") {
  std::vector<GameEvent> events = {ev(0, "kick ( pink1 )", 0), ev(1000, "kick ( pink1 )", 1), ev(2000, "ballstopped", 2)};
  Comment c = make_comment(4000, "en", "pink1 kicks", 0);
  CHECK(resolve_gold(events, c, mrl::parse_mr("kick ( pink1 )"), 5000) == std::optional<std::size_t>(0));
  CHECK(resolve_gold(events, c, mrl::parse_mr("kick ( pink1 )"), 3500) == std::optional<std::size_t>(1));
  CHECK(!resolve_gold(events, c, mrl::parse_mr("kick ( pink2 )"), 5000));
}

TEST_CASE("empty comment text is rejected") { CHECK_THROWS_AS(make_comment(0, "en", "   ", 0), std::invalid_argument); }

TEST_CASE("corpus files round-trip") {
  simgen::SimConfig cfg;
  cfg.games = 2;
  cfg.world.duration_ms = 300000;
  Corpus c = simgen::simulate_corpus(cfg);
  auto dir = scratch("roundtrip");
  auto manifest = write_corpus(c, dir);
  Corpus back = load_corpus(manifest);
  REQUIRE(back.games.size() == 2);
  for (std::size_t g = 0; g < 2; ++g) {
    CHECK(back.games[g].name == c.games[g].name);
    CHECK(back.games[g].events == c.games[g].events);
    CHECK(back.games[g].comments == c.games[g].comments);
    CHECK(back.games[g].gold == canonicalize_gold(c.games[g]));
  }
}

TEST_CASE("malformed corpus files raise FormatError with a line") {
  auto dir = scratch("malformed");
  put(dir / "e.tsv", "100\tkick ( pink1 )\n50\tballstopped\n");
  put(dir / "c.tsv", "200\ten\tpink1 kicks\n");
  CHECK_THROWS_AS(load_game("g", dir / "e.tsv", dir / "c.tsv", std::nullopt), FormatError);
  put(dir / "e.tsv", "100\tkick ( pink1 )\n");
  put(dir / "g.tsv", "7\tkick ( pink1 )\n");
  CHECK_THROWS_AS(load_game("g", dir / "e.tsv", dir / "c.tsv", dir / "g.tsv"), DanglingGoldReference);
  put(dir / "g.tsv", "0\tkick ( pink9 )\n");
  CHECK_THROWS_AS(load_game("g", dir / "e.tsv", dir / "c.tsv", dir / "g.tsv"), DanglingGoldReference);
  put(dir / "g.tsv", "0\tNONE\n");
  Game ok = load_game("g", dir / "e.tsv", dir / "c.tsv", dir / "g.tsv");
  REQUIRE(ok.gold);
  CHECK(!ok.gold->at(0));
  put(dir / "c.tsv", "200\ten\n");
  try {
    load_game("g", dir / "e.tsv", dir / "c.tsv", std::nullopt);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("cross-validation splits") {
  CHECK(cv_splits(4, 1).size() == 4);
  CHECK(cv_splits(4, 3).size() == 4);
  std::size_t total = 0;
  for (std::size_t k = 1; k < 4; ++k) total += cv_splits(4, k).size();
  CHECK(total == 14);
  auto s = cv_splits(4, 2);
  REQUIRE(s.size() == 6);
  CHECK(s[0].train == std::vector<std::size_t>{0, 1});
  CHECK(s[0].test == std::vector<std::size_t>{2, 3});
  CHECK(s[5].train == std::vector<std::size_t>{2, 3});
  CHECK_THROWS_AS(cv_splits(1, 1), InsufficientGames);
  CHECK_THROWS_AS(cv_splits(4, 0), InsufficientGames);
}

TEST_CASE("training set carries gold indices and event counts") {
  simgen::SimConfig cfg;
  cfg.games = 2;
  cfg.world.duration_ms = 400000;
  Corpus c = simgen::simulate_corpus(cfg);
  TrainingSet data = build_training_set(c);
  REQUIRE(data.has_gold);
  REQUIRE(data.gold.size() == data.examples.size());
  std::size_t events = 0;
  for (auto n : data.event_counts) events += n;
  CHECK(events == c.games[0].events.size() + c.games[1].events.size());
  for (std::size_t i = 0; i < data.examples.size(); ++i)
    if (data.gold[i]) CHECK(*data.gold[i] < data.examples[i].candidates.size());
}
