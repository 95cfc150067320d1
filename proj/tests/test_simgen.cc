#include <doctest.h>

#include <cmath>

#include "sportscaster/prng.h"
#include "sportscaster/simgen.h"
#include "sportscaster/text.h"

using namespace sportscaster;
using namespace sportscaster::simgen;

TEST_CASE("event gaps respect the minimum and the mean") {
  WorldConfig w;
  w.min_event_gap_ms = 100;
  w.mean_event_gap_ms = 600;
  auto events = simulate_events(w);
  REQUIRE(events.size() > 1000);
  for (std::size_t i = 1; i < events.size(); ++i) CHECK(events[i].time_ms - events[i - 1].time_ms >= 100);
  double mean = static_cast<double>(events.back().time_ms - events.front().time_ms) / static_cast<double>(events.size() - 1);
  CHECK(mean == doctest::Approx(600).epsilon(0.05));
}

TEST_CASE("simulation is deterministic per seed") {
  SimConfig a;
  a.world.duration_ms = 300000;
  SimConfig b = a;
  CHECK(simulate_corpus(a) == simulate_corpus(b));
  b.world.seed = 77;
  CHECK(!(simulate_corpus(a) == simulate_corpus(b)));
}

TEST_CASE("superfluous comments are gold NONE at the configured share") {
  SimConfig c;
  c.games = 4;
  c.profile.superfluous_rate = 0.2;
  auto corpus = simulate_corpus(c);
  std::size_t none = 0, all = 0;
  for (const auto& g : corpus.games) {
    for (const auto& [cid, eid] : *g.gold) {
      ++all;
      none += !eid;
    }
  }
  CHECK(static_cast<double>(none) / static_cast<double>(all) == doctest::Approx(0.2).epsilon(0.05));
}

TEST_CASE("gold events are in the comment's window") {
  SimConfig c;
  c.games = 1;
  auto corpus = simulate_corpus(c);
  const auto& g = corpus.games[0];
  for (const auto& [cid, eid] : *g.gold) {
    if (!eid) continue;
    auto dt = g.comments[cid].time_ms - g.events[*eid].time_ms;
    CHECK(dt >= 0);
    CHECK(dt <= c.window_ms);
  }
}

TEST_CASE("sharp profile realizes its single template") {
  auto p = sharp_profile();
  CHECK(text::join(hidden_realization(mrl::parse_mr("pass ( pink1 , pink2 )"), p)) == "pink1 passes to pink2");
  CHECK(text::join(hidden_realization(mrl::parse_mr("turnover ( pink3 , purple4 )"), p)) ==
        "purple4 takes the ball from pink3");
  CHECK(text::join(hidden_realization(mrl::parse_mr("ballstopped"), p)) == "the ball stops");
}

TEST_CASE("config keys map onto the simulation") {
  auto c = sim_config_from({{"seed", "9"}, {"games", "3"}, {"profile", "sharp"}, {"comment_prob.kick", "0.5"},
                            {"template.kick", "<1> shoots @ 2; <1> fires"}});
  CHECK(c.games == 3);
  CHECK(c.world.seed == 9);
  CHECK(c.profile.seed == mix64(9));
  CHECK(c.profile.comment_prob[mrl::index(mrl::Predicate::kKick)] == 0.5);
  REQUIRE(c.profile.lexicon[mrl::index(mrl::Predicate::kKick)].size() == 2);
  CHECK(c.profile.lexicon[mrl::index(mrl::Predicate::kKick)][0].weight == 2);
  CHECK_THROWS_AS(sim_config_from({{"bogus", "1"}}), std::invalid_argument);
  CHECK_THROWS_AS(sim_config_from({{"superfluous_rate", "1"}}), std::invalid_argument);
  CHECK_THROWS_AS(sim_config_from({{"template.kick", "<2> shoots"}}), std::invalid_argument);
  auto round = sim_config_from(to_key_values(c));
  CHECK(to_key_values(round) == to_key_values(c));
}
