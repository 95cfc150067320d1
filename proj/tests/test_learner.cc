#include <doctest.h>

#include <sstream>

#include "fixtures.h"
#include "sportscaster/learner.h"
#include "sportscaster/simgen.h"

using namespace sportscaster;
using namespace sportscaster::learner;

namespace {

corpus::TrainingSet small_set(const std::string& profile, std::uint64_t seed, std::size_t games = 2) {
  simgen::SimConfig cfg = simgen::sim_config_from({{"profile", profile}, {"seed", std::to_string(seed)}});
  cfg.games = games;
  cfg.world.duration_ms = 1'200'000;
  return corpus::build_training_set(simgen::simulate_corpus(cfg));
}

}  // namespace

TEST_CASE("strategy names") {
  for (auto k : {StrategyKind::kRandom, StrategyKind::kParseScore, StrategyKind::kNistGen, StrategyKind::kMeteorGen,
                 StrategyKind::kNistIgsl, StrategyKind::kMeteorIgsl, StrategyKind::kGold})
    CHECK(strategy_from_name(name(k)) == k);
  CHECK(!strategy_from_name("wasp"));
  CHECK(uses_igsl(StrategyKind::kMeteorIgsl));
  CHECK(!uses_igsl(StrategyKind::kNistGen));
}

TEST_CASE("initial training set is the Cartesian product of sentence and candidates") {
  auto data = small_set("sharp", 5, 1);
  auto pairs = initial_training_set(data.examples);
  std::size_t expected = 0;
  for (const auto& ex : data.examples) expected += ex.candidates.size();
  CHECK(pairs.size() == expected);
}

TEST_CASE("unambiguous data fixes the matching at the first iteration") {
  simgen::SimConfig cfg;
  cfg.games = 1;
  cfg.world.min_event_gap_ms = 5001;
  cfg.world.mean_event_gap_ms = 8000;
  cfg.world.duration_ms = 2'000'000;
  auto data = corpus::build_training_set(simgen::simulate_corpus(cfg));
  for (const auto& ex : data.examples) REQUIRE(ex.candidates.size() == 1);
  auto r = retrain_loop(data, {StrategyKind::kParseScore});
  CHECK(r.iterations_run == 2);
  for (auto c : r.matching.choice) CHECK(c == std::optional<std::size_t>(0));
  std::size_t real = 0;
  for (const auto& g : data.gold) real += g.has_value();
  auto rep = matching_report(data, r.matching);
  CHECK(*rep.precision == doctest::Approx(static_cast<double>(real) / data.examples.size()).epsilon(1e-12));
  CHECK(*rep.recall == doctest::Approx(1.0));
}

TEST_CASE("retraining is deterministic") {
  auto data = small_set("default", 8);
  auto a = retrain_loop(data, {StrategyKind::kNistIgsl});
  auto b = retrain_loop(data, {StrategyKind::kNistIgsl});
  CHECK(a.matching.choice == b.matching.choice);
  CHECK(a.matching.score == b.matching.score);
  CHECK(a.iterations_run == b.iterations_run);
}

TEST_CASE("generation-scored disambiguation beats random on a sharp corpus") {
  auto data = small_set("sharp", 21);
  ScoringStrategy random{StrategyKind::kRandom, 21};
  double f_random = *matching_report(data, retrain_loop(data, random).matching).f1;
  double f_gen = *matching_report(data, retrain_loop(data, {StrategyKind::kNistGen}).matching).f1;
  CHECK(f_gen >= f_random + 0.15);
}

TEST_CASE("IGSL strategies need a strategic model for direct scoring") {
  auto m = translator::train(fixtures::sharp_pairs());
  CHECK_THROWS_AS(evaluate_candidate(fixtures::toks("pink1 shoots"), fixtures::mr("kick ( pink1 )"), m,
                                     {StrategyKind::kNistIgsl}),
                  MissingStrategicModel);
  strategic::StrategicModel s;
  s.prob[mrl::index(mrl::Predicate::kKick)] = 0.5;
  double full = evaluate_candidate(fixtures::toks("pink1 shoots"), fixtures::mr("kick ( pink1 )"), m,
                                   {StrategyKind::kNistGen});
  double half = evaluate_candidate(fixtures::toks("pink1 shoots"), fixtures::mr("kick ( pink1 )"), m,
                                   {StrategyKind::kNistIgsl}, &s);
  CHECK(half == doctest::Approx(full * 0.5).epsilon(1e-12));
  // no template means a zero score
  CHECK(evaluate_candidate(fixtures::toks("pink1 steals"), fixtures::mr("steal ( pink1 )"), m,
                           {StrategyKind::kNistGen}) == 0.0);
}

TEST_CASE("pruning keeps the top fraction") {
  auto data = small_set("default", 4);
  LoopOptions o;
  o.prune_fraction = 0.2;
  auto r = retrain_loop(data, {StrategyKind::kParseScore}, o);
  std::size_t dropped = 0;
  for (bool k : r.matching.kept) dropped += !k;
  CHECK(dropped == static_cast<std::size_t>(0.2 * data.examples.size()));
  double max_dropped = 0, min_kept = 1e300;
  for (std::size_t i = 0; i < r.matching.kept.size(); ++i) {
    if (r.matching.kept[i]) min_kept = std::min(min_kept, r.matching.score[i]);
    else max_dropped = std::max(max_dropped, r.matching.score[i]);
  }
  CHECK(max_dropped <= min_kept);
  o.prune_fraction = 1.0;
  CHECK_THROWS_AS(retrain_loop(data, {StrategyKind::kParseScore}, o), std::invalid_argument);
}

TEST_CASE("external alignments: accepted, skipped and malformed lines") {
  auto data = small_set("sharp", 6, 1);
  const auto& ex = data.examples.at(0);
  std::ostringstream s;
  s << ex.game << '\t' << ex.comment.id << '\t' << mrl::serialize_mr(ex.candidates[0].mr) << '\n';
  s << "nogame\t0\tballstopped\n";
  s << ex.game << '\t' << ex.comment.id << "\tkick ( purple11 )\n";
  std::istringstream in(s.str());
  auto ext = init_from_external(data, in, "mem");
  CHECK(ext.accepted == 1);
  CHECK(ext.warnings >= 1);
  CHECK(ext.choice[0] == std::optional<std::size_t>(0));
  std::istringstream bad("g\tx\tballstopped\n");
  CHECK_THROWS_AS(init_from_external(data, bad, "bad"), corpus::FormatError);
  std::istringstream badmr("g\t1\tpass ( pink1 )\n");
  CHECK_THROWS_AS(init_from_external(data, badmr, "bad"), corpus::FormatError);
}

TEST_CASE("validation split holds out about a fifth of the comments") {
  std::size_t held = 0;
  for (std::size_t i = 0; i < 10000; ++i) held += in_validation_split("game1", i);
  CHECK(held / 10000.0 == doctest::Approx(0.2).epsilon(0.05));
  CHECK(in_validation_split("game2", 17) == in_validation_split("game2", 17));
}

TEST_CASE("gold strategy trains on the gold pairs") {
  auto data = small_set("sharp", 9);
  auto r = retrain_loop(data, {StrategyKind::kGold});
  auto rep = matching_report(data, r.matching);
  for (std::size_t i = 0; i < data.examples.size(); ++i)
    if (data.gold[i]) CHECK(r.matching.choice[i] == data.gold[i]);
  CHECK(*rep.recall == doctest::Approx(1.0));
}
