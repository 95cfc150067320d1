#include <doctest.h>

#include <cmath>

#include "fixtures.h"
#include "sportscaster/metrics.h"

using namespace sportscaster;
using namespace sportscaster::metrics;
using fixtures::toks;

TEST_CASE("BLEU hand-computed fixture") {
  std::vector<Segment> segs = {{toks("a b c d e"), {toks("a b c d f")}}};
  double expected = std::pow(4.0 / 5 * 3.0 / 4 * 2.0 / 3 * 1.0 / 2, 0.25);
  CHECK(std::abs(bleu_document(segs) - expected) < 1e-6);
  CHECK(std::abs(bleu_document(segs) - 0.668740) < 1e-6);
}

TEST_CASE("BLEU identity, disjoint and empty references") {
  std::vector<Segment> same = {{toks("a b c d"), {toks("a b c d")}}, {toks("x y z w v"), {toks("x y z w v")}}};
  CHECK(bleu_document(same) == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<Segment> disjoint = {{toks("a b c d"), {toks("e f g h")}}};
  CHECK(bleu_document(disjoint) == 0.0);
  std::vector<Segment> none = {{toks("a"), {}}};
  CHECK_THROWS_AS(bleu_document(none), EmptyReferences);
}

TEST_CASE("BLEU uses the closest reference length") {
  // 4-token candidate; refs of length 3 and 6 -> closest is 3, no penalty
  std::vector<Segment> segs = {{toks("a b c d"), {toks("a b c"), toks("a b c d e f")}}};
  double p = (4.0 / 4) * (3.0 / 3) * (2.0 / 2) * (1.0 / 1);
  CHECK(bleu_document(segs) == doctest::Approx(std::pow(p, 0.25)).epsilon(1e-12));
  // candidate shorter than its only reference
  std::vector<Segment> shortc = {{toks("a b c d"), {toks("a b c d e f g h")}}};
  CHECK(bleu_document(shortc) == doctest::Approx(std::exp(1 - 8.0 / 4)).epsilon(1e-12));
}

TEST_CASE("NIST fixtures") {
  CHECK(std::abs(nist(toks("a b c"), toks("a b d")) - (2.0 / 3 + 1.0 / 2)) < 1e-6);
  CHECK(std::abs(nist(toks("a b c"), toks("a b d")) - 1.166667) < 1e-6);
  CHECK(nist(toks("a b c d e"), toks("a b c d e")) == doctest::Approx(5.0).epsilon(1e-12));
  double full = nist(toks("a b c"), toks("a b c"));
  double shortc = nist(toks("a b"), toks("a b c"));
  CHECK(shortc < full);
  // brevity factor is one half at c/r = 2/3
  double beta = std::log(0.5) / std::pow(std::log(2.0 / 3), 2);
  CHECK(shortc == doctest::Approx((1.0 + 1.0) * std::exp(beta * std::pow(std::log(2.0 / 3), 2))).epsilon(1e-12));
  CHECK(std::exp(beta * std::pow(std::log(2.0 / 3), 2)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("BLEU is zero where NIST still sees partial matches") {
  std::vector<Segment> segs = {{toks("pink3 passes to pink5"), {toks("pink3 kicks to pink5")}}};
  CHECK(bleu_document(segs) == 0.0);
  CHECK(nist(toks("pink3 passes to pink5"), toks("pink3 kicks to pink5")) > 0.0);
}

TEST_CASE("METEOR fixtures") {
  auto al = meteor_alignment(toks("c d a b"), toks("a b c d"));
  CHECK(al.matches == 4);
  CHECK(al.chunks == 2);
  CHECK(std::abs(meteor(toks("c d a b"), toks("a b c d")) - 0.9375) < 1e-6);
  for (std::size_t len = 1; len <= 6; ++len) {
    std::vector<std::string> s;
    for (std::size_t i = 0; i < len; ++i) s.push_back("w" + std::to_string(i));
    double expected = 1 - 0.5 / std::pow(static_cast<double>(len), 3);
    CHECK(std::abs(meteor(s, s) - expected) < 1e-6);
  }
  CHECK(std::abs(meteor(toks("a b c d"), toks("a b c d")) - 0.9921875) < 1e-6);
  CHECK(meteor(toks("a b"), toks("c d")) == 0.0);
}

TEST_CASE("METEOR prefers fewer chunks among maximal alignments") {
  // "a" occurs twice in the reference; aligning to the second keeps one chunk
  auto al = meteor_alignment(toks("a b"), toks("a x a b"));
  CHECK(al.matches == 2);
  CHECK(al.chunks == 1);
  // Fmean weights recall: P = 1, R = 0.5
  double fmean = 10 * 1.0 * 0.5 / (0.5 + 9 * 1.0);
  CHECK(meteor(toks("a b"), toks("a x a b")) == doctest::Approx(fmean * (1 - 0.5 * std::pow(0.5, 3))).epsilon(1e-12));
}

TEST_CASE("matching F1 fixtures") {
  GoldMatching gold;
  PredictedMatching pred;
  for (std::size_t i = 0; i < 100; ++i) {
    bool superfluous = i < 18;
    gold[{"g", i}] = superfluous ? std::nullopt : std::optional<std::size_t>(i);
    pred[{"g", i}] = i;
  }
  auto r = matching_f1(pred, gold);
  CHECK(*r.precision == doctest::Approx(0.82).epsilon(1e-12));
  CHECK(*r.recall == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(*r.f1 - 2 * 0.82 / 1.82) < 1e-12);
  CHECK(std::abs(*r.f1 - 0.901099) < 1e-6);

  PredictedMatching same;
  for (const auto& [k, v] : gold)
    if (v) same[k] = *v;
  CHECK(*matching_f1(same, gold).f1 == doctest::Approx(1.0));
  CHECK(*matching_f1({}, gold).f1 == 0.0);
}

TEST_CASE("parsing F1 fixtures") {
  GoldMrs gold;
  Parses parses;
  auto right = fixtures::mr("pass ( pink1 , pink2 )");
  auto wrong = fixtures::mr("pass ( pink1 , pink3 )");
  for (std::size_t i = 0; i < 12; ++i) {
    gold[{"g", i}] = right;
    if (i < 8) parses[{"g", i}] = right;
    else if (i < 10) parses[{"g", i}] = wrong;
    else parses[{"g", i}] = std::nullopt;
  }
  auto r = parsing_f1(parses, gold);
  CHECK(*r.precision == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(*r.recall == doctest::Approx(8.0 / 12).epsilon(1e-12));
  CHECK(std::abs(*r.f1 - 0.727) < 5e-4);
}

TEST_CASE("F1 of zero precision and recall is zero") { CHECK(f1_score(0, 0) == 0.0); }
