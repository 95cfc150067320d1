#include <doctest.h>

#include <stdexcept>

#include "sportscaster/prng.h"
#include "sportscaster/text.h"

using namespace sportscaster;

TEST_CASE("splitmix64 reference outputs") {
  Prng p(0);
  CHECK(p.next() == 0xE220A8397B1DCDAFull);
  CHECK(p.next() == 0x6E789E6AA1B965F4ull);
  CHECK(p.next() == 0x06C45D188009454Full);
}

TEST_CASE("uniform draws lie in [0,1) with mean near one half") {
  Prng p(42);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = p.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("weighted draws follow the weights and skip zeros") {
  Prng p(7);
  std::vector<double> w = {1, 0, 3};
  std::array<int, 3> hits{};
  for (int i = 0; i < 40000; ++i) ++hits[p.weighted(w)];
  CHECK(hits[1] == 0);
  CHECK(hits[2] / 40000.0 == doctest::Approx(0.75).epsilon(0.02));
  CHECK_THROWS(p.weighted(std::vector<double>{0, 0}));
}

TEST_CASE("same seed, same stream") {
  Prng a(99), b(99);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("tokenizer normalizes and lowercases English") {
  CHECK(text::tokenize("  Pink1  PASSES\tto pink2 ", "en") == std::vector<std::string>{"pink1", "passes", "to", "pink2"});
  // e + combining acute composes to a single code point
  CHECK(text::tokenize("Cafe\xCC\x81", "en") == std::vector<std::string>{"caf\xC3\xA9"});
  CHECK(text::tokenize("Pink1 A", "ko") == std::vector<std::string>{"Pink1", "A"});
}

TEST_CASE("key value parsing") {
  auto kv = text::parse_key_values("# top\nseed = 4\n\ngames=2 # trailing\nseed=5\n");
  CHECK(kv.at("seed") == "5");
  CHECK(kv.at("games") == "2");
  CHECK_THROWS_AS(text::parse_key_values("novalue\n"), std::invalid_argument);
}

TEST_CASE("reals print with 12 significant digits") {
  CHECK(text::format_real(1.0 / 3.0) == "0.333333333333");
  CHECK(text::format_real(2.0) == "2");
}
