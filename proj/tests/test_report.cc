#include <doctest.h>

#include <json.hpp>

#include "sportscaster/report.h"
#include "sportscaster/text.h"

using namespace sportscaster;

TEST_CASE("reports render deterministically as TSV and JSON lines") {
  std::vector<metrics::EvalReport> rs(2);
  rs[0].task = "matching";
  rs[0].count = 10;
  rs[0].precision = 0.5;
  rs[0].recall = 1.0 / 3;
  rs[0].f1 = 0.4;
  rs[1].task = "generation";
  rs[1].split = "test";
  rs[1].count = 4;
  rs[1].bleu = 0.25;
  rs[1].nist = 3.5;
  std::string tsv = report::render(rs, report::Format::kTsv);
  CHECK(tsv == std::string(report::kTsvHeader) +
                   "\nmatching\tall\t10\t0.5\t0.333333333333\t0.4\tNA\tNA\ngeneration\ttest\t4\tNA\tNA\tNA\t0.25\t3.5\n");
  CHECK(report::render(rs, report::Format::kTsv) == tsv);
  std::string js = report::render(rs, report::Format::kJson);
  auto lines = text::split(js, '\n');
  REQUIRE(lines.size() == 3);
  CHECK(lines[2].empty());
  auto first = nlohmann::json::parse(lines[0]);
  CHECK(first["task"] == "matching");
  CHECK(first["recall"].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-11));
  CHECK(first["bleu"].is_null());
  auto second = nlohmann::json::parse(lines[1]);
  CHECK(second["nist"].get<double>() == 3.5);
}
