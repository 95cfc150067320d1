#pragma once

#include <string>
#include <vector>

#include "sportscaster/alignment.h"
#include "sportscaster/mrl.h"
#include "sportscaster/text.h"

namespace fixtures {

inline std::vector<std::string> toks(const std::string& s) { return sportscaster::text::split_whitespace(s); }
inline sportscaster::mrl::Mr mr(const std::string& s) { return sportscaster::mrl::parse_mr(s); }

// One template per predicate, no synonyms, four players per team.
inline std::vector<sportscaster::translator::TrainingPair> sharp_pairs() {
  std::vector<std::string> players = {"pink1", "pink2", "pink3", "pink4", "purple1", "purple2", "purple3", "purple4"};
  std::vector<sportscaster::translator::TrainingPair> out;
  for (const auto& a : players) {
    out.push_back({toks(a + " shoots"), mr("kick ( " + a + " )")});
    for (const auto& b : players) {
      if (a == b) continue;
      out.push_back({toks(a + " kicks to " + b), mr("pass ( " + a + " , " + b + " )")});
      out.push_back({toks(b + " takes the ball from " + a), mr("turnover ( " + a + " , " + b + " )")});
    }
  }
  for (int i = 0; i < 4; ++i) out.push_back({toks("the ball stops"), mr("ballstopped")});
  return out;
}

}  // namespace fixtures
