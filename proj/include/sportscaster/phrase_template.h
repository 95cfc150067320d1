// Word sequences with numbered argument slots, e.g. "<2> takes the ball from
// <1>". Slot j is filled with the realization of the MR's j-th argument.

#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sportscaster {

struct TemplateItem {
  std::string word;
  // 1-based argument position; 0 for a literal word.
  std::size_t slot = 0;

  bool is_slot() const { return slot > 0; }
  auto operator<=>(const TemplateItem&) const = default;
};

using PhraseTemplate = std::vector<TemplateItem>;

// Slots print as <j>.
std::string template_to_string(const PhraseTemplate& t);
// Whitespace-separated; tokens of the form <digits> become slots.
PhraseTemplate template_from_string(std::string_view text);
std::size_t slot_count(const PhraseTemplate& t);

// Substitutes fillers[j-1] for slot j. Throws std::out_of_range on a missing filler.
std::vector<std::string> instantiate(const PhraseTemplate& t, const std::vector<std::vector<std::string>>& fillers);

}  // namespace sportscaster
