#include "sportscaster/phrase_template.h"

#include <stdexcept>

#include "sportscaster/text.h"

namespace sportscaster {

namespace {

std::size_t slot_number(std::string_view tok) {
  if (tok.size() < 3 || tok.front() != '<' || tok.back() != '>') return 0;
  std::size_t v = 0;
  for (char c : tok.substr(1, tok.size() - 2)) {
    if (c < '0' || c > '9') return 0;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

}  // namespace

std::string template_to_string(const PhraseTemplate& t) {
  std::string out;
  for (const TemplateItem& item : t) {
    if (!out.empty()) out += ' ';
    out += item.is_slot() ? "<" + std::to_string(item.slot) + ">" : item.word;
  }
  return out;
}

PhraseTemplate template_from_string(std::string_view text) {
  PhraseTemplate t;
  for (std::string& tok : text::split_whitespace(text)) {
    std::size_t slot = slot_number(tok);
    if (slot) t.push_back({"", slot});
    else t.push_back({std::move(tok), 0});
  }
  return t;
}

std::size_t slot_count(const PhraseTemplate& t) {
  std::size_t n = 0;
  for (const TemplateItem& item : t) n += item.is_slot();
  return n;
}

std::vector<std::string> instantiate(const PhraseTemplate& t, const std::vector<std::vector<std::string>>& fillers) {
  std::vector<std::string> out;
  for (const TemplateItem& item : t) {
    if (!item.is_slot()) {
      out.push_back(item.word);
      continue;
    }
    if (item.slot > fillers.size()) throw std::out_of_range("template slot without filler");
    const auto& f = fillers[item.slot - 1];
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

}  // namespace sportscaster
