#include "sportscaster/mrl.h"

#include <algorithm>
#include <numeric>

#include "sportscaster/text.h"

namespace sportscaster::mrl {

namespace {

constexpr std::array<Predicate, kNumPredicates> kPredicates = {
    Predicate::kPlaymode, Predicate::kBallstopped, Predicate::kTurnover,
    Predicate::kKick,     Predicate::kPass,        Predicate::kBadPass,
    Predicate::kDefense,  Predicate::kSteal,       Predicate::kBlock,
};

constexpr std::array<std::string_view, kNumPredicates> kPredicateNames = {
    "playmode", "ballstopped", "turnover", "kick", "pass", "badPass", "defense", "steal", "block",
};

constexpr std::array<Sort, 1> kOnePlaymode = {Sort::kPlaymode};
constexpr std::array<Sort, 1> kOnePlayer = {Sort::kPlayer};
constexpr std::array<Sort, 2> kTwoPlayers = {Sort::kPlayer, Sort::kPlayer};

constexpr std::array<std::string_view, kNumConstants> kConstantTokens = {
    "kick_off_l", "kick_off_r", "kick_in_l", "kick_in_r", "play_on",
    "offside_l", "offside_r", "free_kick_l", "free_kick_r", "corner_kick_l",
    "corner_kick_r", "goal_kick_l", "goal_kick_r", "goal_l", "goal_r",
    "pink1", "pink2", "pink3", "pink4", "pink5", "pink6", "pink7", "pink8",
    "pink9", "pink10", "pink11",
    "purple1", "purple2", "purple3", "purple4", "purple5", "purple6", "purple7",
    "purple8", "purple9", "purple10", "purple11",
};

// Number of MRs preceding each predicate in enumeration order.
constexpr std::array<std::size_t, kNumPredicates> kDenseOffset = [] {
  std::array<std::size_t, kNumPredicates> off{};
  std::size_t acc = 0;
  for (std::size_t i = 0; i < kNumPredicates; ++i) {
    off[i] = acc;
    switch (kPredicates[i]) {
      case Predicate::kPlaymode: acc += kNumPlaymodes; break;
      case Predicate::kBallstopped: acc += 1; break;
      case Predicate::kKick:
      case Predicate::kSteal:
      case Predicate::kBlock: acc += kNumPlayers; break;
      default: acc += kNumPlayers * kNumPlayers; break;
    }
  }
  return off;
}();

std::vector<Production> build_productions() {
  std::vector<Production> out;
  out.reserve(kNumProductions);
  for (Predicate p : kPredicates) {
    Production prod{Nonterminal::kS, {std::string(name(p))}};
    auto sorts = argument_sorts(p);
    if (!sorts.empty()) {
      prod.rhs.emplace_back("(");
      for (std::size_t i = 0; i < sorts.size(); ++i) {
        if (i) prod.rhs.emplace_back(",");
        prod.rhs.emplace_back(sorts[i] == Sort::kPlayer ? "*PLAYER" : "*PLAYMODE");
      }
      prod.rhs.emplace_back(")");
    }
    out.push_back(std::move(prod));
  }
  for (std::size_t c = 0; c < kNumConstants; ++c) {
    Nonterminal lhs = c < kNumPlaymodes ? Nonterminal::kPlaymode : Nonterminal::kPlayer;
    out.push_back(Production{lhs, {std::string(kConstantTokens[c])}});
  }
  return out;
}

std::string_view lhs_name(Nonterminal n) {
  switch (n) {
    case Nonterminal::kS: return "*S";
    case Nonterminal::kPlayer: return "*PLAYER";
    case Nonterminal::kPlaymode: return "*PLAYMODE";
  }
  return "";
}

// Tokens of the MR surface syntax.
struct Lexeme {
  enum Kind { kIdent, kOpen, kClose, kComma, kEnd } kind;
  std::string_view text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Lexeme next() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\n' || s_[i_] == '\r')) ++i_;
    if (i_ >= s_.size()) return {Lexeme::kEnd, {}, i_};
    std::size_t start = i_;
    char c = s_[i_];
    if (c == '(') return ++i_, Lexeme{Lexeme::kOpen, s_.substr(start, 1), start};
    if (c == ')') return ++i_, Lexeme{Lexeme::kClose, s_.substr(start, 1), start};
    if (c == ',') return ++i_, Lexeme{Lexeme::kComma, s_.substr(start, 1), start};
    while (i_ < s_.size() && is_ident_char(s_[i_])) ++i_;
    if (i_ == start) throw MalformedMrError(std::string("unexpected character '") + c + "'", start);
    return {Lexeme::kIdent, s_.substr(start, i_ - start), start};
  }

 private:
  static bool is_ident_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  }
  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

std::span<const Predicate> all_predicates() { return kPredicates; }

std::size_t index(Predicate p) { return static_cast<std::size_t>(p); }

std::string_view name(Predicate p) { return kPredicateNames[index(p)]; }

std::span<const Sort> argument_sorts(Predicate p) {
  switch (p) {
    case Predicate::kPlaymode: return kOnePlaymode;
    case Predicate::kBallstopped: return {};
    case Predicate::kKick:
    case Predicate::kSteal:
    case Predicate::kBlock: return kOnePlayer;
    default: return kTwoPlayers;
  }
}

std::size_t arity(Predicate p) { return argument_sorts(p).size(); }

std::optional<Predicate> predicate_from_name(std::string_view token) {
  for (std::size_t i = 0; i < kNumPredicates; ++i)
    if (kPredicateNames[i] == token) return kPredicates[i];
  return std::nullopt;
}

Constant Constant::from_id(std::size_t id) {
  if (id >= kNumConstants) throw std::out_of_range("constant id out of range");
  Constant c;
  c.id_ = static_cast<std::uint8_t>(id);
  return c;
}

std::optional<Constant> Constant::from_token(std::string_view token) {
  for (std::size_t i = 0; i < kNumConstants; ++i)
    if (kConstantTokens[i] == token) return from_id(i);
  return std::nullopt;
}

std::string_view Constant::token() const { return kConstantTokens[id_]; }

std::span<const Constant> constants_of(Sort sort) {
  static const std::array<Constant, kNumConstants> all = [] {
    std::array<Constant, kNumConstants> a{};
    for (std::size_t i = 0; i < kNumConstants; ++i) a[i] = Constant::from_id(i);
    return a;
  }();
  if (sort == Sort::kPlaymode) return std::span<const Constant>(all).subspan(0, kNumPlaymodes);
  return std::span<const Constant>(all).subspan(kNumPlaymodes, kNumPlayers);
}

MeaningRepresentation::MeaningRepresentation(Predicate predicate, std::span<const Constant> args)
    : predicate_(predicate) {
  auto sorts = argument_sorts(predicate);
  if (args.size() != sorts.size())
    throw MalformedMrError(std::string(name(predicate)) + " expects " + std::to_string(sorts.size()) +
                               " argument(s), got " + std::to_string(args.size()),
                           0);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].sort() != sorts[i])
      throw MalformedMrError("argument " + std::to_string(i + 1) + " of " + std::string(name(predicate)) +
                                 " has the wrong sort: " + std::string(args[i].token()),
                             0);
    args_[i] = args[i];
  }
}

std::size_t MeaningRepresentation::dense_index() const {
  std::size_t base = kDenseOffset[index(predicate_)];
  switch (arity()) {
    case 0: return base;
    case 1:
      return base + (args_[0].sort() == Sort::kPlaymode ? args_[0].id() : args_[0].id() - kNumPlaymodes);
    default:
      return base + (args_[0].id() - kNumPlaymodes) * kNumPlayers + (args_[1].id() - kNumPlaymodes);
  }
}

MeaningRepresentation MeaningRepresentation::from_dense_index(std::size_t i) {
  return enumerate_mrs().at(i);
}

std::span<const Production> all_productions() {
  static const std::vector<Production> prods = build_productions();
  return prods;
}

const Production& production(ProductionId id) { return all_productions()[id.value]; }

ProductionId s_production(Predicate p) { return ProductionId{static_cast<std::uint8_t>(index(p))}; }

ProductionId constant_production(Constant c) {
  return ProductionId{static_cast<std::uint8_t>(kNumPredicates + c.id())};
}

bool is_constant_production(ProductionId id) { return id.value >= kNumPredicates && id.value < kNumProductions; }

Constant constant_of(ProductionId id) { return Constant::from_id(id.value - kNumPredicates); }

std::string to_string(ProductionId id) {
  const Production& p = production(id);
  return std::string(lhs_name(p.lhs)) + " -> " + text::join(p.rhs);
}

std::optional<ProductionId> production_from_string(std::string_view s) {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < kNumProductions; ++i) v.push_back(to_string(ProductionId{static_cast<std::uint8_t>(i)}));
    return v;
  }();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == s) return ProductionId{static_cast<std::uint8_t>(i)};
  return std::nullopt;
}

Derivation::Derivation(const Mr& mr) {
  ids_[0] = s_production(mr.predicate());
  size_ = 1;
  for (Constant c : mr.args()) ids_[size_++] = constant_production(c);
}

Derivation derivation(const Mr& mr) { return Derivation(mr); }

Mr parse_mr(std::string_view input) {
  std::string normalized = text::normalize_nfc(input);
  Lexer lex(normalized);
  Lexeme head = lex.next();
  if (head.kind != Lexeme::kIdent) throw MalformedMrError("expected a predicate name", head.pos);
  auto pred = predicate_from_name(head.text);
  if (!pred) throw MalformedMrError("unknown predicate '" + std::string(head.text) + "'", head.pos);
  auto sorts = argument_sorts(*pred);

  std::array<Constant, kMaxArity> args{};
  std::size_t n = 0;
  Lexeme tok = lex.next();
  if (tok.kind == Lexeme::kOpen) {
    while (true) {
      Lexeme arg = lex.next();
      if (arg.kind != Lexeme::kIdent) throw MalformedMrError("expected a constant", arg.pos);
      auto c = Constant::from_token(arg.text);
      if (!c) throw MalformedMrError("unknown constant '" + std::string(arg.text) + "'", arg.pos);
      if (n >= sorts.size())
        throw MalformedMrError(std::string(name(*pred)) + " takes " + std::to_string(sorts.size()) + " argument(s)",
                               arg.pos);
      if (c->sort() != sorts[n])
        throw MalformedMrError("constant '" + std::string(arg.text) + "' has the wrong sort for " +
                                   std::string(name(*pred)),
                               arg.pos);
      args[n++] = *c;
      Lexeme sep = lex.next();
      if (sep.kind == Lexeme::kClose) break;
      if (sep.kind != Lexeme::kComma) throw MalformedMrError("expected ',' or ')'", sep.pos);
    }
    tok = lex.next();
  }
  if (n != sorts.size())
    throw MalformedMrError(std::string(name(*pred)) + " expects " + std::to_string(sorts.size()) + " argument(s)",
                           head.pos);
  if (tok.kind != Lexeme::kEnd) throw MalformedMrError("trailing input", tok.pos);
  return Mr(*pred, std::span<const Constant>(args.data(), n));
}

std::string serialize_mr(const Mr& mr) {
  std::string out(name(mr.predicate()));
  auto args = mr.args();
  if (args.empty()) return out;
  out += " (";
  for (std::size_t i = 0; i < args.size(); ++i) {
    out += i ? " , " : " ";
    out += args[i].token();
  }
  out += " )";
  return out;
}

const std::vector<Mr>& enumerate_mrs() {
  static const std::vector<Mr> all = [] {
    std::vector<Mr> v;
    v.reserve(kNumMrs);
    for (Predicate p : kPredicates) {
      auto sorts = argument_sorts(p);
      if (sorts.empty()) {
        v.emplace_back(p, std::span<const Constant>{});
      } else if (sorts.size() == 1) {
        for (Constant c : constants_of(sorts[0])) v.emplace_back(p, std::initializer_list<Constant>{c});
      } else {
        for (Constant a : constants_of(sorts[0]))
          for (Constant b : constants_of(sorts[1])) v.emplace_back(p, std::initializer_list<Constant>{a, b});
      }
    }
    return v;
  }();
  return all;
}

std::size_t canonical_rank(const Mr& mr) {
  static const std::vector<std::size_t> rank = [] {
    const auto& all = enumerate_mrs();
    std::vector<std::string> text(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) text[i] = serialize_mr(all[i]);
    std::vector<std::size_t> order(all.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return text[a] < text[b]; });
    std::vector<std::size_t> r(all.size());
    for (std::size_t i = 0; i < order.size(); ++i) r[order[i]] = i;
    return r;
  }();
  return rank[mr.dense_index()];
}

bool canonical_less(const Mr& a, const Mr& b) { return canonical_rank(a) < canonical_rank(b); }

}  // namespace sportscaster::mrl
