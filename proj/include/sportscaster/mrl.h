// Meaning-representation language for simulated soccer events: predicates,
// constants, the 46-production grammar, and MR parsing/serialization.
//
// An MR is a single atomic formula such as `pass ( pink1 , pink2 )`. Every MR
// has exactly one derivation: the *S production for its predicate followed by
// one constant production per argument, left to right.

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sportscaster::mrl {

enum class Sort : std::uint8_t { kPlayer, kPlaymode };

enum class Predicate : std::uint8_t {
  kPlaymode,
  kBallstopped,
  kTurnover,
  kKick,
  kPass,
  kBadPass,
  kDefense,
  kSteal,
  kBlock,
};

inline constexpr std::size_t kNumPredicates = 9;
inline constexpr std::size_t kNumPlaymodes = 15;
inline constexpr std::size_t kNumPlayers = 22;
inline constexpr std::size_t kNumConstants = kNumPlaymodes + kNumPlayers;
inline constexpr std::size_t kNumProductions = kNumPredicates + kNumConstants;
inline constexpr std::size_t kNumMrs = 2018;
inline constexpr std::size_t kMaxArity = 2;

// Predicates in grammar order.
std::span<const Predicate> all_predicates();
std::size_t index(Predicate p);
std::string_view name(Predicate p);
std::span<const Sort> argument_sorts(Predicate p);
std::size_t arity(Predicate p);
std::optional<Predicate> predicate_from_name(std::string_view token);

// A terminal constant. Ids follow grammar order: the 15 playmodes, then
// pink1..pink11, purple1..purple11.
class Constant {
 public:
  constexpr Constant() = default;
  static Constant from_id(std::size_t id);
  static std::optional<Constant> from_token(std::string_view token);
  static Constant player(std::size_t i) { return from_id(kNumPlaymodes + i); }
  static Constant playmode(std::size_t i) { return from_id(i); }

  std::size_t id() const { return id_; }
  Sort sort() const { return id_ < kNumPlaymodes ? Sort::kPlaymode : Sort::kPlayer; }
  std::string_view token() const;

  auto operator<=>(const Constant&) const = default;

 private:
  std::uint8_t id_ = 0;
};

std::span<const Constant> constants_of(Sort sort);

class MalformedMrError : public std::runtime_error {
 public:
  MalformedMrError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at offset " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class MeaningRepresentation {
 public:
  // ballstopped, the only nullary MR.
  MeaningRepresentation() : predicate_(Predicate::kBallstopped) {}
  // Throws MalformedMrError on arity or sort mismatch.
  MeaningRepresentation(Predicate predicate, std::span<const Constant> args);
  MeaningRepresentation(Predicate predicate, std::initializer_list<Constant> args)
      : MeaningRepresentation(predicate, std::span<const Constant>(args.begin(), args.size())) {}

  Predicate predicate() const { return predicate_; }
  std::size_t arity() const { return mrl::arity(predicate_); }
  std::span<const Constant> args() const { return {args_.data(), arity()}; }

  // Position in enumerate_mrs() order, 0..kNumMrs-1.
  std::size_t dense_index() const;
  static MeaningRepresentation from_dense_index(std::size_t i);

  // Structural order, which is also enumerate_mrs() order.
  auto operator<=>(const MeaningRepresentation&) const = default;

 private:
  Predicate predicate_;
  std::array<Constant, kMaxArity> args_{};
};

using Mr = MeaningRepresentation;

enum class Nonterminal : std::uint8_t { kS, kPlayer, kPlaymode };

struct ProductionId {
  std::uint8_t value = 0;
  auto operator<=>(const ProductionId&) const = default;
};

struct Production {
  Nonterminal lhs;
  // Terminals and nonterminals, nonterminals spelled "*PLAYER"/"*PLAYMODE".
  std::vector<std::string> rhs;
};

std::span<const Production> all_productions();
const Production& production(ProductionId id);
ProductionId s_production(Predicate p);
ProductionId constant_production(Constant c);
bool is_constant_production(ProductionId id);
// Requires is_constant_production(id).
Constant constant_of(ProductionId id);
// "*S -> pass ( *PLAYER , *PLAYER )"
std::string to_string(ProductionId id);
std::optional<ProductionId> production_from_string(std::string_view text);

// Top-down left-most derivation, length 1 + arity.
class Derivation {
 public:
  explicit Derivation(const Mr& mr);
  std::size_t size() const { return size_; }
  const ProductionId* begin() const { return ids_.data(); }
  const ProductionId* end() const { return ids_.data() + size_; }
  ProductionId operator[](std::size_t i) const { return ids_[i]; }

 private:
  std::array<ProductionId, 1 + kMaxArity> ids_{};
  std::size_t size_ = 0;
};

Derivation derivation(const Mr& mr);

// Whitespace-tolerant; the input is NFC-normalized first.
Mr parse_mr(std::string_view text);
// Canonical "pred ( a1 , a2 )", or "pred" for arity 0.
std::string serialize_mr(const Mr& mr);

// All grammar-valid MRs in grammar order, including binary MRs whose two
// arguments coincide.
const std::vector<Mr>& enumerate_mrs();

// Order of canonical serializations; used for deterministic tie-breaking.
bool canonical_less(const Mr& a, const Mr& b);
std::size_t canonical_rank(const Mr& mr);

}  // namespace sportscaster::mrl
