#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "endspace/ordinal.hpp"
#include "endspace/stream.hpp"

namespace endspace {

struct Token;
struct HighRay;

/// Finite node address: a token sequence decoded by the owning tree.
using Addr = std::vector<Token>;
using AddrView = std::span<const Token>;

enum class TokenKind {
  Child,  // index = child number
  Pos,    // pos = position in a chain
  Top,    // ray = branch descriptor, index = copy
  Scion,  // index = scion copy above the preceding top
  Split,  // node = split limit, set = its neighbourhood class (split trees only)
};

struct Token {
  TokenKind kind = TokenKind::Child;
  std::uint64_t index = 0;
  Ordinal pos;
  std::shared_ptr<const HighRay> ray;
  std::shared_ptr<const Addr> node;
  std::shared_ptr<const std::vector<Addr>> set;

  static Token child(std::uint64_t i);
  static Token at(Ordinal p);
  static Token top(HighRay desc, std::uint64_t copy);
  static Token top(std::shared_ptr<const HighRay> desc, std::uint64_t copy);
  static Token scion(std::uint64_t j);
  static Token split(Addr limit, std::vector<Addr> cls);

  bool operator==(const Token& o) const;
};

/// Canonical high-ray: routing tokens into a component, then a tail that is
/// either a limit position of a chain or a selector stream of an InfTree.
struct HighRay {
  std::vector<Token> route;
  std::variant<Ordinal, Stream> tail;

  bool operator==(const HighRay& o) const;
};

std::string to_string(const Token& t);
std::string to_string(AddrView a);
inline std::string to_string(const Addr& a) { return to_string(AddrView(a)); }
std::string to_string(const HighRay& r);

Addr concat(const Addr& a, AddrView b);

/// Total order on serialized form; used for canonical sorting.
struct AddrLess {
  bool operator()(const Addr& a, const Addr& b) const { return to_string(a) < to_string(b); }
};

}  // namespace endspace
