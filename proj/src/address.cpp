#include "endspace/address.hpp"

#include <algorithm>

namespace endspace {

namespace {

std::string compact(const Ordinal& o) {
  std::string s = o.to_string();
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  return s;
}

}  // namespace

Token Token::child(std::uint64_t i) {
  Token t;
  t.kind = TokenKind::Child;
  t.index = i;
  return t;
}

Token Token::at(Ordinal p) {
  Token t;
  t.kind = TokenKind::Pos;
  t.pos = std::move(p);
  return t;
}

Token Token::top(HighRay desc, std::uint64_t copy) {
  return top(std::make_shared<const HighRay>(std::move(desc)), copy);
}

Token Token::top(std::shared_ptr<const HighRay> desc, std::uint64_t copy) {
  Token t;
  t.kind = TokenKind::Top;
  t.ray = std::move(desc);
  t.index = copy;
  return t;
}

Token Token::scion(std::uint64_t j) {
  Token t;
  t.kind = TokenKind::Scion;
  t.index = j;
  return t;
}

Token Token::split(Addr limit, std::vector<Addr> cls) {
  std::sort(cls.begin(), cls.end(), AddrLess{});
  Token t;
  t.kind = TokenKind::Split;
  t.node = std::make_shared<const Addr>(std::move(limit));
  t.set = std::make_shared<const std::vector<Addr>>(std::move(cls));
  return t;
}

bool Token::operator==(const Token& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case TokenKind::Child:
    case TokenKind::Scion: return index == o.index;
    case TokenKind::Pos: return pos == o.pos;
    case TokenKind::Top: return index == o.index && (ray == o.ray || *ray == *o.ray);
    case TokenKind::Split: return *node == *o.node && *set == *o.set;
  }
  return false;
}

bool HighRay::operator==(const HighRay& o) const {
  return route == o.route && tail == o.tail;
}

std::string to_string(const Token& t) {
  switch (t.kind) {
    case TokenKind::Child: return std::to_string(t.index);
    case TokenKind::Pos: return "@" + compact(t.pos);
    case TokenKind::Top: return "T{" + to_string(*t.ray) + "}#" + std::to_string(t.index);
    case TokenKind::Scion: return "S" + std::to_string(t.index);
    case TokenKind::Split: {
      std::string s = "V{" + to_string(*t.node) + "|";
      for (std::size_t i = 0; i < t.set->size(); ++i) s += (i ? "," : "") + to_string((*t.set)[i]);
      return s + "}";
    }
  }
  return "?";
}

std::string to_string(AddrView a) {
  if (a.empty()) return ".";
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += '.';
    s += to_string(a[i]);
  }
  return s;
}

std::string to_string(const HighRay& r) {
  std::string s;
  for (const Token& t : r.route) s += to_string(t) + ".";
  if (const auto* o = std::get_if<Ordinal>(&r.tail)) return s + "@" + compact(*o);
  return s + std::get<Stream>(r.tail).to_string();
}

Addr concat(const Addr& a, AddrView b) {
  Addr out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace endspace
