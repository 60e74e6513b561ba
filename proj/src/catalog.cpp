#include "endspace/catalog.hpp"

#include <algorithm>
#include <map>

#include "endspace/dsl.hpp"

namespace endspace {

namespace {

const std::map<std::string, std::string>& texts() {
  static const std::map<std::string, std::string> t{
      {"ray", "chain(w)"},
      {"chain-omega2", "chain(w^2)"},
      {"bintree", "inftree(2)"},
      {"bintree-tops", "withtops(inftree(2), branches=[period(0), period(1), prefix(0; period(1))], mult=1)"},
      {"ladder-to-limit", "graft(withtops(chain(w), branches=[pos(w)], mult=1), chain(w), copies=w)"},
      {"two-storey",
       "graft(withtops(inftree(2), branches=[period(0), period(1), prefix(0; period(1))], mult=w), inftree(2))"},
  };
  return t;
}

bool is_finite_pos(const Addr& a) { return a.size() == 1 && a[0].kind == TokenKind::Pos && a[0].pos.is_finite(); }

bool is_scion_node(const Addr& a) {
  return a.size() == 3 && a[0].kind == TokenKind::Top && a[1].kind == TokenKind::Scion && a[2].kind == TokenKind::Pos;
}

// Ladder: chain 0 < 1 < ... < l, scions s_m = l.S<m>.@0 each carrying a ray.
// Even m gets an extra edge down to chain node m/2, so N(up-closure of s_m)
// is {l, m/2} for even m and {l} for odd m.
ExplicitRules ladder_rules() {
  ExplicitRules r;
  r.name = "ladder";
  r.extra_down = [](const Addr& a) -> std::vector<Addr> {
    if (is_scion_node(a) && a[2].pos.is_zero() && a[1].index % 2 == 0)
      return {{Token::at(a[1].index / 2)}};
    return {};
  };
  r.has_extra_up = [](const Addr& a) { return is_finite_pos(a); };
  r.upset = [](const Addr& a) -> std::optional<std::vector<Addr>> {
    if (is_finite_pos(a)) {
      std::vector<Addr> out;
      for (std::uint64_t k = 0; k < a[0].pos.finite_value(); ++k) out.push_back({Token::at(k)});
      return out;
    }
    if (is_scion_node(a)) {
      if (!a[2].pos.is_zero()) return std::vector<Addr>{{a[0], a[1], Token::at(a[2].pos.predecessor())}};
      std::vector<Addr> out{{a[0]}};
      if (a[1].index % 2 == 0) out.push_back({Token::at(a[1].index / 2)});
      return out;
    }
    throw Error(ErrorCode::LimitNode, "up-closure neighbourhoods are for non-limit nodes");
  };
  r.strict_upset = [](const Addr&) -> std::optional<std::vector<Addr>> { return std::nullopt; };
  // class 0 = {l} holds the odd scions, class k+1 = {l, k} holds s_2k alone
  r.classes = [](const Addr& a) -> std::optional<SuccessorClasses> {
    if (a.size() != 1 || a[0].kind != TokenKind::Top) return std::nullopt;
    auto cls = [a](std::uint64_t k) {
      std::vector<Addr> x{a};
      if (k) x.push_back({Token::at(k - 1)});
      std::sort(x.begin(), x.end(), AddrLess{});
      return x;
    };
    SuccessorClasses c;
    c.count = std::nullopt;
    c.at = cls;
    c.find = [a, cls](const std::vector<Addr>& x) -> std::optional<std::uint64_t> {
      if (x == cls(0)) return 0;
      for (const Addr& b : x)
        if (is_finite_pos(b) && x == cls(b[0].pos.finite_value() + 1)) return b[0].pos.finite_value() + 1;
      return std::nullopt;
    };
    c.size = [](std::uint64_t k) -> Card { return k ? Card(1) : std::nullopt; };
    c.member = [](std::uint64_t k, std::uint64_t r) { return k ? 2 * (k - 1) : 2 * r + 1; };
    c.period = 2;
    return c;
  };
  return r;
}

}  // namespace

std::shared_ptr<const UniformGraph> uniform_graph(const std::shared_ptr<const OrderTree>& tree, LevelOrderPtr levels) {
  return std::make_shared<UniformGraph>(tree, std::move(levels));
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"ray",          "chain-omega2",    "bintree",
                                              "bintree-tops", "ladder-to-limit", "two-storey"};
  return names;
}

CatalogEntry catalog(const std::string& name) {
  auto it = texts().find(name);
  if (it == texts().end()) throw Error(ErrorCode::InvalidSpec, "unknown catalog entry '" + name + "'");
  CatalogEntry e;
  e.name = name;
  e.dsl = it->second;
  e.tree = std::make_shared<SpecTree>(parse_spec(e.dsl));
  if (name == "ladder-to-limit") {
    e.graph = std::make_shared<ExplicitGraph>(e.tree, canonical_levels(), ladder_rules());
    e.adhesion = AdhesionClass::FiniteNotUniform;
  } else {
    e.graph = uniform_graph(e.tree);
  }
  return e;
}

CatalogEntry resolve_tree(const std::string& text) {
  static const std::string prefix = "catalog:";
  if (text.rfind(prefix, 0) == 0) return catalog(text.substr(prefix.size()));
  CatalogEntry e;
  e.name = "dsl";
  e.dsl = text;
  e.tree = std::make_shared<SpecTree>(parse_spec(text));
  e.graph = uniform_graph(e.tree);
  return e;
}

}  // namespace endspace
