#include "endspace/dsl.hpp"

#include <cctype>
#include <limits>

namespace endspace {

namespace {

enum class Tok { Number, Ident, Punct, End };

struct Lexeme {
  Tok kind;
  std::string text;
  std::uint64_t number = 0;
  std::size_t line, column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Lexeme next() {
    skip_space();
    Lexeme lx{Tok::End, "", 0, line_, col_};
    if (pos_ >= src_.size()) return lx;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      lx.kind = Tok::Number;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        const std::uint64_t d = static_cast<std::uint64_t>(src_[pos_] - '0');
        if (lx.number > (std::numeric_limits<std::uint64_t>::max() - d) / 10)
          throw ParseError(lx.line, lx.column, "number too large");
        lx.number = lx.number * 10 + d;
        lx.text += src_[pos_];
        advance();
      }
      return lx;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      lx.kind = Tok::Ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        lx.text += src_[pos_];
        advance();
      }
      return lx;
    }
    if (std::string_view("()[],;=+*^").find(c) != std::string_view::npos) {
      lx.kind = Tok::Punct;
      lx.text = std::string(1, c);
      advance();
      return lx;
    }
    throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_space() {
    while (pos_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
        advance();
      } else if (src_[pos_] == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

  ExprPtr parse() {
    ExprPtr e = sum();
    if (cur_.kind != Tok::End) fail("unexpected '" + cur_.text + "' after expression");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(cur_.line, cur_.column, msg); }

  bool is(const char* p) const { return cur_.kind == Tok::Punct && cur_.text == p; }
  void expect(const char* p) {
    if (!is(p)) fail(std::string("expected '") + p + "'" + (cur_.kind == Tok::End ? " before end of input" : ""));
    cur_ = lex_.next();
  }

  std::shared_ptr<Expr> make(ExprKind k, const Lexeme& at) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->line = at.line;
    e->column = at.column;
    return e;
  }

  ExprPtr binary(const char* op, ExprPtr (Parser::*sub)()) {
    ExprPtr lhs = (this->*sub)();
    while (is(op)) {
      Lexeme at = cur_;
      cur_ = lex_.next();
      auto e = make(ExprKind::Binary, at);
      e->name = op;
      e->args = {{"", lhs}, {"", (this->*sub)()}};
      lhs = e;
    }
    return lhs;
  }

  ExprPtr sum() { return binary("+", &Parser::product); }
  ExprPtr product() { return binary("*", &Parser::power); }
  ExprPtr power() {
    ExprPtr base = atom();
    if (!is("^")) return base;
    Lexeme at = cur_;
    cur_ = lex_.next();
    auto e = make(ExprKind::Binary, at);
    e->name = "^";
    e->args = {{"", base}, {"", atom()}};
    return e;
  }

  ExprPtr atom() {
    Lexeme at = cur_;
    if (cur_.kind == Tok::Number) {
      auto e = make(ExprKind::Number, at);
      e->number = cur_.number;
      cur_ = lex_.next();
      return e;
    }
    if (cur_.kind == Tok::Ident) {
      cur_ = lex_.next();
      if (!is("(")) {
        auto e = make(ExprKind::Ident, at);
        e->name = at.text;
        return e;
      }
      cur_ = lex_.next();
      auto e = make(ExprKind::Call, at);
      e->name = at.text;
      if (!is(")")) {
        for (;;) {
          e->args.push_back(argument());
          if (is(",") || is(";")) {
            cur_ = lex_.next();
            continue;
          }
          break;
        }
      }
      expect(")");
      return e;
    }
    if (is("[")) {
      cur_ = lex_.next();
      auto e = make(ExprKind::List, at);
      if (!is("]")) {
        for (;;) {
          e->args.push_back({"", sum()});
          if (is(",") || is(";")) {
            cur_ = lex_.next();
            continue;
          }
          break;
        }
      }
      expect("]");
      return e;
    }
    if (is("(")) {
      cur_ = lex_.next();
      ExprPtr e = sum();
      expect(")");
      return e;
    }
    if (cur_.kind == Tok::End) fail("unexpected end of input");
    fail("unexpected '" + cur_.text + "'");
  }

  Arg argument() {
    // Lookahead for `name = value`.
    if (cur_.kind == Tok::Ident) {
      Lexeme save = cur_;
      Lexer probe = lex_;
      Lexeme after = probe.next();
      if (after.kind == Tok::Punct && after.text == "=") {
        lex_ = probe;
        cur_ = lex_.next();
        return {save.text, sum()};
      }
    }
    return {"", sum()};
  }

  Lexer lex_;
  Lexeme cur_;
};

[[noreturn]] void fail_at(const Expr& e, const std::string& msg) { throw ParseError(e.line, e.column, msg); }

/// Named argument, else the `index`-th positional one; null when absent.
ExprPtr arg(const Expr& call, std::size_t index, std::string_view name) {
  for (const Arg& a : call.args)
    if (a.name == name) return a.value;
  std::size_t k = 0;
  for (const Arg& a : call.args) {
    if (!a.name.empty()) continue;
    if (k++ == index) return a.value;
  }
  return nullptr;
}

ExprPtr need(const Expr& call, std::size_t index, std::string_view name) {
  ExprPtr e = arg(call, index, name);
  if (!e) fail_at(call, call.name + ": missing argument '" + std::string(name) + "'");
  return e;
}

std::size_t positional(const Expr& call) {
  std::size_t k = 0;
  for (const Arg& a : call.args) k += a.name.empty();
  return k;
}

std::uint64_t eval_nat(const Expr& e, const Env& env) {
  Ordinal o = eval_ordinal(e, env);
  if (!o.is_finite()) fail_at(e, "expected a natural number, got " + o.to_string());
  return o.finite_value();
}

Card eval_card(const Expr& e, const Env& env) {
  if (e.kind == ExprKind::Ident && (e.name == "w" || e.name == "omega")) return std::nullopt;
  return eval_nat(e, env);
}

constexpr std::uint64_t kMaxItems = 10'000'000;

void expand_items(const Expr& e, const Env& env, std::vector<std::uint64_t>& out) {
  if (e.kind == ExprKind::List) {
    for (const Arg& a : e.args) expand_items(*a.value, env, out);
    return;
  }
  if (e.kind == ExprKind::Call && e.name == "rep") {
    ExprPtr body = need(e, 0, "value");
    const std::uint64_t count = eval_nat(*need(e, 1, "count"), env);
    std::vector<std::uint64_t> block;
    expand_items(*body, env, block);
    if (block.size() * count > kMaxItems) throw Error(ErrorCode::TooLarge, "rep expansion too long");
    for (std::uint64_t k = 0; k < count; ++k) out.insert(out.end(), block.begin(), block.end());
    return;
  }
  if (e.kind == ExprKind::Call) fail_at(e, "unexpected '" + e.name + "' in selector list");
  out.push_back(eval_nat(e, env));
}

Env with(const Env& env, const char* var, std::uint64_t v) {
  Env out = env;
  out[var] = v;
  return out;
}

Stream eval_stream(const Expr& call, const Env& env) {
  if (call.kind != ExprKind::Call) fail_at(call, "expected a selector stream");
  std::vector<std::uint64_t> prefix, period;
  if (call.name == "period") {
    for (const Arg& a : call.args) expand_items(*a.value, env, period);
    if (period.empty()) fail_at(call, "period must be nonempty");
    return Stream({}, std::move(period));
  }
  if (call.name != "prefix" && call.name != "branch") fail_at(call, "expected period, prefix or branch");
  const Expr* per = nullptr;
  for (const Arg& a : call.args) {
    const bool is_period = a.value->kind == ExprKind::Call && a.value->name == "period";
    if (is_period && (a.name.empty() || a.name == "period")) {
      if (per) fail_at(*a.value, "more than one period");
      per = a.value.get();
    } else if (a.name.empty() || a.name == "prefix") {
      expand_items(*a.value, env, prefix);
    } else {
      fail_at(*a.value, "unknown argument '" + a.name + "'");
    }
  }
  if (!per) fail_at(call, call.name + " needs a period(...)");
  Stream tail = eval_stream(*per, env);
  return tail.prepend(prefix);
}

}  // namespace

std::string Expr::to_string() const {
  switch (kind) {
    case ExprKind::Number: return std::to_string(number);
    case ExprKind::Ident: return name;
    case ExprKind::Binary: {
      auto wrap = [](const Expr& e) {
        return e.kind == ExprKind::Binary ? "(" + e.to_string() + ")" : e.to_string();
      };
      return wrap(*args[0].value) + name + wrap(*args[1].value);
    }
    case ExprKind::List:
    case ExprKind::Call: {
      std::string s = kind == ExprKind::Call ? name + "(" : "[";
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) s += ", ";
        if (!args[i].name.empty()) s += args[i].name + "=";
        s += args[i].value->to_string();
      }
      return s + (kind == ExprKind::Call ? ")" : "]");
    }
  }
  return "";
}

bool Expr::mentions(std::string_view var) const {
  if (kind == ExprKind::Ident) return name == var;
  for (const Arg& a : args)
    if (a.value->mentions(var)) return true;
  return false;
}

ExprPtr parse_expr(std::string_view text) { return Parser(text).parse(); }

Ordinal eval_ordinal(const Expr& e, const Env& env) {
  switch (e.kind) {
    case ExprKind::Number: return e.number;
    case ExprKind::Ident: {
      if (e.name == "w" || e.name == "omega") return Ordinal::omega();
      auto it = env.find(e.name);
      if (it == env.end()) fail_at(e, "unknown name '" + e.name + "'");
      return it->second;
    }
    case ExprKind::Binary: {
      Ordinal a = eval_ordinal(*e.args[0].value, env);
      Ordinal b = eval_ordinal(*e.args[1].value, env);
      if (e.name == "+") return add(a, b);
      if (e.name == "*") return multiply(a, b);
      if (!b.is_finite()) fail_at(e, "exponents must be finite");
      const std::uint64_t k = b.finite_value();
      if (a == Ordinal::omega()) {
        if (k > Ordinal::kMaxExponent)
          throw Error(ErrorCode::OverflowBeyondSupportedHeight, "exponent too large");
        return Ordinal::omega_pow(static_cast<std::uint32_t>(k));
      }
      if (!a.is_finite()) fail_at(e, "only w and naturals may be raised to a power");
      std::uint64_t r = 1;
      for (std::uint64_t i = 0; i < k; ++i) {
        if (a.finite_value() && r > std::numeric_limits<std::uint64_t>::max() / a.finite_value())
          throw Error(ErrorCode::TooLarge, "power overflows");
        r *= a.finite_value();
      }
      return r;
    }
    default: fail_at(e, "expected an ordinal");
  }
}

Ordinal parse_ordinal(std::string_view text) { return eval_ordinal(*parse_expr(text)); }

SpecPtr eval_spec(const ExprPtr& ep, const Env& env) {
  const Expr& e = *ep;
  if (e.kind != ExprKind::Call) fail_at(e, "expected a tree spec");
  if (e.name == "chain") return make_chain(eval_ordinal(*need(e, 0, "length"), env));
  if (e.name == "inftree") return make_inftree(eval_card(*need(e, 0, "branching"), env));
  if (e.name == "fan") {
    ExprPtr body = need(e, 0, "children");
    if (body->kind == ExprKind::List) {
      std::vector<SpecPtr> kids;
      for (const Arg& a : body->args) kids.push_back(eval_spec(a.value, env));
      return make_fan(std::move(kids));
    }
    return make_fan_family([body, env](std::uint64_t i) { return eval_spec(body, with(env, "i", i)); },
                           body->to_string());
  }
  if (e.name == "withtops") {
    SpecPtr base = eval_spec(need(e, 0, "base"), env);
    ExprPtr list = need(e, 1, "branches");
    if (list->kind != ExprKind::List) fail_at(*list, "branches must be a list");
    std::vector<HighRay> branches;
    for (const Arg& a : list->args) branches.push_back(eval_ray(*a.value, env));
    ExprPtr mult = arg(e, 2, "mult");
    return make_withtops(base, std::move(branches), mult ? eval_card(*mult, env) : Card(1));
  }
  if (e.name == "graft") {
    SpecPtr base = eval_spec(need(e, 0, "base"), env);
    ExprPtr scion = need(e, 1, "scion");
    ExprPtr copies = arg(e, 2, "copies");
    // Validate the template once up front so errors carry positions early.
    eval_spec(scion, with(env, "j", 0));
    return make_graft(base, [scion, env](std::uint64_t j) { return eval_spec(scion, with(env, "j", j)); },
                      scion->to_string(), copies ? eval_card(*copies, env) : Card(1));
  }
  fail_at(e, "unknown tree constructor '" + e.name + "'");
}

HighRay eval_ray(const Expr& e, const Env& env) {
  if (e.kind != ExprKind::Call) fail_at(e, "expected a high-ray");
  if (e.name == "period" || e.name == "prefix" || e.name == "branch") return HighRay{{}, eval_stream(e, env)};
  if (e.name == "pos") {
    Ordinal lam = eval_ordinal(*need(e, 0, "at"), env);
    if (!lam.is_limit()) fail_at(e, "pos(...) needs a limit ordinal, got " + lam.to_string());
    return HighRay{{}, lam};
  }
  if (e.name == "child") {
    const std::uint64_t i = eval_nat(*need(e, 0, "index"), env);
    return prefix_ray({Token::child(i)}, eval_ray(*need(e, 1, "ray"), env));
  }
  if (e.name == "scion") {
    if (positional(e) < 4 && !arg(e, 3, "ray")) fail_at(e, "scion(top, copy, j; ray) needs four arguments");
    HighRay top = eval_ray(*need(e, 0, "top"), env);
    const std::uint64_t copy = eval_nat(*need(e, 1, "copy"), env);
    const std::uint64_t j = eval_nat(*need(e, 2, "j"), env);
    return prefix_ray({Token::top(std::move(top), copy), Token::scion(j)}, eval_ray(*need(e, 3, "ray"), env));
  }
  fail_at(e, "unknown high-ray form '" + e.name + "'");
}

SpecPtr parse_spec(std::string_view text) { return eval_spec(parse_expr(text)); }
HighRay parse_ray(std::string_view text) { return eval_ray(*parse_expr(text)); }

int degree_in(const Expr& e, std::string_view var) {
  switch (e.kind) {
    case ExprKind::Number: return 0;
    case ExprKind::Ident: return e.name == var ? 1 : 0;
    case ExprKind::Binary: {
      const int a = degree_in(*e.args[0].value, var), b = degree_in(*e.args[1].value, var);
      if (a < 0 || b < 0) return -1;
      if (e.name == "+") return std::max(a, b);
      if (e.name == "*") return a + b;
      return (a || b) ? -1 : 0;
    }
    default: {
      int d = 0;
      for (const Arg& x : e.args) {
        const int k = degree_in(*x.value, var);
        if (k < 0) return -1;
        d = std::max(d, k);
      }
      return d;
    }
  }
}

HighRay SequenceTemplate::at(std::uint64_t n) const { return eval_ray(*expr_, Env{{"n", n}}); }

bool SequenceTemplate::affine() const {
  const int d = degree_in(*expr_, "n");
  return d == 0 || d == 1;
}

std::string route_to_dsl(const std::vector<Token>& route, std::string inner) {
  for (std::size_t i = route.size(); i-- > 0;) {
    const Token& t = route[i];
    if (t.kind == TokenKind::Child) {
      inner = "child(" + std::to_string(t.index) + "; " + inner + ")";
    } else if (t.kind == TokenKind::Scion && i > 0 && route[i - 1].kind == TokenKind::Top) {
      const Token& top = route[--i];
      inner = "scion(" + ray_to_dsl(*top.ray) + ", " + std::to_string(top.index) + ", " + std::to_string(t.index) +
              "; " + inner + ")";
    } else {
      throw Error(ErrorCode::InvalidHighRay, "route token " + to_string(t) + " has no DSL form");
    }
  }
  return inner;
}

std::string ray_to_dsl(const HighRay& r) {
  if (const auto* o = std::get_if<Ordinal>(&r.tail)) return route_to_dsl(r.route, "pos(" + o->to_string() + ")");
  return route_to_dsl(r.route, std::get<Stream>(r.tail).to_string());
}

}  // namespace endspace
