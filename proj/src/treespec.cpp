#include "endspace/treespec.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace endspace {

namespace {

constexpr std::uint64_t kFamilyScan = 64;

[[noreturn]] void bad_addr(AddrView a, const std::string& why) {
  throw Error(ErrorCode::InvalidAddress, to_string(a) + ": " + why);
}

[[noreturn]] void bad_ray(RayView r, const std::string& why) {
  throw Error(ErrorCode::InvalidHighRay, to_string(*r.ray) + ": " + why);
}

HighRay materialize(RayView r) {
  HighRay out;
  out.route.assign(r.ray->route.begin() + static_cast<std::ptrdiff_t>(r.k), r.ray->route.end());
  out.tail = r.ray->tail;
  return out;
}

Addr prefixed(const Addr& pre, Addr a) {
  Addr out = pre;
  out.insert(out.end(), a.begin(), a.end());
  return out;
}

std::optional<Ordinal> min_opt(std::optional<Ordinal> a, const std::optional<Ordinal>& b) {
  if (!b) return a;
  if (!a || *b < *a) return b;
  return a;
}

std::optional<Ordinal> shifted(const Ordinal& off, const std::optional<Ordinal>& h) {
  if (!h) return std::nullopt;
  return add(off, *h);
}

std::uint64_t card_min(const Card& c, std::uint64_t k) { return c ? std::min(*c, k) : k; }
bool card_gt(const Card& c, std::uint64_t i) { return !c || i < *c; }
std::string card_str(const Card& c) { return c ? std::to_string(*c) : "w"; }

std::uint64_t uniform(Rng& rng, std::uint64_t n) {
  return n == 0 ? 0 : std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

/// Memoized instances of an index-dependent template.
class TemplateCache {
 public:
  explicit TemplateCache(SpecTemplate f) : f_(std::move(f)) {}
  SpecPtr get(std::uint64_t i) const {
    std::lock_guard lock(mu_);
    auto it = memo_.find(i);
    if (it != memo_.end()) return it->second;
    SpecPtr s = f_(i);
    if (!s) throw Error(ErrorCode::InvalidSpec, "template produced no spec");
    memo_.emplace(i, s);
    return s;
  }

 private:
  SpecTemplate f_;
  mutable std::mutex mu_;
  mutable std::map<std::uint64_t, SpecPtr> memo_;
};

// ---------------------------------------------------------------- Chain

class ChainSpec final : public Spec {
 public:
  explicit ChainSpec(Ordinal alpha) : alpha_(std::move(alpha)) {
    if (alpha_.is_zero()) throw Error(ErrorCode::InvalidSpec, "chain length must be at least 1");
  }

  SpecKind kind() const override { return SpecKind::Chain; }
  std::string to_string() const override { return "chain(" + alpha_.to_string() + ")"; }
  Addr root() const override { return {Token::at(0)}; }

  void check_addr(AddrView a) const override {
    if (a.size() != 1 || a[0].kind != TokenKind::Pos) bad_addr(a, "chain nodes are single positions");
    if (a[0].pos >= alpha_) bad_addr(a, "position beyond chain length");
  }
  Ordinal height(AddrView a) const override { return pos(a); }
  bool le(AddrView a, AddrView b) const override { return pos(a) <= pos(b); }
  Addr ancestor(AddrView a, const Ordinal& h) const override {
    if (h > pos(a)) bad_addr(a, "ancestor height above node");
    return {Token::at(h)};
  }
  std::vector<Addr> children(AddrView a, std::uint64_t lo, std::uint64_t hi) const override {
    Ordinal next = pos(a).successor();
    if (lo == 0 && hi > 0 && next < alpha_) return {{Token::at(next)}};
    return {};
  }
  Card child_count(AddrView a) const override { return pos(a).successor() < alpha_ ? 1 : 0; }
  std::optional<Ordinal> min_limit_above(AddrView a) const override {
    Ordinal lim = add(pos(a).limit_part(), Ordinal::omega());
    if (lim < alpha_) return lim;
    return std::nullopt;
  }
  Ordinal tree_height() const override { return alpha_; }

  void enumerate(const Ordinal& offset, const TruncBounds& b, std::vector<Addr>& out) const override {
    // Odometer over coefficient vectors, highest exponent first: ascending order.
    const std::uint32_t top = std::min<std::uint64_t>(alpha_.leading_exp(), b.depth);
    std::vector<std::uint64_t> coef(top + 1, 0);
    while (out.size() < b.max_nodes) {
      std::vector<Term> terms;
      for (std::uint32_t i = 0; i <= top; ++i)
        if (coef[i]) terms.push_back({top - i, coef[i]});
      Ordinal beta = Ordinal::from_terms(std::move(terms));
      if (beta >= alpha_) break;
      if (within_depth(add(offset, beta), b.depth)) out.push_back({Token::at(beta)});
      std::size_t i = top + 1;
      while (i > 0 && coef[i - 1] == b.depth) coef[--i] = 0;
      if (i == 0) break;
      ++coef[i - 1];
    }
  }

  void check_ray(RayView r) const override {
    if (!r.at_tail()) bad_ray(r, "chain rays have no route");
    const auto* lam = std::get_if<Ordinal>(&r.ray->tail);
    if (!lam) bad_ray(r, "chain rays end in a limit position");
    if (!lam->is_limit()) bad_ray(r, "position is not a limit");
    if (*lam > alpha_) bad_ray(r, "position beyond chain length");
  }
  Ordinal order_type(RayView r) const override { return lam(r); }
  Addr node_at(RayView, const Ordinal& h) const override { return {Token::at(h)}; }
  bool contains(RayView r, AddrView a) const override {
    return a.size() == 1 && a[0].kind == TokenKind::Pos && a[0].pos < lam(r);
  }
  Ordinal meet(RayView r1, RayView r2) const override { return std::min(lam(r1), lam(r2)); }
  TopSet tops(RayView r) const override {
    if (lam(r) < alpha_) return TopSet::single({Token::at(lam(r))});
    return {};
  }
  HighRay downset(AddrView a) const override {
    if (!pos(a).is_limit()) bad_addr(a, "not a limit");
    return HighRay{{}, pos(a)};
  }
  std::optional<HighRay> least_ray_through(AddrView a) const override {
    Ordinal lim = add(pos(a).limit_part(), Ordinal::omega());
    if (lim <= alpha_) return HighRay{{}, lim};
    return std::nullopt;
  }
  bool has_rays() const override { return alpha_ >= Ordinal::omega(); }
  HighRay random_ray(Rng& rng, unsigned) const override {
    if (!has_rays()) throw Error(ErrorCode::InvalidHighRay, to_string() + " has no high-rays");
    const std::uint32_t top = std::min<std::uint32_t>(alpha_.leading_exp(), 4);
    for (int attempt = 0; attempt < 32; ++attempt) {
      std::vector<Term> terms;
      for (std::uint32_t e = top; e >= 1; --e)
        if (std::uint64_t c = uniform(rng, 4)) terms.push_back({e, c});
      if (terms.empty()) continue;
      Ordinal lam = Ordinal::from_terms(std::move(terms));
      if (lam <= alpha_) return HighRay{{}, lam};
    }
    return HighRay{{}, Ordinal::omega()};
  }

 private:
  static const Ordinal& pos(AddrView a) { return a[0].pos; }
  static const Ordinal& lam(RayView r) { return std::get<Ordinal>(r.ray->tail); }
  Ordinal alpha_;
};

// ---------------------------------------------------------------- InfTree

class InfTreeSpec final : public Spec {
 public:
  explicit InfTreeSpec(Card b) : b_(b) {
    if (b_ && *b_ == 0) throw Error(ErrorCode::InvalidSpec, "inftree branching must be at least 1");
  }

  SpecKind kind() const override { return SpecKind::InfTree; }
  std::string to_string() const override { return "inftree(" + card_str(b_) + ")"; }
  Addr root() const override { return {}; }

  void check_addr(AddrView a) const override {
    for (const Token& t : a)
      if (t.kind != TokenKind::Child || !card_gt(b_, t.index)) bad_addr(a, "invalid selector");
  }
  Ordinal height(AddrView a) const override { return a.size(); }
  bool le(AddrView a, AddrView b) const override {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
  }
  Addr ancestor(AddrView a, const Ordinal& h) const override {
    if (!h.is_finite() || h.finite_value() > a.size()) bad_addr(a, "ancestor height above node");
    return Addr(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(h.finite_value()));
  }
  std::vector<Addr> children(AddrView a, std::uint64_t lo, std::uint64_t hi) const override {
    std::vector<Addr> out;
    for (std::uint64_t c = lo; c < card_min(b_, hi); ++c) {
      Addr x(a.begin(), a.end());
      x.push_back(Token::child(c));
      out.push_back(std::move(x));
    }
    return out;
  }
  Card child_count(AddrView) const override { return b_; }
  std::optional<Ordinal> min_limit_above(AddrView) const override { return std::nullopt; }
  Ordinal tree_height() const override { return Ordinal::omega(); }

  void enumerate(const Ordinal& offset, const TruncBounds& b, std::vector<Addr>& out) const override {
    const std::uint64_t width = card_min(b_, b.breadth);
    std::vector<Addr> layer{{}};
    for (std::uint64_t len = 0; !layer.empty(); ++len) {
      if (!within_depth(add(offset, len), b.depth)) break;
      std::vector<Addr> next;
      for (Addr& x : layer) {
        if (out.size() >= b.max_nodes) return;
        out.push_back(x);
        for (std::uint64_t c = 0; c < width; ++c) {
          Addr y = x;
          y.push_back(Token::child(c));
          next.push_back(std::move(y));
        }
      }
      layer = std::move(next);
    }
  }

  void check_ray(RayView r) const override {
    if (!r.at_tail()) bad_ray(r, "inftree rays have no route");
    const auto* s = std::get_if<Stream>(&r.ray->tail);
    if (!s) bad_ray(r, "inftree rays are selector streams");
    if (!card_gt(b_, s->max_element())) bad_ray(r, "selector beyond branching");
  }
  Ordinal order_type(RayView) const override { return Ordinal::omega(); }
  Addr node_at(RayView r, const Ordinal& h) const override {
    Addr out;
    for (auto v : stream(r).take(h.finite_value())) out.push_back(Token::child(v));
    return out;
  }
  bool contains(RayView r, AddrView a) const override {
    const Stream& s = stream(r);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].kind != TokenKind::Child || s.at(i) != a[i].index) return false;
    return true;
  }
  Ordinal meet(RayView r1, RayView r2) const override {
    auto d = Stream::first_difference(stream(r1), stream(r2));
    return d ? Ordinal(*d + 1) : Ordinal::omega();
  }
  TopSet tops(RayView) const override { return {}; }
  HighRay downset(AddrView a) const override { bad_addr(a, "inftree has no limit nodes"); }
  std::optional<HighRay> least_ray_through(AddrView a) const override {
    std::vector<std::uint64_t> word;
    for (const Token& t : a) word.push_back(t.index);
    return HighRay{{}, Stream(std::move(word), {0})};
  }
  bool has_rays() const override { return true; }
  HighRay random_ray(Rng& rng, unsigned budget) const override {
    const std::uint64_t width = card_min(b_, 3);
    std::vector<std::uint64_t> prefix(uniform(rng, budget + 1)), period(1 + uniform(rng, 2));
    for (auto& v : prefix) v = uniform(rng, width);
    for (auto& v : period) v = uniform(rng, width);
    return HighRay{{}, Stream(std::move(prefix), std::move(period))};
  }

 private:
  static const Stream& stream(RayView r) { return std::get<Stream>(r.ray->tail); }
  Card b_;
};

// ---------------------------------------------------------------- Fan

class FanSpec final : public Spec {
 public:
  explicit FanSpec(std::vector<SpecPtr> kids) : list_(std::move(kids)), count_(list_.size()) {}
  FanSpec(SpecTemplate f, std::string text)
      : family_(std::make_unique<TemplateCache>(std::move(f))), text_(std::move(text)), count_(std::nullopt) {}

  SpecKind kind() const override { return SpecKind::Fan; }
  std::string to_string() const override {
    if (family_) return "fan(" + text_ + ")";
    std::string s = "fan([";
    for (std::size_t i = 0; i < list_.size(); ++i) s += (i ? ", " : "") + list_[i]->to_string();
    return s + "])";
  }
  Addr root() const override { return {}; }

  void check_addr(AddrView a) const override {
    if (a.empty()) return;
    if (a[0].kind != TokenKind::Child || !card_gt(count_, a[0].index)) bad_addr(a, "invalid fan child");
    child(a[0].index)->check_addr(a.subspan(1));
  }
  Ordinal height(AddrView a) const override {
    if (a.empty()) return 0;
    return add(1, child(a[0].index)->height(a.subspan(1)));
  }
  bool le(AddrView a, AddrView b) const override {
    if (a.empty()) return true;
    if (b.empty() || !(a[0] == b[0])) return false;
    return child(a[0].index)->le(a.subspan(1), b.subspan(1));
  }
  Addr ancestor(AddrView a, const Ordinal& h) const override {
    if (h.is_zero()) return {};
    if (a.empty()) bad_addr(a, "ancestor height above node");
    return prefixed({a[0]}, child(a[0].index)->ancestor(a.subspan(1), left_subtract(1, h)));
  }
  std::vector<Addr> children(AddrView a, std::uint64_t lo, std::uint64_t hi) const override {
    std::vector<Addr> out;
    if (a.empty()) {
      for (std::uint64_t i = lo; i < card_min(count_, hi); ++i)
        out.push_back(prefixed({Token::child(i)}, child(i)->root()));
      return out;
    }
    for (Addr& c : child(a[0].index)->children(a.subspan(1), lo, hi)) out.push_back(prefixed({a[0]}, c));
    return out;
  }
  Card child_count(AddrView a) const override {
    if (a.empty()) return count_;
    return child(a[0].index)->child_count(a.subspan(1));
  }
  std::optional<Ordinal> min_limit_above(AddrView a) const override {
    if (!a.empty()) return shifted(1, child(a[0].index)->min_limit_above(a.subspan(1)));
    std::optional<Ordinal> best;
    for (std::uint64_t i = 0; i < card_min(count_, kFamilyScan); ++i) {
      SpecPtr c = child(i);
      best = min_opt(best, shifted(1, c->min_limit_above(c->root())));
    }
    return best;
  }
  Ordinal tree_height() const override {
    Ordinal best = 1;
    for (std::uint64_t i = 0; i < card_min(count_, kFamilyScan); ++i)
      best = std::max(best, add(1, child(i)->tree_height()));
    return best;
  }
  void enumerate(const Ordinal& offset, const TruncBounds& b, std::vector<Addr>& out) const override {
    if (!within_depth(offset, b.depth) || out.size() >= b.max_nodes) return;
    out.push_back({});
    const Ordinal next = add(offset, 1);
    for (std::uint64_t i = 0; i < card_min(count_, b.breadth); ++i) {
      std::vector<Addr> sub;
      TruncBounds cb = b;
      cb.max_nodes = b.max_nodes - out.size();
      child(i)->enumerate(next, cb, sub);
      for (Addr& x : sub) out.push_back(prefixed({Token::child(i)}, std::move(x)));
      if (out.size() >= b.max_nodes) return;
    }
  }

  void check_ray(RayView r) const override {
    if (r.at_tail() || r.head().kind != TokenKind::Child || !card_gt(count_, r.head().index))
      bad_ray(r, "fan rays start with a child index");
    child(r.head().index)->check_ray(r.skip(1));
  }
  Ordinal order_type(RayView r) const override { return add(1, sub(r)->order_type(r.skip(1))); }
  Addr node_at(RayView r, const Ordinal& h) const override {
    if (h.is_zero()) return {};
    return prefixed({r.head()}, sub(r)->node_at(r.skip(1), left_subtract(1, h)));
  }
  bool contains(RayView r, AddrView a) const override {
    if (a.empty()) return true;
    return a[0] == r.head() && sub(r)->contains(r.skip(1), a.subspan(1));
  }
  Ordinal meet(RayView r1, RayView r2) const override {
    if (!(r1.head() == r2.head())) return 1;
    return add(1, sub(r1)->meet(r1.skip(1), r2.skip(1)));
  }
  TopSet tops(RayView r) const override { return sub(r)->tops(r.skip(1)).prefixed({r.head()}); }
  HighRay downset(AddrView a) const override {
    if (a.empty()) bad_addr(a, "fan root is not a limit");
    return prefix_ray({a[0]}, child(a[0].index)->downset(a.subspan(1)));
  }
  std::optional<HighRay> least_ray_through(AddrView a) const override {
    if (!a.empty()) {
      auto r = child(a[0].index)->least_ray_through(a.subspan(1));
      if (!r) return std::nullopt;
      return prefix_ray({a[0]}, *r);
    }
    for (std::uint64_t i = 0; i < card_min(count_, kFamilyScan); ++i) {
      SpecPtr c = child(i);
      if (auto r = c->least_ray_through(c->root())) return prefix_ray({Token::child(i)}, *r);
    }
    return std::nullopt;
  }
  bool has_rays() const override {
    for (std::uint64_t i = 0; i < card_min(count_, kFamilyScan); ++i)
      if (child(i)->has_rays()) return true;
    return false;
  }
  HighRay random_ray(Rng& rng, unsigned budget) const override {
    std::vector<std::uint64_t> ok;
    for (std::uint64_t i = 0; i < card_min(count_, 4); ++i)
      if (child(i)->has_rays()) ok.push_back(i);
    if (ok.empty()) throw Error(ErrorCode::InvalidHighRay, to_string() + " has no high-rays");
    const std::uint64_t i = ok[uniform(rng, ok.size())];
    return prefix_ray({Token::child(i)}, child(i)->random_ray(rng, budget));
  }

 private:
  SpecPtr child(std::uint64_t i) const { return family_ ? family_->get(i) : list_.at(i); }
  SpecPtr sub(RayView r) const { return child(r.head().index); }

  std::vector<SpecPtr> list_;
  std::unique_ptr<TemplateCache> family_;
  std::string text_;
  Card count_;
};

// ---------------------------------------------------------------- WithTops

class WithTopsSpec final : public Spec {
 public:
  WithTopsSpec(SpecPtr base, std::vector<HighRay> branches, Card mult) : base_(std::move(base)), mult_(mult) {
    if (base_->kind() == SpecKind::WithTops || base_->kind() == SpecKind::Graft)
      throw Error(ErrorCode::InvalidSpec, "withtops base must not itself carry tops");
    if (mult_ && *mult_ == 0) throw Error(ErrorCode::InvalidSpec, "top multiplicity must be at least 1");
    for (HighRay& r : branches) {
      base_->check_ray({&r, 0});
      for (const auto& seen : branches_)
        if (*seen == r) throw Error(ErrorCode::InvalidSpec, "duplicate branch " + endspace::to_string(r));
      branches_.push_back(std::make_shared<const HighRay>(std::move(r)));
    }
  }

  const Spec& base() const { return *base_; }
  const std::vector<std::shared_ptr<const HighRay>>& branches() const { return branches_; }
  Card mult() const { return mult_; }

  SpecKind kind() const override { return SpecKind::WithTops; }
  std::string to_string() const override {
    std::string s = "withtops(" + base_->to_string() + ", branches=[";
    for (std::size_t i = 0; i < branches_.size(); ++i) s += (i ? ", " : "") + ray_dsl(*branches_[i]);
    return s + "], mult=" + card_str(mult_) + ")";
  }
  Addr root() const override { return base_->root(); }

  static bool is_top(AddrView a) { return a.size() == 1 && a[0].kind == TokenKind::Top; }

  void check_addr(AddrView a) const override {
    if (!is_top(a)) return base_->check_addr(a);
    if (branch_of(a[0]) < 0) bad_addr(a, "top above an undeclared branch");
    if (!card_gt(mult_, a[0].index)) bad_addr(a, "top copy beyond multiplicity");
  }
  Ordinal height(AddrView a) const override {
    if (is_top(a)) return base_->order_type({a[0].ray.get(), 0});
    return base_->height(a);
  }
  bool le(AddrView a, AddrView b) const override {
    if (is_top(a)) return is_top(b) && a[0] == b[0];
    if (is_top(b)) return base_->contains({b[0].ray.get(), 0}, a);
    return base_->le(a, b);
  }
  Addr ancestor(AddrView a, const Ordinal& h) const override {
    if (!is_top(a)) return base_->ancestor(a, h);
    const Ordinal top_h = height(a);
    if (h == top_h) return Addr(a.begin(), a.end());
    if (h > top_h) bad_addr(a, "ancestor height above node");
    return base_->node_at({a[0].ray.get(), 0}, h);
  }
  std::vector<Addr> children(AddrView a, std::uint64_t lo, std::uint64_t hi) const override {
    if (is_top(a)) return {};
    return base_->children(a, lo, hi);
  }
  Card child_count(AddrView a) const override { return is_top(a) ? Card(0) : base_->child_count(a); }
  std::optional<Ordinal> min_limit_above(AddrView a) const override {
    if (is_top(a)) return std::nullopt;
    std::optional<Ordinal> best = base_->min_limit_above(a);
    for (const auto& d : branches_)
      if (base_->contains({d.get(), 0}, a)) best = min_opt(best, base_->order_type({d.get(), 0}));
    return best;
  }
  Ordinal tree_height() const override {
    Ordinal best = base_->tree_height();
    for (const auto& d : branches_) best = std::max(best, base_->order_type({d.get(), 0}).successor());
    return best;
  }
  void enumerate(const Ordinal& offset, const TruncBounds& b, std::vector<Addr>& out) const override {
    base_->enumerate(offset, b, out);
    for (const auto& d : branches_) {
      const Ordinal h = add(offset, base_->order_type({d.get(), 0}));
      if (!within_depth(h, b.depth)) continue;
      for (std::uint64_t c = 0; c < card_min(mult_, b.breadth) && out.size() < b.max_nodes; ++c)
        out.push_back({Token::top(d, c)});
    }
  }

  void check_ray(RayView r) const override { base_->check_ray(r); }
  Ordinal order_type(RayView r) const override { return base_->order_type(r); }
  Addr node_at(RayView r, const Ordinal& h) const override { return base_->node_at(r, h); }
  bool contains(RayView r, AddrView a) const override { return !is_top(a) && base_->contains(r, a); }
  Ordinal meet(RayView r1, RayView r2) const override { return base_->meet(r1, r2); }
  TopSet tops(RayView r) const override {
    TopSet out = base_->tops(r);
    const HighRay full = materialize(r);
    for (const auto& d : branches_) {
      if (!(*d == full)) continue;
      out = TopSet::join(std::move(out), TopSet{mult_, [d](std::uint64_t c) { return Addr{Token::top(d, c)}; }});
    }
    return out;
  }
  HighRay downset(AddrView a) const override {
    if (is_top(a)) return *a[0].ray;
    return base_->downset(a);
  }
  std::optional<HighRay> least_ray_through(AddrView a) const override {
    if (is_top(a)) return std::nullopt;
    return base_->least_ray_through(a);
  }
  bool has_rays() const override { return base_->has_rays(); }
  HighRay random_ray(Rng& rng, unsigned budget) const override {
    if (!branches_.empty() && uniform(rng, 2) == 0) return *branches_[uniform(rng, branches_.size())];
    return base_->random_ray(rng, budget);
  }

  /// Index of the declared branch matching a top token, or -1.
  int branch_of(const Token& t) const {
    for (std::size_t i = 0; i < branches_.size(); ++i)
      if (branches_[i] == t.ray || *branches_[i] == *t.ray) return static_cast<int>(i);
    return -1;
  }

  static std::string ray_dsl(const HighRay& r);

 private:
  SpecPtr base_;
  std::vector<std::shared_ptr<const HighRay>> branches_;
  Card mult_;
};

std::string WithTopsSpec::ray_dsl(const HighRay& r) {
  std::string tail;
  if (const auto* o = std::get_if<Ordinal>(&r.tail)) tail = "pos(" + o->to_string() + ")";
  else tail = std::get<Stream>(r.tail).to_string();
  for (auto it = r.route.rbegin(); it != r.route.rend(); ++it) {
    if (it->kind == TokenKind::Child) tail = "child(" + std::to_string(it->index) + "; " + tail + ")";
  }
  return tail;
}

// ---------------------------------------------------------------- Graft

class GraftSpec final : public Spec {
 public:
  GraftSpec(SpecPtr base, SpecTemplate scion, std::string text, Card copies)
      : base_(std::move(base)), scions_(std::move(scion)), text_(std::move(text)), copies_(copies) {
    wt_ = dynamic_cast<const WithTopsSpec*>(base_.get());
    if (!wt_) throw Error(ErrorCode::InvalidSpec, "graft base must be a withtops spec");
    if (copies_ && *copies_ == 0) throw Error(ErrorCode::InvalidSpec, "graft copies must be at least 1");
  }

  SpecKind kind() const override { return SpecKind::Graft; }
  std::string to_string() const override {
    return "graft(" + base_->to_string() + ", " + text_ + ", copies=" + card_str(copies_) + ")";
  }
  Addr root() const override { return base_->root(); }

  static bool is_scion(AddrView a) {
    return a.size() >= 2 && a[0].kind == TokenKind::Top && a[1].kind == TokenKind::Scion;
  }
  static bool scion_route(RayView r) {
    return r.ray->route.size() >= r.k + 2 && r.head().kind == TokenKind::Top &&
           r.ray->route[r.k + 1].kind == TokenKind::Scion;
  }

  void check_addr(AddrView a) const override {
    if (!is_scion(a)) return base_->check_addr(a);
    base_->check_addr(a.first(1));
    if (!card_gt(copies_, a[1].index)) bad_addr(a, "scion copy beyond graft copies");
    scion(a[1].index)->check_addr(a.subspan(2));
  }
  Ordinal height(AddrView a) const override {
    if (!is_scion(a)) return base_->height(a);
    return add(above(a[0]), scion(a[1].index)->height(a.subspan(2)));
  }
  bool le(AddrView a, AddrView b) const override {
    if (is_scion(a)) {
      return is_scion(b) && a[0] == b[0] && a[1] == b[1] &&
             scion(a[1].index)->le(a.subspan(2), b.subspan(2));
    }
    if (is_scion(b)) return base_->le(a, b.first(1));
    return base_->le(a, b);
  }
  Addr ancestor(AddrView a, const Ordinal& h) const override {
    if (!is_scion(a)) return base_->ancestor(a, h);
    const Ordinal off = above(a[0]);
    if (h < off) return base_->ancestor(a.first(1), h);
    return prefixed({a[0], a[1]}, scion(a[1].index)->ancestor(a.subspan(2), left_subtract(off, h)));
  }
  std::vector<Addr> children(AddrView a, std::uint64_t lo, std::uint64_t hi) const override {
    std::vector<Addr> out;
    if (is_scion(a)) {
      for (Addr& c : scion(a[1].index)->children(a.subspan(2), lo, hi)) out.push_back(prefixed({a[0], a[1]}, c));
    } else if (WithTopsSpec::is_top(a)) {
      for (std::uint64_t j = lo; j < card_min(copies_, hi); ++j)
        out.push_back(prefixed({a[0], Token::scion(j)}, scion(j)->root()));
    } else {
      out = base_->children(a, lo, hi);
    }
    return out;
  }
  Card child_count(AddrView a) const override {
    if (is_scion(a)) return scion(a[1].index)->child_count(a.subspan(2));
    if (WithTopsSpec::is_top(a)) return copies_;
    return base_->child_count(a);
  }
  std::optional<Ordinal> min_limit_above(AddrView a) const override {
    if (is_scion(a)) return shifted(above(a[0]), scion(a[1].index)->min_limit_above(a.subspan(2)));
    if (WithTopsSpec::is_top(a)) return scion_min(above(a[0]));
    std::optional<Ordinal> best = base_->min_limit_above(a);
    for (const auto& d : wt_->branches())
      if (wt_->base().contains({d.get(), 0}, a))
        best = min_opt(best, scion_min(wt_->base().order_type({d.get(), 0}).successor()));
    return best;
  }
  Ordinal tree_height() const override {
    Ordinal best = base_->tree_height();
    for (const auto& d : wt_->branches()) {
      const Ordinal off = wt_->base().order_type({d.get(), 0}).successor();
      for (std::uint64_t j = 0; j < card_min(copies_, kFamilyScan); ++j)
        best = std::max(best, add(off, scion(j)->tree_height()));
    }
    return best;
  }
  void enumerate(const Ordinal& offset, const TruncBounds& b, std::vector<Addr>& out) const override {
    base_->enumerate(offset, b, out);
    for (const auto& d : wt_->branches()) {
      const Ordinal h = add(offset, wt_->base().order_type({d.get(), 0}));
      if (!within_depth(h, b.depth)) continue;
      for (std::uint64_t c = 0; c < card_min(wt_->mult(), b.breadth); ++c)
        for (std::uint64_t j = 0; j < card_min(copies_, b.breadth); ++j) {
          if (out.size() >= b.max_nodes) return;
          std::vector<Addr> sub;
          TruncBounds sb = b;
          sb.max_nodes = b.max_nodes - out.size();
          scion(j)->enumerate(h.successor(), sb, sub);
          const Addr pre{Token::top(d, c), Token::scion(j)};
          for (Addr& x : sub) out.push_back(prefixed(pre, std::move(x)));
        }
    }
  }

  void check_ray(RayView r) const override {
    if (!scion_route(r)) return base_->check_ray(r);
    base_->check_addr(std::span<const Token>(&r.head(), 1));
    const std::uint64_t j = r.ray->route[r.k + 1].index;
    if (!card_gt(copies_, j)) bad_ray(r, "scion copy beyond graft copies");
    scion(j)->check_ray(r.skip(2));
  }
  Ordinal order_type(RayView r) const override {
    if (!scion_route(r)) return base_->order_type(r);
    return add(above(r.head()), scion_of(r)->order_type(r.skip(2)));
  }
  Addr node_at(RayView r, const Ordinal& h) const override {
    if (!scion_route(r)) return base_->node_at(r, h);
    const Ordinal off = above(r.head());
    if (h < off) return base_->ancestor(std::span<const Token>(&r.head(), 1), h);
    return prefixed({r.head(), r.ray->route[r.k + 1]}, scion_of(r)->node_at(r.skip(2), left_subtract(off, h)));
  }
  bool contains(RayView r, AddrView a) const override {
    if (!scion_route(r)) return !is_scion(a) && base_->contains(r, a);
    if (is_scion(a)) {
      return a[0] == r.head() && a[1] == r.ray->route[r.k + 1] && scion_of(r)->contains(r.skip(2), a.subspan(2));
    }
    return base_->le(a, std::span<const Token>(&r.head(), 1));
  }
  Ordinal meet(RayView r1, RayView r2) const override {
    const bool s1 = scion_route(r1), s2 = scion_route(r2);
    if (!s1 && !s2) return base_->meet(r1, r2);
    if (s1 && s2 && r1.head() == r2.head()) {
      const Ordinal off = above(r1.head());
      if (!(r1.ray->route[r1.k + 1] == r2.ray->route[r2.k + 1])) return off;
      return add(off, scion_of(r1)->meet(r1.skip(2), r2.skip(2)));
    }
    RayView d1 = s1 ? RayView{r1.head().ray.get(), 0} : r1;
    RayView d2 = s2 ? RayView{r2.head().ray.get(), 0} : r2;
    return base_->meet(d1, d2);
  }
  TopSet tops(RayView r) const override {
    if (!scion_route(r)) return base_->tops(r);
    return scion_of(r)->tops(r.skip(2)).prefixed({r.head(), r.ray->route[r.k + 1]});
  }
  HighRay downset(AddrView a) const override {
    if (!is_scion(a)) return base_->downset(a);
    return prefix_ray({a[0], a[1]}, scion(a[1].index)->downset(a.subspan(2)));
  }
  std::optional<HighRay> least_ray_through(AddrView a) const override {
    if (is_scion(a)) {
      auto r = scion(a[1].index)->least_ray_through(a.subspan(2));
      if (!r) return std::nullopt;
      return prefix_ray({a[0], a[1]}, *r);
    }
    if (WithTopsSpec::is_top(a)) {
      for (std::uint64_t j = 0; j < card_min(copies_, kFamilyScan); ++j) {
        SpecPtr s = scion(j);
        if (auto r = s->least_ray_through(s->root())) return prefix_ray({a[0], Token::scion(j)}, *r);
      }
      return std::nullopt;
    }
    return base_->least_ray_through(a);
  }
  bool has_rays() const override {
    return base_->has_rays() || (!wt_->branches().empty() && scion(0)->has_rays());
  }
  HighRay random_ray(Rng& rng, unsigned budget) const override {
    const bool up = !wt_->branches().empty() && scion(0)->has_rays() && uniform(rng, 2) == 0;
    if (!up) return base_->random_ray(rng, budget);
    const auto& d = wt_->branches()[uniform(rng, wt_->branches().size())];
    const std::uint64_t c = uniform(rng, card_min(wt_->mult(), 3));
    const std::uint64_t j = uniform(rng, card_min(copies_, 3));
    if (!scion(j)->has_rays()) return base_->random_ray(rng, budget);
    return prefix_ray({Token::top(d, c), Token::scion(j)}, scion(j)->random_ray(rng, budget));
  }

 private:
  SpecPtr scion(std::uint64_t j) const { return scions_.get(j); }
  SpecPtr scion_of(RayView r) const { return scion(r.ray->route[r.k + 1].index); }
  /// Height of a scion root above top `t`.
  Ordinal above(const Token& t) const { return base_->height(std::span<const Token>(&t, 1)).successor(); }
  std::optional<Ordinal> scion_min(const Ordinal& off) const {
    std::optional<Ordinal> best;
    for (std::uint64_t j = 0; j < card_min(copies_, kFamilyScan); ++j) {
      SpecPtr s = scion(j);
      best = min_opt(best, shifted(off, s->min_limit_above(s->root())));
    }
    return best;
  }

  SpecPtr base_;
  const WithTopsSpec* wt_ = nullptr;
  TemplateCache scions_;
  std::string text_;
  Card copies_;
};

}  // namespace

SpecPtr make_chain(const Ordinal& alpha) { return std::make_shared<ChainSpec>(alpha); }
SpecPtr make_inftree(Card branching) { return std::make_shared<InfTreeSpec>(branching); }
SpecPtr make_fan(std::vector<SpecPtr> children) { return std::make_shared<FanSpec>(std::move(children)); }
SpecPtr make_fan_family(SpecTemplate child, std::string text) {
  return std::make_shared<FanSpec>(std::move(child), std::move(text));
}
SpecPtr make_withtops(SpecPtr base, std::vector<HighRay> branches, Card mult) {
  return std::make_shared<WithTopsSpec>(std::move(base), std::move(branches), mult);
}
SpecPtr make_graft(SpecPtr base, SpecTemplate scion, std::string text, Card copies) {
  return std::make_shared<GraftSpec>(std::move(base), std::move(scion), std::move(text), copies);
}

HighRay prefix_ray(const Addr& prefix, HighRay r) {
  r.route.insert(r.route.begin(), prefix.begin(), prefix.end());
  return r;
}

// ---------------------------------------------------------------- SpecTree

Ordinal SpecTree::height(const Addr& a) const {
  spec_->check_addr(a);
  return spec_->height(a);
}

bool SpecTree::le(const Addr& a, const Addr& b) const { return spec_->le(a, b); }

Addr SpecTree::ancestor(const Addr& a, const Ordinal& h) const {
  if (h > spec_->height(a)) throw Error(ErrorCode::InvalidAddress, "ancestor height above " + to_string(a));
  return spec_->ancestor(a, h);
}

std::vector<Addr> SpecTree::children(const Addr& a, std::uint64_t lo, std::uint64_t hi) const {
  return spec_->children(a, lo, hi);
}

Card SpecTree::child_count(const Addr& a) const { return spec_->child_count(a); }

std::optional<Ordinal> SpecTree::min_limit_above(const Addr& a) const { return spec_->min_limit_above(a); }

std::vector<Addr> SpecTree::enumerate(const TruncBounds& b) const {
  std::vector<Addr> out;
  spec_->enumerate(0, b, out);
  if (out.size() > b.max_nodes) out.resize(b.max_nodes);
  return out;
}

Ordinal SpecTree::order_type(const HighRay& r) const { return spec_->order_type({&r, 0}); }

Addr SpecTree::node_at(const HighRay& r, const Ordinal& h) const {
  if (h >= order_type(r)) throw Error(ErrorCode::InvalidHighRay, "height beyond the ray " + to_string(r));
  return spec_->node_at({&r, 0}, h);
}

bool SpecTree::contains(const HighRay& r, const Addr& a) const { return spec_->contains({&r, 0}, a); }

Ordinal SpecTree::meet(const HighRay& r1, const HighRay& r2) const { return spec_->meet({&r1, 0}, {&r2, 0}); }

TopSet SpecTree::tops(const HighRay& r) const { return spec_->tops({&r, 0}); }

HighRay SpecTree::downset(const Addr& limit) const {
  if (!height(limit).is_limit()) throw Error(ErrorCode::InvalidAddress, to_string(limit) + " is not a limit");
  return spec_->downset(limit);
}

std::optional<HighRay> SpecTree::least_ray_through(const Addr& a) const { return spec_->least_ray_through(a); }

}  // namespace endspace
