#include "endspace/ordinal.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace endspace {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OverflowBeyondSupportedHeight: return "OverflowBeyondSupportedHeight";
    case ErrorCode::InvalidAddress: return "InvalidAddress";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidHighRay: return "InvalidHighRay";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotUniform: return "NotUniform";
    case ErrorCode::NotFiniteAdhesion: return "NotFiniteAdhesion";
    case ErrorCode::TemplateOutsideTree: return "TemplateOutsideTree";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::LimitNode: return "LimitNode";
    case ErrorCode::EqualEnds: return "EqualEnds";
    case ErrorCode::PrefixNotInTruncation: return "PrefixNotInTruncation";
    case ErrorCode::TooLarge: return "TooLarge";
  }
  return "Unknown";
}

Ordinal::Ordinal(std::uint64_t n) {
  if (n > 0) terms_.push_back({0, n});
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coef == 0)
      throw Error(ErrorCode::InvalidSpec, "ordinal term with zero coefficient");
    if (terms[i].exp > kMaxExponent)
      throw Error(ErrorCode::OverflowBeyondSupportedHeight, "exponent too large");
    if (i > 0 && terms[i].exp >= terms[i - 1].exp)
      throw Error(ErrorCode::InvalidSpec, "ordinal exponents must strictly decrease");
  }
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

Ordinal Ordinal::omega_pow(std::uint32_t exp, std::uint64_t coef) {
  return from_terms({Term{exp, coef}});
}

std::uint64_t Ordinal::finite_value() const {
  if (!is_finite()) throw Error(ErrorCode::InvalidSpec, "ordinal " + to_string() + " is infinite");
  return terms_.empty() ? 0 : terms_.front().coef;
}

std::uint64_t Ordinal::finite_part() const {
  if (!terms_.empty() && terms_.back().exp == 0) return terms_.back().coef;
  return 0;
}

Ordinal Ordinal::limit_part() const {
  Ordinal o = *this;
  if (!o.terms_.empty() && o.terms_.back().exp == 0) o.terms_.pop_back();
  return o;
}

OrdinalKind Ordinal::kind() const {
  if (terms_.empty()) return OrdinalKind::Zero;
  return terms_.back().exp == 0 ? OrdinalKind::Successor : OrdinalKind::Limit;
}

Ordinal Ordinal::predecessor() const {
  if (kind() != OrdinalKind::Successor)
    throw Error(ErrorCode::InvalidSpec, to_string() + " has no predecessor");
  Ordinal o = *this;
  if (--o.terms_.back().coef == 0) o.terms_.pop_back();
  return o;
}

Ordinal Ordinal::successor() const { return add(*this, Ordinal(1)); }

std::uint64_t Ordinal::weight() const {
  std::uint64_t w = 0;
  for (const Term& t : terms_) w += 1 + t.exp + t.coef;
  return w;
}

std::strong_ordering Ordinal::operator<=>(const Ordinal& other) const {
  const auto& a = terms_;
  const auto& b = other.terms_;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i].exp != b[i].exp) return a[i].exp <=> b[i].exp;
    if (a[i].coef != b[i].coef) return a[i].coef <=> b[i].coef;
  }
  return a.size() <=> b.size();
}

std::string Ordinal::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << " + ";
    const Term& t = terms_[i];
    if (t.exp == 0) {
      os << t.coef;
      continue;
    }
    os << 'w';
    if (t.exp > 1) os << '^' << t.exp;
    if (t.coef > 1) os << '*' << t.coef;
  }
  return os.str();
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  std::vector<Term> out;
  const std::uint32_t e = b.terms().front().exp;
  for (const Term& t : a.terms()) {
    if (t.exp > e) out.push_back(t);
    else if (t.exp == e) {
      out.push_back({e, t.coef + b.terms().front().coef});
      break;
    } else break;
  }
  const bool merged = !out.empty() && out.back().exp == e;
  for (std::size_t i = merged ? 1 : 0; i < b.terms().size(); ++i) out.push_back(b.terms()[i]);
  return Ordinal::from_terms(std::move(out));
}

namespace {

// a * w^f for f >= 1.
Ordinal times_omega_pow(const Ordinal& a, std::uint32_t f) {
  if (a.is_zero()) return {};
  return Ordinal::omega_pow(a.leading_exp() + f);
}

Ordinal times_natural(const Ordinal& a, std::uint64_t k) {
  if (k == 0 || a.is_zero()) return {};
  std::vector<Term> t = a.terms();
  t.front().coef *= k;
  return Ordinal::from_terms(std::move(t));
}

}  // namespace

Ordinal multiply(const Ordinal& a, const Ordinal& b) {
  // a * (sum w^f_j d_j) = sum a * w^f_j * d_j, left distributivity.
  Ordinal out;
  for (const Term& t : b.terms()) {
    Ordinal piece = t.exp == 0 ? times_natural(a, t.coef)
                               : times_natural(times_omega_pow(a, t.exp), t.coef);
    out = add(out, piece);
  }
  return out;
}

Ordinal left_subtract(const Ordinal& a, const Ordinal& b) {
  if (a > b) throw Error(ErrorCode::InvalidSpec, "left_subtract requires a <= b");
  const auto& at = a.terms();
  const auto& bt = b.terms();
  std::size_t i = 0;
  while (i < at.size() && i < bt.size() && at[i] == bt[i]) ++i;
  if (i == at.size()) return Ordinal::from_terms({bt.begin() + i, bt.end()});
  std::vector<Term> d;
  if (bt[i].exp > at[i].exp) {
    d.assign(bt.begin() + i, bt.end());
  } else {
    d.push_back({bt[i].exp, bt[i].coef - at[i].coef});
    d.insert(d.end(), bt.begin() + i + 1, bt.end());
  }
  return Ordinal::from_terms(std::move(d));
}

Classification classify(const Ordinal& a) {
  switch (a.kind()) {
    case OrdinalKind::Zero: return {OrdinalKind::Zero, std::nullopt};
    case OrdinalKind::Successor: return {OrdinalKind::Successor, a.predecessor()};
    case OrdinalKind::Limit: return {OrdinalKind::Limit, std::nullopt};
  }
  return {OrdinalKind::Zero, std::nullopt};
}

bool enum_less(const Ordinal& a, const Ordinal& b) {
  const auto wa = a.weight(), wb = b.weight();
  if (wa != wb) return wa < wb;
  return a < b;
}

namespace {

// counts[e][w]: number of CNF term lists with every exponent < e and total
// weight w. Grown on demand; guarded so concurrent readers see a full table.
class WeightTable {
 public:
  static WeightTable& instance() {
    static WeightTable t;
    return t;
  }

  // Count with exponents < e and weight w.
  Natural count(std::uint64_t e, std::uint64_t w) {
    ensure(std::max(e, w));
    std::lock_guard lock(mu_);
    e = std::min<std::uint64_t>(e, size_ - 1);
    return table_[e][w];
  }

  Natural total_of_weight(std::uint64_t w) { return count(w, w); }

  Natural cumulative_below(std::uint64_t w) {
    ensure(w);
    std::lock_guard lock(mu_);
    return cumulative_[w];
  }

 private:
  void ensure(std::uint64_t need) {
    std::lock_guard lock(mu_);
    if (need < size_) return;
    if (need > 20000) throw Error(ErrorCode::TooLarge, "ordinal weight too large to enumerate");
    std::size_t n = std::max<std::size_t>(need + 1, size_ * 2);
    table_.assign(n, std::vector<Natural>(n, 0));
    table_[0][0] = 1;
    for (std::size_t e = 0; e + 1 < n; ++e) {
      for (std::size_t w = 0; w < n; ++w) {
        Natural v = table_[e][w];
        for (std::size_t c = 1; 1 + e + c <= w; ++c) v += table_[e][w - 1 - e - c];
        table_[e + 1][w] = v;
      }
    }
    cumulative_.assign(n + 1, 0);
    for (std::size_t w = 0; w < n; ++w) cumulative_[w + 1] = cumulative_[w] + table_[std::min(w, n - 1)][w];
    size_ = n;
  }

  std::mutex mu_;
  std::size_t size_ = 0;
  std::vector<std::vector<Natural>> table_;
  std::vector<Natural> cumulative_;
};

}  // namespace

Natural enum_index(const Ordinal& a) {
  auto& tab = WeightTable::instance();
  const std::uint64_t w = a.weight();
  Natural rank = 0;
  std::uint64_t remaining = w;
  for (const Term& t : a.terms()) {
    for (std::uint64_t e = 0; e < t.exp; ++e)
      for (std::uint64_t c = 1; 1 + e + c <= remaining; ++c) rank += tab.count(e, remaining - 1 - e - c);
    for (std::uint64_t c = 1; c < t.coef; ++c)
      if (1 + t.exp + c <= remaining) rank += tab.count(t.exp, remaining - 1 - t.exp - c);
    remaining -= 1 + t.exp + t.coef;
  }
  return tab.cumulative_below(w) + rank;
}

Ordinal enum_ordinal(const Natural& n) {
  if (n < 0) throw Error(ErrorCode::InvalidSpec, "negative enumeration index");
  auto& tab = WeightTable::instance();
  std::uint64_t w = 0;
  while (tab.cumulative_below(w + 1) <= n) ++w;
  Natural rank = n - tab.cumulative_below(w);
  std::vector<Term> terms;
  std::uint64_t remaining = w;
  std::uint64_t bound = remaining + 1;  // exponents must stay below this
  while (remaining > 0) {
    bool placed = false;
    for (std::uint64_t e = 0; e < bound && !placed; ++e) {
      for (std::uint64_t c = 1; 1 + e + c <= remaining; ++c) {
        Natural block = tab.count(e, remaining - 1 - e - c);
        if (rank < block) {
          terms.push_back({static_cast<std::uint32_t>(e), c});
          remaining -= 1 + e + c;
          bound = e;
          placed = true;
          break;
        }
        rank -= block;
      }
    }
    if (!placed) throw Error(ErrorCode::InvalidSpec, "enumeration unranking failed");
  }
  return Ordinal::from_terms(std::move(terms));
}

Ordinal enum_next(const Ordinal& a) { return enum_ordinal(enum_index(a) + 1); }

std::vector<Ordinal> ordinals_of_weight(std::uint64_t w) {
  std::vector<Ordinal> out;
  // Recursive generation: terms with exponents below `bound` filling `rem`.
  std::vector<Term> cur;
  auto rec = [&](auto&& self, std::uint64_t rem, std::uint64_t bound) -> void {
    if (rem == 0) {
      out.push_back(Ordinal::from_terms(cur));
      return;
    }
    for (std::uint64_t e = 0; e < bound; ++e)
      for (std::uint64_t c = 1; 1 + e + c <= rem; ++c) {
        cur.push_back({static_cast<std::uint32_t>(e), c});
        self(self, rem - 1 - e - c, e);
        cur.pop_back();
      }
  };
  rec(rec, w, w + 1);
  std::sort(out.begin(), out.end());
  return out;
}

Ordinal cofinal_element(const Ordinal& lim, std::uint64_t k) {
  if (!lim.is_limit()) throw Error(ErrorCode::InvalidSpec, lim.to_string() + " is not a limit");
  std::vector<Term> t = lim.terms();
  const std::uint32_t e = t.back().exp;
  if (--t.back().coef == 0) t.pop_back();
  Ordinal base = Ordinal::from_terms(std::move(t));
  if (k == 0) return base;
  return add(base, Ordinal::omega_pow(e - 1, k));
}

Ordinal affine_supremum(const Ordinal& a, const Ordinal& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::size_t i = 0;
  while (i < ta.size() && i < tb.size() && ta[i] == tb[i]) ++i;
  std::vector<Term> prefix(tb.begin(), tb.begin() + static_cast<std::ptrdiff_t>(i));
  return add(Ordinal::from_terms(std::move(prefix)), Ordinal::omega_pow(tb[i].exp + 1));
}

}  // namespace endspace
