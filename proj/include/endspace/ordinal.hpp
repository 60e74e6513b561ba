#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "endspace/error.hpp"

namespace endspace {

using Natural = boost::multiprecision::cpp_int;

/// One Cantor-normal-form term w^exp * coef.
struct Term {
  std::uint32_t exp = 0;
  std::uint64_t coef = 1;
  bool operator==(const Term&) const = default;
};

enum class OrdinalKind { Zero, Successor, Limit };

/// Ordinal below w^w in Cantor normal form.
///
/// Terms are kept with strictly decreasing exponents and positive
/// coefficients, so structural equality is ordinal equality.
class Ordinal {
 public:
  /// Largest exponent accepted anywhere in the library.
  static constexpr std::uint32_t kMaxExponent = 4096;

  Ordinal() = default;
  Ordinal(std::uint64_t n);  // NOLINT: naturals convert implicitly
  static Ordinal from_terms(std::vector<Term> terms);
  static Ordinal omega_pow(std::uint32_t exp, std::uint64_t coef = 1);
  static Ordinal omega() { return omega_pow(1); }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const { return terms_.empty() || terms_.front().exp == 0; }
  /// Finite value; throws if infinite.
  std::uint64_t finite_value() const;
  std::uint32_t leading_exp() const { return terms_.empty() ? 0 : terms_.front().exp; }
  /// Coefficient of w^0 (the "finite tail").
  std::uint64_t finite_part() const;
  /// The ordinal with its finite tail removed (largest limit or zero <= this).
  Ordinal limit_part() const;

  OrdinalKind kind() const;
  bool is_limit() const { return kind() == OrdinalKind::Limit; }
  bool is_successor() const { return kind() == OrdinalKind::Successor; }
  /// Predecessor of a successor ordinal; throws otherwise.
  Ordinal predecessor() const;
  Ordinal successor() const;

  /// Terms count + sum of exponents + sum of coefficients.
  std::uint64_t weight() const;

  std::strong_ordering operator<=>(const Ordinal& other) const;
  bool operator==(const Ordinal& other) const = default;

  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

Ordinal add(const Ordinal& a, const Ordinal& b);
inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return add(a, b); }
/// Ordinal product (restricted to results below w^w).
Ordinal multiply(const Ordinal& a, const Ordinal& b);
/// The unique d with a + d == b; requires a <= b.
Ordinal left_subtract(const Ordinal& a, const Ordinal& b);

/// classify as returned by the public API: Zero, Successor(pred) or Limit.
struct Classification {
  OrdinalKind kind;
  std::optional<Ordinal> predecessor;
};
Classification classify(const Ordinal& a);

/// Canonical enumeration: weight first, then ordinal order.
bool enum_less(const Ordinal& a, const Ordinal& b);
Natural enum_index(const Ordinal& a);
Ordinal enum_ordinal(const Natural& n);
/// Next ordinal in enumeration order.
Ordinal enum_next(const Ordinal& a);
/// All ordinals of weight exactly w, ascending.
std::vector<Ordinal> ordinals_of_weight(std::uint64_t w);

/// Parse "w^2*3 + w + 4" style text (full ordinal expression grammar).
Ordinal parse_ordinal(std::string_view text);

/// For an increasing affine family of ordinals sampled at a < b, the supremum:
/// the common leading terms followed by w^(e+1), e the exponent where b first exceeds a.
Ordinal affine_supremum(const Ordinal& a, const Ordinal& b);

/// Cofinal sequence of a limit ordinal: element k of a strictly increasing
/// w-sequence whose supremum is `lim`.
Ordinal cofinal_element(const Ordinal& lim, std::uint64_t k);

}  // namespace endspace
