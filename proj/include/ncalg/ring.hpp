#pragma once

// Exact arithmetic for the commutative base rings.
//
// A Ring is a cheap, shareable handle to an immutable RingSpec. Ring elements
// are plain Values in canonical normal form; all arithmetic goes through the
// Ring that owns them, so containers of coefficients (series, matrices) carry
// the ring once instead of per entry. RingElement pairs the two for the
// public element-level API.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace ncalg {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Residue class in [0, n) for IntegersMod(n).
struct Residue {
  std::uint64_t r = 0;
  friend bool operator==(Residue, Residue) = default;
};

/// Monomial in a MonomialQuotient ring, already in rewriting normal form.
/// Idempotent / SquareZero: {} is 1, {i} is the i-th generator.
/// MonomialSubring / PolynomialXY: {a, b} is x^a y^b ({0, 0} is 1).
using Monomial = std::vector<std::uint32_t>;

/// Sparse Q-linear combination of normal monomials, sorted, nonzero.
struct Poly {
  std::vector<std::pair<Monomial, Rational>> terms;
};
bool operator==(const Poly& lhs, const Poly& rhs);

/// Canonical representation of a ring element. Integers use the int64
/// alternative whenever the value fits, BigInt otherwise.
struct Value {
  using Rep = std::variant<std::int64_t, BigInt, Rational, Residue, std::vector<Value>, Poly>;
  Rep rep;
};
bool operator==(const Value& lhs, const Value& rhs);

class RingSpec;

struct IntegersKind {};
struct RationalsKind {};
struct IntegersModKind {
  std::uint64_t modulus = 2;
};
struct ProductRingKind {
  std::shared_ptr<const RingSpec> base;
  std::size_t copies = 1;
};

enum class MonomialFamily {
  Idempotent,       // Q[e_0..e_{n-1}] / (e_i e_j - delta_ij e_i)
  SquareZero,       // Q + (free Q-module on x_0..x_{n-1}), products of basis elements zero
  MonomialSubring,  // subring of Q[x,y] generated by {x^i y}
  PolynomialXY,     // Q[x,y]
};

struct MonomialQuotientKind {
  MonomialFamily family = MonomialFamily::Idempotent;
  std::size_t generators = 0;  // window size; unused for the two x,y families
};

class RingSpec {
 public:
  using Kind = std::variant<IntegersKind, IntegersModKind, RationalsKind, ProductRingKind,
                            MonomialQuotientKind>;

  static RingSpec integers();
  static RingSpec integers_mod(std::uint64_t n);
  static RingSpec rationals();
  static RingSpec product(const RingSpec& base, std::size_t copies);
  static RingSpec idempotent(std::size_t n);
  static RingSpec square_zero(std::size_t n);
  static RingSpec monomial_subring();
  static RingSpec polynomial_xy();

  const Kind& kind() const noexcept { return kind_; }

  friend bool operator==(const RingSpec& lhs, const RingSpec& rhs);

 private:
  explicit RingSpec(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

enum class RewriteOrder { LeftToRight, RightToLeft };

class Ring {
 public:
  explicit Ring(RingSpec spec);
  explicit Ring(std::shared_ptr<const RingSpec> spec);

  static Ring integers() { return Ring(RingSpec::integers()); }
  static Ring integers_mod(std::uint64_t n) { return Ring(RingSpec::integers_mod(n)); }
  static Ring rationals() { return Ring(RingSpec::rationals()); }

  /// Parses `z`, `zmod:<n>`, `q`, `prod:q^<k>`, `idem:<n>`, `sqzero:<n>`,
  /// `monsub`, `qxy` (case-insensitive). Throws ParseError.
  static Ring parse(std::string_view text);

  const RingSpec& spec() const noexcept { return *spec_; }
  /// Canonical spec string; parse(name()) == *this.
  std::string name() const;

  Value zero() const;
  Value one() const;
  Value from_int(std::int64_t n) const;
  Value from_bigint(const BigInt& n) const;
  /// nullopt when the denominator is not invertible in this ring.
  std::optional<Value> from_rational(const Rational& q) const;

  Value add(const Value& u, const Value& v) const;
  Value neg(const Value& u) const;
  Value sub(const Value& u, const Value& v) const;
  Value mul(const Value& u, const Value& v) const;
  /// nullopt is the NotAUnit signal.
  std::optional<Value> invert(const Value& u) const;

  bool is_zero(const Value& u) const;
  bool is_one(const Value& u) const;
  /// Rejects values that are not in this ring's normal form.
  bool is_valid(const Value& u) const;

  std::string format(const Value& u) const;
  /// Parses an element literal; throws ParseError.
  Value parse_element(std::string_view text) const;
  /// Elements print as bare signed number literals (Z, Z/n, Q).
  bool is_numeric() const;
  /// Sign of a numeric element for printing purposes (Z and Q only).
  int sign(const Value& u) const;

  /// Number of elements, or nullopt for infinite rings.
  std::optional<std::uint64_t> cardinality() const;
  /// All elements of a finite ring in canonical order. Throws SizeGuardError
  /// beyond `limit` elements and UnsupportedError for infinite rings.
  std::vector<Value> elements(std::uint64_t limit = 1u << 20) const;
  /// A small "height-bounded" pool of elements, used by bounded searches over
  /// infinite rings. Finite rings return all elements.
  std::vector<Value> small_elements(int height) const;
  Value random(std::mt19937_64& rng, int height = 3) const;

  /// Reduces the product of a sequence of generator monomials by applying
  /// the family's rewriting rules in the given order. MonomialQuotient only.
  /// Returns nullopt when the product rewrites to 0.
  std::optional<Monomial> reduce_word(std::span<const Monomial> factors,
                                      RewriteOrder order) const;

  /// Element of a MonomialQuotient ring from a single monomial.
  Value monomial(const Monomial& m, const Rational& coefficient = 1) const;

  /// Total order on normal forms (used only to make outputs deterministic).
  bool value_less(const Value& u, const Value& v) const;

  friend bool operator==(const Ring& lhs, const Ring& rhs) {
    return lhs.spec_ == rhs.spec_ || *lhs.spec_ == *rhs.spec_;
  }

 private:
  std::shared_ptr<const RingSpec> spec_;
};

/// A value together with the ring it lives in.
class RingElement {
 public:
  RingElement(Ring ring, Value value);

  const Ring& ring() const noexcept { return ring_; }
  const Value& value() const noexcept { return value_; }
  bool is_zero() const { return ring_.is_zero(value_); }
  std::string to_string() const { return ring_.format(value_); }

  friend RingElement operator+(const RingElement& u, const RingElement& v);
  friend RingElement operator-(const RingElement& u, const RingElement& v);
  friend RingElement operator*(const RingElement& u, const RingElement& v);
  friend RingElement operator-(const RingElement& u);
  friend bool operator==(const RingElement& u, const RingElement& v);

 private:
  Ring ring_;
  Value value_;
};

/// Throws MismatchError when the rings differ.
RingElement ring_add(const RingElement& u, const RingElement& v);
RingElement ring_mul(const RingElement& u, const RingElement& v);
/// nullopt is NotAUnit.
std::optional<RingElement> ring_invert(const RingElement& u);

/// Membership of `elem` in the ideal generated by `gens`, for MonomialQuotient
/// rings. An empty generator list is the zero ideal. Throws UnsupportedError
/// for other ring kinds, and for x,y families when a generator is not a
/// monomial.
bool ideal_membership_monomial(const RingElement& elem, std::span<const RingElement> gens);

/// Ideal membership for every ring kind (gcd arithmetic over Z and Z/n,
/// coordinatewise over products, the monomial procedure otherwise).
bool ideal_contains(const Ring& ring, const Value& elem, std::span<const Value> gens);

}  // namespace ncalg
