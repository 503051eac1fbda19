#pragma once

// Ring coproducts A u_R B of two single-letter series subrings in the
// alternating-tensor normal form, the evaluation map into R<<a,b>>, and
// closed-form families in infinite products of R with their multiplication
// maps.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ncalg/freegroup.hpp"
#include "ncalg/ncseries.hpp"
#include "ncalg/ring.hpp"

namespace ncalg {

enum class SubringKind { FullSeries, LaurentGroupRing, PolynomialOnly, IdealAugmented };
const char* to_string(SubringKind k);

/// A single-letter subring A of R<<letter>>.
struct SubringSpec {
  SubringKind kind = SubringKind::FullSeries;
  char letter = 'a';
  /// Generators of the ideal I for IdealAugmented: A = R[h] + sum_{i<0} h^i I.
  std::vector<Value> ideal;

  static SubringSpec full(char letter) { return {SubringKind::FullSeries, letter, {}}; }
  static SubringSpec laurent(char letter) { return {SubringKind::LaurentGroupRing, letter, {}}; }
  static SubringSpec polynomial(char letter) { return {SubringKind::PolynomialOnly, letter, {}}; }
  static SubringSpec ideal_augmented(char letter, std::vector<Value> gens) {
    return {SubringKind::IdealAugmented, letter, std::move(gens)};
  }

  Alphabet alphabet() const { return Alphabet::single(letter); }

  /// Slot predicate for the augmentation part of A: a series in `letter`
  /// alone with zero constant term. On truncations this is all the kinds
  /// can check, since every truncated series is a truncated polynomial.
  bool admits_slot(const NcSeries& s) const;

  /// sum_m c_m h^m (h = 1 + letter) truncated at `degree`. Throws
  /// PreconditionError when the combination is not in A: PolynomialOnly
  /// forbids m < 0; IdealAugmented requires c_m in I for m < 0.
  NcSeries from_laurent(const std::map<long, Value>& coeffs, const Ring& ring, std::size_t degree) const;

  friend bool operator==(const SubringSpec&, const SubringSpec&) = default;
};

/// Alternating string over {a,b}; indexes the summands of the coproduct.
class AlternatingType {
 public:
  AlternatingType() = default;
  /// Throws PreconditionError on equal adjacent letters or letters outside {a,b}.
  explicit AlternatingType(std::string pattern);

  const std::string& pattern() const noexcept { return pattern_; }
  std::size_t size() const noexcept { return pattern_.size(); }
  bool empty() const noexcept { return pattern_.empty(); }

  friend bool operator==(const AlternatingType&, const AlternatingType&) = default;
  friend std::strong_ordering operator<=>(const AlternatingType& u, const AlternatingType& v) {
    if (auto c = u.pattern_.size() <=> v.pattern_.size(); c != 0) return c;
    return u.pattern_ <=> v.pattern_;
  }

 private:
  std::string pattern_;
};

/// Collapses each run of equal letters: a^2 b^3 a -> "aba".
AlternatingType block_pattern(const Word& w);

struct CoproductContext {
  Ring ring;
  std::size_t degree = 4;
  SubringSpec a = SubringSpec::full('a');
  SubringSpec b = SubringSpec::full('b');

  const SubringSpec& spec_for(char letter) const { return letter == 'a' ? a : b; }
  friend bool operator==(const CoproductContext&, const CoproductContext&) = default;
};

/// Elementary tensor: one single-letter series per pattern letter.
using Tensor = std::vector<NcSeries>;

class CoproductElement {
 public:
  using Components = std::map<AlternatingType, std::vector<Tensor>>;

  /// The zero element.
  explicit CoproductElement(CoproductContext ctx);
  static CoproductElement scalar(const CoproductContext& ctx, const Value& r);
  /// A single elementary tensor; the type is read off the slot alphabets.
  /// Throws PreconditionError when slots do not alternate or are not admitted.
  static CoproductElement tensor(const CoproductContext& ctx, Tensor slots);

  const CoproductContext& context() const noexcept { return ctx_; }
  const Value& scalar_part() const noexcept { return scalar_; }
  const Components& components() const noexcept { return components_; }
  std::size_t tensor_count() const;

  CoproductElement scaled(const Value& r) const;

  friend CoproductElement operator+(const CoproductElement& u, const CoproductElement& v);
  friend CoproductElement operator-(const CoproductElement& u, const CoproductElement& v);
  friend CoproductElement operator*(const CoproductElement& u, const CoproductElement& v);

 private:
  void add_tensor(Tensor t);

  CoproductContext ctx_;
  Value scalar_;
  Components components_;
};

/// Bilinear product with boundary-slot merging. Throws MismatchError.
CoproductElement cop_mul(const CoproductElement& u, const CoproductElement& v);
/// The natural map into R<<a,b>> at the context degree.
NcSeries alpha_eval(const CoproductElement& u);
/// alpha_eval of a single component (the scalar for the empty type).
NcSeries alpha_eval_component(const CoproductElement& u, const AlternatingType& type);

struct NotInImage {
  Word word;  // first word whose block pattern exceeds the cap
};
using Decomposition = std::map<AlternatingType, NcSeries>;

/// Splits a series over {a,b} by block pattern; patterns longer than
/// 2*ncap+1 give NotInImage.
std::variant<Decomposition, NotInImage> decompose_by_support(const NcSeries& u, std::size_t ncap);

/// Writes each group word as a product of (1 + (h^e - 1)) factors and expands
/// in the coproduct. Requires rank-2 words and specs that contain RH, RK.
CoproductElement from_group_ring(const GroupRingElement& f, const CoproductContext& ctx);

// ---- families in products of R -------------------------------------------------

/// sum_k coeffs[k] * i_k + constant over the index variables i_0, i_1, ...
struct AffineForm {
  std::vector<long> coeffs;
  long constant = 0;

  long eval(const std::vector<std::size_t>& index) const;
  bool nonnegative() const;  // on all of N^k
  /// Pads the coefficient vector with zeros to `arity` (removing trailing zeros first).
  AffineForm normalized(std::size_t arity) const;
  friend bool operator==(const AffineForm&, const AffineForm&) = default;
  friend auto operator<=>(const AffineForm&, const AffineForm&) = default;
};

/// coeff * x^{x_exp} y^{y_exp} in the x,y rings.
struct FormulaTerm {
  Rational coeff;
  AffineForm x_exp;
  AffineForm y_exp;
};

/// Entries listed explicitly; every other index is zero.
struct FiniteSupport {
  std::map<std::vector<std::size_t>, Value> entries;
};
/// Sum of monomial terms with exponents affine in the indices.
struct Formula {
  std::vector<FormulaTerm> terms;
};
/// Arity 1: entry i is coeff * (generator stride*i + offset) of an
/// Idempotent or SquareZero ring.
struct BasisFamily {
  Rational coeff = 1;
  std::size_t stride = 1;
  std::size_t offset = 0;
};

class FamilyExpr {
 public:
  using Form = std::variant<FiniteSupport, Formula, BasisFamily>;

  /// extents = nullopt means the full index set N^arity.
  FamilyExpr(Ring ring, std::size_t arity, Form form, std::optional<std::vector<std::size_t>> extents = std::nullopt);

  static FamilyExpr zero(const Ring& ring, std::size_t arity);
  /// (c * x^{alpha i + beta} y^gamma : i in N).
  static FamilyExpr monomial_formula(const Ring& ring, const Rational& c, long alpha, long beta, long gamma);
  static FamilyExpr basis(const Ring& ring, std::size_t stride = 1, std::size_t offset = 0, const Rational& coeff = 1);
  static FamilyExpr finite(const Ring& ring, std::vector<Value> entries);

  const Ring& ring() const noexcept { return ring_; }
  std::size_t arity() const noexcept { return arity_; }
  const std::optional<std::vector<std::size_t>>& extents() const noexcept { return extents_; }
  const Form& form() const noexcept { return form_; }

  /// Restricts to the box [0, extents).
  FamilyExpr windowed(std::vector<std::size_t> extents) const;
  /// Entry at an index; throws PreconditionError outside the extents or the
  /// ring's generator window.
  Value entry(const std::vector<std::size_t>& index) const;
  /// True iff every entry is zero (decided symbolically for formulas).
  bool is_zero() const;
  std::string to_string() const;

 private:
  Ring ring_;
  std::size_t arity_;
  Form form_;
  std::optional<std::vector<std::size_t>> extents_;
};

/// (i_1..i_n) -> product of entries. Formulas multiply symbolically; windowed
/// or finite-support inputs give FiniteSupport. Throws UnsupportedError for
/// other combinations.
FamilyExpr beta_image(const std::vector<FamilyExpr>& families);
/// Equality of families over the same ring and arity (MismatchError otherwise).
bool family_equal(const FamilyExpr& u, const FamilyExpr& v);
FamilyExpr family_sub(const FamilyExpr& u, const FamilyExpr& v);

/// sum_{i < extent} entry(i) * letter^{i+1}: the identification of a windowed
/// arity-1 family with an element of letter*R<<letter>>.
NcSeries slot_from_family(const FamilyExpr& family, char letter, std::size_t degree);
/// For words whose block pattern is `type`, the coefficient of
/// l1^{i1+1} l2^{i2+1} ... as a FiniteSupport family indexed by (i1, i2, ...).
FamilyExpr block_exponent_family(const NcSeries& u, const AlternatingType& type);

}  // namespace ncalg
