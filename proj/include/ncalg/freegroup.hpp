#pragma once

// Free groups, their group rings, the Magnus map into R<<a,b,...>>, Fox
// derivatives and the induced ordering over Z.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncalg/ncseries.hpp"
#include "ncalg/parallel.hpp"
#include "ncalg/ring.hpp"

namespace ncalg {

struct Syllable {
  std::uint32_t gen = 0;  // 0-based generator index
  long exp = 1;           // nonzero
  friend bool operator==(const Syllable&, const Syllable&) = default;
  friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

/// Freely reduced word. Generators print as h, k (then m, n, p, ...);
/// inverses in upper case.
class GroupWord {
 public:
  GroupWord() = default;
  /// Reduces the given syllables.
  explicit GroupWord(const std::vector<Syllable>& syllables);
  static GroupWord generator(std::uint32_t gen, long exp = 1);

  const std::vector<Syllable>& syllables() const noexcept { return syl_; }
  bool empty() const noexcept { return syl_.empty(); }
  std::size_t letter_length() const noexcept;
  /// Highest generator index used plus one (0 for the identity).
  std::uint32_t rank_used() const noexcept;
  GroupWord inverse() const;
  std::string to_string() const;

  friend GroupWord operator*(const GroupWord& u, const GroupWord& v);
  friend bool operator==(const GroupWord&, const GroupWord&) = default;
  /// Deterministic order: letter length first, then syllables.
  friend std::strong_ordering operator<=>(const GroupWord& u, const GroupWord& v);

 private:
  std::vector<Syllable> syl_;
};

GroupWord word_mul(const GroupWord& u, const GroupWord& v);
/// Letters h k H K (and m n p ... for higher rank), optional ^[-]n, "1" for the
/// identity. Throws ParseError.
GroupWord parse_group_word(std::string_view text);
/// All reduced words of letter length <= max_len over `rank` generators,
/// ordered by length.
std::vector<GroupWord> enumerate_reduced_words(std::size_t max_len, std::uint32_t rank = 2);

class GroupRingElement {
 public:
  using Terms = std::map<GroupWord, Value>;

  explicit GroupRingElement(Ring ring);
  GroupRingElement(Ring ring, Terms terms);
  static GroupRingElement word(const Ring& ring, const GroupWord& w);
  static GroupRingElement word(const Ring& ring, const GroupWord& w, const Value& c);

  const Ring& ring() const noexcept { return ring_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Sum of coefficients.
  Value augmentation() const;
  GroupRingElement scaled(const Value& c) const;
  std::string to_string() const;

  friend GroupRingElement operator+(const GroupRingElement& u, const GroupRingElement& v);
  friend GroupRingElement operator-(const GroupRingElement& u, const GroupRingElement& v);
  friend GroupRingElement operator*(const GroupRingElement& u, const GroupRingElement& v);
  friend bool operator==(const GroupRingElement& u, const GroupRingElement& v);

 private:
  Ring ring_;
  Terms terms_;
};

/// Grammar: terms like `2*hk - 3*H + 1`; coefficients are numbers,
/// fractions or [ring literals]. Throws ParseError.
GroupRingElement parse_group_ring_element(std::string_view text, const Ring& ring);

/// Alphabet with one letter per generator (a, b, ...).
Alphabet magnus_alphabet(std::uint32_t rank = 2);
/// Generator i maps to 1 + (i-th letter), inverses to truncated inverses.
NcSeries magnus(const GroupWord& w, const Ring& ring, std::size_t degree, std::uint32_t rank = 2);
NcSeries magnus(const GroupRingElement& f, std::size_t degree, std::uint32_t rank = 2);

struct FoxStrip {
  Value eps;
  NcSeries da;
  NcSeries db;
};
/// u = eps + da*a + db*b with da, db at degree D-1. Requires alphabet {a,b}
/// and D >= 1.
FoxStrip fox_strip(const NcSeries& u);

/// D_g with f = eps(f) + sum_g D_g(f) (g - 1) and D_g(uv) = D_g(u) + u D_g(v).
GroupRingElement fox_derivative(const GroupRingElement& f, std::uint32_t gen);

enum class Order { LT, EQ, GT, Undecided };
const char* to_string(Order o);

struct OrderResult {
  Order order = Order::Undecided;
  std::size_t degree = 0;  // degree that decided, or the cap
};

/// Sign of the graded-least word of magnus(u) - magnus(v) over Z, at degrees
/// max length, doubled up to cap (default 4 * max length).
OrderResult order_compare(const GroupWord& u, const GroupWord& v,
                          std::optional<std::size_t> cap = std::nullopt);

struct SweepReport {
  std::size_t max_len = 0;
  std::size_t degree = 0;
  std::size_t words = 0;
  std::vector<std::pair<GroupWord, GroupWord>> collisions;
};

/// Checks that all reduced words of length <= max_len have pairwise distinct
/// Magnus images at the given degree.
SweepReport injectivity_sweep(std::size_t max_len, std::size_t degree, const Ring& ring = Ring::integers(),
                              Execution exec = Execution::Parallel);

struct OrderAxiomReport {
  std::size_t words = 0;
  std::size_t pairs = 0;
  std::size_t totality_failures = 0;     // not exactly one of LT/EQ/GT, or asymmetric
  std::size_t transitivity_checks = 0;
  std::size_t transitivity_failures = 0;
  std::size_t cone_checks = 0;
  std::size_t cone_failures = 0;
  std::size_t conjugation_checks = 0;
  std::size_t conjugation_failures = 0;
  std::size_t translation_checks = 0;
  std::size_t translation_failures = 0;
  std::size_t undecided = 0;
  std::vector<std::string> findings;  // first few failures, human readable

  std::size_t failures() const {
    return totality_failures + transitivity_failures + cone_failures + conjugation_failures +
           translation_failures + undecided;
  }
};

/// Order axioms over all pairs of reduced words of length <= max_len:
/// totality/antisymmetry, cone closure, conjugation invariance of positivity
/// and two-sided translation consistency with pseudo-random translators.
OrderAxiomReport check_order_axioms(std::size_t max_len, std::uint64_t seed = 1,
                                    Execution exec = Execution::Parallel);

}  // namespace ncalg
