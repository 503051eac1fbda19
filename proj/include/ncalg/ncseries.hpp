#pragma once

// Truncated noncommutative power series over a commutative base ring.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncalg/ring.hpp"

namespace ncalg {

/// Word over a letter alphabet. Ordered by length, then lexicographically.
class Word {
 public:
  Word() = default;
  explicit Word(std::string letters) : letters_(std::move(letters)) {}

  static Word letter(char c) { return Word(std::string(1, c)); }

  const std::string& str() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  char operator[](std::size_t i) const { return letters_[i]; }
  char back() const { return letters_.back(); }

  Word prefix(std::size_t n) const { return Word(letters_.substr(0, n)); }
  Word suffix_from(std::size_t n) const { return Word(letters_.substr(n)); }

  friend Word operator+(const Word& u, const Word& v) { return Word(u.letters_ + v.letters_); }
  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& u, const Word& v) {
    if (auto c = u.letters_.size() <=> v.letters_.size(); c != 0) return c;
    return u.letters_ <=> v.letters_;
  }

 private:
  std::string letters_;
};

/// Sorted set of single-character letters; "ab" by default.
class Alphabet {
 public:
  Alphabet() : letters_("ab") {}
  explicit Alphabet(std::string_view letters);

  static Alphabet single(char c) { return Alphabet(std::string_view(&c, 1)); }

  const std::string& letters() const noexcept { return letters_; }
  bool contains(char c) const noexcept { return letters_.find(c) != std::string::npos; }
  bool contains(const Alphabet& other) const;
  std::size_t size() const noexcept { return letters_.size(); }
  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::string letters_;
};

class NcSeries {
 public:
  using Coeffs = std::map<Word, Value>;

  /// The zero series.
  NcSeries(Ring ring, Alphabet alphabet, std::size_t degree);
  /// Validates letters, drops zero coefficients and words longer than degree.
  NcSeries(Ring ring, Alphabet alphabet, std::size_t degree, Coeffs coeffs);

  static NcSeries constant(const Ring& ring, const Alphabet& alphabet, std::size_t degree,
                           const Value& c);
  static NcSeries monomial(const Ring& ring, const Alphabet& alphabet, std::size_t degree,
                           const Word& w, const Value& c);
  static NcSeries one(const Ring& ring, const Alphabet& alphabet, std::size_t degree) {
    return constant(ring, alphabet, degree, ring.one());
  }

  const Ring& ring() const noexcept { return ring_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t degree() const noexcept { return degree_; }
  const Coeffs& coeffs() const noexcept { return coeffs_; }

  Value coefficient(const Word& w) const;
  Value constant_term() const { return coefficient(Word{}); }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// Drops words longer than d; d must not exceed degree().
  NcSeries truncate(std::size_t d) const;
  /// Same coefficients over a larger alphabet.
  NcSeries with_alphabet(const Alphabet& alphabet) const;

  NcSeries scaled(const Value& c) const;
  /// Appends a letter to every word (right multiplication by that letter).
  NcSeries times_letter(char c) const;

  std::string to_string() const;

  friend NcSeries operator+(const NcSeries& u, const NcSeries& v);
  friend NcSeries operator-(const NcSeries& u, const NcSeries& v);
  friend NcSeries operator-(const NcSeries& u);
  friend NcSeries operator*(const NcSeries& u, const NcSeries& v);
  friend bool operator==(const NcSeries& u, const NcSeries& v);

 private:
  Ring ring_;
  Alphabet alphabet_;
  std::size_t degree_;
  Coeffs coeffs_;
};

/// Truncated Cauchy product at min(u.degree, v.degree). Throws MismatchError.
NcSeries series_mul(const NcSeries& u, const NcSeries& v);
/// nullopt when the constant term is not a unit.
std::optional<NcSeries> series_invert(const NcSeries& u);
std::pair<Value, NcSeries> split_constant(const NcSeries& u);
std::vector<Word> support(const NcSeries& u);
/// (1 + letter)^m truncated at degree d.
NcSeries laurent_embed(long m, std::size_t d, const Ring& ring = Ring::integers(), char letter = 'a',
                       const Alphabet& alphabet = Alphabet::single('a'));

/// Parses the series grammar: numbers, fractions, letters, [ring literal],
/// + - * ^ (negative powers invert), parentheses and inv(...). Adjacent
/// factors multiply. Throws ParseError, also for the inverse of a non-unit.
NcSeries parse_series(std::string_view text, const Ring& ring, std::size_t degree,
                      const Alphabet& alphabet = Alphabet());

}  // namespace ncalg
