#include "ncalg/ncseries.hpp"

#include <algorithm>
#include <cctype>

#include "ncalg/detail/scanner.hpp"
#include "ncalg/errors.hpp"

namespace ncalg {

Alphabet::Alphabet(std::string_view letters) : letters_(letters) {
  std::sort(letters_.begin(), letters_.end());
  letters_.erase(std::unique(letters_.begin(), letters_.end()), letters_.end());
  if (letters_.empty()) throw PreconditionError("alphabet must not be empty");
  for (char c : letters_) {
    if (!std::islower(static_cast<unsigned char>(c)))
      throw PreconditionError(std::string("alphabet letters must be lowercase, got '") + c + "'");
  }
}

bool Alphabet::contains(const Alphabet& other) const {
  return std::all_of(other.letters_.begin(), other.letters_.end(), [&](char c) { return contains(c); });
}

NcSeries::NcSeries(Ring ring, Alphabet alphabet, std::size_t degree)
    : ring_(std::move(ring)), alphabet_(std::move(alphabet)), degree_(degree) {}

NcSeries::NcSeries(Ring ring, Alphabet alphabet, std::size_t degree, Coeffs coeffs)
    : ring_(std::move(ring)), alphabet_(std::move(alphabet)), degree_(degree) {
  for (auto& [w, c] : coeffs) {
    for (char l : w.str()) {
      if (!alphabet_.contains(l))
        throw PreconditionError(std::string("letter '") + l + "' is not in alphabet " + alphabet_.letters());
    }
    if (!ring_.is_valid(c)) throw PreconditionError("coefficient is not in normal form for " + ring_.name());
    if (w.size() <= degree_ && !ring_.is_zero(c)) coeffs_.emplace(w, std::move(c));
  }
}

NcSeries NcSeries::constant(const Ring& ring, const Alphabet& alphabet, std::size_t degree, const Value& c) {
  return monomial(ring, alphabet, degree, Word{}, c);
}

NcSeries NcSeries::monomial(const Ring& ring, const Alphabet& alphabet, std::size_t degree, const Word& w,
                            const Value& c) {
  Coeffs m;
  m.emplace(w, c);
  return NcSeries(ring, alphabet, degree, std::move(m));
}

Value NcSeries::coefficient(const Word& w) const {
  auto it = coeffs_.find(w);
  return it == coeffs_.end() ? ring_.zero() : it->second;
}

NcSeries NcSeries::truncate(std::size_t d) const {
  if (d > degree_) throw PreconditionError("cannot raise the truncation degree");
  NcSeries out(ring_, alphabet_, d);
  for (const auto& [w, c] : coeffs_) {
    if (w.size() > d) break;  // graded order: longer words come last
    out.coeffs_.emplace_hint(out.coeffs_.end(), w, c);
  }
  return out;
}

NcSeries NcSeries::with_alphabet(const Alphabet& alphabet) const {
  if (!alphabet.contains(alphabet_)) throw MismatchError("target alphabet does not contain " + alphabet_.letters());
  NcSeries out(ring_, alphabet, degree_);
  out.coeffs_ = coeffs_;
  return out;
}

NcSeries NcSeries::scaled(const Value& c) const {
  NcSeries out(ring_, alphabet_, degree_);
  for (const auto& [w, v] : coeffs_) {
    Value p = ring_.mul(c, v);
    if (!ring_.is_zero(p)) out.coeffs_.emplace_hint(out.coeffs_.end(), w, std::move(p));
  }
  return out;
}

NcSeries NcSeries::times_letter(char c) const {
  if (!alphabet_.contains(c)) throw PreconditionError(std::string("letter '") + c + "' is not in the alphabet");
  NcSeries out(ring_, alphabet_, degree_);
  for (const auto& [w, v] : coeffs_) {
    if (w.size() + 1 > degree_) continue;
    out.coeffs_.emplace(Word(w.str() + c), v);
  }
  return out;
}

namespace {

void require_compatible(const NcSeries& u, const NcSeries& v) {
  if (!(u.ring() == v.ring())) throw MismatchError("ring mismatch: " + u.ring().name() + " vs " + v.ring().name());
  if (!(u.alphabet() == v.alphabet()))
    throw MismatchError("alphabet mismatch: " + u.alphabet().letters() + " vs " + v.alphabet().letters());
}

}  // namespace

NcSeries operator+(const NcSeries& u, const NcSeries& v) {
  require_compatible(u, v);
  const std::size_t d = std::min(u.degree_, v.degree_);
  NcSeries out = u.degree_ == d ? u : u.truncate(d);
  const Ring& r = u.ring_;
  for (const auto& [w, c] : v.coeffs_) {
    if (w.size() > d) break;
    auto [it, inserted] = out.coeffs_.try_emplace(w, c);
    if (!inserted) {
      it->second = r.add(it->second, c);
      if (r.is_zero(it->second)) out.coeffs_.erase(it);
    }
  }
  return out;
}

NcSeries operator-(const NcSeries& u) { return u.scaled(u.ring_.neg(u.ring_.one())); }

NcSeries operator-(const NcSeries& u, const NcSeries& v) { return u + (-v); }

NcSeries operator*(const NcSeries& u, const NcSeries& v) {
  require_compatible(u, v);
  const std::size_t d = std::min(u.degree_, v.degree_);
  const Ring& r = u.ring_;
  NcSeries out(r, u.alphabet_, d);
  for (const auto& [w1, c1] : u.coeffs_) {
    if (w1.size() > d) break;
    for (const auto& [w2, c2] : v.coeffs_) {
      if (w1.size() + w2.size() > d) break;
      Value p = r.mul(c1, c2);
      if (r.is_zero(p)) continue;
      auto [it, inserted] = out.coeffs_.try_emplace(w1 + w2, p);
      if (!inserted) it->second = r.add(it->second, p);
    }
  }
  std::erase_if(out.coeffs_, [&](const auto& kv) { return r.is_zero(kv.second); });
  return out;
}

bool operator==(const NcSeries& u, const NcSeries& v) {
  return u.degree_ == v.degree_ && u.ring_ == v.ring_ && u.alphabet_ == v.alphabet_ && u.coeffs_ == v.coeffs_;
}

std::string NcSeries::to_string() const {
  if (coeffs_.empty()) return "0";
  const bool numeric = ring_.is_numeric();
  std::string out;
  bool first = true;
  for (const auto& [w, c] : coeffs_) {
    std::string word;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) word += "*";
      word += w[i];
    }
    bool negative = false;
    std::string coeff;
    if (numeric) {
      negative = ring_.sign(c) < 0;
      const Value mag = negative ? ring_.neg(c) : c;
      if (!ring_.is_one(mag) || w.empty()) coeff = ring_.format(mag);
    } else if (!ring_.is_one(c) || w.empty()) {
      coeff = ring_.is_one(c) ? "1" : "[" + ring_.format(c) + "]";
    }
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    if (coeff.empty())
      out += word;
    else if (word.empty())
      out += coeff;
    else
      out += coeff + "*" + word;
  }
  return out;
}

NcSeries series_mul(const NcSeries& u, const NcSeries& v) { return u * v; }

std::optional<NcSeries> series_invert(const NcSeries& u) {
  const Ring& r = u.ring();
  const auto cinv = r.invert(u.constant_term());
  if (!cinv) return std::nullopt;
  const NcSeries one = NcSeries::one(r, u.alphabet(), u.degree());
  const NcSeries tail = split_constant(u).second;
  // v_{k+1} = c^{-1} (1 - (u - c) v_k); each round fixes one more degree.
  NcSeries v = NcSeries::constant(r, u.alphabet(), u.degree(), *cinv);
  for (std::size_t k = 0; k < u.degree(); ++k) v = (one - tail * v).scaled(*cinv);
  return v;
}

std::pair<Value, NcSeries> split_constant(const NcSeries& u) {
  NcSeries::Coeffs tail = u.coeffs();
  tail.erase(Word{});
  return {u.constant_term(), NcSeries(u.ring(), u.alphabet(), u.degree(), std::move(tail))};
}

std::vector<Word> support(const NcSeries& u) {
  std::vector<Word> out;
  out.reserve(u.coeffs().size());
  for (const auto& kv : u.coeffs()) out.push_back(kv.first);
  return out;
}

NcSeries laurent_embed(long m, std::size_t d, const Ring& ring, char letter, const Alphabet& alphabet) {
  // Generalized binomial coefficients C(m, k) are integers for every m.
  NcSeries::Coeffs coeffs;
  BigInt binom = 1;
  std::string word;
  for (std::size_t k = 0; k <= d; ++k) {
    if (binom == 0) break;
    coeffs.emplace(Word(word), ring.from_bigint(binom));
    binom = binom * (BigInt(m) - BigInt(static_cast<unsigned long>(k))) / BigInt(static_cast<unsigned long>(k + 1));
    word += letter;
  }
  return NcSeries(ring, alphabet, d, std::move(coeffs));
}

// ---- parsing -----------------------------------------------------------------

namespace {

class SeriesParser {
 public:
  SeriesParser(std::string_view text, const Ring& ring, std::size_t degree, const Alphabet& alphabet)
      : sc_(text), ring_(ring), degree_(degree), alphabet_(alphabet) {}

  NcSeries parse() {
    if (sc_.at_end()) sc_.fail("empty series expression");
    NcSeries v = expr();
    if (!sc_.at_end()) sc_.fail(std::string("unexpected '") + sc_.peek() + "'");
    return v;
  }

 private:
  NcSeries zero() const { return NcSeries(ring_, alphabet_, degree_); }

  NcSeries expr() {
    NcSeries acc = term();
    while (true) {
      const char c = sc_.peek();
      if (c == '+') {
        sc_.get();
        acc = acc + term();
      } else if (c == '-') {
        sc_.get();
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  bool starts_factor(char c) const {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '(' || c == '[' || alphabet_.contains(c) ||
           c == 'i';
  }

  NcSeries term() {
    NcSeries acc = unary();
    while (true) {
      const char c = sc_.peek();
      if (c == '*') {
        sc_.get();
        acc = acc * unary();
      } else if (c != '\0' && starts_factor(c)) {
        acc = acc * power();
      } else {
        return acc;
      }
    }
  }

  NcSeries unary() {
    if (sc_.peek() == '-') {
      sc_.get();
      return -unary();
    }
    if (sc_.peek() == '+') {
      sc_.get();
      return unary();
    }
    return power();
  }

  NcSeries power() {
    NcSeries base = atom();
    if (sc_.peek() != '^') return base;
    sc_.get();
    bool negative = false;
    if (sc_.peek() == '-') {
      sc_.get();
      negative = true;
    }
    const std::size_t at = sc_.position();
    auto digits = sc_.digits();
    if (digits.empty() || digits.size() > 6) sc_.fail_at("expected an exponent", at);
    const long e = std::stol(std::string(digits));
    if (negative) base = invert(base, at);
    NcSeries out = NcSeries::one(ring_, alphabet_, degree_);
    for (long i = 0; i < e; ++i) out = out * base;
    return out;
  }

  NcSeries invert(const NcSeries& u, std::size_t at) {
    auto inv = series_invert(u);
    if (!inv) sc_.fail_at("constant term of " + u.to_string() + " is not a unit", at);
    return *inv;
  }

  NcSeries atom() {
    const char c = sc_.peek();
    const std::size_t start = sc_.position();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      auto num = sc_.digits();
      Rational q{BigInt{std::string(num)}};
      if (sc_.peek() == '/') {
        sc_.get();
        const std::size_t at = sc_.position();
        auto den = sc_.digits();
        if (den.empty()) sc_.fail_at("expected a denominator", at);
        BigInt dv{std::string(den)};
        if (dv == 0) sc_.fail_at("zero denominator", at);
        q = Rational(q.get_num(), dv);
        q.canonicalize();
      }
      auto v = ring_.from_rational(q);
      if (!v) sc_.fail_at("literal " + q.get_str() + " is not an element of " + ring_.name(), start);
      return NcSeries::constant(ring_, alphabet_, degree_, *v);
    }
    if (c == '(') {
      sc_.get();
      NcSeries v = expr();
      sc_.expect(')');
      return v;
    }
    if (c == '[') {
      sc_.get();
      const std::size_t inner = sc_.position();
      const auto close = sc_.text().find(']', inner);
      if (close == std::string_view::npos) sc_.fail_at("unterminated '['", start);
      Value v;
      try {
        v = ring_.parse_element(sc_.text().substr(inner, close - inner));
      } catch (const ParseError& e) {
        sc_.fail_at(std::string("bad ring literal: ") + e.what(), inner + e.column() - 1);
      }
      sc_.reset(close + 1);
      return NcSeries::constant(ring_, alphabet_, degree_, v);
    }
    if (sc_.text().substr(start).starts_with("inv") && !alphabet_.contains('i')) {
      sc_.reset(start + 3);
      sc_.expect('(');
      NcSeries v = expr();
      sc_.expect(')');
      return invert(v, start);
    }
    if (alphabet_.contains(c)) {
      sc_.get();
      return NcSeries::monomial(ring_, alphabet_, degree_, Word::letter(c), ring_.one());
    }
    if (c == '\0') sc_.fail("unexpected end of expression");
    sc_.fail(std::string("unexpected '") + c + "'");
  }

  detail::Scanner sc_;
  const Ring& ring_;
  std::size_t degree_;
  const Alphabet& alphabet_;
};

}  // namespace

NcSeries parse_series(std::string_view text, const Ring& ring, std::size_t degree, const Alphabet& alphabet) {
  return SeriesParser(text, ring, degree, alphabet).parse();
}

}  // namespace ncalg
