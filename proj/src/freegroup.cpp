#include "ncalg/freegroup.hpp"

#include <algorithm>
#include <cctype>
#include <random>

#include "ncalg/detail/scanner.hpp"
#include "ncalg/errors.hpp"

namespace ncalg {

namespace {

constexpr std::string_view kGenNames = "hkmnpqrstuvw";

char gen_letter(std::uint32_t gen, bool inverse) {
  if (gen >= kGenNames.size()) throw UnsupportedError("too many generators to print");
  const char c = kGenNames[gen];
  return inverse ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
}

// Appends one syllable to a reduced word, cancelling as needed.
void push_reduced(std::vector<Syllable>& out, Syllable s) {
  if (s.exp == 0) return;
  while (true) {
    if (out.empty() || out.back().gen != s.gen) {
      out.push_back(s);
      return;
    }
    const long e = out.back().exp + s.exp;
    out.pop_back();
    if (e == 0) return;
    s.exp = e;
  }
}

}  // namespace

GroupWord::GroupWord(const std::vector<Syllable>& syllables) {
  for (const auto& s : syllables) push_reduced(syl_, s);
}

GroupWord GroupWord::generator(std::uint32_t gen, long exp) { return GroupWord({Syllable{gen, exp}}); }

std::size_t GroupWord::letter_length() const noexcept {
  std::size_t n = 0;
  for (const auto& s : syl_) n += static_cast<std::size_t>(std::labs(s.exp));
  return n;
}

std::uint32_t GroupWord::rank_used() const noexcept {
  std::uint32_t r = 0;
  for (const auto& s : syl_) r = std::max(r, s.gen + 1);
  return r;
}

GroupWord GroupWord::inverse() const {
  GroupWord out;
  for (auto it = syl_.rbegin(); it != syl_.rend(); ++it) out.syl_.push_back({it->gen, -it->exp});
  return out;
}

std::string GroupWord::to_string() const {
  if (syl_.empty()) return "1";
  std::string out;
  for (const auto& s : syl_) {
    if (s.exp == 1 || s.exp == -1) {
      out += gen_letter(s.gen, s.exp < 0);
    } else {
      out += gen_letter(s.gen, false);
      out += "^" + std::to_string(s.exp);
    }
  }
  return out;
}

GroupWord operator*(const GroupWord& u, const GroupWord& v) {
  GroupWord out = u;
  for (const auto& s : v.syl_) push_reduced(out.syl_, s);
  return out;
}

std::strong_ordering operator<=>(const GroupWord& u, const GroupWord& v) {
  if (auto c = u.letter_length() <=> v.letter_length(); c != 0) return c;
  return u.syl_ <=> v.syl_;
}

GroupWord word_mul(const GroupWord& u, const GroupWord& v) { return u * v; }

namespace {

// Parses letters with optional exponents until a non-letter is reached.
// Returns nullopt if no letter was consumed.
std::optional<GroupWord> scan_word(detail::Scanner& sc) {
  std::vector<Syllable> syl;
  while (true) {
    const char c = sc.peek();
    const auto pos = kGenNames.find(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (c == '\0' || pos == std::string_view::npos) break;
    sc.get();
    long e = std::isupper(static_cast<unsigned char>(c)) ? -1 : 1;
    if (sc.consume('^')) {
      long sign = 1;
      if (sc.consume('-')) sign = -1;
      const std::size_t at = sc.position();
      auto d = sc.digits();
      if (d.empty() || d.size() > 9) sc.fail_at("expected an exponent", at);
      e *= sign * std::stol(std::string(d));
    }
    syl.push_back({static_cast<std::uint32_t>(pos), e});
  }
  if (syl.empty()) return std::nullopt;
  return GroupWord(syl);
}

}  // namespace

GroupWord parse_group_word(std::string_view text) {
  detail::Scanner sc(text);
  if (sc.peek() == '1') {
    sc.get();
    if (!sc.at_end()) sc.fail("unexpected input after identity '1'");
    return GroupWord{};
  }
  auto w = scan_word(sc);
  if (!w) sc.fail("expected a group word over h, k, H, K");
  if (!sc.at_end()) sc.fail(std::string("unexpected '") + sc.peek() + "'");
  return *w;
}

std::vector<GroupWord> enumerate_reduced_words(std::size_t max_len, std::uint32_t rank) {
  std::vector<GroupWord> out{GroupWord{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (std::uint32_t g = 0; g < rank; ++g) {
        for (long e : {1L, -1L}) {
          GroupWord w = out[i] * GroupWord::generator(g, e);
          if (w.letter_length() == len) out.push_back(std::move(w));
        }
      }
    }
    begin = end;
  }
  return out;
}

// ---- group ring ----------------------------------------------------------------

GroupRingElement::GroupRingElement(Ring ring) : ring_(std::move(ring)) {}

GroupRingElement::GroupRingElement(Ring ring, Terms terms) : ring_(std::move(ring)) {
  for (auto& [w, c] : terms) {
    if (!ring_.is_valid(c)) throw PreconditionError("coefficient is not in normal form for " + ring_.name());
    if (!ring_.is_zero(c)) terms_.emplace(w, std::move(c));
  }
}

GroupRingElement GroupRingElement::word(const Ring& ring, const GroupWord& w) { return word(ring, w, ring.one()); }

GroupRingElement GroupRingElement::word(const Ring& ring, const GroupWord& w, const Value& c) {
  return GroupRingElement(ring, Terms{{w, c}});
}

Value GroupRingElement::augmentation() const {
  Value acc = ring_.zero();
  for (const auto& kv : terms_) acc = ring_.add(acc, kv.second);
  return acc;
}

GroupRingElement GroupRingElement::scaled(const Value& c) const {
  Terms t;
  for (const auto& [w, v] : terms_) t.emplace(w, ring_.mul(c, v));
  return GroupRingElement(ring_, std::move(t));
}

std::string GroupRingElement::to_string() const {
  if (terms_.empty()) return "0";
  const bool numeric = ring_.is_numeric();
  std::string out;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    bool negative = false;
    std::string coeff;
    if (numeric) {
      negative = ring_.sign(c) < 0;
      const Value mag = negative ? ring_.neg(c) : c;
      if (!ring_.is_one(mag) || w.empty()) coeff = ring_.format(mag);
    } else if (!ring_.is_one(c) || w.empty()) {
      coeff = ring_.is_one(c) ? "1" : "[" + ring_.format(c) + "]";
    }
    out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
    first = false;
    if (w.empty())
      out += coeff;
    else if (coeff.empty())
      out += w.to_string();
    else
      out += coeff + "*" + w.to_string();
  }
  return out;
}

namespace {
void require_same_ring(const GroupRingElement& u, const GroupRingElement& v) {
  if (!(u.ring() == v.ring())) throw MismatchError("ring mismatch: " + u.ring().name() + " vs " + v.ring().name());
}
}  // namespace

GroupRingElement operator+(const GroupRingElement& u, const GroupRingElement& v) {
  require_same_ring(u, v);
  GroupRingElement::Terms t = u.terms_;
  for (const auto& [w, c] : v.terms_) {
    auto [it, inserted] = t.try_emplace(w, c);
    if (!inserted) it->second = u.ring_.add(it->second, c);
  }
  return GroupRingElement(u.ring_, std::move(t));
}

GroupRingElement operator-(const GroupRingElement& u, const GroupRingElement& v) {
  return u + v.scaled(v.ring().neg(v.ring().one()));
}

GroupRingElement operator*(const GroupRingElement& u, const GroupRingElement& v) {
  require_same_ring(u, v);
  const Ring& r = u.ring_;
  GroupRingElement::Terms t;
  for (const auto& [w1, c1] : u.terms_) {
    for (const auto& [w2, c2] : v.terms_) {
      Value p = r.mul(c1, c2);
      auto [it, inserted] = t.try_emplace(w1 * w2, p);
      if (!inserted) it->second = r.add(it->second, p);
    }
  }
  return GroupRingElement(r, std::move(t));
}

bool operator==(const GroupRingElement& u, const GroupRingElement& v) {
  return u.ring_ == v.ring_ && u.terms_ == v.terms_;
}

GroupRingElement parse_group_ring_element(std::string_view text, const Ring& ring) {
  detail::Scanner sc(text);
  GroupRingElement total(ring);
  if (sc.at_end()) sc.fail("empty group ring expression");
  bool first = true;
  while (!sc.at_end()) {
    bool negative = false;
    if (first) {
      while (sc.peek() == '+' || sc.peek() == '-') negative ^= (sc.get() == '-');
    } else {
      const char c = sc.get();
      if (c != '+' && c != '-') sc.fail_at(std::string("unexpected '") + c + "'", sc.position() - 1);
      negative = (c == '-');
    }
    first = false;
    const std::size_t start = sc.position();
    std::optional<Value> coeff;
    const char c = sc.peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      auto num = sc.digits();
      Rational q{BigInt{std::string(num)}};
      if (sc.peek() == '/') {
        sc.get();
        auto den = sc.digits();
        if (den.empty()) sc.fail("expected a denominator");
        BigInt d{std::string(den)};
        if (d == 0) sc.fail("zero denominator");
        q = Rational(q.get_num(), d);
        q.canonicalize();
      }
      coeff = ring.from_rational(q);
      if (!coeff) sc.fail_at("literal " + q.get_str() + " is not an element of " + ring.name(), start);
    } else if (c == '[') {
      sc.get();
      const std::size_t inner = sc.position();
      const auto close = sc.text().find(']', inner);
      if (close == std::string_view::npos) sc.fail_at("unterminated '['", start);
      try {
        coeff = ring.parse_element(sc.text().substr(inner, close - inner));
      } catch (const ParseError& e) {
        sc.fail_at(std::string("bad ring literal: ") + e.what(), inner + e.column() - 1);
      }
      sc.reset(close + 1);
    }
    if (coeff) sc.consume('*');
    auto w = scan_word(sc);
    if (!coeff && !w) sc.fail("expected a term");
    Value cv = coeff ? *coeff : ring.one();
    if (negative) cv = ring.neg(cv);
    total = total + GroupRingElement::word(ring, w ? *w : GroupWord{}, cv);
  }
  return total;
}

// ---- Magnus map ------------------------------------------------------------------

Alphabet magnus_alphabet(std::uint32_t rank) {
  if (rank == 0 || rank > 12) throw PreconditionError("rank must be between 1 and 12");
  std::string letters;
  for (std::uint32_t i = 0; i < rank; ++i) letters += static_cast<char>('a' + i);
  return Alphabet(letters);
}

namespace {

// coeffs * (1 + x)^e, truncated at degree d.
NcSeries::Coeffs times_binomial(const NcSeries::Coeffs& coeffs, const Ring& ring, char x, long e, std::size_t d) {
  std::vector<Value> binom;
  BigInt b = 1;
  for (std::size_t k = 0; k <= d && b != 0; ++k) {
    binom.push_back(ring.from_bigint(b));
    b = b * (BigInt(e) - BigInt(static_cast<unsigned long>(k))) / BigInt(static_cast<unsigned long>(k + 1));
  }
  NcSeries::Coeffs out;
  for (const auto& [w, c] : coeffs) {
    std::string s = w.str();
    for (std::size_t k = 0; k < binom.size() && w.size() + k <= d; ++k) {
      if (k) s += x;
      Value p = ring.mul(c, binom[k]);
      if (ring.is_zero(p)) continue;
      auto [it, inserted] = out.try_emplace(Word(s), p);
      if (!inserted) it->second = ring.add(it->second, p);
    }
  }
  std::erase_if(out, [&](const auto& kv) { return ring.is_zero(kv.second); });
  return out;
}

}  // namespace

NcSeries magnus(const GroupWord& w, const Ring& ring, std::size_t degree, std::uint32_t rank) {
  if (w.rank_used() > rank) throw PreconditionError("word uses more generators than the rank");
  NcSeries::Coeffs coeffs{{Word{}, ring.one()}};
  for (const auto& s : w.syllables())
    coeffs = times_binomial(coeffs, ring, static_cast<char>('a' + s.gen), s.exp, degree);
  return NcSeries(ring, magnus_alphabet(rank), degree, std::move(coeffs));
}

NcSeries magnus(const GroupRingElement& f, std::size_t degree, std::uint32_t rank) {
  NcSeries out(f.ring(), magnus_alphabet(rank), degree);
  for (const auto& [w, c] : f.terms()) out = out + magnus(w, f.ring(), degree, rank).scaled(c);
  return out;
}

FoxStrip fox_strip(const NcSeries& u) {
  if (!(u.alphabet() == Alphabet("ab"))) throw PreconditionError("fox_strip requires alphabet {a,b}");
  if (u.degree() == 0) throw PreconditionError("fox_strip requires degree >= 1");
  NcSeries::Coeffs da, db;
  for (const auto& [w, c] : u.coeffs()) {
    if (w.empty()) continue;
    (w.back() == 'a' ? da : db).emplace(w.prefix(w.size() - 1), c);
  }
  const Ring& r = u.ring();
  return FoxStrip{u.constant_term(), NcSeries(r, u.alphabet(), u.degree() - 1, std::move(da)),
                  NcSeries(r, u.alphabet(), u.degree() - 1, std::move(db))};
}

GroupRingElement fox_derivative(const GroupRingElement& f, std::uint32_t gen) {
  const Ring& r = f.ring();
  GroupRingElement::Terms t;
  auto add = [&](const GroupWord& w, const Value& c) {
    auto [it, inserted] = t.try_emplace(w, c);
    if (!inserted) it->second = r.add(it->second, c);
  };
  for (const auto& [w, c] : f.terms()) {
    GroupWord prefix;
    const Value minus_c = r.neg(c);
    for (const auto& s : w.syllables()) {
      const long step = s.exp > 0 ? 1 : -1;
      const GroupWord letter = GroupWord::generator(s.gen, step);
      for (long i = 0; i < std::labs(s.exp); ++i) {
        if (s.gen == gen && step > 0) add(prefix, c);  // D(g) = 1 after the prefix
        prefix = prefix * letter;
        if (s.gen == gen && step < 0) add(prefix, minus_c);  // D(g^-1) = -g^-1
      }
    }
  }
  return GroupRingElement(r, std::move(t));
}

// ---- ordering --------------------------------------------------------------------

const char* to_string(Order o) {
  switch (o) {
    case Order::LT: return "LT";
    case Order::EQ: return "EQ";
    case Order::GT: return "GT";
    case Order::Undecided: return "Undecided";
  }
  return "?";
}

namespace {

// Sign of the graded-least coefficient of x - y, 0 if x == y.
int leading_sign(const NcSeries& x, const NcSeries& y) {
  const Ring& r = x.ring();
  auto i = x.coeffs().begin();
  auto j = y.coeffs().begin();
  while (i != x.coeffs().end() || j != y.coeffs().end()) {
    if (j == y.coeffs().end() || (i != x.coeffs().end() && i->first < j->first)) return r.sign(i->second);
    if (i == x.coeffs().end() || j->first < i->first) return -r.sign(j->second);
    if (!(i->second == j->second)) return r.sign(r.sub(i->second, j->second));
    ++i;
    ++j;
  }
  return 0;
}

}  // namespace

OrderResult order_compare(const GroupWord& u, const GroupWord& v, std::optional<std::size_t> cap) {
  if (u == v) return {Order::EQ, 0};
  const Ring z = Ring::integers();
  const std::uint32_t rank = std::max<std::uint32_t>({2, u.rank_used(), v.rank_used()});
  const std::size_t start = std::max<std::size_t>({u.letter_length(), v.letter_length(), 1});
  const std::size_t limit = cap.value_or(4 * start);
  std::size_t d = std::min(start, limit);
  while (true) {
    const int s = leading_sign(magnus(u, z, d, rank), magnus(v, z, d, rank));
    if (s != 0) return {s > 0 ? Order::GT : Order::LT, d};
    if (d >= limit) return {Order::Undecided, limit};
    d = std::min(2 * d, limit);
  }
}

// ---- kernels ---------------------------------------------------------------------

namespace {

bool series_less(const NcSeries& x, const NcSeries& y) {
  const Ring& r = x.ring();
  return std::lexicographical_compare(x.coeffs().begin(), x.coeffs().end(), y.coeffs().begin(), y.coeffs().end(),
                                      [&](const auto& p, const auto& q) {
                                        if (p.first != q.first) return p.first < q.first;
                                        return r.value_less(p.second, q.second);
                                      });
}

}  // namespace

SweepReport injectivity_sweep(std::size_t max_len, std::size_t degree, const Ring& ring, Execution exec) {
  if (degree < max_len) throw PreconditionError("injectivity_sweep requires degree >= max length");
  SweepReport report;
  report.max_len = max_len;
  report.degree = degree;
  const auto words = enumerate_reduced_words(max_len);
  report.words = words.size();
  std::vector<NcSeries> images(words.size(), NcSeries(ring, magnus_alphabet(2), degree));
  const long n = static_cast<long>(words.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < n; ++i) images[i] = magnus(words[i], ring, degree);
  } else {
    for (long i = 0; i < n; ++i) images[i] = magnus(words[i], ring, degree);
  }
  std::vector<std::size_t> idx(words.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return series_less(images[a], images[b]); });
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (images[idx[i - 1]] == images[idx[i]]) {
      const auto [a, b] = std::minmax(idx[i - 1], idx[i]);
      report.collisions.emplace_back(words[a], words[b]);
    }
  }
  std::sort(report.collisions.begin(), report.collisions.end());
  return report;
}

namespace {

Order flip(Order o) {
  if (o == Order::LT) return Order::GT;
  if (o == Order::GT) return Order::LT;
  return o;
}

// Per-row partial results so the parallel path can merge in row order.
struct RowReport {
  OrderAxiomReport r;
  void note(std::string s) {
    if (r.findings.size() < 8) r.findings.push_back(std::move(s));
  }
};

GroupWord random_word(std::mt19937_64& rng, std::size_t max_len) {
  const std::size_t len = std::uniform_int_distribution<std::size_t>(1, max_len)(rng);
  GroupWord w;
  while (w.letter_length() < len) {
    const auto g = static_cast<std::uint32_t>(std::uniform_int_distribution<int>(0, 1)(rng));
    const long e = std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1;
    w = w * GroupWord::generator(g, e);
  }
  return w;
}

RowReport order_row(std::size_t i, const std::vector<GroupWord>& words, const std::vector<Order>& sign_vs_one,
                    const std::vector<GroupWord>& conjugators, std::uint64_t seed) {
  RowReport row;
  auto& rep = row.r;
  const GroupWord& u = words[i];
  auto cmp = [&](const GroupWord& x, const GroupWord& y) {
    const OrderResult res = order_compare(x, y);
    if (res.order == Order::Undecided) {
      ++rep.undecided;
      row.note("undecided: " + x.to_string() + " vs " + y.to_string());
    }
    return res.order;
  };
  for (std::size_t j = 0; j < words.size(); ++j) {
    const GroupWord& v = words[j];
    ++rep.pairs;
    const Order uv = cmp(u, v);
    const Order vu = cmp(v, u);
    const bool eq = (u == v);
    if ((uv == Order::EQ) != eq || vu != flip(uv)) {
      ++rep.totality_failures;
      row.note("totality: " + u.to_string() + " vs " + v.to_string());
    }
    // Cone closure.
    if (sign_vs_one[i] == Order::GT && sign_vs_one[j] == Order::GT) {
      ++rep.cone_checks;
      if (cmp(u * v, GroupWord{}) != Order::GT) {
        ++rep.cone_failures;
        row.note("cone: " + u.to_string() + " * " + v.to_string());
      }
    }
    // Translation by a pseudo-random w, seeded per pair.
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (i * words.size() + j + 1)));
    const GroupWord w = random_word(rng, 3);
    ++rep.translation_checks;
    const Order right = cmp(u * w, v * w);
    const Order left = cmp(w * u, w * v);
    if (right != uv || left != uv) {
      ++rep.translation_failures;
      row.note("translation: " + u.to_string() + ", " + v.to_string() + " by " + w.to_string());
    }
    // Transitivity on a sparse sample of triples.
    if ((i + j) % 7 == 0) {
      const GroupWord& t = words[(i * 31 + j * 17) % words.size()];
      const Order vt = cmp(v, t);
      if (uv == vt && uv != Order::EQ) {
        ++rep.transitivity_checks;
        if (cmp(u, t) != uv) {
          ++rep.transitivity_failures;
          row.note("transitivity: " + u.to_string() + ", " + v.to_string() + ", " + t.to_string());
        }
      }
    }
  }
  if (sign_vs_one[i] == Order::GT) {
    for (const auto& g : conjugators) {
      ++rep.conjugation_checks;
      if (cmp(g * u * g.inverse(), GroupWord{}) != Order::GT) {
        ++rep.conjugation_failures;
        row.note("conjugation: " + u.to_string() + " by " + g.to_string());
      }
    }
  }
  return row;
}

void merge(OrderAxiomReport& into, const OrderAxiomReport& r) {
  into.pairs += r.pairs;
  into.totality_failures += r.totality_failures;
  into.transitivity_checks += r.transitivity_checks;
  into.transitivity_failures += r.transitivity_failures;
  into.cone_checks += r.cone_checks;
  into.cone_failures += r.cone_failures;
  into.conjugation_checks += r.conjugation_checks;
  into.conjugation_failures += r.conjugation_failures;
  into.translation_checks += r.translation_checks;
  into.translation_failures += r.translation_failures;
  into.undecided += r.undecided;
  for (const auto& f : r.findings) {
    if (into.findings.size() < 8) into.findings.push_back(f);
  }
}

}  // namespace

OrderAxiomReport check_order_axioms(std::size_t max_len, std::uint64_t seed, Execution exec) {
  const auto words = enumerate_reduced_words(max_len);
  std::vector<Order> sign_vs_one(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) sign_vs_one[i] = order_compare(words[i], GroupWord{}).order;
  // All words of length <= 2 plus a few seeded longer ones.
  std::vector<GroupWord> conjugators = enumerate_reduced_words(2);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 8; ++i) conjugators.push_back(random_word(rng, 4));

  std::vector<RowReport> rows(words.size());
  const long n = static_cast<long>(words.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) rows[i] = order_row(i, words, sign_vs_one, conjugators, seed);
  } else {
    for (long i = 0; i < n; ++i) rows[i] = order_row(i, words, sign_vs_one, conjugators, seed);
  }
  OrderAxiomReport report;
  report.words = words.size();
  for (const auto& row : rows) merge(report, row.r);
  return report;
}

}  // namespace ncalg
