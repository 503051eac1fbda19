#include "ncalg/ring.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

#include "ncalg/detail/scanner.hpp"
#include "ncalg/errors.hpp"

namespace ncalg {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

// ---- integers ------------------------------------------------------------

Value make_int(const BigInt& n) {
  if (n.fits_slong_p()) return Value{static_cast<std::int64_t>(n.get_si())};
  return Value{n};
}

BigInt as_big(const Value& v) {
  if (const auto* small = std::get_if<std::int64_t>(&v.rep)) return BigInt(static_cast<long>(*small));
  return std::get<BigInt>(v.rep);
}

Value int_add(const Value& u, const Value& v) {
  const auto* a = std::get_if<std::int64_t>(&u.rep);
  const auto* b = std::get_if<std::int64_t>(&v.rep);
  if (a && b) {
    std::int64_t out;
    if (!__builtin_add_overflow(*a, *b, &out)) return Value{out};
  }
  return make_int(as_big(u) + as_big(v));
}

Value int_mul(const Value& u, const Value& v) {
  const auto* a = std::get_if<std::int64_t>(&u.rep);
  const auto* b = std::get_if<std::int64_t>(&v.rep);
  if (a && b) {
    std::int64_t out;
    if (!__builtin_mul_overflow(*a, *b, &out)) return Value{out};
  }
  return make_int(as_big(u) * as_big(v));
}

Value int_neg(const Value& u) {
  if (const auto* a = std::get_if<std::int64_t>(&u.rep)) {
    if (*a != INT64_MIN) return Value{-*a};
  }
  return make_int(-as_big(u));
}

Rational canonical(Rational q) {
  q.canonicalize();
  return q;
}

// ---- residues ------------------------------------------------------------

std::uint64_t mod_of(const IntegersModKind& k) { return k.modulus; }

std::uint64_t reduce_big(const BigInt& n, std::uint64_t m) {
  BigInt r = n % BigInt(std::to_string(m));
  if (r < 0) r += BigInt(std::to_string(m));
  return std::stoull(r.get_str());
}

std::optional<std::uint64_t> mod_inverse(std::uint64_t a, std::uint64_t m) {
  __int128 t = 0, new_t = 1;
  __int128 r = m, new_r = a % m;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) return std::nullopt;
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

// ---- monomial families ---------------------------------------------------

// One rewriting step on a pair of normal monomials.
std::optional<Monomial> combine(MonomialFamily family, const Monomial& u, const Monomial& v) {
  switch (family) {
    case MonomialFamily::Idempotent:
      if (u.empty()) return v;
      if (v.empty()) return u;
      if (u == v) return u;  // e_i e_i -> e_i
      return std::nullopt;   // e_i e_j -> 0
    case MonomialFamily::SquareZero:
      if (u.empty()) return v;
      if (v.empty()) return u;
      return std::nullopt;  // x_i x_j -> 0
    case MonomialFamily::MonomialSubring:
    case MonomialFamily::PolynomialXY:
      return Monomial{u[0] + v[0], u[1] + v[1]};
  }
  return std::nullopt;
}

bool xy_family(MonomialFamily f) {
  return f == MonomialFamily::MonomialSubring || f == MonomialFamily::PolynomialXY;
}

Monomial unit_monomial(MonomialFamily f) { return xy_family(f) ? Monomial{0, 0} : Monomial{}; }

bool monomial_valid(const MonomialQuotientKind& k, const Monomial& m) {
  switch (k.family) {
    case MonomialFamily::Idempotent:
    case MonomialFamily::SquareZero:
      return m.empty() || (m.size() == 1 && m[0] < k.generators);
    case MonomialFamily::MonomialSubring:
      return m.size() == 2 && (m[1] >= 1 || m[0] == 0);
    case MonomialFamily::PolynomialXY:
      return m.size() == 2;
  }
  return false;
}

Poly poly_add(const Poly& u, const Poly& v) {
  Poly out;
  out.terms.reserve(u.terms.size() + v.terms.size());
  auto i = u.terms.begin();
  auto j = v.terms.begin();
  while (i != u.terms.end() || j != v.terms.end()) {
    if (j == v.terms.end() || (i != u.terms.end() && i->first < j->first)) {
      out.terms.push_back(*i++);
    } else if (i == u.terms.end() || j->first < i->first) {
      out.terms.push_back(*j++);
    } else {
      Rational c = i->second + j->second;
      if (c != 0) out.terms.emplace_back(i->first, c);
      ++i;
      ++j;
    }
  }
  return out;
}

Poly poly_neg(Poly u) {
  for (auto& t : u.terms) t.second = -t.second;
  return u;
}

Poly poly_mul(MonomialFamily family, const Poly& u, const Poly& v) {
  std::map<Monomial, Rational> acc;
  for (const auto& [mu, cu] : u.terms) {
    for (const auto& [mv, cv] : v.terms) {
      auto m = combine(family, mu, mv);
      if (!m) continue;
      acc[*m] += cu * cv;
    }
  }
  Poly out;
  for (auto& [m, c] : acc) {
    if (c != 0) out.terms.emplace_back(m, c);
  }
  return out;
}

Rational poly_coefficient(const Poly& p, const Monomial& m) {
  for (const auto& [mm, c] : p.terms) {
    if (mm == m) return c;
  }
  return 0;
}

std::string format_rational(const Rational& q) { return q.get_str(); }

std::string format_monomial(MonomialFamily family, const Monomial& m) {
  switch (family) {
    case MonomialFamily::Idempotent:
      return "e" + std::to_string(m[0]);
    case MonomialFamily::SquareZero:
      return "x" + std::to_string(m[0]);
    case MonomialFamily::MonomialSubring:
    case MonomialFamily::PolynomialXY: {
      std::string out;
      auto power = [&](const char* var, std::uint32_t e) {
        if (e == 0) return;
        if (!out.empty()) out += "*";
        out += var;
        if (e > 1) out += "^" + std::to_string(e);
      };
      power("x", m[0]);
      power("y", m[1]);
      return out;
    }
  }
  return {};
}

std::string format_poly(MonomialFamily family, const Poly& p) {
  if (p.terms.empty()) return "0";
  std::string out;
  bool first = true;
  const Monomial one = unit_monomial(family);
  for (const auto& [m, c] : p.terms) {
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (m == one) {
      out += format_rational(mag);
    } else if (mag == 1) {
      out += format_monomial(family, m);
    } else {
      out += format_rational(mag) + "*" + format_monomial(family, m);
    }
  }
  return out;
}

// Rational literal: digits ['/' digits], no sign.
Rational scan_rational(detail::Scanner& sc) {
  const std::size_t start = sc.position();
  auto num = sc.digits();
  if (num.empty()) sc.fail_at("expected a number", start);
  Rational q{BigInt{std::string(num)}};
  if (sc.peek() == '/') {
    sc.get();
    auto den = sc.digits();
    if (den.empty()) sc.fail("expected a denominator");
    BigInt d(std::string{den});
    if (d == 0) sc.fail("zero denominator");
    q = canonical(Rational(BigInt(std::string(num)), d));
  }
  return q;
}

}  // namespace

bool operator==(const Poly& lhs, const Poly& rhs) { return lhs.terms == rhs.terms; }

bool operator==(const Value& lhs, const Value& rhs) { return lhs.rep == rhs.rep; }

// ---- RingSpec --------------------------------------------------------------

RingSpec RingSpec::integers() { return RingSpec(IntegersKind{}); }

RingSpec RingSpec::integers_mod(std::uint64_t n) {
  if (n < 2) throw PreconditionError("IntegersMod requires n >= 2");
  if (n > (std::uint64_t{1} << 62)) throw PreconditionError("IntegersMod modulus too large");
  return RingSpec(IntegersModKind{n});
}

RingSpec RingSpec::rationals() { return RingSpec(RationalsKind{}); }

RingSpec RingSpec::product(const RingSpec& base, std::size_t copies) {
  if (copies == 0) throw PreconditionError("ProductRing requires at least one copy");
  return RingSpec(ProductRingKind{std::make_shared<const RingSpec>(base), copies});
}

RingSpec RingSpec::idempotent(std::size_t n) {
  if (n == 0) throw PreconditionError("IdempotentRing requires at least one generator");
  return RingSpec(MonomialQuotientKind{MonomialFamily::Idempotent, n});
}

RingSpec RingSpec::square_zero(std::size_t n) {
  if (n == 0) throw PreconditionError("SquareZeroRing requires a nonempty basis");
  return RingSpec(MonomialQuotientKind{MonomialFamily::SquareZero, n});
}

RingSpec RingSpec::monomial_subring() {
  return RingSpec(MonomialQuotientKind{MonomialFamily::MonomialSubring, 0});
}

RingSpec RingSpec::polynomial_xy() {
  return RingSpec(MonomialQuotientKind{MonomialFamily::PolynomialXY, 0});
}

bool operator==(const RingSpec& lhs, const RingSpec& rhs) {
  if (lhs.kind_.index() != rhs.kind_.index()) return false;
  return std::visit(
      Overloaded{
          [](const IntegersKind&, const IntegersKind&) { return true; },
          [](const RationalsKind&, const RationalsKind&) { return true; },
          [](const IntegersModKind& a, const IntegersModKind& b) { return a.modulus == b.modulus; },
          [](const ProductRingKind& a, const ProductRingKind& b) {
            return a.copies == b.copies && *a.base == *b.base;
          },
          [](const MonomialQuotientKind& a, const MonomialQuotientKind& b) {
            return a.family == b.family && a.generators == b.generators;
          },
          [](const auto&, const auto&) { return false; },
      },
      lhs.kind_, rhs.kind_);
}

// ---- Ring ------------------------------------------------------------------

Ring::Ring(RingSpec spec) : spec_(std::make_shared<const RingSpec>(std::move(spec))) {}
Ring::Ring(std::shared_ptr<const RingSpec> spec) : spec_(std::move(spec)) {}

Ring Ring::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c)))
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  auto number_after = [&](std::string_view prefix) -> std::uint64_t {
    const std::string rest = s.substr(prefix.size());
    if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
        rest.size() > 18)
      throw ParseError("invalid ring spec '" + std::string(text) + "'", 1, prefix.size() + 1);
    return std::stoull(rest);
  };
  try {
    if (s == "z") return Ring(RingSpec::integers());
    if (s == "q") return Ring(RingSpec::rationals());
    if (s == "monsub") return Ring(RingSpec::monomial_subring());
    if (s == "qxy") return Ring(RingSpec::polynomial_xy());
    if (s.starts_with("zmod:")) return Ring(RingSpec::integers_mod(number_after("zmod:")));
    if (s.starts_with("prod:q^"))
      return Ring(RingSpec::product(RingSpec::rationals(), number_after("prod:q^")));
    if (s.starts_with("idem:")) return Ring(RingSpec::idempotent(number_after("idem:")));
    if (s.starts_with("sqzero:")) return Ring(RingSpec::square_zero(number_after("sqzero:")));
  } catch (const PreconditionError& e) {
    throw ParseError("invalid ring spec '" + std::string(text) + "': " + e.what(), 1, 1);
  }
  throw ParseError("unknown ring spec '" + std::string(text) + "'", 1, 1);
}

std::string Ring::name() const {
  return std::visit(
      Overloaded{
          [](const IntegersKind&) -> std::string { return "z"; },
          [](const RationalsKind&) -> std::string { return "q"; },
          [](const IntegersModKind& k) -> std::string { return "zmod:" + std::to_string(k.modulus); },
          [](const ProductRingKind& k) -> std::string {
            const std::string base = Ring(k.base).name();
            if (base == "q") return "prod:q^" + std::to_string(k.copies);
            return "prod:(" + base + ")^" + std::to_string(k.copies);
          },
          [](const MonomialQuotientKind& k) -> std::string {
            switch (k.family) {
              case MonomialFamily::Idempotent: return "idem:" + std::to_string(k.generators);
              case MonomialFamily::SquareZero: return "sqzero:" + std::to_string(k.generators);
              case MonomialFamily::MonomialSubring: return "monsub";
              case MonomialFamily::PolynomialXY: return "qxy";
            }
            return "?";
          },
      },
      spec_->kind());
}

Value Ring::zero() const { return from_int(0); }
Value Ring::one() const { return from_int(1); }

Value Ring::from_int(std::int64_t n) const { return from_bigint(BigInt(static_cast<long>(n))); }

Value Ring::from_bigint(const BigInt& n) const {
  return std::visit(
      Overloaded{
          [&](const IntegersKind&) { return make_int(n); },
          [&](const RationalsKind&) { return Value{Rational(n)}; },
          [&](const IntegersModKind& k) { return Value{Residue{reduce_big(n, mod_of(k))}}; },
          [&](const ProductRingKind& k) {
            const Value c = Ring(k.base).from_bigint(n);
            return Value{std::vector<Value>(k.copies, c)};
          },
          [&](const MonomialQuotientKind& k) {
            Poly p;
            if (n != 0) p.terms.emplace_back(unit_monomial(k.family), Rational(n));
            return Value{p};
          },
      },
      spec_->kind());
}

std::optional<Value> Ring::from_rational(const Rational& q0) const {
  const Rational q = canonical(q0);
  if (q.get_den() == 1) return from_bigint(q.get_num());
  return std::visit(
      Overloaded{
          [&](const IntegersKind&) -> std::optional<Value> { return std::nullopt; },
          [&](const RationalsKind&) -> std::optional<Value> { return Value{q}; },
          [&](const IntegersModKind& k) -> std::optional<Value> {
            auto inv = mod_inverse(reduce_big(q.get_den(), k.modulus), k.modulus);
            if (!inv) return std::nullopt;
            return mul(from_bigint(q.get_num()), Value{Residue{*inv}});
          },
          [&](const ProductRingKind& k) -> std::optional<Value> {
            auto c = Ring(k.base).from_rational(q);
            if (!c) return std::nullopt;
            return Value{std::vector<Value>(k.copies, *c)};
          },
          [&](const MonomialQuotientKind& k) -> std::optional<Value> {
            Poly p;
            p.terms.emplace_back(unit_monomial(k.family), q);
            return Value{p};
          },
      },
      spec_->kind());
}

Value Ring::add(const Value& u, const Value& v) const {
  return std::visit(
      Overloaded{
          [&](const IntegersKind&) { return int_add(u, v); },
          [&](const RationalsKind&) {
            return Value{Rational(std::get<Rational>(u.rep) + std::get<Rational>(v.rep))};
          },
          [&](const IntegersModKind& k) {
            const std::uint64_t a = std::get<Residue>(u.rep).r;
            const std::uint64_t b = std::get<Residue>(v.rep).r;
            const std::uint64_t s = a + b;  // moduli are < 2^62
            return Value{Residue{s >= k.modulus ? s - k.modulus : s}};
          },
          [&](const ProductRingKind& k) {
            const Ring base(k.base);
            const auto& a = std::get<std::vector<Value>>(u.rep);
            const auto& b = std::get<std::vector<Value>>(v.rep);
            std::vector<Value> out;
            out.reserve(k.copies);
            for (std::size_t i = 0; i < k.copies; ++i) out.push_back(base.add(a[i], b[i]));
            return Value{std::move(out)};
          },
          [&](const MonomialQuotientKind&) {
            return Value{poly_add(std::get<Poly>(u.rep), std::get<Poly>(v.rep))};
          },
      },
      spec_->kind());
}

Value Ring::neg(const Value& u) const {
  return std::visit(
      Overloaded{
          [&](const IntegersKind&) { return int_neg(u); },
          [&](const RationalsKind&) { return Value{Rational(-std::get<Rational>(u.rep))}; },
          [&](const IntegersModKind& k) {
            const std::uint64_t a = std::get<Residue>(u.rep).r;
            return Value{Residue{a == 0 ? 0 : k.modulus - a}};
          },
          [&](const ProductRingKind& k) {
            const Ring base(k.base);
            std::vector<Value> out;
            for (const auto& c : std::get<std::vector<Value>>(u.rep)) out.push_back(base.neg(c));
            return Value{std::move(out)};
          },
          [&](const MonomialQuotientKind&) { return Value{poly_neg(std::get<Poly>(u.rep))}; },
      },
      spec_->kind());
}

Value Ring::sub(const Value& u, const Value& v) const { return add(u, neg(v)); }

Value Ring::mul(const Value& u, const Value& v) const {
  return std::visit(
      Overloaded{
          [&](const IntegersKind&) { return int_mul(u, v); },
          [&](const RationalsKind&) {
            return Value{Rational(std::get<Rational>(u.rep) * std::get<Rational>(v.rep))};
          },
          [&](const IntegersModKind& k) {
            const unsigned __int128 p = static_cast<unsigned __int128>(std::get<Residue>(u.rep).r) *
                                        std::get<Residue>(v.rep).r;
            return Value{Residue{static_cast<std::uint64_t>(p % k.modulus)}};
          },
          [&](const ProductRingKind& k) {
            const Ring base(k.base);
            const auto& a = std::get<std::vector<Value>>(u.rep);
            const auto& b = std::get<std::vector<Value>>(v.rep);
            std::vector<Value> out;
            out.reserve(k.copies);
            for (std::size_t i = 0; i < k.copies; ++i) out.push_back(base.mul(a[i], b[i]));
            return Value{std::move(out)};
          },
          [&](const MonomialQuotientKind& k) {
            return Value{poly_mul(k.family, std::get<Poly>(u.rep), std::get<Poly>(v.rep))};
          },
      },
      spec_->kind());
}

std::optional<Value> Ring::invert(const Value& u) const {
  return std::visit(
      Overloaded{
          [&](const IntegersKind&) -> std::optional<Value> {
            const BigInt n = as_big(u);
            if (n == 1 || n == -1) return u;
            return std::nullopt;
          },
          [&](const RationalsKind&) -> std::optional<Value> {
            const Rational& q = std::get<Rational>(u.rep);
            if (q == 0) return std::nullopt;
            return Value{canonical(Rational(1) / q)};
          },
          [&](const IntegersModKind& k) -> std::optional<Value> {
            auto inv = mod_inverse(std::get<Residue>(u.rep).r, k.modulus);
            if (!inv) return std::nullopt;
            return Value{Residue{*inv}};
          },
          [&](const ProductRingKind& k) -> std::optional<Value> {
            const Ring base(k.base);
            std::vector<Value> out;
            for (const auto& c : std::get<std::vector<Value>>(u.rep)) {
              auto inv = base.invert(c);
              if (!inv) return std::nullopt;
              out.push_back(*inv);
            }
            return Value{std::move(out)};
          },
          [&](const MonomialQuotientKind& k) -> std::optional<Value> {
            const Poly& p = std::get<Poly>(u.rep);
            const Monomial one = unit_monomial(k.family);
            const Rational c = poly_coefficient(p, one);
            if (c == 0) return std::nullopt;
            switch (k.family) {
              case MonomialFamily::Idempotent: {
                // Coordinates in Q^{n+1}: c on 1 - sum e_i, c + c_i on e_i.
                Poly out;
                const Rational ic = 1 / c;
                out.terms.emplace_back(one, ic);
                for (const auto& [m, ci] : p.terms) {
                  if (m.empty()) continue;
                  if (c + ci == 0) return std::nullopt;
                  Rational d = 1 / (c + ci) - ic;
                  if (d != 0) out.terms.emplace_back(m, canonical(d));
                }
                return Value{out};
              }
              case MonomialFamily::SquareZero: {
                // (c + v)^{-1} = c^{-1} - c^{-2} v
                Poly out;
                const Rational ic = 1 / c;
                for (const auto& [m, ci] : p.terms) {
                  if (m.empty())
                    out.terms.emplace_back(m, canonical(ic));
                  else
                    out.terms.emplace_back(m, canonical(-ic * ic * ci));
                }
                return Value{out};
              }
              case MonomialFamily::MonomialSubring:
              case MonomialFamily::PolynomialXY:
                if (p.terms.size() != 1) return std::nullopt;
                return Value{Poly{{{one, canonical(1 / c)}}}};
            }
            return std::nullopt;
          },
      },
      spec_->kind());
}

bool Ring::is_zero(const Value& u) const { return u == zero(); }
bool Ring::is_one(const Value& u) const { return u == one(); }

bool Ring::is_valid(const Value& u) const {
  return std::visit(
      Overloaded{
          [&](const IntegersKind&) {
            if (std::holds_alternative<std::int64_t>(u.rep)) return true;
            const auto* b = std::get_if<BigInt>(&u.rep);
            return b != nullptr && !b->fits_slong_p();
          },
          [&](const RationalsKind&) {
            const auto* q = std::get_if<Rational>(&u.rep);
            return q != nullptr && canonical(*q) == *q && q->get_den() > 0;
          },
          [&](const IntegersModKind& k) {
            const auto* r = std::get_if<Residue>(&u.rep);
            return r != nullptr && r->r < k.modulus;
          },
          [&](const ProductRingKind& k) {
            const auto* t = std::get_if<std::vector<Value>>(&u.rep);
            if (t == nullptr || t->size() != k.copies) return false;
            const Ring base(k.base);
            return std::all_of(t->begin(), t->end(), [&](const Value& c) { return base.is_valid(c); });
          },
          [&](const MonomialQuotientKind& k) {
            const auto* p = std::get_if<Poly>(&u.rep);
            if (p == nullptr) return false;
            for (std::size_t i = 0; i < p->terms.size(); ++i) {
              if (p->terms[i].second == 0 || !monomial_valid(k, p->terms[i].first)) return false;
              if (i > 0 && !(p->terms[i - 1].first < p->terms[i].first)) return false;
            }
            return true;
          },
      },
      spec_->kind());
}

bool Ring::is_numeric() const {
  const auto& k = spec_->kind();
  return std::holds_alternative<IntegersKind>(k) || std::holds_alternative<RationalsKind>(k) ||
         std::holds_alternative<IntegersModKind>(k);
}

int Ring::sign(const Value& u) const {
  if (const auto* a = std::get_if<std::int64_t>(&u.rep)) return (*a > 0) - (*a < 0);
  if (const auto* b = std::get_if<BigInt>(&u.rep)) return sgn(*b);
  if (const auto* q = std::get_if<Rational>(&u.rep)) return sgn(*q);
  if (const auto* r = std::get_if<Residue>(&u.rep)) return r->r != 0;
  return is_zero(u) ? 0 : 1;
}

std::string Ring::format(const Value& u) const {
  return std::visit(
      Overloaded{
          [&](const IntegersKind&) { return as_big(u).get_str(); },
          [&](const RationalsKind&) { return format_rational(std::get<Rational>(u.rep)); },
          [&](const IntegersModKind&) { return std::to_string(std::get<Residue>(u.rep).r); },
          [&](const ProductRingKind& k) {
            const Ring base(k.base);
            std::string out = "(";
            const auto& t = std::get<std::vector<Value>>(u.rep);
            for (std::size_t i = 0; i < t.size(); ++i) {
              if (i) out += ",";
              out += base.format(t[i]);
            }
            return out + ")";
          },
          [&](const MonomialQuotientKind& k) { return format_poly(k.family, std::get<Poly>(u.rep)); },
      },
      spec_->kind());
}

namespace {

Value parse_numeric(const Ring& ring, detail::Scanner& sc) {
  bool negative = false;
  while (sc.peek() == '+' || sc.peek() == '-') negative ^= (sc.get() == '-');
  const std::size_t start = sc.position();
  Rational q = scan_rational(sc);
  if (negative) q = -q;
  auto v = ring.from_rational(q);
  if (!v) sc.fail_at("literal " + q.get_str() + " is not an element of " + ring.name(), start);
  return *v;
}

Value parse_in(const Ring& ring, detail::Scanner& sc);

Value parse_tuple(const Ring& ring, const ProductRingKind& k, detail::Scanner& sc) {
  const Ring base(k.base);
  if (sc.peek() != '(') {
    const Value c = parse_in(base, sc);
    return Value{std::vector<Value>(k.copies, c)};
  }
  sc.expect('(');
  std::vector<Value> coords;
  while (true) {
    coords.push_back(parse_in(base, sc));
    if (sc.consume(')')) break;
    sc.expect(',');
  }
  if (coords.size() != k.copies)
    sc.fail("expected " + std::to_string(k.copies) + " coordinates for " + ring.name());
  return Value{std::move(coords)};
}

Value parse_poly(const Ring& ring, const MonomialQuotientKind& k, detail::Scanner& sc) {
  Value total = ring.zero();
  bool first = true;
  while (true) {
    bool negative = false;
    if (first) {
      while (sc.peek() == '+' || sc.peek() == '-') negative ^= (sc.get() == '-');
    } else {
      const char c = sc.peek();
      if (c != '+' && c != '-') break;
      sc.get();
      negative = (c == '-');
    }
    first = false;
    const std::size_t term_start = sc.position();
    Rational coeff = 1;
    Value mono = ring.one();
    std::uint32_t xe = 0, ye = 0;
    bool have_factor = false;
    while (true) {
      sc.skip_ws();
      const char c = sc.peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        coeff *= scan_rational(sc);
      } else if ((c == 'e' && k.family == MonomialFamily::Idempotent) ||
                 (c == 'x' && k.family == MonomialFamily::SquareZero)) {
        sc.get();
        const std::size_t at = sc.position();
        auto idx = sc.digits();
        if (idx.empty() || idx.size() > 9) sc.fail_at("expected a generator index", at);
        const std::uint64_t i = std::stoull(std::string(idx));
        if (i >= k.generators)
          sc.fail_at("generator index " + std::to_string(i) + " outside window " +
                         std::to_string(k.generators),
                     at);
        mono = ring.mul(mono, ring.monomial(Monomial{static_cast<std::uint32_t>(i)}));
      } else if ((c == 'x' || c == 'y') && xy_family(k.family)) {
        sc.get();
        std::uint32_t e = 1;
        if (sc.consume('^')) {
          const std::size_t at = sc.position();
          auto d = sc.digits();
          if (d.empty() || d.size() > 6) sc.fail_at("expected an exponent", at);
          e = static_cast<std::uint32_t>(std::stoul(std::string(d)));
        }
        (c == 'x' ? xe : ye) += e;
      } else {
        sc.fail(have_factor ? "expected a factor after '*'" : "expected a term");
      }
      have_factor = true;
      if (!sc.consume('*')) break;
    }
    if (xy_family(k.family)) {
      const Monomial m{xe, ye};
      if (!monomial_valid(k, m)) sc.fail_at("monomial is not in the subring generated by x^i*y", term_start);
      mono = ring.monomial(m);
    }
    Value term = ring.mul(*ring.from_rational(negative ? Rational(-coeff) : coeff), mono);
    total = ring.add(total, term);
  }
  return total;
}

Value parse_in(const Ring& ring, detail::Scanner& sc) {
  return std::visit(
      Overloaded{
          [&](const ProductRingKind& k) { return parse_tuple(ring, k, sc); },
          [&](const MonomialQuotientKind& k) { return parse_poly(ring, k, sc); },
          [&](const auto&) { return parse_numeric(ring, sc); },
      },
      ring.spec().kind());
}

}  // namespace

Value Ring::parse_element(std::string_view text) const {
  detail::Scanner sc(text);
  Value v = parse_in(*this, sc);
  if (!sc.at_end()) sc.fail("unexpected trailing input");
  return v;
}

std::optional<std::uint64_t> Ring::cardinality() const {
  return std::visit(
      Overloaded{
          [&](const IntegersModKind& k) -> std::optional<std::uint64_t> { return k.modulus; },
          [&](const ProductRingKind& k) -> std::optional<std::uint64_t> {
            auto base = Ring(k.base).cardinality();
            if (!base) return std::nullopt;
            std::uint64_t total = 1;
            for (std::size_t i = 0; i < k.copies; ++i) {
              if (__builtin_mul_overflow(total, *base, &total)) return UINT64_MAX;
            }
            return total;
          },
          [&](const auto&) -> std::optional<std::uint64_t> { return std::nullopt; },
      },
      spec_->kind());
}

std::vector<Value> Ring::elements(std::uint64_t limit) const {
  const auto size = cardinality();
  if (!size) throw UnsupportedError("ring " + name() + " is infinite");
  if (*size > limit) throw SizeGuardError("ring " + name() + " has more than " + std::to_string(limit) + " elements");
  if (const auto* k = std::get_if<IntegersModKind>(&spec_->kind())) {
    std::vector<Value> out;
    for (std::uint64_t r = 0; r < k->modulus; ++r) out.push_back(Value{Residue{r}});
    return out;
  }
  const auto& k = std::get<ProductRingKind>(spec_->kind());
  const auto base = Ring(k.base).elements(limit);
  std::vector<Value> out{Value{std::vector<Value>{}}};
  for (std::size_t i = 0; i < k.copies; ++i) {
    std::vector<Value> next;
    for (const auto& prefix : out) {
      for (const auto& c : base) {
        auto t = std::get<std::vector<Value>>(prefix.rep);
        t.push_back(c);
        next.push_back(Value{std::move(t)});
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<Value> Ring::small_elements(int height) const {
  if (cardinality() && *cardinality() <= 4096) return elements();
  std::vector<Value> out;
  auto push = [&](Value v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
  };
  push(zero());
  for (int n = 1; n <= height; ++n) {
    push(from_int(n));
    push(from_int(-n));
  }
  if (std::holds_alternative<RationalsKind>(spec_->kind())) {
    for (int d = 2; d <= height; ++d) {
      for (int n = 1; n <= height; ++n) {
        push(*from_rational(Rational(n, d)));
        push(*from_rational(Rational(-n, d)));
      }
    }
  }
  if (const auto* k = std::get_if<MonomialQuotientKind>(&spec_->kind())) {
    if (xy_family(k->family)) {
      for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(height); ++a) {
        push(monomial(Monomial{a, 1}));
        if (k->family == MonomialFamily::PolynomialXY && a > 0) push(monomial(Monomial{a, 0}));
      }
    } else {
      for (std::size_t i = 0; i < k->generators; ++i) {
        push(monomial(Monomial{static_cast<std::uint32_t>(i)}));
        push(monomial(Monomial{static_cast<std::uint32_t>(i)}, -1));
      }
    }
  }
  if (const auto* k = std::get_if<ProductRingKind>(&spec_->kind())) {
    // Diagonal values plus coordinate indicators.
    for (std::size_t i = 0; i < k->copies; ++i) {
      std::vector<Value> t(k->copies, Ring(k->base).zero());
      t[i] = Ring(k->base).one();
      push(Value{std::move(t)});
    }
  }
  return out;
}

Value Ring::random(std::mt19937_64& rng, int height) const {
  const int h = std::max(height, 1);
  std::uniform_int_distribution<int> small(-(h * h + 1), h * h + 1);
  return std::visit(
      Overloaded{
          [&](const IntegersKind&) { return from_int(small(rng)); },
          [&](const RationalsKind&) {
            std::uniform_int_distribution<int> den(1, h);
            return Value{canonical(Rational(small(rng), den(rng)))};
          },
          [&](const IntegersModKind& k) {
            std::uniform_int_distribution<std::uint64_t> r(0, k.modulus - 1);
            return Value{Residue{r(rng)}};
          },
          [&](const ProductRingKind& k) {
            const Ring base(k.base);
            std::vector<Value> t;
            for (std::size_t i = 0; i < k.copies; ++i) t.push_back(base.random(rng, height));
            return Value{std::move(t)};
          },
          [&](const MonomialQuotientKind& k) {
            std::uniform_int_distribution<int> coeff(-h, h);
            std::uniform_int_distribution<int> den(1, 2);
            std::uniform_int_distribution<int> nterms(0, 3);
            Value out = from_int(coeff(rng));
            const int n = nterms(rng);
            for (int t = 0; t < n; ++t) {
              Monomial m;
              if (xy_family(k.family)) {
                std::uniform_int_distribution<std::uint32_t> ex(0, 3), ey(1, 2);
                m = {ex(rng), ey(rng)};
                if (k.family == MonomialFamily::PolynomialXY) m[1] -= 1;
              } else {
                std::uniform_int_distribution<std::uint32_t> g(0, static_cast<std::uint32_t>(k.generators - 1));
                m = {g(rng)};
              }
              const Rational c = canonical(Rational(coeff(rng), den(rng)));
              if (c != 0) out = add(out, monomial(m, c));
            }
            return out;
          },
      },
      spec_->kind());
}

std::optional<Monomial> Ring::reduce_word(std::span<const Monomial> factors, RewriteOrder order) const {
  const auto* k = std::get_if<MonomialQuotientKind>(&spec_->kind());
  if (k == nullptr) throw UnsupportedError("reduce_word requires a MonomialQuotient ring");
  std::optional<Monomial> acc = unit_monomial(k->family);
  if (order == RewriteOrder::LeftToRight) {
    for (const auto& f : factors) {
      if (!monomial_valid(*k, f)) throw PreconditionError("factor is not a normal monomial");
      acc = combine(k->family, *acc, f);
      if (!acc) return std::nullopt;
    }
  } else {
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
      if (!monomial_valid(*k, *it)) throw PreconditionError("factor is not a normal monomial");
      acc = combine(k->family, *it, *acc);
      if (!acc) return std::nullopt;
    }
  }
  return acc;
}

Value Ring::monomial(const Monomial& m, const Rational& coefficient) const {
  const auto* k = std::get_if<MonomialQuotientKind>(&spec_->kind());
  if (k == nullptr) throw UnsupportedError("monomial() requires a MonomialQuotient ring");
  if (!monomial_valid(*k, m)) throw PreconditionError("monomial outside ring " + name());
  Poly p;
  if (coefficient != 0) p.terms.emplace_back(m, canonical(coefficient));
  return Value{p};
}

bool Ring::value_less(const Value& u, const Value& v) const {
  if (u.rep.index() != v.rep.index()) return u.rep.index() < v.rep.index();
  return std::visit(
      Overloaded{
          [&](std::int64_t a) { return a < std::get<std::int64_t>(v.rep); },
          [&](const BigInt& a) { return a < std::get<BigInt>(v.rep); },
          [&](const Rational& a) { return a < std::get<Rational>(v.rep); },
          [&](Residue a) { return a.r < std::get<Residue>(v.rep).r; },
          [&](const std::vector<Value>& a) {
            const auto& b = std::get<std::vector<Value>>(v.rep);
            const auto* k = std::get_if<ProductRingKind>(&spec_->kind());
            const Ring base = k ? Ring(k->base) : *this;
            return std::lexicographical_compare(
                a.begin(), a.end(), b.begin(), b.end(),
                [&](const Value& x, const Value& y) { return base.value_less(x, y); });
          },
          [&](const Poly& a) {
            const auto& b = std::get<Poly>(v.rep);
            return std::lexicographical_compare(
                a.terms.begin(), a.terms.end(), b.terms.begin(), b.terms.end(),
                [](const auto& x, const auto& y) {
                  if (x.first != y.first) return x.first < y.first;
                  return x.second < y.second;
                });
          },
      },
      u.rep);
}

// ---- RingElement -----------------------------------------------------------

RingElement::RingElement(Ring ring, Value value) : ring_(std::move(ring)), value_(std::move(value)) {
  if (!ring_.is_valid(value_)) throw PreconditionError("value is not in normal form for " + ring_.name());
}

namespace {
void require_same(const RingElement& u, const RingElement& v) {
  if (!(u.ring() == v.ring()))
    throw MismatchError("ring mismatch: " + u.ring().name() + " vs " + v.ring().name());
}
}  // namespace

RingElement operator+(const RingElement& u, const RingElement& v) {
  require_same(u, v);
  return RingElement(u.ring_, u.ring_.add(u.value_, v.value_));
}
RingElement operator-(const RingElement& u, const RingElement& v) {
  require_same(u, v);
  return RingElement(u.ring_, u.ring_.sub(u.value_, v.value_));
}
RingElement operator*(const RingElement& u, const RingElement& v) {
  require_same(u, v);
  return RingElement(u.ring_, u.ring_.mul(u.value_, v.value_));
}
RingElement operator-(const RingElement& u) { return RingElement(u.ring_, u.ring_.neg(u.value_)); }
bool operator==(const RingElement& u, const RingElement& v) {
  return u.ring_ == v.ring_ && u.value_ == v.value_;
}

RingElement ring_add(const RingElement& u, const RingElement& v) { return u + v; }
RingElement ring_mul(const RingElement& u, const RingElement& v) { return u * v; }

std::optional<RingElement> ring_invert(const RingElement& u) {
  auto inv = u.ring().invert(u.value());
  if (!inv) return std::nullopt;
  return RingElement(u.ring(), *inv);
}

// ---- ideal membership ------------------------------------------------------

namespace {

bool monomial_ideal_contains(const MonomialQuotientKind& k, const Poly& elem,
                             std::span<const Value> gens) {
  const Monomial one = unit_monomial(k.family);
  switch (k.family) {
    case MonomialFamily::Idempotent: {
      // R is Q^{n+1} via the orthogonal idempotents e_0..e_{n-1}, 1 - sum e_i.
      // An ideal is determined by its coordinate support.
      auto coords = [&](const Poly& p) {
        std::vector<Rational> out(k.generators + 1, poly_coefficient(p, one));
        for (const auto& [m, c] : p.terms) {
          if (!m.empty()) out[m[0]] += c;
        }
        return out;
      };
      std::vector<bool> covered(k.generators + 1, false);
      for (const auto& g : gens) {
        const auto gc = coords(std::get<Poly>(g.rep));
        for (std::size_t i = 0; i < gc.size(); ++i) covered[i] = covered[i] || gc[i] != 0;
      }
      const auto ec = coords(elem);
      for (std::size_t i = 0; i < ec.size(); ++i) {
        if (!covered[i] && ec[i] != 0) return false;
      }
      return true;
    }
    case MonomialFamily::SquareZero: {
      for (const auto& g : gens) {
        if (poly_coefficient(std::get<Poly>(g.rep), one) != 0) return true;  // unit generator
      }
      if (poly_coefficient(elem, one) != 0) return false;
      // Remaining generators lie in I with I^2 = 0, so the ideal is their Q-span.
      std::vector<std::vector<Rational>> rows;
      for (const auto& g : gens) {
        std::vector<Rational> r(k.generators, 0);
        for (const auto& [m, c] : std::get<Poly>(g.rep).terms) r[m[0]] = c;
        rows.push_back(std::move(r));
      }
      std::vector<Rational> target(k.generators, 0);
      for (const auto& [m, c] : elem.terms) target[m[0]] = c;
      // Reduce target against an echelon form of the generator rows.
      std::vector<std::size_t> pivots;
      std::vector<std::vector<Rational>> basis;
      for (auto& r : rows) {
        for (std::size_t b = 0; b < basis.size(); ++b) {
          if (r[pivots[b]] != 0) {
            const Rational f = r[pivots[b]];
            for (std::size_t j = 0; j < r.size(); ++j) r[j] -= f * basis[b][j];
          }
        }
        auto it = std::find_if(r.begin(), r.end(), [](const Rational& q) { return q != 0; });
        if (it == r.end()) continue;
        const std::size_t p = static_cast<std::size_t>(it - r.begin());
        const Rational inv = 1 / r[p];
        for (auto& q : r) q *= inv;
        for (std::size_t b = 0; b < basis.size(); ++b) {
          if (basis[b][p] != 0) {
            const Rational f = basis[b][p];
            for (std::size_t j = 0; j < r.size(); ++j) basis[b][j] -= f * r[j];
          }
        }
        basis.push_back(r);
        pivots.push_back(p);
      }
      for (std::size_t b = 0; b < basis.size(); ++b) {
        if (target[pivots[b]] != 0) {
          const Rational f = target[pivots[b]];
          for (std::size_t j = 0; j < target.size(); ++j) target[j] -= f * basis[b][j];
        }
      }
      return std::all_of(target.begin(), target.end(), [](const Rational& q) { return q == 0; });
    }
    case MonomialFamily::MonomialSubring:
    case MonomialFamily::PolynomialXY: {
      std::vector<Monomial> gm;
      for (const auto& g : gens) {
        const Poly& p = std::get<Poly>(g.rep);
        if (p.terms.size() > 1)
          throw UnsupportedError("ideal membership over x,y rings needs monomial generators");
        if (p.terms.size() == 1) gm.push_back(p.terms[0].first);
      }
      for (const auto& [m, c] : elem.terms) {
        bool divisible = false;
        for (const auto& g : gm) {
          if (m[0] < g[0] || m[1] < g[1]) continue;
          const Monomial q{m[0] - g[0], m[1] - g[1]};
          if (monomial_valid(k, q)) {
            divisible = true;
            break;
          }
        }
        if (!divisible) return false;
      }
      return true;
    }
  }
  return false;
}

}  // namespace

bool ideal_membership_monomial(const RingElement& elem, std::span<const RingElement> gens) {
  const auto* k = std::get_if<MonomialQuotientKind>(&elem.ring().spec().kind());
  if (k == nullptr)
    throw UnsupportedError("ideal_membership_monomial requires a MonomialQuotient ring, got " +
                           elem.ring().name());
  std::vector<Value> vals;
  for (const auto& g : gens) {
    if (!(g.ring() == elem.ring())) throw MismatchError("generator ring mismatch");
    vals.push_back(g.value());
  }
  return monomial_ideal_contains(*k, std::get<Poly>(elem.value().rep), vals);
}

bool ideal_contains(const Ring& ring, const Value& elem, std::span<const Value> gens) {
  return std::visit(
      Overloaded{
          [&](const IntegersKind&) {
            BigInt g = 0;
            for (const auto& v : gens) g = gcd(g, as_big(v));
            if (g == 0) return ring.is_zero(elem);
            return as_big(elem) % g == 0;
          },
          [&](const RationalsKind&) {
            for (const auto& v : gens) {
              if (!ring.is_zero(v)) return true;
            }
            return ring.is_zero(elem);
          },
          [&](const IntegersModKind& k) {
            std::uint64_t g = k.modulus;
            for (const auto& v : gens) g = std::gcd(g, std::get<Residue>(v.rep).r);
            return std::get<Residue>(elem.rep).r % g == 0;
          },
          [&](const ProductRingKind& k) {
            const Ring base(k.base);
            for (std::size_t i = 0; i < k.copies; ++i) {
              std::vector<Value> coord;
              for (const auto& v : gens) coord.push_back(std::get<std::vector<Value>>(v.rep)[i]);
              if (!ideal_contains(base, std::get<std::vector<Value>>(elem.rep)[i], coord)) return false;
            }
            return true;
          },
          [&](const MonomialQuotientKind& k) {
            return monomial_ideal_contains(k, std::get<Poly>(elem.rep), gens);
          },
      },
      ring.spec().kind());
}

}  // namespace ncalg
