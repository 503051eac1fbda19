#include "ncalg/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "ncalg/errors.hpp"

namespace ncalg {

namespace {

Value random_in_ideal(const Ring& r, const std::vector<Value>& gens, std::mt19937_64& rng) {
  if (gens.empty()) return r.random(rng, 2);
  Value acc = r.zero();
  for (const auto& g : gens) acc = r.add(acc, r.mul(r.random(rng, 2), g));
  return acc;
}

// Coefficient of a monomial in an x,y ring element.
Rational xy_coeff(const Value& v, const Monomial& m) {
  for (const auto& [mono, c] : std::get<Poly>(v.rep).terms) {
    if (mono == m) return c;
  }
  return 0;
}

std::optional<Rational> scalar_of(const Ring& r, const Value& v) {
  if (r.is_numeric()) {
    if (const auto* i = std::get_if<std::int64_t>(&v.rep)) return Rational(static_cast<long>(*i));
    if (const auto* q = std::get_if<Rational>(&v.rep)) return *q;
    if (const auto* b = std::get_if<BigInt>(&v.rep)) return Rational(*b);
    return std::nullopt;
  }
  const auto* p = std::get_if<Poly>(&v.rep);
  if (p == nullptr) return std::nullopt;
  if (p->terms.empty()) return Rational(0);
  if (p->terms.size() == 1 &&
      std::all_of(p->terms[0].first.begin(), p->terms[0].first.end(), [](std::uint32_t e) { return e == 0; }))
    return p->terms[0].second;
  return std::nullopt;
}

FamilyExpr scale_family(const FamilyExpr& f, const Value& c) {
  const Ring& r = f.ring();
  if (const auto* fs = std::get_if<FiniteSupport>(&f.form())) {
    FiniteSupport out;
    for (const auto& [idx, v] : fs->entries) out.entries.emplace(idx, r.mul(c, v));
    return FamilyExpr(r, f.arity(), std::move(out), f.extents());
  }
  const auto s = scalar_of(r, c);
  if (!s) throw UnsupportedError("only scalar coefficients can multiply a symbolic family");
  if (const auto* fm = std::get_if<Formula>(&f.form())) {
    Formula out = *fm;
    for (auto& t : out.terms) t.coeff *= *s;
    return FamilyExpr(r, f.arity(), std::move(out), f.extents());
  }
  BasisFamily b = std::get<BasisFamily>(f.form());
  b.coeff *= *s;
  return FamilyExpr(r, f.arity(), b, f.extents());
}

std::string vector_to_string(const std::vector<Rational>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

}  // namespace

// ---- tensor expressions ----------------------------------------------------------

void TensorExpression::validate() const {
  if (summands.empty()) return;
  const bool values = std::holds_alternative<Value>(summands.front().left);
  for (const auto& s : summands) {
    if (std::holds_alternative<Value>(s.left) != values || std::holds_alternative<Value>(s.right) != values)
      throw PreconditionError("tensor expression mixes ring elements and families");
    if (!ring.is_valid(s.coeff)) throw PreconditionError("tensor coefficient is not in the ring");
    if (values) {
      const Value& l = std::get<Value>(s.left);
      const Value& r = std::get<Value>(s.right);
      if (!ring.is_valid(l) || !ring.is_valid(r)) throw PreconditionError("tensor factor is not in the ring");
      if (!ideal_i.empty() && !ideal_contains(ring, l, ideal_i))
        throw PreconditionError("left factor " + ring.format(l) + " is not in I");
      if (!ideal_j.empty() && !ideal_contains(ring, r, ideal_j))
        throw PreconditionError("right factor " + ring.format(r) + " is not in J");
    } else {
      if (!(std::get<FamilyExpr>(s.left).ring() == ring) || !(std::get<FamilyExpr>(s.right).ring() == ring))
        throw MismatchError("family factor over a different ring");
    }
  }
}

Value multiply_out(const TensorExpression& t) {
  t.validate();
  Value acc = t.ring.zero();
  for (const auto& s : t.summands)
    acc = t.ring.add(acc, t.ring.mul(s.coeff, t.ring.mul(std::get<Value>(s.left), std::get<Value>(s.right))));
  return acc;
}

FamilyExpr multiply_out_families(const TensorExpression& t) {
  t.validate();
  if (t.summands.empty()) return FamilyExpr::zero(t.ring, 2);
  std::optional<FamilyExpr> acc;
  for (const auto& s : t.summands) {
    const FamilyExpr term = beta_image({std::get<FamilyExpr>(s.left), std::get<FamilyExpr>(s.right)});
    if (!acc)
      acc = scale_family(term, s.coeff);
    else
      acc = family_sub(*acc, scale_family(term, t.ring.neg(s.coeff)));
  }
  return *acc;
}

// ---- wd2 ------------------------------------------------------------------------------

TensorExpression wd2_expression(Wd2Variant variant, std::uint64_t p) {
  if (variant == Wd2Variant::Zp2) {
    if (!is_prime(p) || p > (1u << 30)) throw PreconditionError("p must be a prime below 2^30");
    const Ring r = Ring::integers_mod(p * p);
    const Value pv = r.from_int(static_cast<std::int64_t>(p));
    return TensorExpression{r, {pv}, {pv}, {TensorSummand{r.one(), pv, pv}}};
  }
  const Ring r = Ring::parse("qxy");
  const Value x = r.monomial({1, 0});
  const Value y = r.monomial({0, 1});
  return TensorExpression{r, {x, y}, {x, y},
                          {TensorSummand{r.one(), x, y}, TensorSummand{r.neg(r.one()), y, x}}};
}

std::vector<Rational> wd2_residue_image(Wd2Variant variant, const TensorExpression& t) {
  t.validate();
  if (variant == Wd2Variant::Zp2) {
    const auto& k = std::get<IntegersModKind>(t.ring.spec().kind());
    const auto p = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(k.modulus))));
    if (p * p != k.modulus) throw PreconditionError("ring is not Z/p^2");
    std::uint64_t acc = 0;
    for (const auto& s : t.summands) {
      const std::uint64_t c = std::get<Residue>(s.coeff.rep).r % p;
      const std::uint64_t l = std::get<Residue>(std::get<Value>(s.left).rep).r / p % p;
      const std::uint64_t r = std::get<Residue>(std::get<Value>(s.right).rep).r / p % p;
      acc = (acc + c * l % p * r) % p;
    }
    return {Rational(static_cast<unsigned long>(acc))};
  }
  std::vector<Rational> v(4, 0);
  const Monomial one{0, 0}, mx{1, 0}, my{0, 1};
  for (const auto& s : t.summands) {
    const Rational c = xy_coeff(s.coeff, one);
    const Value& l = std::get<Value>(s.left);
    const Value& r = std::get<Value>(s.right);
    const Rational lin_l[2] = {xy_coeff(l, mx), xy_coeff(l, my)};
    const Rational lin_r[2] = {xy_coeff(r, mx), xy_coeff(r, my)};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) v[2 * i + j] += c * lin_l[i] * lin_r[j];
    }
  }
  return v;
}

TensorExpression wd2_random_rewrite(const TensorExpression& t, std::mt19937_64& rng) {
  TensorExpression out = t;
  const Ring& r = t.ring;
  const int steps = std::uniform_int_distribution<int>(1, 5)(rng);
  for (int step = 0; step < steps; ++step) {
    const int op = std::uniform_int_distribution<int>(0, 3)(rng);
    if (out.summands.empty() && op != 2) continue;
    const std::size_t i = std::uniform_int_distribution<std::size_t>(0, out.summands.empty() ? 0 : out.summands.size() - 1)(rng);
    switch (op) {
      case 0: {  // l = l1 + (l - l1)
        TensorSummand s = out.summands[i];
        const Value l1 = random_in_ideal(r, out.ideal_i, rng);
        out.summands[i].left = l1;
        s.left = r.sub(std::get<Value>(s.left), l1);
        out.summands.push_back(std::move(s));
        break;
      }
      case 1: {  // r = r1 + (r - r1)
        TensorSummand s = out.summands[i];
        const Value r1 = random_in_ideal(r, out.ideal_j, rng);
        out.summands[i].right = r1;
        s.right = r.sub(std::get<Value>(s.right), r1);
        out.summands.push_back(std::move(s));
        break;
      }
      case 2: {  // + c (l s (x) r) - c (l (x) s r)
        const Value l = random_in_ideal(r, out.ideal_i, rng);
        const Value rr = random_in_ideal(r, out.ideal_j, rng);
        const Value sc = r.random(rng, 2);
        const Value c = r.random(rng, 2);
        out.summands.push_back({c, r.mul(l, sc), rr});
        out.summands.push_back({r.neg(c), l, r.mul(sc, rr)});
        break;
      }
      default: {  // c (l (x) r) = 1 (c l (x) r)
        auto& s = out.summands[i];
        s.left = r.mul(s.coeff, std::get<Value>(s.left));
        s.coeff = r.one();
        break;
      }
    }
  }
  std::shuffle(out.summands.begin(), out.summands.end(), rng);
  return out;
}

WitnessReport witness_wd2(Wd2Variant variant, std::uint64_t p, std::size_t degree) {
  WitnessReport rep;
  rep.name = variant == Wd2Variant::Zp2 ? "wd2-zp2" : "wd2-qxy";
  rep.window = {degree};
  const TensorExpression t = wd2_expression(variant, p);
  const Ring& r = t.ring;

  const Value prod = multiply_out(t);
  rep.transcript.push_back("ring " + r.name() + ", multiplied out: " + r.format(prod));

  // The same element inside the coproduct of the ideal-augmented subrings:
  // (h^-1 a s) (x) (t b k^-1) with h^-1 a = 1 - h^-1, b k^-1 = 1 - k^-1.
  const CoproductContext ctx{r, degree, SubringSpec::ideal_augmented('a', t.ideal_i),
                             SubringSpec::ideal_augmented('b', t.ideal_j)};
  CoproductElement emb(ctx);
  for (const auto& s : t.summands) {
    const Value left = r.mul(s.coeff, std::get<Value>(s.left));
    const Value& right = std::get<Value>(s.right);
    const NcSeries sa = ctx.a.from_laurent({{0, left}, {-1, r.neg(left)}}, r, degree);
    const NcSeries sb = ctx.b.from_laurent({{0, right}, {-1, r.neg(right)}}, r, degree);
    emb = emb + CoproductElement::tensor(ctx, {sa, sb});
  }
  const NcSeries img = alpha_eval(emb);
  rep.transcript.push_back("coproduct embedding: " + std::to_string(emb.tensor_count()) +
                           " tensors, alpha image " + img.to_string() + " at degree " + std::to_string(degree));
  rep.zero_image_verified = r.is_zero(prod) && img.is_zero() && emb.tensor_count() > 0;

  const auto v = wd2_residue_image(variant, t);
  const bool nonzero = std::any_of(v.begin(), v.end(), [](const Rational& q) { return q != 0; });
  std::mt19937_64 rng(variant == Wd2Variant::Zp2 ? p : 7);
  std::size_t agree = 0;
  const std::size_t trials = 200;
  for (std::size_t k = 0; k < trials; ++k) {
    const auto u = wd2_random_rewrite(t, rng);
    if (wd2_residue_image(variant, u) == v && r.is_zero(multiply_out(u))) ++agree;
  }
  rep.transcript.push_back("residue map agrees on " + std::to_string(agree) + "/" + std::to_string(trials) +
                           " rewritten representatives");
  const std::string field = variant == Wd2Variant::Zp2 ? "Z/" + std::to_string(p) : "Q^4";
  rep.nonzero_certificate = "residue image " + vector_to_string(v) + " in " + field;
  rep.nonzero_verified = nonzero && agree == trials;
  return rep;
}

// ---- idempotent family -----------------------------------------------------------

IdempotentRefutation refute_idempotent_candidate(std::size_t window, const IdempotentCandidate& c) {
  if (window < 2) throw PreconditionError("window must be at least 2");
  const Ring small = Ring(RingSpec::idempotent(window));
  const std::size_t j = window % 2 == 0 ? window : window + 1;
  const Ring big = Ring(RingSpec::idempotent(j + 1));
  std::vector<RingElement> gens;
  for (const auto& g : c.generators) {
    if (!small.is_valid(g)) throw PreconditionError("candidate generator is not in " + small.name());
    gens.emplace_back(big, g);  // same normal form in the larger window
  }
  const RingElement ej(big, big.monomial({static_cast<std::uint32_t>(j)}));
  return IdempotentRefutation{j, !ideal_membership_monomial(ej, gens)};
}

IdempotentCandidate random_idempotent_candidate(std::size_t window, std::mt19937_64& rng) {
  const Ring r = Ring(RingSpec::idempotent(window));
  IdempotentCandidate c;
  const int n = std::uniform_int_distribution<int>(0, 4)(rng);
  std::uniform_int_distribution<std::size_t> idx(0, window - 1);
  std::uniform_int_distribution<int> num(-3, 3);
  for (int k = 0; k < n; ++k) {
    Value g = r.zero();
    for (int t = std::uniform_int_distribution<int>(1, 3)(rng); t > 0; --t) {
      const int a = num(rng);
      g = r.add(g, r.monomial({static_cast<std::uint32_t>(idx(rng))}, Rational(a == 0 ? 1 : a, 2)));
    }
    c.generators.push_back(g);
  }
  return c;
}

WitnessReport witness_idempotent_mu(std::size_t window, std::size_t random_candidates, std::uint64_t seed) {
  if (window < 2) throw PreconditionError("window must be at least 2");
  const Ring r = Ring(RingSpec::idempotent(window));
  WitnessReport rep;
  rep.name = "mu-idempotent";
  rep.window = {window};

  const auto m1 = FamilyExpr::basis(r, 2, 0).windowed({(window + 1) / 2});
  const auto m2 = FamilyExpr::basis(r, 2, 1).windowed({window / 2});
  const auto prod = beta_image({m1, m2});
  rep.zero_image_verified = prod.is_zero();
  rep.transcript.push_back("X1 = even indices, X2 = odd indices below " + std::to_string(window) + "; " +
                           std::to_string(((window + 1) / 2) * (window / 2)) + " cross products, " +
                           (prod.is_zero() ? "all zero" : "some nonzero"));

  std::vector<IdempotentCandidate> cands;
  cands.push_back({});
  IdempotentCandidate evens, all;
  for (std::size_t i = 0; i < window; ++i) {
    const Value e = r.monomial({static_cast<std::uint32_t>(i)});
    if (i % 2 == 0) evens.generators.push_back(e);
    all.generators.push_back(e);
  }
  cands.push_back(evens);
  cands.push_back(all);
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < random_candidates; ++k) cands.push_back(random_idempotent_candidate(window, rng));

  std::size_t refuted = 0, fresh = 0;
  for (const auto& c : cands) {
    const auto res = refute_idempotent_candidate(window, c);
    fresh = res.fresh_index;
    if (res.refuted) ++refuted;
  }
  rep.nonzero_verified = refuted == cands.size();
  rep.nonzero_certificate = "e_" + std::to_string(fresh) + " outside the ideal of every candidate generator set (" +
                            std::to_string(refuted) + "/" + std::to_string(cands.size()) + " refuted)";
  return rep;
}

// ---- square-zero refutation -----------------------------------------------------------

namespace {

void check_gmb2_candidate(std::size_t window, const Gmb2Candidate& c) {
  if (c.left.size() != c.x0.size() || c.right.size() != c.y0.size())
    throw PreconditionError("one slot matrix is needed per excluded index");
  auto check_p = [&](const PElement& p) {
    for (const auto& [xy, t] : p) {
      if (xy.first >= window || xy.second >= window) throw PreconditionError("slot coordinate outside the window");
      for (const auto& [uv, q] : t) {
        if (uv.first > window || uv.second > window) throw PreconditionError("tensor basis index outside the window");
      }
    }
  };
  for (auto i : c.x0) {
    if (i >= window) throw PreconditionError("X0 index outside the window");
  }
  for (auto i : c.y0) {
    if (i >= window) throw PreconditionError("Y0 index outside the window");
  }
  for (const auto& p : c.left) check_p(p);
  for (const auto& p : c.right) check_p(p);
}

}  // namespace

PElement gmb2_candidate_value(std::size_t window, const Gmb2Candidate& c) {
  check_gmb2_candidate(window, c);
  PElement q;
  auto add = [&](std::pair<std::size_t, std::size_t> xy, std::pair<std::size_t, std::size_t> uv, const Rational& v) {
    Rational& slot = q[xy][uv];
    slot += v;
    if (slot == 0) {
      q[xy].erase(uv);
      if (q[xy].empty()) q.erase(xy);
    }
  };
  // x0 * (u (x) v) = (x0 u) (x) v, and x0 * x_i = 0.
  for (std::size_t k = 0; k < c.x0.size(); ++k) {
    for (const auto& [xy, t] : c.left[k]) {
      for (const auto& [uv, v] : t) {
        if (uv.first == 0) add(xy, {c.x0[k] + 1, uv.second}, v);
      }
    }
  }
  for (std::size_t k = 0; k < c.y0.size(); ++k) {
    for (const auto& [xy, t] : c.right[k]) {
      for (const auto& [uv, v] : t) {
        if (uv.second == 0) add(xy, {uv.first, c.y0[k] + 1}, v);
      }
    }
  }
  return q;
}

std::variant<Gmb2Coordinate, RefutationFails> witness_gmb2(std::size_t window, const Gmb2Candidate& c) {
  const std::set<std::size_t> xs(c.x0.begin(), c.x0.end()), ys(c.y0.begin(), c.y0.end());
  if (window <= xs.size() || window <= ys.size())
    throw PreconditionError("window of size " + std::to_string(window) + " leaves no coordinate outside X0 x Y0");
  const PElement q = gmb2_candidate_value(window, c);
  for (std::size_t x = 0; x < window; ++x) {
    if (xs.count(x)) continue;
    for (std::size_t y = 0; y < window; ++y) {
      if (ys.count(y)) continue;
      Rational cq = 0;
      if (auto it = q.find({x, y}); it != q.end()) {
        if (auto jt = it->second.find({x + 1, y + 1}); jt != it->second.end()) cq = jt->second;
      }
      if (cq != 1) return Gmb2Coordinate{x, y, cq, 1};
    }
  }
  return RefutationFails{"q agrees with p on every coordinate outside X0 x Y0"};
}

Gmb2Candidate random_gmb2_candidate(std::size_t window, std::mt19937_64& rng) {
  Gmb2Candidate c;
  std::vector<std::size_t> idx(window);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  c.x0.assign(idx.begin(), idx.begin() + std::uniform_int_distribution<std::size_t>(0, window - 1)(rng));
  std::shuffle(idx.begin(), idx.end(), rng);
  c.y0.assign(idx.begin(), idx.begin() + std::uniform_int_distribution<std::size_t>(0, window - 1)(rng));
  const bool mimic = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  std::uniform_int_distribution<std::size_t> coord(0, window - 1), basis(0, window);
  std::uniform_int_distribution<int> num(-4, 4);
  auto noise = [&](PElement& p) {
    for (int k = std::uniform_int_distribution<int>(0, 6)(rng); k > 0; --k) {
      const int a = num(rng);
      if (a != 0) p[{coord(rng), coord(rng)}][{basis(rng), basis(rng)}] += Rational(a, 1 + std::abs(num(rng)));
    }
  };
  for (auto x0 : c.x0) {
    PElement p;
    if (mimic) {
      for (std::size_t y = 0; y < window; ++y) p[{x0, y}][{0, y + 1}] = 1;
    }
    noise(p);
    c.left.push_back(std::move(p));
  }
  for (auto y0 : c.y0) {
    PElement p;
    if (mimic) {
      for (std::size_t x = 0; x < window; ++x) {
        if (std::find(c.x0.begin(), c.x0.end(), x) == c.x0.end()) p[{x, y0}][{x + 1, 0}] = 1;
      }
    }
    noise(p);
    c.right.push_back(std::move(p));
  }
  // drop zero entries introduced by cancellation
  for (auto* list : {&c.left, &c.right}) {
    for (auto& p : *list) {
      for (auto it = p.begin(); it != p.end();) {
        for (auto jt = it->second.begin(); jt != it->second.end();)
          jt = jt->second == 0 ? it->second.erase(jt) : std::next(jt);
        it = it->second.empty() ? p.erase(it) : std::next(it);
      }
    }
  }
  return c;
}

WitnessReport witness_gmb2_report(std::size_t window, std::size_t random_candidates, std::uint64_t seed) {
  if (window < 2) throw PreconditionError("window must be at least 2");
  const Ring r = Ring(RingSpec::square_zero(window));
  WitnessReport rep;
  rep.name = "gmb2";
  rep.window = {window};
  const auto m = FamilyExpr::basis(r).windowed({window});
  rep.zero_image_verified = beta_image({m, m}).is_zero();
  rep.transcript.push_back("mu(m (x) m) has entries x_i x_j = 0 on the " + std::to_string(window) + "x" +
                           std::to_string(window) + " window");

  std::vector<Gmb2Candidate> cands;
  cands.push_back({});
  cands.push_back(Gmb2Candidate{{0}, {1}, {PElement{}}, {PElement{}}});
  {
    PElement row;
    for (std::size_t y = 0; y < window; ++y) row[{0, y}][{0, y + 1}] = 1;
    cands.push_back(Gmb2Candidate{{0}, {}, {row}, {}});
  }
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < random_candidates; ++k) cands.push_back(random_gmb2_candidate(window, rng));

  std::size_t refuted = 0;
  std::string example;
  for (const auto& c : cands) {
    const auto res = witness_gmb2(window, c);
    if (const auto* co = std::get_if<Gmb2Coordinate>(&res)) {
      ++refuted;
      if (example.empty())
        example = "(x" + std::to_string(co->x) + ", x" + std::to_string(co->y) + "): c_q = " + co->c_q.get_str() +
                  ", c_p = " + co->c_p.get_str();
    }
  }
  rep.nonzero_verified = refuted == cands.size();
  rep.nonzero_certificate = "p outside IP + PI: " + std::to_string(refuted) + "/" + std::to_string(cands.size()) +
                            " candidates refuted, first at " + example;
  return rep;
}

// ---- beta_2 over a domain -----------------------------------------------------------

namespace {

// Image of one monsub element in sqzero:window.
Value quotient_value(const Value& v, const Ring& target, std::size_t window) {
  Value acc = target.zero();
  for (const auto& [mono, c] : std::get<Poly>(v.rep).terms) {
    const std::uint32_t ex = mono[0], ey = mono[1];
    if (ey == 0) {
      acc = target.add(acc, target.monomial({}, c));
    } else if (ey == 1 && ex % 2 == 1) {
      const std::size_t g = (ex - 1) / 2;
      if (g >= window) throw PreconditionError("x^" + std::to_string(ex) + "*y maps outside the window");
      acc = target.add(acc, target.monomial({static_cast<std::uint32_t>(g)}, c));
    }
  }
  return acc;
}

}  // namespace

FamilyExpr quotient_family_to_sqzero(const FamilyExpr& f, std::size_t window) {
  const auto* k = std::get_if<MonomialQuotientKind>(&f.ring().spec().kind());
  if (k == nullptr || k->family != MonomialFamily::MonomialSubring)
    throw UnsupportedError("the quotient is defined on monsub families");
  const Ring target = Ring(RingSpec::square_zero(window));
  if (f.extents() || std::holds_alternative<FiniteSupport>(f.form())) {
    FiniteSupport out;
    const auto entries = [&] {
      if (const auto* fs = std::get_if<FiniteSupport>(&f.form())) return fs->entries;
      std::map<std::vector<std::size_t>, Value> e;
      std::vector<std::size_t> idx(f.arity(), 0);
      const auto& ext = *f.extents();
      if (std::find(ext.begin(), ext.end(), 0) != ext.end()) return e;
      while (true) {
        e.emplace(idx, f.entry(idx));
        std::size_t d = idx.size();
        while (d > 0 && ++idx[d - 1] == ext[d - 1]) idx[--d] = 0;
        if (d == 0) break;
      }
      return e;
    }();
    for (const auto& [idx, v] : entries) out.entries.emplace(idx, quotient_value(v, target, window));
    return FamilyExpr(target, f.arity(), std::move(out), f.extents());
  }
  const auto& fm = std::get<Formula>(f.form());
  if (f.arity() != 1) throw UnsupportedError("symbolic quotient needs an arity-1 family");
  if (fm.terms.empty()) return FamilyExpr::zero(target, 1);
  if (fm.terms.size() != 1) throw UnsupportedError("symbolic quotient needs a single-term formula");
  const auto& t = fm.terms.front();
  if (t.y_exp.coeffs[0] != 0) throw UnsupportedError("symbolic quotient needs a constant y-exponent");
  if (t.y_exp.constant >= 2) return FamilyExpr::zero(target, 1);
  if (t.y_exp.constant == 0) throw UnsupportedError("constant families are not basis families");
  const long alpha = t.x_exp.coeffs[0], beta = t.x_exp.constant;
  if (alpha % 2 != 0) throw UnsupportedError("odd x-stride mixes parities; window the family first");
  if (beta % 2 == 0) return FamilyExpr::zero(target, 1);
  return FamilyExpr(target, 1,
                    BasisFamily{t.coeff, static_cast<std::size_t>(alpha / 2), static_cast<std::size_t>((beta - 1) / 2)});
}

WitnessReport witness_beta2_domain(std::size_t window, std::size_t random_candidates, std::uint64_t seed) {
  if (window < 2) throw PreconditionError("window must be at least 2");
  const Ring m = Ring::parse("monsub");
  WitnessReport rep;
  rep.name = "beta2-domain";
  rep.window = {window};
  const auto m1 = FamilyExpr::monomial_formula(m, 1, 2, 1, 1);
  const auto m3 = FamilyExpr::monomial_formula(m, 1, 2, 0, 1);
  const auto m4 = FamilyExpr::monomial_formula(m, 1, 2, 2, 1);
  const TensorExpression t{m, {}, {}, {TensorSummand{m.one(), m1, m1}, TensorSummand{m.neg(m.one()), m3, m4}}};
  const auto p12 = beta_image({m1, m1});
  const auto p34 = beta_image({m3, m4});
  const auto diff = multiply_out_families(t);
  rep.zero_image_verified = family_equal(p12, p34) && diff.is_zero();
  rep.transcript.push_back("beta(m1,m2) = " + p12.to_string());
  rep.transcript.push_back("beta(m3,m4) = " + p34.to_string());

  const auto q1 = quotient_family_to_sqzero(m1, window);
  const auto q3 = quotient_family_to_sqzero(m3, window);
  const auto q4 = quotient_family_to_sqzero(m4, window);
  const Ring target = q1.ring();
  const bool images_ok =
      q3.is_zero() && q4.is_zero() && family_equal(q1, FamilyExpr::basis(target)) &&
      family_equal(q1.windowed({window}), quotient_family_to_sqzero(m1.windowed({window}), window));
  rep.transcript.push_back("quotient: m1, m2 -> " + q1.to_string() + "; m3 -> " + q3.to_string() + "; m4 -> " +
                           q4.to_string());
  const auto g = witness_gmb2_report(window, random_candidates, seed);
  rep.nonzero_verified = images_ok && g.passed();
  rep.nonzero_certificate = "image m (x) m - 0 (x) 0 in the square-zero quotient; " + g.nonzero_certificate;
  return rep;
}

const std::vector<std::string>& witness_names() {
  static const std::vector<std::string> names{"wd2-zp2", "wd2-qxy", "mu-idempotent", "gmb2", "beta2-domain"};
  return names;
}

WitnessReport run_witness(const std::string& name, std::size_t window) {
  if (name == "wd2-zp2") return witness_wd2(Wd2Variant::Zp2, 2, window ? window : 6);
  if (name == "wd2-qxy") return witness_wd2(Wd2Variant::QXY, 2, window ? window : 6);
  if (name == "mu-idempotent") return witness_idempotent_mu(window ? window : 6);
  if (name == "gmb2") return witness_gmb2_report(window ? window : 4);
  if (name == "beta2-domain") return witness_beta2_domain(window ? window : 4);
  throw PreconditionError("unknown witness '" + name + "'");
}

}  // namespace ncalg
