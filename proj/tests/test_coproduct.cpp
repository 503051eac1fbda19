#include <random>
#include <set>

#include "doctest.h"
#include "generators.hpp"
#include "ncalg/coproduct.hpp"
#include "ncalg/errors.hpp"

using namespace ncalg;

namespace {

NcSeries S(const char* text, std::size_t d, const Ring& r = Ring::integers(), const char* letters = "ab") {
  return parse_series(text, r, d, Alphabet(letters));
}

CoproductContext ctx_z(std::size_t d) { return CoproductContext{Ring::integers(), d}; }

using gen::all_contexts;
using gen::random_element;
using gen::random_pure;
using gen::random_type;

}  // namespace

TEST_CASE("cop_mul examples") {
  const auto ctx = ctx_z(4);
  const auto a = S("a", 4, Ring::integers(), "a");
  const auto b = S("b", 4, Ring::integers(), "b");
  const auto ab = CoproductElement::tensor(ctx, {a, b});
  const auto ba = CoproductElement::tensor(ctx, {b, a});
  const auto p = ab * ba;
  REQUIRE(p.tensor_count() == 1);
  const auto& [type, list] = *p.components().begin();
  CHECK(type.pattern() == "aba");
  CHECK(list.front()[1] == S("b^2", 4, Ring::integers(), "b"));
  CHECK(alpha_eval(p) == alpha_eval(ab) * alpha_eval(ba));
  CHECK(alpha_eval(p) == S("ab^2a", 4));

  const auto one = CoproductElement::scalar(ctx, Ring::integers().one());
  CHECK(alpha_eval(one * ab) == alpha_eval(ab));
  CHECK((one * ab).tensor_count() == 1);

  const auto aa = CoproductElement::tensor(ctx, {a}) * CoproductElement::tensor(ctx, {a});
  REQUIRE(aa.components().size() == 1);
  CHECK(aa.components().begin()->first.pattern() == "a");
  CHECK(aa.components().begin()->second.front()[0] == S("a^2", 4, Ring::integers(), "a"));
}

TEST_CASE("cop_mul rejects mismatched contexts and bad tensors") {
  const auto a = S("a", 4, Ring::integers(), "a");
  const auto u = CoproductElement::tensor(ctx_z(4), {a});
  const auto v = CoproductElement::tensor(ctx_z(3), {S("a", 3, Ring::integers(), "a")});
  CHECK_THROWS_AS(cop_mul(u, v), MismatchError);
  CHECK_THROWS_AS(CoproductElement::tensor(ctx_z(4), {a, a}), PreconditionError);
  CHECK_THROWS_AS(CoproductElement::tensor(ctx_z(4), {S("1+a", 4, Ring::integers(), "a")}), PreconditionError);
  CHECK_THROWS_AS(CoproductElement::tensor(ctx_z(4), {S("a", 4)}), PreconditionError);
  CHECK_THROWS_AS(AlternatingType("abb"), PreconditionError);
}

TEST_CASE("alpha_eval examples") {
  const auto ctx = ctx_z(3);
  const Ring& z = ctx.ring;
  CHECK(alpha_eval(CoproductElement::scalar(ctx, z.from_int(7))) == S("7", 3));
  const auto t = CoproductElement::tensor(ctx, {S("a", 3, z, "a"), S("b", 3, z, "b")});
  CHECK(alpha_eval(t) == S("ab", 3));
  const auto t2 = CoproductElement::tensor(ctx, {S("a-a^2", 3, z, "a"), S("b", 3, z, "b")});
  CHECK(alpha_eval(t2) == S("ab - a^2b", 3));
}

TEST_CASE("decompose_by_support examples") {
  auto d = std::get<Decomposition>(decompose_by_support(S("1 + a + ab - ba", 4), 1));
  CHECK(d.size() == 4);
  CHECK(d.at(AlternatingType("")) == S("1", 4));
  CHECK(d.at(AlternatingType("a")) == S("a", 4));
  CHECK(d.at(AlternatingType("ab")) == S("ab", 4));
  CHECK(d.at(AlternatingType("ba")) == S("-ba", 4));

  d = std::get<Decomposition>(decompose_by_support(S("a^2b^3", 5), 1));
  CHECK(d.size() == 1);
  CHECK(d.at(AlternatingType("ab")) == S("a^2b^3", 5));

  d = std::get<Decomposition>(decompose_by_support(S("aba", 3), 1));
  CHECK(d.at(AlternatingType("aba")) == S("aba", 3));

  const auto r = decompose_by_support(S("abab + a", 4), 1);
  REQUIRE(std::holds_alternative<NotInImage>(r));
  CHECK(std::get<NotInImage>(r).word == Word("abab"));
}

TEST_CASE("subring predicates on Laurent data") {
  const Ring z = Ring::integers();
  CHECK_THROWS_AS(SubringSpec::polynomial('a').from_laurent({{-1, z.one()}}, z, 3), PreconditionError);
  CHECK(SubringSpec::polynomial('a').from_laurent({{2, z.one()}}, z, 3) == S("1 + 2a + a^2", 3, z, "a"));
  CHECK(SubringSpec::laurent('b').from_laurent({{-1, z.one()}}, z, 3) == S("1 - b + b^2 - b^3", 3, z, "b"));

  const Ring z9 = Ring::integers_mod(9);
  const auto spec = SubringSpec::ideal_augmented('a', {z9.from_int(3)});
  CHECK_NOTHROW(spec.from_laurent({{-1, z9.from_int(6)}, {4, z9.one()}}, z9, 3));
  CHECK_THROWS_AS(spec.from_laurent({{-1, z9.from_int(2)}}, z9, 3), PreconditionError);
}

TEST_CASE("beta_image examples") {
  const Ring m = Ring::parse("monsub");
  const auto m1 = FamilyExpr::monomial_formula(m, 1, 2, 1, 1);
  const auto prod = beta_image({m1, m1});
  const FamilyExpr expected(m, 2, Formula{{FormulaTerm{1, AffineForm{{2, 2}, 2}, AffineForm{{0, 0}, 2}}}});
  CHECK(family_equal(prod, expected));
  CHECK(prod.entry({1, 2}) == m.monomial({8, 2}));

  const Ring q = Ring::rationals();
  const auto e0 = FamilyExpr(q, 1, FiniteSupport{{{{0}, q.one()}}});
  const auto p0 = beta_image({e0, e0});
  CHECK(p0.entry({0, 0}) == q.one());
  CHECK(q.is_zero(p0.entry({0, 1})));
  CHECK(q.is_zero(p0.entry({3, 5})));

  const Ring idem = Ring::parse("idem:4");
  const auto e = FamilyExpr::basis(idem).windowed({4});
  const auto ee = beta_image({e, e});
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const Value want = i == j ? idem.monomial({static_cast<std::uint32_t>(i)}) : idem.zero();
      CHECK(ee.entry({i, j}) == want);
    }
  }
  CHECK_THROWS_AS(FamilyExpr::basis(idem).entry({4}), PreconditionError);
  CHECK_THROWS_AS(beta_image({FamilyExpr::basis(idem), FamilyExpr::basis(idem)}), UnsupportedError);
  CHECK_THROWS_AS(beta_image({m1, FamilyExpr::basis(idem).windowed({2})}), MismatchError);
}

TEST_CASE("family_equal examples") {
  const Ring m = Ring::parse("monsub");
  const FamilyExpr lhs(m, 2, Formula{{FormulaTerm{1, AffineForm{{2, 2}, 2}, AffineForm{{}, 2}}}});
  // x^{(2i) + (2j+2)} written as a product of two formula families.
  const FamilyExpr f1(m, 1, Formula{{FormulaTerm{1, AffineForm{{2}, 0}, AffineForm{{}, 1}}}});
  const FamilyExpr f2(m, 1, Formula{{FormulaTerm{1, AffineForm{{2}, 2}, AffineForm{{}, 1}}}});
  CHECK(family_equal(lhs, beta_image({f1, f2})));
  CHECK_FALSE(family_equal(FamilyExpr::monomial_formula(m, 1, 2, 0, 1), FamilyExpr::monomial_formula(m, 1, 2, 1, 1)));
  CHECK(family_equal(FamilyExpr::zero(m, 2), FamilyExpr::zero(m, 2)));
  CHECK_THROWS_AS(family_equal(FamilyExpr::zero(m, 1), FamilyExpr::zero(m, 2)), MismatchError);

  const auto diff = family_sub(beta_image({f1, f2}), lhs);
  CHECK(diff.is_zero());
}

TEST_CASE("family constructors validate formulas") {
  const Ring m = Ring::parse("monsub");
  // x^{i} y^0 leaves the subring generated by the x^i y.
  CHECK_THROWS_AS(FamilyExpr::monomial_formula(m, 1, 1, 0, 0), PreconditionError);
  CHECK_THROWS_AS(FamilyExpr::monomial_formula(m, 1, -1, 3, 1), PreconditionError);
  CHECK_NOTHROW(FamilyExpr::monomial_formula(m, 1, 0, 0, 0));
  CHECK_THROWS_AS(FamilyExpr::monomial_formula(Ring::integers(), 1, 1, 0, 1), UnsupportedError);
}

TEST_CASE("property: alpha_eval is multiplicative") {
  std::mt19937_64 rng(11);
  for (std::size_t d = 2; d <= 4; ++d) {
    for (const auto& ctx : all_contexts(d)) {
      for (int trial = 0; trial < 1000 / 3 + 1; ++trial) {
        const auto u = random_element(rng, ctx);
        const auto v = random_element(rng, ctx);
        REQUIRE(alpha_eval(cop_mul(u, v)) == alpha_eval(u) * alpha_eval(v));
        REQUIRE(alpha_eval(u + v) == alpha_eval(u) + alpha_eval(v));
      }
    }
  }
}

TEST_CASE("property: pure types have disjoint supports") {
  std::mt19937_64 rng(12);
  for (const auto& ctx : all_contexts(5)) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto t1 = random_type(rng, 4);
      const auto t2 = random_type(rng, 4);
      if (t1 == t2) continue;
      const auto s1 = support(alpha_eval(random_pure(rng, ctx, t1)));
      const auto s2 = support(alpha_eval(random_pure(rng, ctx, t2)));
      std::set<Word> seen(s1.begin(), s1.end());
      for (const auto& w : s2) REQUIRE(seen.count(w) == 0);
    }
  }
}

TEST_CASE("property: decompose_by_support recovers the components") {
  std::mt19937_64 rng(13);
  for (const auto& ctx : all_contexts(5)) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto u = random_element(rng, ctx, 5);
      const auto r = decompose_by_support(alpha_eval(u), 2);
      REQUIRE(std::holds_alternative<Decomposition>(r));
      const auto& d = std::get<Decomposition>(r);
      std::set<AlternatingType> types{AlternatingType()};
      for (const auto& kv : u.components()) types.insert(kv.first);
      for (const auto& [type, part] : d) REQUIRE(types.count(type) == 1);
      for (const auto& type : types) {
        const NcSeries want = alpha_eval_component(u, type);
        auto it = d.find(type);
        if (it == d.end())
          REQUIRE(want.is_zero());
        else
          REQUIRE(it->second == want);
      }
    }
  }
}

TEST_CASE("property: block components agree with beta_image") {
  std::mt19937_64 rng(14);
  for (const char* rs : {"z", "monsub", "idem:4", "zmod:12"}) {
    const Ring r = Ring::parse(rs);
    for (int trial = 0; trial < 60; ++trial) {
      const auto type = random_type(rng, 4);
      std::vector<FamilyExpr> fams;
      std::size_t d = 0;
      for (std::size_t k = 0; k < type.size(); ++k) {
        const std::size_t w = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        std::vector<Value> entries;
        for (std::size_t i = 0; i < w; ++i) entries.push_back(r.random(rng, 2));
        fams.push_back(FamilyExpr::finite(r, entries));
        d += w;
      }
      const CoproductContext ctx{r, d};
      Tensor t;
      for (std::size_t k = 0; k < type.size(); ++k) t.push_back(slot_from_family(fams[k], type.pattern()[k], d));
      bool zero = false;
      for (const auto& s : t) zero = zero || s.is_zero();
      const auto want = beta_image(fams);
      if (zero) {
        CHECK(want.is_zero());
        continue;
      }
      const auto got = block_exponent_family(alpha_eval(CoproductElement::tensor(ctx, t)), type);
      REQUIRE(family_equal(want, got));
    }
  }
}

TEST_CASE("property: windowed formula families agree with their symbolic product") {
  const Ring m = Ring::parse("monsub");
  for (long a1 = 0; a1 <= 2; ++a1) {
    for (long b1 = 0; b1 <= 2; ++b1) {
      const auto f = FamilyExpr::monomial_formula(m, 1, a1, b1, 1);
      const auto g = FamilyExpr::monomial_formula(m, 2, 1, b1, 2);
      const auto sym = beta_image({f, g}).windowed({4, 4});
      const auto win = beta_image({f.windowed({4}), g.windowed({4})});
      CHECK(family_equal(sym, win));
    }
  }
}

TEST_CASE("property: from_group_ring matches magnus") {
  std::mt19937_64 rng(15);
  for (std::size_t d = 1; d <= 4; ++d) {
    const CoproductContext ctx{Ring::integers(), d, SubringSpec::laurent('a'), SubringSpec::laurent('b')};
    for (int trial = 0; trial < 100; ++trial) {
      const auto f = gen::random_group_ring(rng, ctx.ring, 4);
      REQUIRE(alpha_eval(from_group_ring(f, ctx)) == magnus(f, d));
    }
  }
  const CoproductContext poly{Ring::integers(), 3, SubringSpec::polynomial('a'), SubringSpec::polynomial('b')};
  CHECK_THROWS_AS(from_group_ring(parse_group_ring_element("H", Ring::integers()), poly), PreconditionError);
}
