#include <random>

#include "doctest.h"
#include "ncalg/errors.hpp"
#include "ncalg/witnesses.hpp"

using namespace ncalg;

TEST_CASE("wd2 over Z/4") {
  const auto t = wd2_expression(Wd2Variant::Zp2, 2);
  CHECK(t.ring.is_zero(multiply_out(t)));
  CHECK(wd2_residue_image(Wd2Variant::Zp2, t) == std::vector<Rational>{1});
  const auto rep = witness_wd2(Wd2Variant::Zp2, 2);
  CHECK(rep.zero_image_verified);
  CHECK(rep.nonzero_verified);
  CHECK(rep.passed());
  CHECK_THROWS_AS(wd2_expression(Wd2Variant::Zp2, 4), PreconditionError);
  for (std::uint64_t p : {3u, 5u, 7u}) CHECK(witness_wd2(Wd2Variant::Zp2, p).passed());
}

TEST_CASE("wd2 over Q[x,y]") {
  const auto t = wd2_expression(Wd2Variant::QXY);
  CHECK(t.ring.is_zero(multiply_out(t)));
  CHECK(wd2_residue_image(Wd2Variant::QXY, t) == std::vector<Rational>{0, 1, -1, 0});
  const auto rep = witness_wd2(Wd2Variant::QXY, 2, 6);
  CHECK(rep.passed());
  CHECK(rep.nonzero_certificate.find("(0,1,-1,0)") != std::string::npos);
}

TEST_CASE("wd2 coproduct embedding evaluates to zero") {
  const Ring r = Ring::parse("qxy");
  const Value x = r.monomial({1, 0}), y = r.monomial({0, 1});
  const CoproductContext ctx{r, 6, SubringSpec::ideal_augmented('a', {x, y}), SubringSpec::ideal_augmented('b', {x, y})};
  auto slot = [&](const SubringSpec& s, const Value& v) {
    return s.from_laurent({{0, v}, {-1, r.neg(v)}}, r, 6);
  };
  const auto u = CoproductElement::tensor(ctx, {slot(ctx.a, x), slot(ctx.b, y)}) -
                 CoproductElement::tensor(ctx, {slot(ctx.a, y), slot(ctx.b, x)});
  CHECK(alpha_eval(u).is_zero());
  // Each summand alone is not killed.
  CHECK_FALSE(alpha_eval(CoproductElement::tensor(ctx, {slot(ctx.a, x), slot(ctx.b, y)})).is_zero());
  // h^-1 a x has a unit-free leading term x*a.
  CHECK(slot(ctx.a, x).coefficient(Word("a")) == x);
}

TEST_CASE("property: residue map is well defined on rewritten representatives") {
  std::mt19937_64 rng(21);
  for (auto variant : {Wd2Variant::Zp2, Wd2Variant::QXY}) {
    const auto t = wd2_expression(variant, 3);
    const auto v = wd2_residue_image(variant, t);
    for (int k = 0; k < 200; ++k) {
      const auto u = wd2_random_rewrite(t, rng);
      REQUIRE(t.ring.is_zero(multiply_out(u)));
      REQUIRE(wd2_residue_image(variant, u) == v);
    }
  }
}

TEST_CASE("residue map separates elements it should") {
  // x (x) x is not in the kernel, and its residue is e_{xx}.
  const Ring r = Ring::parse("qxy");
  const Value x = r.monomial({1, 0}), y = r.monomial({0, 1});
  const TensorExpression t{r, {x, y}, {x, y}, {TensorSummand{r.one(), x, x}}};
  CHECK(wd2_residue_image(Wd2Variant::QXY, t) == std::vector<Rational>{1, 0, 0, 0});
  // x^2 (x) y lies in mI (x) J and maps to zero.
  const TensorExpression t2{r, {x, y}, {x, y}, {TensorSummand{r.one(), r.monomial({2, 0}), y}}};
  CHECK(wd2_residue_image(Wd2Variant::QXY, t2) == std::vector<Rational>(4, 0));
  const TensorExpression bad{r, {x, y}, {x, y}, {TensorSummand{r.one(), r.one(), y}}};
  CHECK_THROWS_AS(bad.validate(), PreconditionError);
}

TEST_CASE("idempotent witness") {
  const auto rep = witness_idempotent_mu(6);
  CHECK(rep.zero_image_verified);
  CHECK(rep.passed());
  CHECK_THROWS_AS(witness_idempotent_mu(1), PreconditionError);

  const Ring r = Ring(RingSpec::idempotent(6));
  const auto e = [&](std::uint32_t i) { return r.monomial({i}); };
  const auto res = refute_idempotent_candidate(4, IdempotentCandidate{{e(0), e(2)}});
  CHECK(res.fresh_index == 4);
  CHECK(res.refuted);
  CHECK(refute_idempotent_candidate(6, IdempotentCandidate{}).refuted);
  CHECK(refute_idempotent_candidate(6, IdempotentCandidate{}).fresh_index == 6);
  CHECK(refute_idempotent_candidate(5, IdempotentCandidate{}).fresh_index == 6);
}

TEST_CASE("idempotent cross products vanish on the even/odd split") {
  const Ring r = Ring(RingSpec::idempotent(6));
  const auto m1 = FamilyExpr::basis(r, 2, 0).windowed({3});
  const auto m2 = FamilyExpr::basis(r, 2, 1).windowed({3});
  const auto p = beta_image({m1, m2});
  CHECK(p.is_zero());
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(r.is_zero(p.entry({i, j})));
  }
  // Same-class products do not vanish on the diagonal.
  CHECK_FALSE(beta_image({m1, m1}).is_zero());
}

TEST_CASE("gmb2 examples") {
  auto co = std::get<Gmb2Coordinate>(witness_gmb2(4, Gmb2Candidate{{0}, {1}, {PElement{}}, {PElement{}}}));
  CHECK(co.x != 0);
  CHECK(co.y != 1);
  CHECK(co.c_q == 0);
  CHECK(co.c_p == 1);

  PElement row;
  for (std::size_t y = 0; y < 4; ++y) row[{0, y}][{0, y + 1}] = 1;
  const Gmb2Candidate c{{0}, {}, {row}, {}};
  const PElement q = gmb2_candidate_value(4, c);
  for (std::size_t y = 0; y < 4; ++y) CHECK(q.at({0, y}).at({1, y + 1}) == 1);
  co = std::get<Gmb2Coordinate>(witness_gmb2(4, c));
  CHECK(co.x >= 1);

  CHECK_THROWS_AS(witness_gmb2(1, Gmb2Candidate{{0}, {}, {PElement{}}, {}}), PreconditionError);
  CHECK_THROWS_AS(witness_gmb2(4, Gmb2Candidate{{7}, {}, {PElement{}}, {}}), PreconditionError);
  CHECK(witness_gmb2_report(4).passed());
}

TEST_CASE("gmb2 left action kills x_i factors") {
  // x0 * (x1 (x) y) = 0 since I^2 = 0; x0 * (1 (x) x2) = x0 (x) x2.
  PElement p;
  p[{2, 3}][{2, 0}] = 5;
  p[{2, 3}][{0, 3}] = 7;
  const PElement q = gmb2_candidate_value(4, Gmb2Candidate{{0}, {}, {p}, {}});
  REQUIRE(q.size() == 1);
  CHECK(q.at({2, 3}).size() == 1);
  CHECK(q.at({2, 3}).at({1, 3}) == 7);
}

TEST_CASE("beta2 domain witness") {
  const Ring m = Ring::parse("monsub");
  const auto m1 = FamilyExpr::monomial_formula(m, 1, 2, 1, 1);
  const auto m3 = FamilyExpr::monomial_formula(m, 1, 2, 0, 1);
  const auto m4 = FamilyExpr::monomial_formula(m, 1, 2, 2, 1);
  CHECK(family_equal(beta_image({m1, m1}), beta_image({m3, m4})));
  CHECK(quotient_family_to_sqzero(m3, 4).is_zero());
  CHECK(quotient_family_to_sqzero(m4, 4).is_zero());
  const auto q1 = quotient_family_to_sqzero(m1, 4);
  CHECK(family_equal(q1, FamilyExpr::basis(q1.ring())));
  // x^{2i+1} y^2 lies in the killed ideal.
  CHECK(quotient_family_to_sqzero(FamilyExpr::monomial_formula(m, 1, 2, 1, 2), 4).is_zero());
  // Windowed entrywise quotient agrees with the symbolic one.
  const auto w = quotient_family_to_sqzero(FamilyExpr::monomial_formula(m, 1, 1, 1, 1).windowed({4}), 4);
  CHECK(w.entry({0}) == q1.ring().monomial({0}));
  CHECK(q1.ring().is_zero(w.entry({1})));
  CHECK(w.entry({2}) == q1.ring().monomial({1}));

  const auto rep = witness_beta2_domain(4);
  CHECK(rep.zero_image_verified);
  CHECK(rep.passed());
}

TEST_CASE("property: random candidates are all refuted") {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 500; ++k) {
    REQUIRE(refute_idempotent_candidate(6, random_idempotent_candidate(6, rng)).refuted);
    const auto c = random_gmb2_candidate(4, rng);
    const auto res = witness_gmb2(4, c);
    REQUIRE(std::holds_alternative<Gmb2Coordinate>(res));
    const auto& co = std::get<Gmb2Coordinate>(res);
    REQUIRE(co.c_q != co.c_p);
  }
}

TEST_CASE("property: enlarging windows keeps reports passing") {
  for (std::size_t w = 6; w <= 9; ++w) CHECK(witness_idempotent_mu(w, 16).passed());
  for (std::size_t w = 4; w <= 7; ++w) {
    CHECK(witness_gmb2_report(w, 16).passed());
    CHECK(witness_beta2_domain(w, 16).passed());
  }
  for (std::size_t d = 6; d <= 8; ++d) CHECK(witness_wd2(Wd2Variant::QXY, 2, d).passed());
}

TEST_CASE("run_witness by name") {
  for (const auto& n : witness_names()) {
    const auto rep = run_witness(n);
    CHECK_MESSAGE(rep.passed(), n);
    CHECK(rep.name == n);
  }
  CHECK_THROWS_AS(run_witness("nope"), PreconditionError);
}
